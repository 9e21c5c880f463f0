"""Target-function descriptions used by the operators and experiments.

A ``FunctionSpec`` is a callable description of f: [0, inf) -> R.  Three
kinds exist: ``polynomial`` (ascending coefficients), ``named`` (drawn from
a small registry), and ``tabulated`` (linear interpolation on a grid).
An optional growth bound C_f certifies |f(x)| <= C_f (1 + x^2); it is
required by the weighted-norm machinery and validated by sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .core import DomainError

__all__ = ["FunctionSpec", "NAMED_FUNCTIONS", "as_callable"]

ArrayLike = Union[float, np.ndarray]


def _abs_t_minus_1(t: ArrayLike) -> ArrayLike:
    return np.abs(np.asarray(t, dtype=float) - 1.0)


# name -> (callable, polynomial coefficients if the function is one, default C_f)
NAMED_FUNCTIONS: dict[str, tuple[Callable[[ArrayLike], ArrayLike], Optional[tuple[float, ...]], Optional[float]]] = {
    "e0": (lambda t: np.ones_like(np.asarray(t, dtype=float)), (1.0,), 1.0),
    "e1": (lambda t: np.asarray(t, dtype=float) + 0.0, (0.0, 1.0), 1.0),
    "e2": (lambda t: np.asarray(t, dtype=float) ** 2, (0.0, 0.0, 1.0), 1.0),
    "e3": (lambda t: np.asarray(t, dtype=float) ** 3, (0.0, 0.0, 0.0, 1.0), None),
    "abs_t_minus_1": (_abs_t_minus_1, None, 2.0),
}

_GROWTH_SAMPLE = np.concatenate([np.linspace(0.0, 10.0, 201), np.geomspace(10.0, 1e4, 40)])


@dataclass(frozen=True)
class FunctionSpec:
    """A target function: polynomial coefficients, a registry name, or a table."""

    kind: str
    coefficients: Optional[tuple[float, ...]] = None
    name: Optional[str] = None
    grid: Optional[tuple[float, ...]] = None
    values: Optional[tuple[float, ...]] = None
    growth_bound_Cf: Optional[float] = field(default=None)

    @classmethod
    def polynomial(
        cls, coefficients: Sequence[float], growth_bound_Cf: Optional[float] = None
    ) -> "FunctionSpec":
        coeffs = tuple(float(c) for c in coefficients)
        if not coeffs:
            raise DomainError("polynomial coefficient list must be non-empty")
        return cls(kind="polynomial", coefficients=coeffs, growth_bound_Cf=growth_bound_Cf)

    @classmethod
    def named(cls, name: str, growth_bound_Cf: Optional[float] = None) -> "FunctionSpec":
        if name not in NAMED_FUNCTIONS:
            raise DomainError(
                f"unknown named function {name!r}; registered: {sorted(NAMED_FUNCTIONS)}"
            )
        if growth_bound_Cf is None:
            growth_bound_Cf = NAMED_FUNCTIONS[name][2]
        return cls(kind="named", name=name, growth_bound_Cf=growth_bound_Cf)

    @classmethod
    def tabulated(
        cls,
        grid: Sequence[float],
        values: Sequence[float],
        growth_bound_Cf: Optional[float] = None,
    ) -> "FunctionSpec":
        g = tuple(float(v) for v in grid)
        v = tuple(float(v) for v in values)
        if len(g) != len(v) or len(g) < 2:
            raise DomainError("tabulated function needs matching grid/values of length >= 2")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise DomainError("tabulated grid must be strictly increasing")
        return cls(kind="tabulated", grid=g, values=v, growth_bound_Cf=growth_bound_Cf)

    def __post_init__(self) -> None:
        if self.kind not in ("polynomial", "named", "tabulated"):
            raise DomainError(f"unknown FunctionSpec kind {self.kind!r}")
        if self.growth_bound_Cf is not None:
            if self.growth_bound_Cf <= 0.0:
                raise DomainError("growth bound C_f must be positive")
            self._validate_growth_bound()

    def _validate_growth_bound(self) -> None:
        cf = self.growth_bound_Cf
        assert cf is not None
        if self.kind == "tabulated":
            xs = np.asarray(self.grid)
        else:
            xs = _GROWTH_SAMPLE
        fx = np.abs(self.evaluate(xs))
        bound = cf * (1.0 + xs**2)
        if np.any(fx > bound * (1.0 + 1e-12)):
            worst = float(xs[np.argmax(fx - bound)])
            raise DomainError(
                f"growth bound C_f = {cf} violated by sampling near x = {worst:.6g}"
            )

    def evaluate(self, x: ArrayLike) -> ArrayLike:
        if self.kind == "polynomial":
            assert self.coefficients is not None
            return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), self.coefficients)
        if self.kind == "named":
            assert self.name is not None
            return NAMED_FUNCTIONS[self.name][0](x)
        assert self.grid is not None and self.values is not None
        xa = np.asarray(x, dtype=float)
        if np.any(xa < self.grid[0]) or np.any(xa > self.grid[-1]):
            raise DomainError(
                f"tabulated function evaluated outside [{self.grid[0]}, {self.grid[-1]}]"
            )
        return np.interp(xa, self.grid, self.values)

    def __call__(self, x: ArrayLike) -> ArrayLike:
        out = self.evaluate(x)
        if np.isscalar(x) or (isinstance(x, float) or isinstance(x, int)):
            return float(out)
        return out

    def as_polynomial(self) -> Optional[tuple[float, ...]]:
        """Ascending coefficients when the function is exactly a polynomial."""
        if self.kind == "polynomial":
            return self.coefficients
        if self.kind == "named":
            assert self.name is not None
            return NAMED_FUNCTIONS[self.name][1]
        return None

    @property
    def degree(self) -> Optional[int]:
        coeffs = self.as_polynomial()
        if coeffs is None:
            return None
        deg = 0
        for d, c in enumerate(coeffs):
            if c != 0.0:
                deg = d
        return deg

    def default_growth_bound(self) -> Optional[float]:
        """C_f for polynomials of degree <= 2: sum of |coefficients| works since
        |c0| + |c1| x + |c2| x^2 <= (sum |c|)(1 + x^2) on x >= 0."""
        if self.growth_bound_Cf is not None:
            return self.growth_bound_Cf
        coeffs = self.as_polynomial()
        if coeffs is not None and (self.degree or 0) <= 2:
            return float(sum(abs(c) for c in coeffs))
        return None

    def require_growth_bound(self) -> float:
        cf = self.default_growth_bound()
        if cf is None:
            raise DomainError(
                "this operation needs a growth bound C_f with |f| <= C_f (1 + x^2); "
                "set growth_bound_Cf on the FunctionSpec"
            )
        return cf


def as_callable(f: Union[FunctionSpec, Callable[[ArrayLike], ArrayLike]]) -> Callable[[ArrayLike], ArrayLike]:
    """Accept either a FunctionSpec or a plain callable."""
    if isinstance(f, FunctionSpec):
        return f.evaluate
    if callable(f):
        return f
    raise DomainError(f"expected a FunctionSpec or callable, got {type(f)!r}")

