"""Error analysis: moduli of continuity, rate bounds, weighted convergence.

The sups over x that appear in the bounds are discretized on uniform grids;
the discrete modulus is a lower bound of the true sup that converges under
grid refinement.  Keep at least ~20 grid steps per delta for the moduli.

Weighted approximation uses the fixed weight sigma(x) = 1 + x^2 and the
norm sup |f(x)| / sigma(x); convergence of the operator family to f in
that norm requires parameter sequences (p_n, q_n) -> (1, 1) with convergent
p_n^n and q_n^n, which ``ParameterSchedule`` encodes.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .core import DEFAULT_POLICY, DomainError, PQPair, RegimeError, TruncationPolicy
from .baskakov import baskakov_beta_apply, central_moment
from .functions import FunctionSpec, as_callable

__all__ = [
    "EvalGrid",
    "WeightFunction",
    "ParameterSchedule",
    "modulus_of_continuity",
    "second_modulus",
    "BoundTerms",
    "pointwise_bound_terms",
    "interval_rate_bound",
    "weighted_sup_error",
    "ConvergenceRow",
    "convergence_run",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalGrid:
    """Uniform grid on [start, stop] with the given number of points."""

    start: float
    stop: float
    points: int

    def __post_init__(self) -> None:
        if self.start < 0.0:
            raise DomainError(f"grid start must be >= 0, got {self.start}")
        if not self.stop > self.start:
            raise DomainError(f"grid needs stop > start, got [{self.start}, {self.stop}]")
        if self.points < 2:
            raise DomainError(f"grid needs at least 2 points, got {self.points}")

    @property
    def spacing(self) -> float:
        return (self.stop - self.start) / (self.points - 1)

    def array(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class WeightFunction:
    """The fixed weight sigma(x) = 1 + x^2 of the polynomial-growth class."""

    kind: str = "one_plus_x_squared"

    def __post_init__(self) -> None:
        if self.kind != "one_plus_x_squared":
            raise DomainError(f"only the 1 + x^2 weight is supported, got {self.kind!r}")

    def __call__(self, x):
        return 1.0 + np.asarray(x, dtype=float) ** 2


@dataclass(frozen=True)
class ParameterSchedule:
    """A rule n -> (p_n, q_n).

    Families:
      * ``fixed``          - constant pair; useful for figure reproduction,
                             but the operator family does NOT converge to f
                             when p < 1 stays fixed.
      * ``q_ratio``        - p_n = 1, q_n = n/(n+1); q_n^n -> 1/e.
      * ``harmonic_decay`` - p_n = 1 - alpha/n, q_n = 1 - beta/n with
                             0 <= alpha < beta; p_n^n -> e^-alpha, q_n^n -> e^-beta.
    """

    family: str
    p: Optional[float] = None
    q: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None

    @classmethod
    def fixed(cls, pair: PQPair) -> "ParameterSchedule":
        return cls(family="fixed", p=pair.p, q=pair.q)

    @classmethod
    def q_ratio(cls) -> "ParameterSchedule":
        return cls(family="q_ratio")

    @classmethod
    def harmonic_decay(cls, alpha: float, beta: float) -> "ParameterSchedule":
        return cls(family="harmonic_decay", alpha=float(alpha), beta=float(beta))

    def __post_init__(self) -> None:
        if self.family == "fixed":
            if self.p is None or self.q is None:
                raise DomainError("fixed schedule needs p and q")
            PQPair(self.p, self.q)
        elif self.family == "q_ratio":
            pass
        elif self.family == "harmonic_decay":
            if self.alpha is None or self.beta is None:
                raise DomainError("harmonic_decay schedule needs alpha and beta")
            if not (0.0 <= self.alpha < self.beta):
                raise DomainError(
                    f"harmonic_decay needs 0 <= alpha < beta, got alpha={self.alpha}, beta={self.beta}"
                )
        else:
            raise DomainError(f"unknown schedule family {self.family!r}")

    @property
    def converging(self) -> bool:
        """Whether p_n, q_n -> 1 (the regime where weighted convergence holds)."""
        if self.family == "fixed":
            return self.p == 1.0 and self.q == 1.0
        return True

    def limits(self) -> tuple[float, float]:
        """(lim p_n^n, lim q_n^n)."""
        if self.family == "q_ratio":
            return 1.0, math.exp(-1.0)
        if self.family == "harmonic_decay":
            return math.exp(-self.alpha), math.exp(-self.beta)
        if self.p == 1.0 and self.q == 1.0:
            return 1.0, 1.0
        return (0.0 if self.p < 1.0 else 1.0), 0.0

    def pair_at(self, n: int) -> PQPair:
        if n < 1:
            raise DomainError(f"schedule index must satisfy n >= 1, got {n}")
        if self.family == "fixed":
            return PQPair(self.p, self.q)
        if self.family == "q_ratio":
            return PQPair(1.0, n / (n + 1.0))
        q_n = 1.0 - self.beta / n
        if q_n <= 0.0:
            raise RegimeError(
                f"harmonic_decay schedule leaves the regime at n={n}: q_n = {q_n} <= 0"
            )
        return PQPair(1.0 - self.alpha / n, q_n)


def _max_steps(delta: float, spacing: float, count: int) -> int:
    return min(int(math.floor(delta / spacing + 1e-12)), count - 1)


def _modulus_from_values(values: np.ndarray, spacing: float, delta: float, order: int) -> float:
    s_max = _max_steps(delta, spacing, len(values))
    if s_max < 1:
        return 0.0
    best = 0.0
    for s in range(1, s_max + 1):
        if order == 1:
            diff = np.abs(values[s:] - values[:-s])
        else:
            if len(values) <= 2 * s:
                break
            diff = np.abs(values[2 * s:] - 2.0 * values[s:-s] + values[:-2 * s])
        if diff.size:
            best = max(best, float(diff.max()))
    return best


def modulus_of_continuity(
    f: Union[FunctionSpec, callable], delta: float, grid: EvalGrid
) -> float:
    """Discrete omega(f, delta): sup over grid x and step h <= delta of |f(x+h) - f(x)|."""
    if delta < 0.0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    if delta == 0.0:
        return 0.0
    if delta < grid.spacing:
        warnings.warn(
            f"delta = {delta:.3g} is below the grid spacing {grid.spacing:.3g}; "
            "the modulus is resolution-limited and reported as 0",
            stacklevel=2,
        )
    values = np.asarray(as_callable(f)(grid.array()), dtype=float)
    return _modulus_from_values(values, grid.spacing, delta, order=1)


def second_modulus(
    f: Union[FunctionSpec, callable], delta: float, grid: EvalGrid
) -> float:
    """Discrete omega_2(f, delta): sup of |f(x+2h) - 2 f(x+h) + f(x)|, h <= delta."""
    if delta < 0.0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    if delta == 0.0:
        return 0.0
    if delta < grid.spacing:
        warnings.warn(
            f"delta = {delta:.3g} is below the grid spacing {grid.spacing:.3g}; "
            "the second modulus is resolution-limited and reported as 0",
            stacklevel=2,
        )
    values = np.asarray(as_callable(f)(grid.array()), dtype=float)
    return _modulus_from_values(values, grid.spacing, delta, order=2)


@dataclass(frozen=True)
class BoundTerms:
    """The two computable ingredients of the pointwise error bound:
    omega(f, |mu1|) and the argument sqrt(mu2 + mu1^2) of the second modulus.
    (The absolute constant multiplying the omega_2 term is not exhibited.)"""

    omega_term: float
    omega2_arg: float


def pointwise_bound_terms(
    pair: PQPair, n: int, x: float, f: Union[FunctionSpec, callable], grid: EvalGrid
) -> BoundTerms:
    mu1 = central_moment(pair, 1, n, x)
    mu2 = central_moment(pair, 2, n, x)
    omega = modulus_of_continuity(f, abs(mu1), grid)
    return BoundTerms(omega_term=omega, omega2_arg=math.sqrt(mu2 + mu1 * mu1))


def interval_rate_bound(
    pair: PQPair,
    n: int,
    f: FunctionSpec,
    kappa: float,
    grid: EvalGrid,
) -> float:
    """Computable rate bound over [0, kappa] for functions of quadratic growth.

    With L = 6 C_f (1 + kappa^2)(1 + kappa + kappa^2) and the modulus taken
    on [0, kappa + 1], each grid point x <= kappa contributes

        L mu2(x) + (1 + 1/sqrt(L)) omega(f, sqrt(L mu2(x)))

    and the maximum over x is returned.  The moduli arguments both use
    delta = sqrt(L mu2(x)), the choice that closes the underlying proof.
    """
    if kappa <= 0.0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    if n <= 2:
        raise DomainError(f"rate bound needs n > 2, got {n}")
    if not isinstance(f, FunctionSpec):
        raise DomainError("interval_rate_bound needs a FunctionSpec with a growth bound")
    cf = f.require_growth_bound()
    if grid.start > 1e-12 or grid.stop < kappa + 1.0:
        raise DomainError(
            f"grid [{grid.start}, {grid.stop}] must cover [0, {kappa + 1.0}] for the moduli"
        )
    L = 6.0 * cf * (1.0 + kappa**2) * (1.0 + kappa + kappa**2)
    xs = grid.array()
    values = np.asarray(as_callable(f)(xs), dtype=float)
    inside = xs[xs <= kappa + 1e-12]
    spacing = grid.spacing
    omega_cache: dict[int, float] = {}
    bound = 0.0
    for x in inside:
        mu2 = central_moment(pair, 2, n, float(x))
        delta = math.sqrt(L * mu2)
        steps = _max_steps(delta, spacing, len(values))
        if steps not in omega_cache:
            omega_cache[steps] = _modulus_from_values(values, spacing, steps * spacing, 1)
        omega = omega_cache[steps]
        bound = max(bound, L * mu2 + (1.0 + 1.0 / math.sqrt(L)) * omega)
    return bound


def weighted_sup_error(
    pair: PQPair,
    n: int,
    f: FunctionSpec,
    grid: EvalGrid,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> float:
    """Discrete sup over the grid of |D_n(f, x) - f(x)| / (1 + x^2).

    The grid should reach far enough right that the weighted error is
    decreasing at the edge; a non-decreasing edge is logged as a hint that
    the reported sup may be truncated.
    """
    f.require_growth_bound()
    sigma = WeightFunction()
    xs = grid.array()
    fv = np.asarray(as_callable(f)(xs), dtype=float)
    dv = np.array([baskakov_beta_apply(pair, f, n, float(x), policy).value for x in xs])
    weighted = np.abs(dv - fv) / sigma(xs)
    if len(weighted) >= 2 and weighted[-1] > weighted[-2]:
        logger.info(
            "weighted error still increasing at the right edge (x = %.3g); "
            "extend the grid to trust the sup",
            xs[-1],
        )
    return float(weighted.max())


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    p_n: float
    q_n: float
    sup_error: float
    weighted_error: float
    mu2_max: float
    ok: bool = True


def convergence_run(
    schedule: ParameterSchedule,
    f: FunctionSpec,
    n_list: Sequence[int],
    grid: EvalGrid,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> list[ConvergenceRow]:
    """One row per n: measured errors plus the worst central second moment.

    A failing row is marked (NaN fields, ok=False) without aborting the run;
    the output order follows n_list.
    """
    rows: list[ConvergenceRow] = []
    xs = grid.array()
    sigma = WeightFunction()
    fv = np.asarray(as_callable(f)(xs), dtype=float)
    for n in n_list:
        try:
            pair = schedule.pair_at(int(n))
            if n <= 2:
                raise DomainError(f"convergence rows need n > 2, got n={n}")
            dv = np.array(
                [baskakov_beta_apply(pair, f, int(n), float(x), policy).value for x in xs]
            )
            err = np.abs(dv - fv)
            mu2s = np.array([central_moment(pair, 2, int(n), float(x)) for x in xs])
            rows.append(
                ConvergenceRow(
                    n=int(n),
                    p_n=pair.p,
                    q_n=pair.q,
                    sup_error=float(err.max()),
                    weighted_error=float((err / sigma(xs)).max()),
                    mu2_max=float(mu2s.max()),
                )
            )
        except (DomainError, RegimeError) as exc:
            logger.warning("convergence row n=%s failed: %s", n, exc)
            nan = float("nan")
            p_n = q_n = nan
            try:
                failed_pair = schedule.pair_at(int(n))
                p_n, q_n = failed_pair.p, failed_pair.q
            except (DomainError, RegimeError):
                pass
            rows.append(ConvergenceRow(int(n), p_n, q_n, nan, nan, nan, ok=False))
    return rows
