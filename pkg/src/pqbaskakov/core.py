"""Two-parameter (p,q) calculus primitives.

Everything here is an exact-regime scalar building block: the deformed
integers [n]_{p,q}, their factorials and binomials, the integer-argument
Gamma and second-kind Beta functions, the deformed power basis
(1 (+) x)^n = prod_{j<n} (p^j + q^j x), and the (p,q)-difference quotient.

Conventions:
    [n] = p^{n-1} + p^{n-2} q + ... + q^{n-1}
        = (p^n - q^n) / (p - q)      for p != q
        = n p^{n-1}                  for p == q (removable limit)

    Gamma(n+1) = [n]!,  at integer arguments only.

    B(m, n) = q^{1 - m(m-1)/2} p^{-m(m+1)/2} Gamma(m) Gamma(n) / Gamma(m+n)

All values are positive in the admissible regime 0 < q <= p <= 1, so the
log-domain helpers used to dodge under/overflow never need sign tracking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "DomainError",
    "RegimeError",
    "PQPair",
    "TruncationPolicy",
    "DEFAULT_POLICY",
    "pq_number",
    "log_pq_number",
    "pq_factorial",
    "log_pq_factorial",
    "pq_binomial",
    "log_pq_binomial",
    "pq_gamma",
    "pq_power_basis",
    "pq_power_basis_log",
    "pq_beta",
    "log_pq_beta",
    "pq_derivative",
]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RegimeError(ValueError):
    """The parameter pair violates the admissible 0 < q <= p <= 1 regime."""


@dataclass(frozen=True)
class PQPair:
    """The parameter pair (p, q) with 0 < q <= p <= 1.

    Construction accepts the closed regime, including the degenerate line
    p == q (where [n] is defined by its limit) and the classical corner
    p == q == 1.  Operations that genuinely need q < p (Jackson ladders,
    the Beta-weighted operators) call :meth:`require_strict`.
    """

    p: float
    q: float

    def __post_init__(self) -> None:
        p, q = float(self.p), float(self.q)
        if not (math.isfinite(p) and math.isfinite(q)):
            raise RegimeError(f"non-finite parameters p={self.p!r}, q={self.q!r}")
        if q <= 0.0:
            raise RegimeError(f"q must be positive, got q={q}")
        if p > 1.0:
            raise RegimeError(f"p must satisfy p <= 1, got p={p}")
        if q > p:
            raise RegimeError(f"regime requires 0 < q <= p <= 1, got q={q} > p={p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_classical(self) -> bool:
        return self.p == 1.0 and self.q == 1.0

    @property
    def is_strict(self) -> bool:
        return self.q < self.p

    @property
    def ratio(self) -> float:
        """q / p, the decay ratio of every ladder built on this pair."""
        return self.q / self.p

    def require_strict(self, context: str = "this operation") -> None:
        if not self.is_strict:
            raise RegimeError(
                f"{context} requires the strict regime 0 < q < p <= 1, "
                f"got p = q = {self.p}"
            )


@dataclass(frozen=True)
class TruncationPolicy:
    """Tolerances and caps for truncating the infinite series in this package.

    A series direction is stopped once the current term magnitude falls below
    max(abs_tol, rel_tol * |partial sum|) for three consecutive terms; the
    discarded mass is then estimated by geometric extrapolation.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_terms: int = 10000

    def __post_init__(self) -> None:
        if not self.rel_tol > 0.0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol > 0.0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")

    def threshold(self, partial: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(partial))


DEFAULT_POLICY = TruncationPolicy()


def _check_nonneg_int(n: int, what: str) -> int:
    if n != int(n) or n < 0:
        raise DomainError(f"{what} must be a non-negative integer, got {n!r}")
    return int(n)


def pq_number(pair: PQPair, n: int) -> float:
    """[n]_{p,q}; the limit n p^{n-1} is used on the degenerate line p == q."""
    n = _check_nonneg_int(n, "n")
    if n == 0:
        return 0.0
    p, q = pair.p, pair.q
    if p == q:
        return n * p ** (n - 1)
    return (p**n - q**n) / (p - q)


def log_pq_number(pair: PQPair, n: int) -> float:
    """log [n]_{p,q}, stable for large n where p^n underflows."""
    n = _check_nonneg_int(n, "n")
    if n == 0:
        raise DomainError("log of [0] = 0 is undefined")
    p, q = pair.p, pair.q
    if p == q:
        return math.log(n) + (n - 1) * math.log(p)
    # [n] = p^{n-1} (1 - r^n) / (1 - r) with r = q/p < 1
    r = q / p
    return (n - 1) * math.log(p) + math.log1p(-(r**n)) - math.log1p(-r)


# Per-pair prefix sums of log [j], grown on demand.  Recomputation under
# concurrent access is benign: entries are pure functions of (pair, j).
_LOG_FACT_CACHE: dict[PQPair, list[float]] = {}


def _log_fact_table(pair: PQPair, n: int) -> list[float]:
    table = _LOG_FACT_CACHE.get(pair)
    if table is None:
        table = [0.0]
        _LOG_FACT_CACHE[pair] = table
    while len(table) <= n:
        j = len(table)
        table.append(table[-1] + log_pq_number(pair, j))
    return table


def log_pq_factorial(pair: PQPair, n: int) -> float:
    """log [n]! = sum_{j<=n} log [j]."""
    n = _check_nonneg_int(n, "n")
    return _log_fact_table(pair, n)[n]


def pq_factorial(pair: PQPair, n: int) -> float:
    """[n]! = prod_{r=1..n} [r], with [0]! = 1."""
    n = _check_nonneg_int(n, "n")
    out = 1.0
    for r in range(1, n + 1):
        out *= pq_number(pair, r)
    return out


def pq_binomial(pair: PQPair, n: int, r: int) -> float:
    """[n]! / ([n-r]! [r]!), for 0 <= r <= n."""
    n = _check_nonneg_int(n, "n")
    r = _check_nonneg_int(r, "r")
    if r > n:
        raise DomainError(f"binomial requires 0 <= r <= n, got n={n}, r={r}")
    return math.exp(log_pq_binomial(pair, n, r))


def log_pq_binomial(pair: PQPair, n: int, r: int) -> float:
    if r > n:
        raise DomainError(f"binomial requires 0 <= r <= n, got n={n}, r={r}")
    table = _log_fact_table(pair, n)
    return table[n] - table[n - r] - table[r]


def pq_gamma(pair: PQPair, n_plus_1: int) -> float:
    """Gamma(n+1) = [n]!, defined at integer arguments >= 1 only."""
    if n_plus_1 != int(n_plus_1) or n_plus_1 < 1:
        raise DomainError(
            f"Gamma is defined at integer arguments >= 1, got {n_plus_1!r}"
        )
    return pq_factorial(pair, int(n_plus_1) - 1)


def pq_power_basis(pair: PQPair, x: float, n: int) -> float:
    """(1 (+) x)^n = prod_{j=0}^{n-1} (p^j + q^j x); returns 1 for n = 0."""
    n = _check_nonneg_int(n, "n")
    p, q = pair.p, pair.q
    out = 1.0
    pj = 1.0
    qj = 1.0
    for _ in range(n):
        out *= pj + qj * x
        pj *= p
        qj *= q
    return out


def pq_power_basis_log(pair: PQPair, x: float, n: int) -> float:
    """log (1 (+) x)^n for x >= 0, stable when individual powers underflow.

    Each factor is p^j (1 + (q/p)^j x), so its log is j log p + log1p(...),
    which stays finite even when p^j itself is subnormal.
    """
    n = _check_nonneg_int(n, "n")
    if x < 0.0:
        raise DomainError(f"log-domain power basis requires x >= 0, got {x}")
    p, q = pair.p, pair.q
    lp = math.log(p)
    r = q / p
    out = 0.0
    rj = 1.0
    for j in range(n):
        out += j * lp + math.log1p(rj * x)
        rj *= r
    return out


def _check_beta_args(m: int, n: int) -> tuple[int, int]:
    if m != int(m) or m < 1 or n != int(n) or n < 1:
        raise DomainError(f"Beta requires integer arguments m, n >= 1, got {m!r}, {n!r}")
    return int(m), int(n)


def log_pq_beta(pair: PQPair, m: int, n: int) -> float:
    """log B(m,n) with the split prefactor exponents.

    The prefactor is q^{1 - m(m-1)/2} p^{-m(m+1)/2}; it collapses to 1 at
    p = q = 1, where B reduces to the classical Beta at integer arguments.
    """
    m, n = _check_beta_args(m, n)
    lp, lq = math.log(pair.p), math.log(pair.q)
    table = _log_fact_table(pair, m + n - 1)
    return (
        (1 - m * (m - 1) / 2) * lq
        - (m * (m + 1) / 2) * lp
        + table[m - 1]
        + table[n - 1]
        - table[m + n - 1]
    )


def pq_beta(pair: PQPair, m: int, n: int) -> float:
    """Second-kind Beta function B(m,n); not symmetric in (m, n) for q < p."""
    return math.exp(log_pq_beta(pair, m, n))


def pq_derivative(pair: PQPair, f: Callable[[float], float], x: float) -> float:
    """The (p,q)-difference quotient (f(px) - f(qx)) / ((p - q) x).

    Undefined at x = 0 and on the degenerate line p = q; both are rejected.
    """
    if x == 0.0:
        raise DomainError("the (p,q)-difference quotient is undefined at x = 0")
    pair.require_strict("the (p,q)-difference quotient")
    p, q = pair.p, pair.q
    return (f(p * x) - f(q * x)) / ((p - q) * x)
