import pytest

from pqbaskakov import PQPair

# strict pairs used throughout: two genuinely two-parameter ones plus the
# single-parameter special case p = 1
STRICT_PAIRS = [PQPair(0.9, 0.8), PQPair(0.95, 0.9), PQPair(1.0, 0.9)]
CLASSICAL = PQPair(1.0, 1.0)


def rel_err(got: float, want: float, floor: float = 1e-300) -> float:
    return abs(got - want) / max(abs(want), floor)


@pytest.fixture(params=STRICT_PAIRS, ids=lambda p: f"p{p.p}-q{p.q}")
def strict_pair(request):
    return request.param
