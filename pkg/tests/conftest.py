import random

import pytest
from hypothesis import HealthCheck, settings

from hkperiod.lattice import diagonal
from hkperiod.period import PeriodPoint
from hkperiod.scalars import vector

settings.register_profile(
    "hk", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("hk")

# criterion number -> (ok, detail); filled by test_acceptance, printed at the end
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def sig33():
    return diagonal(1, 1, 1, -1, -1, -1, name="sig33")


@pytest.fixture(scope="session")
def sig31():
    return diagonal(1, 1, 1, -1)


def random_plane(L, rng: random.Random, height: int = 3) -> PeriodPoint:
    """Rejection-sample a rational positive oriented 2-plane."""
    while True:
        u = vector([rng.randint(-height, height) for _ in range(L.rank)])
        v = vector([rng.randint(-height, height) for _ in range(L.rank)])
        try:
            return PeriodPoint(L, (u, v))
        except ValueError:
            continue


def random_roots(L, count, rng, norms=(2, -2)):
    """Random integer vectors of norm +-2 on U + ... by solving for the first U block."""
    out = []
    while len(out) < count:
        v = [0, 0] + [rng.randint(-2, 2) for _ in range(L.rank - 2)]
        x = vector(v)
        rest = L.q(x, x).as_fraction()
        target = rng.choice(norms)
        t = (target - rest) / 2  # 2 a b = target - rest
        if t.denominator != 1:
            continue
        t = int(t)
        divisors = [d for d in range(1, abs(t) + 1) if t % d == 0] or [1]
        d = rng.choice(divisors) * rng.choice((1, -1))
        v[0], v[1] = d, t // d
        out.append(tuple(v))
    return out
