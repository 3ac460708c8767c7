import random
from fractions import Fraction as F

import pytest
from mpmath import mp

from crbloch.crgeom import ConfigFour, GeomContext, Point, is_generic
from crbloch.errors import DegenerateCrossRatio, NotGeneric
from crbloch.numfield import QQ, gaussian_field, quadratic_imaginary


@pytest.fixture(scope="session")
def QQf():
    return QQ()


@pytest.fixture(scope="session")
def Qi():
    return gaussian_field()


@pytest.fixture(scope="session")
def K15():
    return quadratic_imaginary(15)


@pytest.fixture(scope="session")
def K7():
    return quadratic_imaginary(7)


@pytest.fixture(scope="session")
def qi_ctx(Qi):
    return GeomContext.for_field(Qi)


class PointFactory:
    """Random small-height Heisenberg points over Q(i), with retry-based
    constructors for generic tuples and configurations."""

    def __init__(self, field, ctx, seed=0, span=3, denom=2, inf_rate=0.1):
        self.field = field
        self.ctx = ctx
        self.rng = random.Random(seed)
        self.span = span
        self.denom = denom
        self.inf_rate = inf_rate

    def point(self):
        rng = self.rng
        if rng.random() < self.inf_rate:
            return Point.infinity(self.field)
        z = self.field.element([F(rng.randint(-self.span, self.span),
                                  rng.randint(1, self.denom)),
                                F(rng.randint(-self.span, self.span),
                                  rng.randint(1, self.denom))])
        t = self.field.element([F(rng.randint(-self.span, self.span),
                                  rng.randint(1, self.denom))])
        return Point.heisenberg(self.field, z, t)

    def generic_points(self, n):
        from itertools import combinations
        while True:
            pts = [self.point() for _ in range(n)]
            if len(set(pts)) != n or not is_generic(pts, self.ctx):
                continue
            try:
                for sub in combinations(range(n), 4):
                    ConfigFour([pts[i] for i in sub], self.ctx)
            except (NotGeneric, DegenerateCrossRatio):
                continue
            return pts

    def config(self):
        while True:
            pts = [self.point() for _ in range(4)]
            try:
                return ConfigFour(pts, self.ctx)
            except (NotGeneric, DegenerateCrossRatio):
                continue

    def rational(self, nonzero=False, not_one=False):
        rng = self.rng
        while True:
            q = F(rng.randint(-8, 8), rng.randint(1, 6))
            if nonzero and q == 0:
                continue
            if not_one and q == 1:
                continue
            return q

    def element(self, field=None, nonzero=False):
        field = field or self.field
        while True:
            el = field.element([self.rational() for _ in range(field.degree)])
            if nonzero and el.is_zero():
                continue
            return el


@pytest.fixture
def factory(Qi, qi_ctx):
    return PointFactory(Qi, qi_ctx, seed=20240817)


@pytest.fixture
def high_prec():
    with mp.workprec(200):
        yield
