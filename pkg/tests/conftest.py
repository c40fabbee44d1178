import random

import pytest

from gaugebrane.complexes import ChainMap, random_brane, shift
from gaugebrane.poly import HomogeneousPoly, monomial_basis


def random_poly(rng, nvars, degree):
    if degree < 0:
        return HomogeneousPoly.zero(nvars)
    monos = monomial_basis(nvars - 1, degree)
    picks = rng.sample(monos, min(len(monos), rng.randint(1, 2)))
    return HomogeneousPoly(nvars, {m: rng.choice((-1, 1, 2)) for m in picks})


def random_chain_map(rng, a, b, tries=30):
    """A random chain map a -> b, falling back to zero."""
    for _ in range(tries):
        comps = {}
        for p in a.terms:
            if p in b.terms:
                comps[p] = [[random_poly(rng, a.nvars, kb - ka) if rng.random() < 0.6 else 0
                             for ka in a.terms[p]] for kb in b.terms[p]]
        h = ChainMap(a, b, comps)
        if h.is_chain_map():
            return h
    return ChainMap(a, b)


def brane_suite(count, ns=(1, 2), depths=(1, 2), salt=0):
    """Deterministic list of (n, brane) pairs drawn from the cone closure."""
    out = []
    seed = salt
    while len(out) < count:
        for n in ns:
            for depth in depths:
                if len(out) < count:
                    out.append((n, random_brane(n, depth, seed)))
        seed += 1
    return out


@pytest.fixture
def rng():
    return random.Random(1234)


def small_brane(rng, n, max_span=2):
    """Random brane with twists in [-n, 0], built from one or two cones."""
    b = random_brane(n, rng.randint(0, 2), rng.randrange(10**6))
    return shift(b, rng.randint(-max_span // 2, max_span // 2))
