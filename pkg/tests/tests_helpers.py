"""Shared element generators for the test suite."""

from wittscaffold.audit import element_with_valuation, random_unit


def random_k2(ext, rng, span=2):
    el = ext.zero()
    for _ in range(4):
        k = rng.randrange(-span, span + 1)
        i = rng.randrange(ext.p)
        j = rng.randrange(ext.p)
        c = rng.randrange(1, ext.p ** 2)
        el = el + ext.monomial(k, i, j).scale(c)
    return el


__all__ = ["element_with_valuation", "random_unit", "random_k2"]
