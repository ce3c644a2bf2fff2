"""Seeded random inputs for the sweeps; a seed fully determines every draw."""

from __future__ import annotations

import random
from functools import lru_cache

from .complexes import SimplicialComplex, all_complexes
from .subsets import full


UNIFORM_LIMIT = 5  # up to here every complex on [m] is enumerated and drawn uniformly


@lru_cache(maxsize=None)
def _catalog(m: int) -> tuple[SimplicialComplex, ...]:
    return tuple(all_complexes(m, include_void=False))


def random_complex(m: int, rng: random.Random, max_facets: int = 6, allow_void: bool = False) -> SimplicialComplex:
    """A uniform draw among all non-void complexes on ``[m]`` for small ``m``.

    Larger ground sets use the downward closure of a few random faces of random
    sizes.  ``{ }`` turns up only when asked for.
    """
    if allow_void and rng.random() < 0.05:
        return SimplicialComplex.void_complex(m)
    if m <= UNIFORM_LIMIT:
        return rng.choice(_catalog(m))
    masks = []
    for _ in range(rng.randint(1, max_facets)):
        size = m if rng.random() < 0.05 else rng.randint(1, max(1, m - 1))
        masks.append(sum(1 << v for v in rng.sample(range(m), size)))
    return SimplicialComplex.from_masks(m, masks)


def random_proper_complex(n: int, rng: random.Random) -> SimplicialComplex:
    """A complex on ``[n]`` that is neither void nor the full simplex."""
    top = full(n)
    while True:
        L = random_complex(n, rng)
        if top not in L.faces:
            return L


def random_exponents(m: int, rng: random.Random, high: int = 3) -> tuple[int, ...]:
    return tuple(rng.randint(1, high) for _ in range(m))


def complexes(m_values, count: int, seed: int, **kw) -> list[SimplicialComplex]:
    rng = random.Random(seed)
    return [random_complex(rng.choice(list(m_values)), rng, **kw) for _ in range(count)]
