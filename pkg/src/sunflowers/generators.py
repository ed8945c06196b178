"""Deterministic and seeded constructions of families with known structure.

Every generator re-verifies its advertised property before returning and
aborts on failure; randomized generators take an explicit seed and use a
counter-based PRNG (numpy Philox), so identical (parameters, seed) always
produce the identical family.  Rejection-sampling budgets are explicit --
no generator can loop silently forever.
"""

from __future__ import annotations

import math
from itertools import combinations, product
from typing import Iterable, Optional

import numpy as np

from .families import (
    ElementSet,
    SetFamily,
    intersection_profile,
    is_L_intersecting,
    is_sunflower,
)


class GeneratorError(ValueError):
    """Infeasible generator parameters or a failed self-check."""


DEFAULT_SIZE_BUDGET = 1_000_000


def _rng(seed: int) -> np.random.Generator:
    if seed < 0:
        raise GeneratorError(f"seed must be >= 0, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed))


def _n_subset_masks(rng, x: int, n: int, max_draws: int):
    """Up to max_draws uniform n-subset masks of {0..x-1}, 1 <= n <= x.

    Batched: each draw takes the positions of the n smallest entries in a
    row of iid uniforms, which is a uniform n-subset.  The fixed block
    size keeps stream consumption (and thus output) seed-deterministic.
    """
    drawn = 0
    while drawn < max_draws:
        block = min(512, max_draws - drawn)
        picks = np.argpartition(rng.random((block, x)), n - 1, axis=1)[:, :n]
        for row in picks:
            mask = 0
            for e in row:
                mask |= 1 << int(e)
            yield mask
        drawn += block


def gen_sunflower(core_size: int, petal_size: int, r: int) -> SetFamily:
    """An explicit r-sunflower: core {0..core_size-1}, then r disjoint
    petals of `petal_size` fresh elements each."""
    if r < 2 or petal_size < 1 or core_size < 0:
        raise GeneratorError(
            f"need r >= 2, petal_size >= 1, core_size >= 0, got ({core_size}, {petal_size}, {r})"
        )
    core = list(range(core_size))
    sets = []
    nxt = core_size
    for _ in range(r):
        sets.append(ElementSet(core + list(range(nxt, nxt + petal_size))))
        nxt += petal_size
    family = SetFamily(core_size + r * petal_size, sets)
    got = is_sunflower(family.members)
    if got is None or got.elements != tuple(core):
        raise GeneratorError("sunflower self-check failed")
    return family


def gen_transversal(blocks: int, block_size: int, budget: int = DEFAULT_SIZE_BUDGET) -> SetFamily:
    """All block_size^blocks transversals of `blocks` disjoint blocks:
    one element chosen per block.  The classical sunflower-free fixture."""
    if blocks < 1 or block_size < 1:
        raise GeneratorError(f"need blocks >= 1 and block_size >= 1, got ({blocks}, {block_size})")
    count = block_size**blocks
    if count > budget:
        raise GeneratorError(f"{count} transversals exceed budget {budget}")
    ranges = [range(b * block_size, (b + 1) * block_size) for b in range(blocks)]
    family = SetFamily(blocks * block_size, (ElementSet(choice) for choice in product(*ranges)))
    if len(family) != count or family.uniformity != blocks:
        raise GeneratorError("transversal self-check failed")
    return family


def gen_all_k_subsets(x: int, k: int, budget: int = DEFAULT_SIZE_BUDGET) -> SetFamily:
    """All k-subsets of {0..x-1} in canonical order."""
    if k < 0 or k > x:
        raise GeneratorError(f"need 0 <= k <= x, got k={k}, x={x}")
    count = math.comb(x, k)
    if count > budget:
        raise GeneratorError(f"{count} subsets exceed budget {budget}")
    return SetFamily(x, (ElementSet(c) for c in combinations(range(x), k)))


def gen_random_uniform(x: int, n: int, count: int, seed: int) -> SetFamily:
    """`count` distinct uniformly-sampled n-subsets of {0..x-1}.

    Rejection sampling of sorted draws; when the request is a large
    fraction of C(x, n) (or the total is tiny) the full enumeration is
    sampled instead, which avoids unbounded rejection near saturation.
    Both paths are deterministic for a fixed seed.
    """
    total = math.comb(x, n)
    if count < 0 or count > total:
        raise GeneratorError(f"cannot draw {count} distinct {n}-subsets of {x} (total {total})")
    rng = _rng(seed)
    if total <= max(4096, 4 * count):
        all_masks = [sum(1 << e for e in c) for c in combinations(range(x), n)]
        idx = rng.choice(total, size=count, replace=False)
        masks = [all_masks[i] for i in sorted(int(i) for i in idx)]
        return SetFamily.from_masks(x, masks, uniform=n)
    # total > 4*count, so rejection converges quickly
    chosen: set[int] = set()
    cap = 200 * count + 1000
    for mask in _n_subset_masks(rng, x, n, cap):
        chosen.add(mask)
        if len(chosen) == count:
            return SetFamily.from_masks(x, chosen, uniform=n)
    raise GeneratorError(f"rejection sampling exceeded {cap} attempts")


def gen_single_intersection(n: int, t: int, count: int) -> SetFamily:
    """An n-uniform family of `count` sets with every pairwise intersection
    of size exactly t: a sunflower with core size t.

    Any sufficiently large single-intersection-size family is necessarily a
    sunflower, so this is the only construction that scales; small
    non-sunflower examples (the triangle) live in test fixtures.
    """
    if not 0 <= t < n:
        raise GeneratorError(f"need 0 <= t < n, got t={t}, n={n}")
    family = gen_sunflower(t, n - t, count)
    if count >= 2 and intersection_profile(family) != frozenset({t}):
        raise GeneratorError("single-intersection self-check failed")
    return family


def gen_random_L_intersecting(
    x: int,
    n: int,
    L: Iterable[int],
    target_count: int,
    seed: int,
    budget: int = 100_000,
) -> SetFamily:
    """Greedy seeded construction of an L-intersecting n-uniform family.

    Repeatedly samples an n-subset and keeps it iff every intersection with
    the kept sets has size in L; stops at target_count sets or after
    `budget` draws, so the result may be smaller than requested (callers
    compare len() against target_count).  Not a uniform sampler over all
    L-intersecting families -- greedy acceptance biases toward families
    that are easy to extend.
    """
    allowed = frozenset(int(e) for e in L)
    if not allowed <= frozenset(range(n)):
        raise GeneratorError(f"L must be a subset of {{0..{n - 1}}}, got {sorted(allowed)}")
    if target_count < 0:
        raise GeneratorError(f"target_count must be >= 0, got {target_count}")
    if n > x:
        raise GeneratorError(f"need n <= x, got n={n}, x={x}")
    rng = _rng(seed)
    kept: list[int] = []
    if n == 0:
        # the empty set is the only 0-subset; a second copy never passes
        # the L-check since 0 is not an allowed size when L is empty
        kept = [0][: max(target_count, 0)]
    else:
        for mask in _n_subset_masks(rng, x, n, budget):
            if len(kept) >= target_count:
                break
            # a duplicate of a kept set intersects it in n elements, n not in L
            if all((mask & m).bit_count() in allowed for m in kept):
                kept.append(mask)
    family = SetFamily.from_masks(x, kept, uniform=n)
    if not is_L_intersecting(family, allowed):
        raise GeneratorError("L-intersecting self-check failed")
    return family
