"""Sunflower extraction: exhaustive oracle, Deza extraction, and the
recursive extractor for families with restricted intersection sizes.

The recursive extractor mirrors the inductive argument behind the
multinomial threshold: peel off the smallest intersection size l1 by
pigeonholing on a maximal pairwise-l1 subfamily, pass to the densest link
at an (l1+1)-subset of the best pivot, and recurse with one fewer
intersection size.  The branching limit m = max(r-1, n^2-n+1) is fixed
from the top-level n and threaded unchanged through the recursion.  Every
"pick one" step takes the canonical-order maximizer, which dominates the
pigeonhole average, so whenever the family exceeds the multinomial bound
the extractor is guaranteed to succeed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .bounds import pigeonhole_limit
from .families import (
    ElementSet,
    FamilyError,
    SetFamily,
    Sunflower,
    elements_of,
    intersection_profile,
    is_L_intersecting,
    is_sunflower,
)


class FinderError(ValueError):
    """Precondition violation in a finder."""


class NotUniformError(FinderError):
    pass


class ProfileNotSingletonError(FinderError):
    pass


class BelowDezaThresholdError(FinderError):
    pass


class LemmaViolationError(RuntimeError):
    """A family met Deza's hypothesis but failed the sunflower certificate.

    This cannot happen for correct inputs; raising it loudly (rather than
    returning a bad certificate) is deliberate.
    """


@dataclass(frozen=True)
class TraceLevel:
    """One level of the recursive extraction.

    `subfamily` records the greedy maximal pairwise-equal subfamily,
    `pivot` the member chosen from it, and `pivot_link` the (l1+1)-subset
    of the pivot whose link is recursed on.  At every recursed level the
    pigeonhole guarantees filtered_size >= family_size/m and
    link_size >= filtered_size/C(n, l1+1).
    """

    depth: int
    n: int
    L: tuple[int, ...]
    m: int
    family_size: int
    outcome: str
    subfamily: Optional[tuple[tuple[int, ...], ...]] = None
    pivot: Optional[tuple[int, ...]] = None
    pivot_link: Optional[tuple[int, ...]] = None
    filtered_size: Optional[int] = None
    link_size: Optional[int] = None


@dataclass(frozen=True)
class FinderTrace:
    found: bool
    levels: tuple[TraceLevel, ...]


@dataclass(frozen=True)
class SearchOutcome:
    """Three-valued search result: found / definitively absent / unknown."""

    status: str  # "found" | "absent" | "unknown"
    sunflower: Optional[Sunflower] = None
    trace: Optional[FinderTrace] = None
    method: str = ""
    note: str = ""


def _masks_form_sunflower(masks) -> Optional[int]:
    core = masks[0]
    for m in masks[1:]:
        core &= m
    for a, b in combinations(masks, 2):
        if a & b != core:
            return None
    return core


def brute_force_sunflower(family: SetFamily, r: int) -> Optional[Sunflower]:
    """First r-subset of members (canonical order) forming a sunflower.

    Exhaustive over all C(|F|, r) member subsets, so a None result is an
    authoritative "no r-sunflower in this family".
    """
    if r < 2:
        raise FinderError(f"need r >= 2, got {r}")
    masks = family.masks
    members = family.members
    for combo in combinations(range(len(masks)), r):
        core = _masks_form_sunflower([masks[i] for i in combo])
        if core is not None:
            return Sunflower(tuple(members[i] for i in combo), ElementSet.from_mask(core))
    return None


def deza_extract(family: SetFamily, r: int) -> Sunflower:
    """Extract r sunflower members from a large single-intersection family.

    An n-uniform family whose pairwise intersections all have one size t
    and with at least n^2-n+2 members is necessarily a sunflower; the
    first r members (canonical order) with core = intersection of the
    whole family are returned after full certificate verification.  The
    size precondition is max(r, n^2-n+2) so that r members exist.
    """
    if r < 2:
        raise FinderError(f"need r >= 2, got {r}")
    n = family.uniformity
    if n is None or n < 1:
        raise NotUniformError("family must be n-uniform with n >= 1")
    profile = intersection_profile(family)
    if len(profile) != 1:
        raise ProfileNotSingletonError(
            f"intersection profile {sorted(profile)} is not a single size"
        )
    (t,) = profile
    threshold = max(r, n * n - n + 2)
    if len(family) < threshold:
        raise BelowDezaThresholdError(
            f"family size {len(family)} is below max(r, n^2-n+2) = {threshold}"
        )
    core = family.masks[0]
    for m in family.masks[1:]:
        core &= m
    if core.bit_count() != t:
        raise LemmaViolationError(
            f"common intersection has size {core.bit_count()}, pairwise size is {t}"
        )
    try:
        return Sunflower(tuple(family.members[:r]), ElementSet.from_mask(core))
    except FamilyError as exc:
        raise LemmaViolationError(f"certificate verification failed: {exc}") from exc


def _validated_sizes(n: int, L: Iterable[int]) -> tuple[int, ...]:
    ls = tuple(sorted(set(int(e) for e in L)))
    if not ls:
        raise FinderError("L must be nonempty")
    if ls[0] < 0 or ls[-1] >= n:
        raise FinderError(f"need 0 <= l < n for every l in L, got {list(ls)} with n={n}")
    return ls


def _search(
    family: SetFamily, sizes: tuple[int, ...], r: int, m: int, depth: int, levels: list
) -> Optional[Sunflower]:
    n = family.uniformity
    base = dict(depth=depth, n=n, L=sizes, m=m, family_size=len(family))
    if len(family) < r:
        levels.append(TraceLevel(outcome="too-few-sets", **base))
        return None
    if len(sizes) == 1:
        if len(family) >= max(r, n * n - n + 2):
            flower = deza_extract(family, r)
            levels.append(TraceLevel(outcome="base-extracted", **base))
            return flower
        levels.append(TraceLevel(outcome="base-hypothesis-not-met", **base))
        return None

    l1 = sizes[0]
    # greedy maximal subfamily with all pairwise intersections exactly l1
    sub: list[int] = []
    for mask in family.masks:
        if all((mask & other).bit_count() == l1 for other in sub):
            sub.append(mask)
    if len(sub) > m:
        subfamily = SetFamily.from_masks(family.ground_size, sub, uniform=n)
        flower = deza_extract(subfamily, r)
        levels.append(
            TraceLevel(
                outcome="large-subfamily-extracted",
                subfamily=tuple(elements_of(s) for s in sub),
                **base,
            )
        )
        return flower

    # pivot: the subfamily member meeting the most members in >= l1+1 elements
    pivot = None
    filtered: list[int] = []
    for smask in sub:
        hits = [fm for fm in family.masks if (fm & smask).bit_count() >= l1 + 1]
        if pivot is None or len(hits) > len(filtered):
            pivot, filtered = smask, hits
    assert pivot is not None and len(filtered) * m >= len(family)

    # densest link over (l1+1)-subsets of the pivot, canonical tie-break
    pivot_link = None
    link_count = -1
    for combo in combinations(elements_of(pivot), l1 + 1):
        spm = 0
        for e in combo:
            spm |= 1 << e
        cnt = sum(1 for fm in filtered if spm & ~fm == 0)
        if cnt > link_count:
            pivot_link, link_count = spm, cnt
    assert pivot_link is not None and link_count * math.comb(n, l1 + 1) >= len(filtered)

    link_family = SetFamily.from_masks(
        family.ground_size,
        (fm & ~pivot_link for fm in filtered if pivot_link & ~fm == 0),
        uniform=n - l1 - 1,
    )
    levels.append(
        TraceLevel(
            outcome="recursed",
            subfamily=tuple(elements_of(s) for s in sub),
            pivot=elements_of(pivot),
            pivot_link=elements_of(pivot_link),
            filtered_size=len(filtered),
            link_size=len(link_family),
            **base,
        )
    )
    child = _search(
        link_family,
        tuple(e - l1 - 1 for e in sizes[1:]),
        r,
        m,
        depth + 1,
        levels,
    )
    if child is None:
        return None
    lift = ElementSet.from_mask(pivot_link)
    return Sunflower(
        tuple(petal | lift for petal in child.petal_sets),
        child.core | lift,
    )


def l_intersecting_find(
    family: SetFamily, L: Iterable[int], r: int
) -> tuple[Optional[Sunflower], FinderTrace]:
    """Run the recursive extractor on an L-intersecting n-uniform family.

    Returns (sunflower, trace) on success and (None, trace) when the
    hypothesis is not met somewhere down the recursion -- a structured
    non-error outcome, NOT a proof that no sunflower exists.  Whenever
    |F| exceeds the multinomial threshold for (n, L, r), success is
    guaranteed.  The returned sunflower's members always belong to the
    input family and the certificate is re-verified here.
    """
    if r < 2:
        raise FinderError(f"need r >= 2, got {r}")
    n = family.uniformity
    if n is None or n < 1:
        raise NotUniformError("family must be n-uniform with n >= 1")
    sizes = _validated_sizes(n, L)
    if not is_L_intersecting(family, sizes):
        raise FinderError(
            f"family has intersection sizes {sorted(intersection_profile(family))}, "
            f"not within {list(sizes)}"
        )
    m = pigeonhole_limit(n, r)
    levels: list[TraceLevel] = []
    flower = _search(family, sizes, r, m, 0, levels)
    if flower is not None:
        member_masks = set(family.masks)
        assert all(s.mask in member_masks for s in flower.petal_sets)
        assert is_sunflower(flower.petal_sets) == flower.core
    return flower, FinderTrace(found=flower is not None, levels=tuple(levels))


def find_any(
    family: SetFamily, r: int, strategy: str = "auto", budget: int = 500_000
) -> SearchOutcome:
    """Strategy dispatcher over the finders.

    "auto" tries the recursive extractor (when the family is uniform) and
    falls back to exhaustive search when the number of r-subsets fits the
    budget; an exceeded budget yields status "unknown", never a false
    "absent".  Any returned sunflower has passed certificate verification.
    """
    if r < 2:
        raise FinderError(f"need r >= 2, got {r}")
    if strategy not in ("auto", "recursive", "brute"):
        raise FinderError(f"unknown strategy {strategy!r}")
    trace = None
    if strategy in ("auto", "recursive"):
        n = family.uniformity
        if n is not None and n >= 1 and len(family) >= 2:
            flower, trace = l_intersecting_find(family, intersection_profile(family), r)
            if flower is not None:
                return SearchOutcome(
                    status="found", sunflower=flower, trace=trace, method="recursive"
                )
        if strategy == "recursive":
            return SearchOutcome(
                status="unknown",
                trace=trace,
                method="recursive",
                note="hypothesis not met; absence not established",
            )
    if math.comb(len(family), r) > budget:
        return SearchOutcome(
            status="unknown",
            trace=trace,
            method="brute-force",
            note=f"{math.comb(len(family), r)} r-subsets exceed budget {budget}",
        )
    flower = brute_force_sunflower(family, r)
    if flower is not None:
        return SearchOutcome(status="found", sunflower=flower, trace=trace, method="brute-force")
    return SearchOutcome(status="absent", trace=trace, method="brute-force")
