"""Spreadness analysis and satisfying-probability evaluation.

A family is kappa-spread when it is large (|F| >= kappa^n) and no small
set is too popular (|F_T| <= kappa^-|T| |F| for every T).  The weighted
generalization bounds the weight mass of every T-superset subfamily by a
profile entry s_|T|.  All spreadness predicates use exact rational
cross-multiplication; no floating-point comparisons decide anything.

Satisfying probabilities P(some member is contained in a random
alpha-density subset R) are computed two independent ways: an exact
subset-lattice sum for ground sizes up to 24, and a seeded Monte Carlo
estimator whose trials are drawn from a counter-based PRNG stream
(numpy Philox, keyed by the seed, trial i occupying block i of the
counter sequence) so results are independent of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .families import (
    ElementSet,
    FamilyError,
    SetFamily,
    WeightedFamily,
    find_r_disjoint,
    link,
    submasks,
)

Rational = Union[int, str, Fraction]

_ENUMERATION_LIMIT = 1 << 22
_EXACT_GROUND_LIMIT = 24
_SAMPLE_BLOCK = 1 << 16


def _exact_fraction(value: Rational, name: str) -> Fraction:
    if isinstance(value, float):
        raise TypeError(
            f"{name} must be an exact rational (int, str, or Fraction), not float; "
            f"pass Fraction or a string like '1/3'"
        )
    return Fraction(value)


def _link_counts(family: SetFamily, max_size: Optional[int] = None) -> dict[int, int]:
    """|F_T| for every nonempty T contained in at least one member."""
    budget = sum(1 << len(s) for s in family.members)
    if budget > _ENUMERATION_LIMIT:
        raise ValueError(f"link enumeration needs {budget} submask visits, over budget")
    counts: dict[int, int] = {}
    for mask in family.masks:
        for sub in submasks(mask):
            if sub == 0:
                continue
            if max_size is not None and sub.bit_count() > max_size:
                continue
            counts[sub] = counts.get(sub, 0) + 1
    return counts


@dataclass(frozen=True)
class SpreadProfile:
    """Weight-mass profile (s0; s1 >= s2 >= ... >= 0).

    The tail must be nonincreasing and nonnegative; s0 >= s1 is NOT
    required (profiles arising from halved-mass constructions can break
    it, so only the stated tail monotonicity is enforced).
    """

    s0: Fraction
    tail: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "s0", _exact_fraction(self.s0, "s0"))
        object.__setattr__(
            self, "tail", tuple(_exact_fraction(t, "tail entry") for t in self.tail)
        )
        for a, b in zip(self.tail, self.tail[1:]):
            if b > a:
                raise FamilyError(f"profile tail must be nonincreasing, got {a} < {b}")
        if self.tail and self.tail[-1] < 0:
            raise FamilyError("profile tail entries must be nonnegative")


def is_kappa_spread(family: SetFamily, kappa: Rational) -> bool:
    """Exact spreadness test: |F| >= kappa^n and |F_T| <= kappa^-|T| |F|
    for every T up to size n (sets outside all members give |F_T| = 0 and
    pass vacuously, as does T = empty)."""
    k = _exact_fraction(kappa, "kappa")
    if k <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    n = family.uniformity
    if n is None:
        raise FamilyError("kappa-spreadness needs an n-uniform family")
    a, b = k.numerator, k.denominator
    size = len(family)
    if size * b**n < a**n:
        return False
    for tmask, count in _link_counts(family).items():
        t = tmask.bit_count()
        if count * a**t > size * b**t:
            return False
    return True


def spread_kappa(family: SetFamily) -> float:
    """The spreadness supremum: min(|F|^(1/n), min_T (|F|/|F_T|)^(1/|T|)).

    The exact predicate holds for rationals below this value and fails
    above it (up to the float rounding of the return value).
    """
    n = family.uniformity
    if n is None or len(family) == 0:
        raise FamilyError("spread_kappa needs a nonempty n-uniform family")
    size = len(family)
    if n == 0:
        return 1.0
    best = size ** (1.0 / n)
    for tmask, count in _link_counts(family).items():
        t = tmask.bit_count()
        best = min(best, (size / count) ** (1.0 / t))
    return best


def is_profile_spread(weighted: WeightedFamily, profile: SpreadProfile) -> bool:
    """Exact test that (family, weights) is spread for the given profile:
    total weight >= s0, and every nonempty T contained in some member has
    T-superset weight mass <= tail[|T|-1]."""
    members = weighted.family.members
    max_size = max((len(s) for s in members), default=0)
    if len(profile.tail) < max_size:
        raise FamilyError(
            f"profile tail has {len(profile.tail)} entries, members reach size {max_size}"
        )
    if weighted.total_weight < profile.s0:
        return False
    budget = sum(1 << len(s) for s in members)
    if budget > _ENUMERATION_LIMIT:
        raise ValueError(f"link enumeration needs {budget} submask visits, over budget")
    mass: dict[int, Fraction] = {}
    for s, w in weighted.items():
        for sub in submasks(s.mask):
            if sub:
                mass[sub] = mass.get(sub, Fraction(0)) + w
    for tmask, total in mass.items():
        if total > profile.tail[tmask.bit_count() - 1]:
            return False
    return True


@dataclass(frozen=True)
class SpreadLinkResult:
    """Largest qualifying link set T and its link family.

    `residual_spread_ok` reports whether no nonempty T' qualifies inside
    the link (the link is kappa-spread apart from the size clause);
    `size_clause_ok` reports the |link| >= kappa^(n-|T|) clause separately.
    """

    t_set: ElementSet
    link_family: SetFamily
    residual_spread_ok: bool
    size_clause_ok: bool


def find_spread_link(family: SetFamily, kappa: Rational, d: int) -> SpreadLinkResult:
    """Largest T with |T| <= d and |F_T| >= kappa^-|T| |F|, canonical
    tie-break (T = empty always qualifies).

    By maximality, no T' with |T| + |T'| <= d can qualify inside the link
    (asserted); whether the link resists *all* nonempty T' -- and whether
    it meets the spreadness size clause -- is reported, not assumed.
    """
    k = _exact_fraction(kappa, "kappa")
    if k <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    n = family.uniformity
    if n is None or len(family) == 0:
        raise FamilyError("find_spread_link needs a nonempty n-uniform family")
    if not 0 <= d <= n:
        raise FamilyError(f"need 0 <= d <= n, got d={d}")
    a, b = k.numerator, k.denominator
    size = len(family)

    def qualifying(counts: dict[int, int], total: int) -> list[int]:
        return [
            tmask
            for tmask, count in counts.items()
            if count * a ** tmask.bit_count() >= total * b ** tmask.bit_count()
        ]

    quals = qualifying(_link_counts(family, max_size=d), size)
    best_mask = 0
    if quals:
        best_size = max(t.bit_count() for t in quals)
        best_mask = min(
            (t for t in quals if t.bit_count() == best_size),
            key=lambda t: ElementSet.from_mask(t).elements,
        )
    t_set = ElementSet.from_mask(best_mask)
    link_family = link(family, t_set)
    link_size = len(link_family)

    residual_ok = True
    if link_size:
        residual = qualifying(_link_counts(link_family), link_size)
        deep = d - len(t_set)
        assert not any(t.bit_count() <= deep for t in residual), "maximality violated"
        residual_ok = not residual
    remaining = n - len(t_set)
    size_clause_ok = link_size * b**remaining >= a**remaining
    return SpreadLinkResult(
        t_set=t_set,
        link_family=link_family,
        residual_spread_ok=residual_ok,
        size_clause_ok=size_clause_ok,
    )


@dataclass(frozen=True)
class SatisfyingEstimate:
    alpha: float
    trials: int
    successes: int
    seed: int
    estimate: float
    stderr: float


def sample_satisfying(family: SetFamily, alpha: float, trials: int, seed: int) -> SatisfyingEstimate:
    """Monte Carlo estimate of P(some member is a subset of R) where R
    keeps each ground element independently with probability alpha.

    Deterministic for a fixed seed: trial i consumes block i of a Philox
    counter stream, so the estimate does not depend on evaluation order.
    """
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed}")
    x = family.ground_size
    rng = np.random.Generator(np.random.Philox(key=seed))
    if len(family) == 0:
        successes = 0
    elif x == 0:
        successes = trials  # only possible member is the empty set
    else:
        memb = np.zeros((len(family), x), dtype=np.int64)
        for i, s in enumerate(family.members):
            memb[i, list(s.elements)] = 1
        sizes = memb.sum(axis=1)
        successes = 0
        block = max(1, _SAMPLE_BLOCK // x)
        done = 0
        while done < trials:
            rows = min(block, trials - done)
            included = (rng.random((rows, x)) < alpha).astype(np.int64)
            cov = included @ memb.T
            successes += int((cov == sizes[None, :]).any(axis=1).sum())
            done += rows
    estimate = successes / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    return SatisfyingEstimate(
        alpha=alpha, trials=trials, successes=successes, seed=seed,
        estimate=estimate, stderr=stderr,
    )


def exact_satisfying(family: SetFamily, alpha: Rational) -> Fraction:
    """Exact P(some member is a subset of R) at rational alpha, by the
    full 2^x subset sum (grouped by |R| after an upward closure over the
    subset lattice).  The oracle for sample_satisfying; x <= 24."""
    a = _exact_fraction(alpha, "alpha")
    if not 0 <= a <= 1:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    x = family.ground_size
    if x > _EXACT_GROUND_LIMIT:
        raise ValueError(f"ground size {x} exceeds exhaustive budget {_EXACT_GROUND_LIMIT}")
    if len(family) == 0:
        return Fraction(0)
    hit = np.zeros(1 << x, dtype=bool)
    for m in family.masks:
        hit[m] = True
    pc = np.zeros(1 << x, dtype=np.uint8)
    for bit in range(x):
        step = 1 << bit
        h = hit.reshape(-1, 2 * step)
        h[:, step:] |= h[:, :step]
        p = pc.reshape(-1, 2 * step)
        p[:, step:] = p[:, :step] + 1
    counts = np.bincount(pc[hit], minlength=x + 1)
    total = Fraction(0)
    for size in range(x + 1):
        c = int(counts[size])
        if c:
            total += c * a**size * (1 - a) ** (x - size)
    return total


@dataclass(frozen=True)
class DisjointnessReport:
    """Consistency report for: satisfying at alpha = 1/r implies r
    pairwise disjoint members.

    `contrapositive_ok` is the checkable direction -- a family with no r
    pairwise-disjoint members must have P <= 1 - 1/r.
    """

    r: int
    alpha: Fraction
    threshold: Fraction
    method: str  # "exact" | "sampled"
    probability: Union[Fraction, float]
    satisfying: bool
    has_r_disjoint: bool
    witness: Optional[tuple[ElementSet, ...]]
    contrapositive_ok: bool


def check_satisfying_disjoint(
    family: SetFamily,
    r: int,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
) -> DisjointnessReport:
    """Evaluate P at alpha = 1/r (exactly when the ground set allows,
    otherwise sampled with the given trials/seed), search for r pairwise
    disjoint members, and report the contrapositive consistency check."""
    if r < 2:
        raise ValueError(f"need r >= 2, got {r}")
    if any(m == 0 for m in family.masks):
        raise FamilyError("the empty set must not be a member")
    alpha = Fraction(1, r)
    threshold = 1 - alpha
    if family.ground_size <= _EXACT_GROUND_LIMIT:
        prob: Union[Fraction, float] = exact_satisfying(family, alpha)
        satisfying = prob > threshold
        method = "exact"
    else:
        if trials is None or seed is None:
            raise ValueError(
                f"ground size {family.ground_size} exceeds the exact budget; "
                f"trials and seed are required"
            )
        est = sample_satisfying(family, float(alpha), trials, seed)
        prob = est.estimate
        satisfying = prob > float(threshold)
        method = "sampled"
    witness = find_r_disjoint(family, r)
    return DisjointnessReport(
        r=r,
        alpha=alpha,
        threshold=threshold,
        method=method,
        probability=prob,
        satisfying=satisfying,
        has_r_disjoint=witness is not None,
        witness=tuple(witness) if witness is not None else None,
        contrapositive_ok=(witness is not None) or (not satisfying),
    )
