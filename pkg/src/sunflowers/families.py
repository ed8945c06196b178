"""Ground sets, element sets, set families, and sunflower certificates.

Sets over a ground set {0, ..., x-1} are stored as integer bitmasks, so
intersection/union/difference are single machine operations and popcounts
are cheap.  Everything here is immutable after construction and all
"first"/"maximal" choices downstream rely on one canonical order:
lexicographic on the ascending element lists (NOT numeric mask order --
{1} sorts after {0, 2}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence


class FamilyError(ValueError):
    """Invalid construction of a set, family, or certificate."""


def mask_of(elements: Iterable[int]) -> int:
    """Bitmask of an iterable of nonnegative element indices."""
    m = 0
    for e in elements:
        if e < 0:
            raise FamilyError(f"negative element index {e}")
        m |= 1 << e
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    """Ascending element indices of a bitmask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def submasks(mask: int) -> Iterator[int]:
    """All submasks of `mask`, including 0 and `mask` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class ElementSet:
    """An immutable subset of a finite ground set, backed by a bitmask.

    Element indices are dimensionless nonnegative integers; range checks
    against a concrete ground size happen where a family is built or
    parsed.  Iteration order is ascending, and ordering comparisons use
    the canonical key (the ascending element tuple).
    """

    __slots__ = ("_mask",)

    def __init__(self, elements: Iterable[int] = ()):
        object.__setattr__(self, "_mask", mask_of(elements))

    @classmethod
    def from_mask(cls, mask: int) -> "ElementSet":
        if mask < 0:
            raise FamilyError("negative bitmask")
        s = cls.__new__(cls)
        object.__setattr__(s, "_mask", mask)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("ElementSet is immutable")

    @property
    def mask(self) -> int:
        return self._mask

    @property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self._mask)

    def __len__(self) -> int:
        return self._mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, e: int) -> bool:
        return e >= 0 and (self._mask >> e) & 1 == 1

    def __and__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet.from_mask(self._mask & other._mask)

    def __or__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet.from_mask(self._mask | other._mask)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet.from_mask(self._mask & ~other._mask)

    def issubset(self, other: "ElementSet") -> bool:
        return self._mask & ~other._mask == 0

    def isdisjoint(self, other: "ElementSet") -> bool:
        return self._mask & other._mask == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, ElementSet) and self._mask == other._mask

    def __hash__(self) -> int:
        return hash(self._mask)

    def __lt__(self, other: "ElementSet") -> bool:
        return self.elements < other.elements

    def __le__(self, other: "ElementSet") -> bool:
        return self.elements <= other.elements

    def __repr__(self) -> str:
        return f"ElementSet({list(self.elements)})"


EMPTY_SET = ElementSet.from_mask(0)


def _coerce_set(s) -> ElementSet:
    if isinstance(s, ElementSet):
        return s
    return ElementSet(s)


class SetFamily:
    """A finite collection of distinct ElementSets over {0, ..., x-1}.

    Members are stored in canonical order (lexicographic on ascending
    element lists); duplicates are rejected.  `uniformity` is n when every
    member has exactly n elements -- either declared (and then validated,
    which also pins the uniformity of an empty family) or auto-detected.
    """

    __slots__ = ("_ground_size", "_masks", "_members", "_uniformity")

    def __init__(self, ground_size: int, sets: Iterable = (), uniform: Optional[int] = None):
        if ground_size < 0:
            raise FamilyError(f"ground size must be >= 0, got {ground_size}")
        members = sorted((_coerce_set(s) for s in sets), key=lambda s: s.elements)
        full = (1 << ground_size) - 1
        seen = set()
        for s in members:
            if s.mask & ~full:
                bad = [e for e in s.elements if e >= ground_size]
                raise FamilyError(f"elements {bad} out of range for ground size {ground_size}")
            if s.mask in seen:
                raise FamilyError(f"duplicate member {list(s.elements)}")
            seen.add(s.mask)
        if uniform is not None:
            if uniform < 0:
                raise FamilyError("uniformity must be >= 0")
            for s in members:
                if len(s) != uniform:
                    raise FamilyError(
                        f"member {list(s.elements)} has size {len(s)}, declared uniformity {uniform}"
                    )
            uniformity = uniform
        else:
            sizes = {len(s) for s in members}
            uniformity = sizes.pop() if len(sizes) == 1 else None
        object.__setattr__(self, "_ground_size", ground_size)
        object.__setattr__(self, "_members", tuple(members))
        object.__setattr__(self, "_masks", tuple(s.mask for s in members))
        object.__setattr__(self, "_uniformity", uniformity)

    @classmethod
    def from_masks(cls, ground_size: int, masks: Iterable[int], uniform: Optional[int] = None) -> "SetFamily":
        return cls(ground_size, (ElementSet.from_mask(m) for m in masks), uniform=uniform)

    def __setattr__(self, name, value):
        raise AttributeError("SetFamily is immutable")

    @property
    def ground_size(self) -> int:
        return self._ground_size

    @property
    def members(self) -> tuple[ElementSet, ...]:
        return self._members

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    @property
    def uniformity(self) -> Optional[int]:
        return self._uniformity

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self) -> Iterator[ElementSet]:
        return iter(self._members)

    def __contains__(self, s) -> bool:
        return _coerce_set(s).mask in set(self._masks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SetFamily)
            and self._ground_size == other._ground_size
            and self._masks == other._masks
        )

    def __hash__(self) -> int:
        return hash((self._ground_size, self._masks))

    def __repr__(self) -> str:
        return f"SetFamily(x={self._ground_size}, members={len(self._members)}, uniform={self._uniformity})"


class WeightedFamily:
    """A SetFamily with one nonnegative rational weight per member.

    Multiset families are modeled this way: distinct sets with integer or
    rational multiplicities.  Weights align with `family.members` (the
    canonical order).  At least one weight must be nonzero.
    """

    __slots__ = ("_family", "_weights")

    def __init__(self, family: SetFamily, weights: Iterable):
        ws = tuple(Fraction(w) for w in weights)
        if len(ws) != len(family):
            raise FamilyError(f"{len(ws)} weights for {len(family)} members")
        if any(w < 0 for w in ws):
            raise FamilyError("weights must be nonnegative")
        if ws and all(w == 0 for w in ws):
            raise FamilyError("at least one weight must be nonzero")
        object.__setattr__(self, "_family", family)
        object.__setattr__(self, "_weights", ws)

    @classmethod
    def uniform(cls, family: SetFamily, weight=1) -> "WeightedFamily":
        return cls(family, [Fraction(weight)] * len(family))

    def __setattr__(self, name, value):
        raise AttributeError("WeightedFamily is immutable")

    @property
    def family(self) -> SetFamily:
        return self._family

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return self._weights

    def items(self) -> Iterator[tuple[ElementSet, Fraction]]:
        return zip(self._family.members, self._weights)

    @property
    def total_weight(self) -> Fraction:
        return sum(self._weights, Fraction(0))

    def superset_weight(self, t: ElementSet) -> Fraction:
        """Total weight of members containing t."""
        tm = t.mask
        return sum((w for s, w in self.items() if tm & ~s.mask == 0), Fraction(0))

    def __repr__(self) -> str:
        return f"WeightedFamily({self._family!r}, total={self.total_weight})"


@dataclass(frozen=True)
class Sunflower:
    """r >= 2 distinct sets whose pairwise intersections all equal the core.

    Construction validates the full certificate: the core equals the
    intersection of all petal sets, every pairwise intersection equals the
    core, and the petals (sets minus core) are pairwise disjoint.  The last
    two are equivalent restatements; both are checked.
    """

    petal_sets: tuple[ElementSet, ...]
    core: ElementSet

    def __post_init__(self):
        sets = self.petal_sets
        if len(sets) < 2:
            raise FamilyError(f"a sunflower needs at least 2 sets, got {len(sets)}")
        masks = [s.mask for s in sets]
        if len(set(masks)) != len(masks):
            raise FamilyError("sunflower sets must be distinct")
        core = masks[0]
        for m in masks[1:]:
            core &= m
        if core != self.core.mask:
            raise FamilyError("core is not the intersection of the petal sets")
        for a, b in combinations(masks, 2):
            if a & b != core:
                raise FamilyError("a pairwise intersection differs from the core")
        for a, b in combinations(masks, 2):
            if (a & ~core) & (b & ~core):
                raise FamilyError("petals are not pairwise disjoint")

    @property
    def r(self) -> int:
        return len(self.petal_sets)

    @property
    def petals(self) -> tuple[ElementSet, ...]:
        return tuple(s - self.core for s in self.petal_sets)

    @classmethod
    def from_sets(cls, sets: Sequence[ElementSet]) -> "Sunflower":
        core = is_sunflower(sets)
        if core is None:
            raise FamilyError("sets are not a sunflower")
        return cls(tuple(sets), core)


def intersection_profile(family: SetFamily) -> frozenset[int]:
    """The set { |A & B| : A, B distinct members }; empty for |F| < 2."""
    masks = family.masks
    return frozenset((a & b).bit_count() for a, b in combinations(masks, 2))


def is_L_intersecting(family: SetFamily, L: Iterable[int]) -> bool:
    """True iff every pairwise intersection size lies in L."""
    return intersection_profile(family) <= frozenset(L)


def is_d_intersecting(family: SetFamily, d: int) -> bool:
    """True iff every pairwise intersection has size at most d (L = {0..d})."""
    if d < 0:
        raise FamilyError(f"d must be >= 0, got {d}")
    return is_L_intersecting(family, range(d + 1))


def link(family: SetFamily, t: ElementSet) -> SetFamily:
    """The link at t: { F - t : F in family, t subset of F }.

    The link of an n-uniform family is (n - |t|)-uniform; members stay
    distinct because a common t is removed from supersets of t.
    """
    tm = t.mask
    if tm & ~((1 << family.ground_size) - 1):
        raise FamilyError("link set is outside the ground set")
    masks = [m & ~tm for m in family.masks if tm & ~m == 0]
    uniform = None
    if family.uniformity is not None:
        uniform = family.uniformity - len(t)
        if uniform < 0:
            uniform = None  # t bigger than members: link is empty anyway
    return SetFamily.from_masks(family.ground_size, masks, uniform=uniform)


def is_sunflower(sets: Sequence[ElementSet]) -> Optional[ElementSet]:
    """Core of the sunflower formed by `sets`, or None if they are not one.

    Requires at least 2 pairwise-distinct sets; r = 1 and duplicated sets
    are rejected as degenerate rather than accepted vacuously.
    """
    if len(sets) < 2:
        raise FamilyError(f"sunflower test needs at least 2 sets, got {len(sets)}")
    masks = [s.mask for s in sets]
    if len(set(masks)) != len(masks):
        raise FamilyError("sunflower test requires distinct sets")
    core = masks[0]
    for m in masks[1:]:
        core &= m
    for a, b in combinations(masks, 2):
        if a & b != core:
            return None
    return ElementSet.from_mask(core)


def find_r_disjoint(family: SetFamily, r: int) -> Optional[list[ElementSet]]:
    """First (in canonical order) r pairwise-disjoint members, else None.

    Backtracking over the canonical member order; the witness returned is
    the lexicographically first index sequence, independent of any
    parallel exploration of other prefixes.
    """
    if r < 1:
        raise FamilyError(f"r must be >= 1, got {r}")
    masks = family.masks
    n = len(masks)
    chosen: list[int] = []

    def extend(start: int, used: int) -> bool:
        if len(chosen) == r:
            return True
        for i in range(start, n):
            if masks[i] & used == 0:
                chosen.append(i)
                if extend(i + 1, used | masks[i]):
                    return True
                chosen.pop()
        return False

    if not extend(0, 0):
        return None
    witness = [family.members[i] for i in chosen]
    assert all(a.isdisjoint(b) for a, b in combinations(witness, 2))
    return witness
