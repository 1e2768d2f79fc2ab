"""Finite ground sets, subset masks, coats, refinements, and generated algebras.

Subsets are stored positionally: bit i of a mask is element i of the owning
ground set.  All values here are immutable after construction and every
operation is a pure function, so everything in this module is safe to share
across threads without coordination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_GROUND_SIZE = 24

# 2**n loops above this size are refused rather than attempted.
DEFAULT_EXHAUSTIVE_LIMIT = 1 << 16


class BudgetExceeded(RuntimeError):
    """An exhaustive loop would exceed its configured subset budget."""


@dataclass(frozen=True)
class GroundSet:
    """An ordered universe of distinct opaque element labels."""

    elements: tuple[str, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.elements) <= MAX_GROUND_SIZE:
            raise ValueError(f"ground set size must be in 1..{MAX_GROUND_SIZE}")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("ground set labels must be pairwise distinct")

    @classmethod
    def of(cls, *labels: str) -> "GroundSet":
        return cls(tuple(labels))

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full_bits(self) -> int:
        return (1 << self.n) - 1

    def mask(self, bits: int) -> "SubsetMask":
        return SubsetMask(self, bits)

    def empty(self) -> "SubsetMask":
        return SubsetMask(self, 0)

    def full(self) -> "SubsetMask":
        return SubsetMask(self, self.full_bits)

    def subset(self, labels: Iterable[str]) -> "SubsetMask":
        bits = 0
        for label in labels:
            try:
                bits |= 1 << self.elements.index(label)
            except ValueError:
                raise KeyError(f"unknown element label: {label!r}") from None
        return SubsetMask(self, bits)

    def all_subsets(self, budget: int = DEFAULT_EXHAUSTIVE_LIMIT) -> Iterator["SubsetMask"]:
        """Yield all 2**n subsets in mask order, refusing oversized loops."""
        if (1 << self.n) > budget:
            raise BudgetExceeded(f"2**{self.n} subsets exceed budget {budget}")
        for bits in range(1 << self.n):
            yield SubsetMask(self, bits)


@dataclass(frozen=True)
class SubsetMask:
    """A subset of a ground set, stored as a fixed-width bit vector."""

    ground: GroundSet
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= self.ground.full_bits:
            raise ValueError("mask bits out of range for the ground set")

    def _require_same_ground(self, other: "SubsetMask") -> None:
        if self.ground != other.ground:
            raise ValueError("masks belong to different ground sets")

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def is_empty(self) -> bool:
        return self.bits == 0

    def is_full(self) -> bool:
        return self.bits == self.ground.full_bits

    def labels(self) -> tuple[str, ...]:
        return tuple(e for i, e in enumerate(self.ground.elements) if self.bits >> i & 1)

    def __and__(self, other: "SubsetMask") -> "SubsetMask":
        self._require_same_ground(other)
        return SubsetMask(self.ground, self.bits & other.bits)

    def __or__(self, other: "SubsetMask") -> "SubsetMask":
        self._require_same_ground(other)
        return SubsetMask(self.ground, self.bits | other.bits)

    def difference(self, other: "SubsetMask") -> "SubsetMask":
        self._require_same_ground(other)
        return SubsetMask(self.ground, self.bits & ~other.bits)

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.ground, self.bits ^ self.ground.full_bits)

    def issubset(self, other: "SubsetMask") -> bool:
        self._require_same_ground(other)
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: "SubsetMask") -> bool:
        self._require_same_ground(other)
        return self.bits & other.bits == 0

    def __str__(self) -> str:
        return "{" + ",".join(self.labels()) + "}"

    def __repr__(self) -> str:
        return f"SubsetMask({self})"


def complement(a: SubsetMask) -> SubsetMask:
    """The set difference between the full ground set and ``a``."""
    return a.complement()


@dataclass(frozen=True)
class Coat:
    """An indexed family of subsets that contains both the empty and full set."""

    ground: GroundSet
    members: tuple[SubsetMask, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for m in self.members:
            if m.ground != self.ground:
                raise ValueError("coat member over a different ground set")
            if m.bits in seen:
                raise ValueError(f"duplicate coat member {m}")
            seen.add(m.bits)
        if 0 not in seen:
            raise ValueError("coat must contain empty")
        if self.ground.full_bits not in seen:
            raise ValueError("coat must contain omega")

    @classmethod
    def from_bits(cls, ground: GroundSet, bits_list: Iterable[int]) -> "Coat":
        return cls(ground, tuple(SubsetMask(ground, b) for b in bits_list))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SubsetMask]:
        return iter(self.members)

    def member_bits(self) -> tuple[int, ...]:
        return tuple(m.bits for m in self.members)

    def is_complement_closed(self) -> bool:
        bits = set(self.member_bits())
        return all(b ^ self.ground.full_bits in bits for b in bits)


@dataclass(frozen=True)
class Derivation:
    """How a refinement member arises from the coat: S_i & S_j or S_i & ~S_j."""

    left: int
    right: int
    kind: str  # "meet" or "diff"

    def __post_init__(self) -> None:
        if self.kind not in ("meet", "diff"):
            raise ValueError(f"unknown derivation kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class Refinement:
    """All pairwise meets and differences of coat members, deduplicated by value.

    Deduplication is by mask value, never by formal expression, so a value
    attached to a member is automatically well-defined on the underlying set.
    All derivations of each member are retained for auditing.
    """

    coat: Coat
    members: tuple[SubsetMask, ...]
    provenance: dict[SubsetMask, tuple[Derivation, ...]]

    @property
    def ground(self) -> GroundSet:
        return self.coat.ground

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SubsetMask]:
        return iter(self.members)

    def __contains__(self, mask: SubsetMask) -> bool:
        return mask in self.provenance

    def recompute(self, d: Derivation) -> SubsetMask:
        x = self.coat.members[d.left]
        y = self.coat.members[d.right]
        return x & y if d.kind == "meet" else x.difference(y)


def refine(c: Coat) -> Refinement:
    """All sets X & Y and X & ~Y for X, Y in the coat, in first-seen order."""
    ground = c.ground
    masks = c.member_bits()
    order: list[int] = []
    prov: dict[int, list[Derivation]] = {}
    for i, x in enumerate(masks):
        for j, y in enumerate(masks):
            for kind, bits in (("meet", x & y), ("diff", x & ~y)):
                if bits not in prov:
                    prov[bits] = []
                    order.append(bits)
                prov[bits].append(Derivation(i, j, kind))
    members = tuple(SubsetMask(ground, b) for b in order)
    provenance = {m: tuple(prov[m.bits]) for m in members}
    return Refinement(c, members, provenance)


@dataclass(frozen=True)
class AlgebraFamily:
    """A family of subsets closed under complement and pairwise union."""

    ground: GroundSet
    members: tuple[SubsetMask, ...]  # ascending mask order

    def __post_init__(self) -> None:
        bits = [m.bits for m in self.members]
        present = set(bits)
        if len(present) != len(bits) or bits != sorted(bits):
            raise ValueError("algebra members must be distinct and in mask order")
        full = self.ground.full_bits
        if 0 not in present or full not in present:
            raise ValueError("algebra must contain empty and omega")
        for a in bits:
            if a ^ full not in present:
                raise ValueError(f"algebra not closed under complement at {a:#x}")
        for a in bits:
            for b in bits:
                if a | b not in present:
                    raise ValueError("algebra not closed under union")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SubsetMask]:
        return iter(self.members)

    def __contains__(self, mask: SubsetMask) -> bool:
        return mask.ground == self.ground and any(m.bits == mask.bits for m in self.members)


def generate_algebra(c: Coat) -> AlgebraFamily:
    """Close the coat under complement and pairwise union, iterated to fixpoint."""
    full = c.ground.full_bits
    family = set(c.member_bits())
    changed = True
    while changed:
        changed = False
        snapshot = list(family)
        for a in snapshot:
            comp = a ^ full
            if comp not in family:
                family.add(comp)
                changed = True
        snapshot = list(family)
        for i, a in enumerate(snapshot):
            for b in snapshot[i + 1 :]:
                u = a | b
                if u not in family:
                    family.add(u)
                    changed = True
    assert len(family) <= 1 << c.ground.n
    members = tuple(SubsetMask(c.ground, b) for b in sorted(family))
    return AlgebraFamily(c.ground, members)


def algebra_atoms(c: Coat) -> tuple[SubsetMask, ...]:
    """Minimal nonempty members of the generated algebra.

    Elements are grouped by their membership signature across coat members;
    each signature class is one atom, and the generated algebra is exactly
    the family of unions of atoms.  Used as an independent oracle for
    ``generate_algebra``.
    """
    ground = c.ground
    masks = c.member_bits()
    blocks: dict[tuple[bool, ...], int] = {}
    for i in range(ground.n):
        signature = tuple(bool(m >> i & 1) for m in masks)
        blocks[signature] = blocks.get(signature, 0) | (1 << i)
    return tuple(SubsetMask(ground, b) for b in sorted(blocks.values()))
