"""Exterior values as exact minimum-weight set covers over the coat.

The exterior value of an arbitrary subset is the cheapest way to cover it
with coat members, where each member costs its quasi-measure value.  On a
finite ground set the infimum is attained, so the optimizer returns both the
exact cost and an optimal witness.  Ties between optimal covers are broken
deterministically: lowest cost, then fewest members, then lexicographically
smallest index list.

Two independent routes compute the same quantity: a memoized branch-and-bound
(`outer`) and a full enumeration of all subcollections (`outer_exhaustive`).
Tests hold them to exact cost equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .quasi import ONE, ZERO, QuasiMeasure, cover_bound_violations
from .report import AxiomReport, ReportBuilder, Witness
from .sets import SubsetMask


@dataclass(frozen=True)
class CoverSolution:
    """An optimal cover: ascending coat indices and their exact value sum."""

    chosen: tuple[int, ...]
    cost: Fraction

    def members(self, qm: QuasiMeasure) -> tuple[SubsetMask, ...]:
        return tuple(qm.coat.members[i] for i in self.chosen)

    def verify(self, qm: QuasiMeasure, target: SubsetMask) -> bool:
        """Re-check the witness: covers the target, cost is the value sum."""
        if len(set(self.chosen)) != len(self.chosen):
            return False
        union = 0
        total = ZERO
        for i in self.chosen:
            member = qm.coat.members[i]
            union |= member.bits
            total += qm.value(member)
        return target.bits & ~union == 0 and total == self.cost


class _CoverSolver:
    """Minimum-weight cover search with memoization on the uncovered mask.

    Candidates at each node are ordered by decreasing fresh coverage; a
    candidate whose own weight already exceeds the node's best cost is
    pruned (weights are nonnegative, so it cannot improve or tie).
    """

    def __init__(self, entries: list[tuple[int, int, Fraction]], zero):
        self.entries = entries
        self.zero = zero
        self.reach = 0
        for _, bits, _ in entries:
            self.reach |= bits
        self._memo: dict[int, tuple[Fraction, tuple[int, ...]]] = {0: (zero, ())}

    def feasible(self, target_bits: int) -> bool:
        return target_bits & ~self.reach == 0

    def solve(self, target_bits: int) -> tuple[Fraction, tuple[int, ...]]:
        if not self.feasible(target_bits):
            raise ValueError("target not coverable by the available members")
        return self._solve(target_bits)

    def _solve(self, residual: int) -> tuple[Fraction, tuple[int, ...]]:
        hit = self._memo.get(residual)
        if hit is not None:
            return hit
        candidates = [e for e in self.entries if e[1] & residual]
        candidates.sort(key=lambda e: -(e[1] & residual).bit_count())
        best: tuple[Fraction, tuple[int, ...]] | None = None
        for idx, bits, weight in candidates:
            if best is not None and weight > best[0]:
                continue
            sub_cost, sub_chosen = self._solve(residual & ~bits)
            cost = weight + sub_cost
            chosen = tuple(sorted(sub_chosen + (idx,)))
            if best is None or (cost, len(chosen), chosen) < (best[0], len(best[1]), best[1]):
                best = (cost, chosen)
        assert best is not None  # residual != 0 and reach covers it
        self._memo[residual] = best
        return best


class OuterMeasureCache:
    """Per-instance memo of already-solved exterior values.

    Single writer per cache instance; use independent caches for parallel
    workers.  A cache is bound to the first quasi-measure it serves and
    refuses any other.
    """

    def __init__(self) -> None:
        self.memo: dict[SubsetMask, tuple[Fraction, CoverSolution]] = {}
        self._qm: QuasiMeasure | None = None
        self._solver: _CoverSolver | None = None

    def bind(self, qm: QuasiMeasure) -> _CoverSolver:
        if self._qm is None:
            self._qm = qm
            self._solver = _make_solver(qm)
        elif self._qm is not qm:
            raise ValueError("cache already bound to a different quasi-measure")
        assert self._solver is not None
        return self._solver

    def __len__(self) -> int:
        return len(self.memo)


def _make_solver(qm: QuasiMeasure) -> _CoverSolver:
    entries = [(i, m.bits, qm.value(m)) for i, m in enumerate(qm.coat.members)]
    return _CoverSolver(entries, ZERO)


def outer(
    qm: QuasiMeasure,
    a: SubsetMask,
    cache: OuterMeasureCache | None = None,
) -> tuple[Fraction, CoverSolution]:
    """Exact exterior value of ``a`` with an optimal cover witness.

    Always defined: the full set belongs to every coat, so a cover exists
    and the result is at most 1.  The empty subcollection covers only the
    empty set, which therefore gets cost 0.
    """
    if cache is not None:
        hit = cache.memo.get(a)
        if hit is not None:
            return hit
        solver = cache.bind(qm)
    else:
        solver = _make_solver(qm)
    cost, chosen = solver.solve(a.bits)
    result = (cost, CoverSolution(chosen, cost))
    if cache is not None:
        cache.memo[a] = result
    return result


MAX_EXHAUSTIVE_COAT = 20


@lru_cache(maxsize=8)
def _subcollection_tables(
    member_bits: tuple[int, ...], values: tuple[Fraction, ...]
) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """Union and cost of every coat subcollection, indexed by index-set bits."""
    k = len(member_bits)
    unions = [0] * (1 << k)
    costs: list[Fraction] = [ZERO] * (1 << k)
    for s in range(1, 1 << k):
        low = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        unions[s] = unions[rest] | member_bits[low]
        costs[s] = costs[rest] + values[low]
    return tuple(unions), tuple(costs)


def outer_exhaustive(qm: QuasiMeasure, a: SubsetMask) -> tuple[Fraction, CoverSolution]:
    """Same contract as ``outer``, by enumerating all 2**|coat| subcollections.

    Independent of the branch-and-bound path; used to validate it.
    """
    k = len(qm.coat)
    if k > MAX_EXHAUSTIVE_COAT:
        raise ValueError(f"coat too large for enumeration ({k} > {MAX_EXHAUSTIVE_COAT})")
    member_bits = qm.coat.member_bits()
    values = tuple(qm.value(m) for m in qm.coat.members)
    unions, costs = _subcollection_tables(member_bits, values)
    best: tuple[Fraction, int, tuple[int, ...]] | None = None
    target = a.bits
    for s in range(1 << k):
        if target & ~unions[s]:
            continue
        cost = costs[s]
        size = s.bit_count()
        if best is not None:
            if (cost, size) > (best[0], best[1]):
                continue
            if (cost, size) == (best[0], best[1]):
                chosen = tuple(i for i in range(k) if s >> i & 1)
                if chosen >= best[2]:
                    continue
                best = (cost, size, chosen)
                continue
        best = (cost, size, tuple(i for i in range(k) if s >> i & 1))
    assert best is not None  # omega is always a feasible cover
    return best[0], CoverSolution(best[2], best[0])


def check_outer_properties(
    qm: QuasiMeasure,
    subset_budget: int = 1 << 12,
    seed: int = 0,
    triple_budget: int = 1 << 18,
) -> AxiomReport:
    """Exact checks of the exterior value's structural properties.

    Quantification is exhaustive over all 2**n subsets while that fits the
    budget, otherwise over a deterministic sample drawn from the recorded
    seed.  Agreement with the assigned coat values holds only when the
    cover bound does, so that precondition is evaluated and recorded.
    """
    rb = ReportBuilder("outer-properties")
    rb.declare("endpoints", "nonnegative", "monotone", "coat-agreement", "subadditive")
    ground = qm.ground
    n = ground.n
    total = 1 << n
    cache = OuterMeasureCache()

    def value_of(bits: int) -> Fraction:
        return outer(qm, ground.mask(bits), cache)[0]

    exhaustive = total <= subset_budget
    if exhaustive:
        targets = list(range(total))
        rb.note(f"subsets=exhaustive n={n}")
    else:
        rng = random.Random(seed)
        targets = sorted(rng.sample(range(total), subset_budget))
        for required in (0, ground.full_bits):
            if required not in targets:
                targets.append(required)
        targets.sort()
        rb.note(f"subsets=sampled count={len(targets)} seed={seed}")

    if value_of(0) != ZERO:
        rb.fail("endpoints", Witness((("set", ground.empty()),), value_of(0), ZERO, "eq"))
    if value_of(ground.full_bits) != ONE:
        rb.fail("endpoints", Witness((("set", ground.full()),), value_of(ground.full_bits), ONE, "eq"))

    for bits in targets:
        if value_of(bits) < ZERO:
            rb.fail("nonnegative", Witness((("A", ground.mask(bits)),), value_of(bits), ZERO, "le"))

    if exhaustive:
        for b in range(total):
            vb = value_of(b)
            a = b
            while True:  # all submasks of b, then the empty set
                a = (a - 1) & b
                if value_of(a) > vb:
                    rb.fail("monotone", Witness(
                        (("A", ground.mask(a)), ("B", ground.mask(b))), value_of(a), vb, "le"))
                if a == 0:
                    break
    else:
        for a in targets:
            for b in targets:
                if a & ~b == 0 and value_of(a) > value_of(b):
                    rb.fail("monotone", Witness(
                        (("A", ground.mask(a)), ("B", ground.mask(b))), value_of(a), value_of(b), "le"))

    precondition_ok = not cover_bound_violations(qm)
    rb.note(f"coat-agreement precondition (cover bound): {'pass' if precondition_ok else 'fail'}")
    for x in qm.coat.members:
        assigned = qm.value(x)
        exterior = value_of(x.bits)
        rb.detail("coat-agreement", f"member {x}: assigned {assigned} exterior {exterior}")
        if exterior != assigned:
            rb.fail("coat-agreement", Witness((("X", x),), exterior, assigned, "eq"))

    pair_sources = targets
    for a in pair_sources:
        va = value_of(a)
        for b in pair_sources:
            if value_of(a | b) > va + value_of(b):
                rb.fail("subadditive", Witness(
                    (("A1", ground.mask(a)), ("A2", ground.mask(b))),
                    value_of(a | b), va + value_of(b), "le"))
    if len(pair_sources) ** 3 <= triple_budget:
        triples = [(a, b, c) for a in pair_sources for b in pair_sources for c in pair_sources]
        rb.note("triples=exhaustive")
    else:
        rng = random.Random(seed + 1)
        triples = [
            (rng.choice(pair_sources), rng.choice(pair_sources), rng.choice(pair_sources))
            for _ in range(triple_budget // 64)
        ]
        rb.note(f"triples=sampled count={len(triples)} seed={seed + 1}")
    for a, b, c in triples:
        bound = value_of(a) + value_of(b) + value_of(c)
        if value_of(a | b | c) > bound:
            rb.fail("subadditive", Witness(
                (("A1", ground.mask(a)), ("A2", ground.mask(b)), ("A3", ground.mask(c))),
                value_of(a | b | c), bound, "le"))
    return rb.build()
