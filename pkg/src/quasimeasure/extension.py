"""Splitting-measurability tests and extension to the generated algebra.

A candidate set W is measurable when the exterior value splits exactly
through it: for every subset A, the exterior value of A equals the sum of
the exterior values of A-inside-W and A-outside-W.  Extending a
quasi-measure means tabulating the exterior value on every member of the
algebra generated by the coat; verifying the table means checking exact
finite additivity on disjoint members.

Measurability is certified only by exhaustive quantification over all
subsets.  The sampling variant can only report "not falsified", never
"measurable", and the two are kept as separate functions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .cover import CoverSolution, OuterMeasureCache, outer
from .quasi import ONE, ZERO, QuasiMeasure
from .report import AxiomReport, ReportBuilder, Witness
from .sets import AlgebraFamily, BudgetExceeded, SubsetMask, generate_algebra

DEFAULT_SUBSET_BUDGET = 1 << 16
AUDIT_LIMIT = 5  # ground sets up to this size get the all-subsets audit


def is_caratheodory_measurable(
    qm: QuasiMeasure,
    w: SubsetMask,
    cache: OuterMeasureCache | None = None,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> tuple[bool, SubsetMask | None]:
    """Exhaustive splitting test; returns the first violating A in mask order."""
    ground = qm.ground
    if (1 << ground.n) > subset_budget:
        raise BudgetExceeded(
            f"2**{ground.n} subsets exceed budget {subset_budget}; use sample_measurability"
        )
    if cache is None:
        cache = OuterMeasureCache()
    comp = w.complement()
    for a in ground.all_subsets(budget=subset_budget):
        whole = outer(qm, a, cache)[0]
        split = outer(qm, a & w, cache)[0] + outer(qm, a & comp, cache)[0]
        if whole != split:
            return False, a
    return True, None


def sample_measurability(
    qm: QuasiMeasure,
    w: SubsetMask,
    sample_count: int,
    seed: int,
    cache: OuterMeasureCache | None = None,
) -> tuple[bool, SubsetMask | None]:
    """Randomized splitting test: True means "not falsified", never "measurable"."""
    ground = qm.ground
    if cache is None:
        cache = OuterMeasureCache()
    rng = random.Random(seed)
    comp = w.complement()
    for _ in range(sample_count):
        a = ground.mask(rng.randrange(1 << ground.n))
        whole = outer(qm, a, cache)[0]
        split = outer(qm, a & w, cache)[0] + outer(qm, a & comp, cache)[0]
        if whole != split:
            return False, a
    return True, None


@dataclass(frozen=True)
class MeasurabilityRecord:
    candidate: SubsetMask
    measurable: bool
    counterexample: SubsetMask | None


@dataclass(frozen=True)
class MeasurabilityReport:
    """Splitting-test outcomes for the generated algebra, plus a full audit.

    ``algebra`` covers every member of the algebra generated by the coat.
    ``audit`` covers all 2**n candidate subsets on small ground sets and is
    empty otherwise; it exists so the family of all measurable sets can be
    inspected directly.
    """

    algebra: tuple[MeasurabilityRecord, ...]
    audit: tuple[MeasurabilityRecord, ...]

    @property
    def all_algebra_measurable(self) -> bool:
        return all(r.measurable for r in self.algebra)

    def record(self, candidate: SubsetMask) -> MeasurabilityRecord:
        for r in self.algebra:
            if r.candidate == candidate:
                return r
        raise KeyError(f"{candidate} not among tested algebra members")


def measurable_family(
    qm: QuasiMeasure,
    cache: OuterMeasureCache | None = None,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> MeasurabilityReport:
    if cache is None:
        cache = OuterMeasureCache()
    algebra = generate_algebra(qm.coat)
    tested = tuple(
        MeasurabilityRecord(w, *is_caratheodory_measurable(qm, w, cache, subset_budget))
        for w in algebra
    )
    audit: tuple[MeasurabilityRecord, ...] = ()
    if qm.ground.n <= AUDIT_LIMIT:
        audit = tuple(
            MeasurabilityRecord(w, *is_caratheodory_measurable(qm, w, cache, subset_budget))
            for w in qm.ground.all_subsets()
        )
    return MeasurabilityReport(tested, audit)


@dataclass(frozen=True, eq=False)
class MeasureTable:
    """Exterior values tabulated on the generated algebra, with witnesses.

    The table itself carries no verification claim; run ``verify_premeasure``
    to check the endpoints and additivity.  On axiom-failing inputs the full
    set can admit a cover cheaper than 1, so the omega endpoint is a checked
    property, not a structural invariant.
    """

    algebra: AlgebraFamily
    values: dict[SubsetMask, Fraction]
    provenance: dict[SubsetMask, CoverSolution]

    def __post_init__(self) -> None:
        ground = self.algebra.ground
        if set(self.values) != set(self.algebra.members):
            raise ValueError("table must assign exactly the algebra members")
        if self.values[ground.empty()] != ZERO:
            raise ValueError("table value of the empty set must be 0")
        for mask, value in self.values.items():
            if not ZERO <= value <= ONE:
                raise ValueError(f"table value outside [0,1] at {mask}")

    def value(self, mask: SubsetMask) -> Fraction:
        return self.values[mask]

    def rows(self) -> tuple[tuple[SubsetMask, Fraction, CoverSolution], ...]:
        return tuple((m, self.values[m], self.provenance[m]) for m in self.algebra.members)


def extend(qm: QuasiMeasure, cache: OuterMeasureCache | None = None) -> MeasureTable:
    """Tabulate the exterior value on every generated-algebra member.

    Never refuses axiom-failing inputs; negative instances are first-class
    material and verification is a separate step.
    """
    if cache is None:
        cache = OuterMeasureCache()
    algebra = generate_algebra(qm.coat)
    values: dict[SubsetMask, Fraction] = {}
    provenance: dict[SubsetMask, CoverSolution] = {}
    for member in algebra:
        cost, solution = outer(qm, member, cache)
        values[member] = cost
        provenance[member] = solution
    return MeasureTable(algebra, values, provenance)


def verify_premeasure(table: MeasureTable, triple_budget: int = 1 << 18) -> AxiomReport:
    """Exact additivity checks on the tabulated algebra values.

    Pairwise additivity on disjoint members is the primary check: combined
    with algebra closure it yields finite additivity inductively.  Disjoint
    triples are re-checked as a redundant audit while they fit the budget.
    """
    rb = ReportBuilder("premeasure")
    rb.declare("endpoints", "nonnegative", "pair-additivity", "triple-additivity")
    ground = table.algebra.ground
    if table.value(ground.empty()) != ZERO:
        rb.fail("endpoints", Witness((("set", ground.empty()),), table.value(ground.empty()), ZERO, "eq"))
    if table.value(ground.full()) != ONE:
        rb.fail("endpoints", Witness((("set", ground.full()),), table.value(ground.full()), ONE, "eq"))

    members = table.algebra.members
    for m in members:
        if table.value(m) < ZERO:
            rb.fail("nonnegative", Witness((("E", m),), table.value(m), ZERO, "le"))

    for e1, e2 in itertools.combinations(members, 2):
        if not e1.isdisjoint(e2):
            continue
        got = table.value(e1 | e2)
        want = table.value(e1) + table.value(e2)
        if got != want:
            rb.fail("pair-additivity", Witness((("E1", e1), ("E2", e2)), got, want, "eq"))

    triple_count = len(members) * (len(members) - 1) * (len(members) - 2) // 6
    if triple_count <= triple_budget:
        triples = itertools.combinations(members, 3)
        rb.note("triples=exhaustive")
    else:
        rng = random.Random(0)
        triples = (
            tuple(rng.sample(members, 3)) for _ in range(triple_budget // 8)  # type: ignore[misc]
        )
        rb.note(f"triples=sampled budget={triple_budget // 8} seed=0")
    for e1, e2, e3 in triples:
        if not (e1.isdisjoint(e2) and e1.isdisjoint(e3) and e2.isdisjoint(e3)):
            continue
        got = table.value(e1 | e2 | e3)
        want = table.value(e1) + table.value(e2) + table.value(e3)
        if got != want:
            rb.fail("triple-additivity", Witness((("E1", e1), ("E2", e2), ("E3", e3)), got, want, "eq"))
    return rb.build()
