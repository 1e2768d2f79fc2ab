from fractions import Fraction

import pytest

from quasimeasure import (
    OuterMeasureCache,
    check_axioms,
    extend,
    is_caratheodory_measurable,
    measurable_family,
    sample_measurability,
    verify_premeasure,
)
from quasimeasure.quasi import cover_bound_violations
from quasimeasure.sets import BudgetExceeded
from quasimeasure.testkit import instance_for_seed


class TestMeasurability:
    def test_empty_and_full_always_measurable(self, negative_instance):
        _, _, qm = negative_instance
        assert is_caratheodory_measurable(qm, qm.ground.empty()) == (True, None)
        assert is_caratheodory_measurable(qm, qm.ground.full()) == (True, None)

    def test_overlapping_members_fail_with_exact_counterexamples(self, negative_instance):
        # Splitting {2,3} through {1,2} costs 1/2 + 1/2 = 1 against the
        # direct cover cost 1/2, and symmetrically for {1,2} through {2,3}.
        _, _, qm = negative_instance
        ground = qm.ground
        cache = OuterMeasureCache()
        measurable, counterexample = is_caratheodory_measurable(qm, ground.subset(["1", "2"]), cache)
        assert not measurable and counterexample == ground.subset(["2", "3"])
        measurable, counterexample = is_caratheodory_measurable(qm, ground.subset(["2", "3"]), cache)
        assert not measurable and counterexample == ground.subset(["1", "2"])
        from quasimeasure import outer

        assert outer(qm, ground.subset(["1"]), cache)[0] == Fraction(1, 2)
        assert outer(qm, ground.subset(["2"]), cache)[0] == Fraction(1, 2)
        assert outer(qm, ground.subset(["1", "2"]), cache)[0] == Fraction(1, 2)

    def test_counterexample_reevaluates(self, negative_instance):
        _, _, qm = negative_instance
        ground = qm.ground
        w = ground.subset(["1", "2"])
        _, a = is_caratheodory_measurable(qm, w)
        from quasimeasure import outer

        cache = OuterMeasureCache()
        whole = outer(qm, a, cache)[0]
        split = outer(qm, a & w, cache)[0] + outer(qm, a & w.complement(), cache)[0]
        assert whole != split

    def test_budget_guard_and_sampling_fallback(self, negative_instance):
        _, _, qm = negative_instance
        w = qm.ground.subset(["1", "2"])
        with pytest.raises(BudgetExceeded):
            is_caratheodory_measurable(qm, w, subset_budget=8)
        not_falsified, counterexample = sample_measurability(qm, w, sample_count=200, seed=1)
        assert not not_falsified
        assert counterexample is not None

    def test_power_set_family_all_measurable(self, power_set_instance):
        _, _, qm = power_set_instance
        report = measurable_family(qm)
        assert len(report.algebra) == 8
        assert report.all_algebra_measurable
        assert len(report.audit) == 8

    def test_trivial_coat_family(self, trivial_instance):
        _, _, qm = trivial_instance
        report = measurable_family(qm)
        assert report.all_algebra_measurable
        assert {r.candidate for r in report.algebra} == {qm.ground.empty(), qm.ground.full()}

    def test_negative_instance_flags_overlap(self, negative_instance):
        _, _, qm = negative_instance
        report = measurable_family(qm)
        assert not report.record(qm.ground.subset(["1", "2"])).measurable
        assert not report.all_algebra_measurable

    def test_measurable_sets_form_an_algebra(self):
        # The family of splitting-measurable sets is closed under
        # complement and intersection for any instance, axioms or not.
        for seed in (0, 1, 2, 5, 8):
            qm = instance_for_seed(seed, n_max=4, coat_max=6)
            report = measurable_family(qm)
            good = {r.candidate for r in report.audit if r.measurable}
            assert qm.ground.empty() in good and qm.ground.full() in good
            for w in good:
                assert w.complement() in good
            for w in good:
                for z in good:
                    assert (w & z) in good

    def test_coat_measurable_when_restricted_axioms_hold(self):
        for seed in range(0, 60, 3):  # style 0: algebra coats
            qm = instance_for_seed(seed, n_max=4)
            if not check_axioms(qm, variant="restricted").passed:
                continue
            cache = OuterMeasureCache()
            for member in qm.coat.members:
                assert is_caratheodory_measurable(qm, member, cache)[0]

    def test_generated_algebra_measurable_when_restricted_axioms_hold(self):
        # The whole generated algebra, not just the coat, must pass the
        # splitting test on axiom-passing instances.
        checked = 0
        for seed in range(80):
            qm = instance_for_seed(seed, n_max=4, coat_max=6)
            if not check_axioms(qm, variant="restricted").passed:
                continue
            report = measurable_family(qm)
            assert report.all_algebra_measurable, seed
            checked += 1
        assert checked >= 20


class TestExtend:
    def test_power_set_reproduces_the_measure(self, power_set_instance):
        tm, _, qm = power_set_instance
        table = extend(qm)
        assert len(table.algebra) == 8
        for member in table.algebra:
            assert table.value(member) == tm.mass(member)
        assert table.value(qm.ground.subset(["2", "3"])) == Fraction(1, 2)

    def test_trivial_coat(self, trivial_instance):
        _, _, qm = trivial_instance
        table = extend(qm)
        assert len(table.algebra) == 2
        assert table.value(qm.ground.empty()) == 0
        assert table.value(qm.ground.full()) == 1

    def test_negative_instance_rows(self, negative_instance):
        _, _, qm = negative_instance
        table = extend(qm)
        ground = qm.ground
        assert len(table.algebra) == 16
        assert table.value(ground.subset(["1"])) == Fraction(1, 2)
        assert table.value(ground.subset(["2"])) == Fraction(1, 2)
        assert table.value(ground.subset(["1", "2"])) == Fraction(1, 2)

    def test_provenance_covers_verify(self, negative_instance):
        _, _, qm = negative_instance
        table = extend(qm)
        for member, value, solution in table.rows():
            assert solution.verify(qm, member)
            assert solution.cost == value


class TestVerifyPremeasure:
    def test_power_set_table_passes(self, power_set_instance):
        _, _, qm = power_set_instance
        assert verify_premeasure(extend(qm)).passed

    def test_negative_instance_fails_with_witness(self, negative_instance):
        _, _, qm = negative_instance
        report = verify_premeasure(extend(qm))
        assert not report.passed
        pair = report.result("pair-additivity")
        witness = pair.witnesses[0]
        ground = qm.ground
        assert witness.set_named("E1") == ground.subset(["1"])
        assert witness.set_named("E2") == ground.subset(["2"])
        assert witness.lhs == Fraction(1, 2)
        assert witness.rhs == Fraction(1)

    def test_trivial_table_passes(self, trivial_instance):
        _, _, qm = trivial_instance
        assert verify_premeasure(extend(qm)).passed

    def test_extension_property_on_passing_instances(self):
        verified = 0
        for seed in range(120):
            qm = instance_for_seed(seed, n_max=5, coat_max=8)
            if not check_axioms(qm, variant="restricted").passed:
                continue
            assert verify_premeasure(extend(qm)).passed, seed
            verified += 1
        assert verified >= 30

    def test_table_agrees_with_coat_when_cover_bound_holds(self):
        for seed in range(40):
            qm = instance_for_seed(seed, n_max=4, coat_max=6)
            if cover_bound_violations(qm):
                continue
            table = extend(qm)
            for member in qm.coat.members:
                assert table.value(member) == qm.value(member)

    def test_pairs_imply_triples(self):
        # The triple audit is redundant given pairwise additivity on an
        # algebra; confirm no instance separates them.
        for seed in range(60):
            qm = instance_for_seed(seed, n_max=4, coat_max=6)
            report = verify_premeasure(extend(qm))
            if report.result("pair-additivity").passed:
                assert report.result("triple-additivity").passed

    def test_full_additivity_over_all_disjoint_families(self):
        # Pairwise additivity plus closure gives additivity for every
        # finite disjoint family; brute-check that induction on small
        # passing instances, making the table a probability measure.
        checked = 0
        for seed in range(60):
            qm = instance_for_seed(seed, n_max=3, coat_max=6)
            if not check_axioms(qm, variant="restricted").passed:
                continue
            table = extend(qm)
            members = table.algebra.members
            if len(members) > 8:
                continue
            checked += 1
            assert table.value(qm.ground.full()) == 1
            for take in range(1 << len(members)):
                family = [members[i] for i in range(len(members)) if take >> i & 1]
                union_bits = 0
                disjoint = True
                for m in family:
                    if union_bits & m.bits:
                        disjoint = False
                        break
                    union_bits |= m.bits
                if not disjoint:
                    continue
                total = sum((table.value(m) for m in family), Fraction(0))
                assert table.value(qm.ground.mask(union_bits)) == total
        assert checked >= 10


class TestLiteralVariantFinding:
    def test_literal_axioms_do_not_carry_the_extension(self, negative_instance):
        # Recorded observation, not a theorem: this instance passes every
        # axiom in the literal variant yet its extension is not additive.
        _, _, qm = negative_instance
        assert check_axioms(qm, variant="literal").passed
        assert not verify_premeasure(extend(qm)).passed
