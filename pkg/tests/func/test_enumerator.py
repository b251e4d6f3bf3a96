import random
import pytest
from bounds import Comparison
from classify import FormulaType, PropertyMatch
from cnf import MonotoneCnf, PartialAssignment, brute_force_transversals, random_cnf, transversal_number
from constructions import (K33, K43, FamilySpec, build_3t_minus_1, build_block, build_family, build_sum,
                           family_recipe, turan)
from enumerator import (Mode, apply_rule, certify_bound, count_min_transversals, enumerate_min_transversals,
                        propagate)
from errors import InvalidSpec, PreconditionTauMismatch, TypeMismatch
from rules import PAIR
from utils import mask_of


def _cnf(n, clauses):
    return MonotoneCnf.from_clauses(n, clauses)


@pytest.mark.parametrize('cnf, t, expected_val', [
    (build_block(K43), 2, 6),
    (build_block(turan(6)), 3, 14),
    (build_sum([K33, turan(5)]), 3, 21),
    (build_family(FamilySpec(FormulaType.T2D, 4, 5)), 5, 75),
    (MonotoneCnf(0), 0, 1),
])
def test_enumerate_min_transversals__known_counts(cnf, t, expected_val):
    for mode in (Mode.STRUCTURED, Mode.GENERIC):
        found, stats = enumerate_min_transversals(cnf, t, mode)
        assert found.count == expected_val
        assert found == brute_force_transversals(cnf, t)
        assert stats.duplicates == 0


def test_enumerate_min_transversals__wrong_t():
    with pytest.raises(PreconditionTauMismatch) as e:
        enumerate_min_transversals(build_block(K43), 3)
    assert e.value.tau == 2
    assert e.value.t == 3


def test_enumerate_min_transversals__accepts_mode_string():
    ret_val = count_min_transversals(build_block(turan(5)), 2, 'generic')
    expected_val = 7
    assert ret_val == expected_val


def test_enumerate_min_transversals__unit_and_two_clauses():
    cnf = _cnf(7, [(0,), (1, 2), (3, 4, 5), (2, 6)])
    t = transversal_number(cnf)
    found, _ = enumerate_min_transversals(cnf, t)
    assert found == brute_force_transversals(cnf, t)


def test_enumerate_min_transversals__structured_uses_rules():
    _, stats = enumerate_min_transversals(build_block(turan(6)), 3)
    assert sum(stats.rule_histogram.values()) > 0
    assert stats.type_histogram[FormulaType.T0] > 0
    record = stats.to_record()
    assert record['mode'] == 'structured'
    assert record['nodes'] == stats.nodes


def test_enumerate_min_transversals__matches_brute_force_on_random_cnfs():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(3, 10)
        cnf = random_cnf(rng, n, rng.randint(1, 2 * n))
        t = transversal_number(cnf)
        expected = brute_force_transversals(cnf, t)
        structured, stats = enumerate_min_transversals(cnf, t, Mode.STRUCTURED)
        generic, _ = enumerate_min_transversals(cnf, t, Mode.GENERIC)
        assert structured == expected, cnf.as_index_lists()
        assert generic == expected, cnf.as_index_lists()
        assert stats.duplicates == 0


def test_enumerate_min_transversals__random_three_cnfs():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(5, 10)
        cnf = random_cnf(rng, n, rng.randint(n, 2 * n), weights=(0, 0, 1))
        t = transversal_number(cnf)
        found, _ = enumerate_min_transversals(cnf, t)
        assert found == brute_force_transversals(cnf, t)


def test_enumerate_min_transversals__structured_never_falls_back():
    rng = random.Random(31)
    for _ in range(300):
        n = rng.randint(3, 12)
        cnf = random_cnf(rng, n, rng.randint(1, 2 * n))
        t = transversal_number(cnf)
        _, stats = enumerate_min_transversals(cnf, t, Mode.STRUCTURED)
        assert stats.fallbacks == 0, cnf.as_index_lists()


def _family_instances(min_n, max_n):
    instances = []
    for family_type in (FormulaType.T0, FormulaType.T1, FormulaType.T2O, FormulaType.T2D):
        for t in range(1, max_n + 1):
            for s in range(0, t + 1):
                if not min_n <= 3 * t - s <= max_n:
                    continue
                try:
                    recipe = family_recipe(FamilySpec(family_type, s, t))
                except InvalidSpec:
                    continue
                instances.append(pytest.param(build_sum(recipe.blocks), t, int(recipe.count),
                                              id=f'{family_type}-s{s}-t{t}'))
    for t in range(2, 6):
        if min_n <= 3 * t - 1 <= max_n:
            instances.append(pytest.param(build_3t_minus_1(t), t, 7 * 3 ** (t - 2), id=f'n3tm1-t{t}'))
    return instances


def _assert_nodes_within_six_quarter(cnf, t, count):
    found, stats = enumerate_min_transversals(cnf, t, Mode.STRUCTURED)
    assert found.count == count
    # nodes <= 10 * 6^(n/4), compared on fourth powers
    assert stats.nodes ** 4 <= 10 ** 4 * 6 ** cnf.n, (stats.nodes, cnf.n)


@pytest.mark.parametrize('cnf, t, count', _family_instances(1, 12))
def test_enumerate_min_transversals__nodes_within_six_quarter(cnf, t, count):
    _assert_nodes_within_six_quarter(cnf, t, count)


@pytest.mark.slow
@pytest.mark.parametrize('cnf, t, count', _family_instances(13, 16))
def test_enumerate_min_transversals__nodes_within_six_quarter_up_to_sixteen(cnf, t, count):
    _assert_nodes_within_six_quarter(cnf, t, count)


@pytest.mark.slow
def test_enumerate_min_transversals__matches_brute_force_on_many_random_cnfs():
    rng = random.Random(0)
    for _ in range(10000):
        n = rng.randint(3, 14)
        cnf = random_cnf(rng, n, rng.randint(1, 2 * n))
        t = transversal_number(cnf)
        expected = brute_force_transversals(cnf, t)
        assert enumerate_min_transversals(cnf, t, Mode.STRUCTURED)[0] == expected, cnf.as_index_lists()
        assert enumerate_min_transversals(cnf, t, Mode.GENERIC)[0] == expected, cnf.as_index_lists()


def test_propagate__unit_clause_forces_variable():
    cnf = _cnf(4, [(0,), (1, 2, 3)])
    ret_val = propagate(cnf, 2)
    assert ret_val.included == mask_of([0])
    assert ret_val.excluded == 0


def test_propagate__excluded_variables_leave_a_unit():
    cnf = _cnf(3, [(0, 1, 2)])
    ret_val = propagate(cnf, 1, excluded=mask_of([0, 1]))
    assert ret_val == PartialAssignment.of(included=[2], excluded=[0, 1])


def test_propagate__included_variable_excludes_common_partners():
    cnf = _cnf(5, [(0, 1, 2), (0, 1, 3), (2, 3, 4)])
    ret_val = propagate(cnf, 2, included=mask_of([0]))
    assert ret_val.excluded >> 1 & 1


def test_propagate__included_variable_without_critical_clause():
    cnf = _cnf(3, [(0, 1), (1, 2)])
    ret_val = propagate(cnf, 2, included=mask_of([0, 1]))
    assert ret_val is None


def test_propagate__too_many_included():
    cnf = _cnf(6, [(0,), (1,), (2, 3)])
    ret_val = propagate(cnf, 1)
    assert ret_val is None


def test_propagate__emptied_clause():
    cnf = _cnf(2, [(0, 1)])
    ret_val = propagate(cnf, 1, excluded=mask_of([0, 1]))
    assert ret_val is None


def test_apply_rule__pair_in_three_clauses():
    cnf = _cnf(5, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    match = PropertyMatch('P0_1', 'P0_1:A', cnf.clauses, (0, 1), ('a', 'b'),
                          (('a', 0), ('b', 1), ('c', 2), ('d', 3), ('e', 4)))
    branches = apply_rule(cnf, 1, match)
    ret_val = [(branch.row.pattern, branch.assignment.included, branch.t) for branch in branches]
    expected_val = [('1_', mask_of([0]), 0), ('01', mask_of([1]), 0)]
    assert ret_val == expected_val
    assert all(branch.row.deltas == PAIR for branch in branches)


def test_apply_rule__overlapping_two_clauses():
    cnf = _cnf(8, [(0, 1), (0, 2), (0, 3, 4), (5, 6, 7)])
    match = PropertyMatch('P2o_1', 'P2o_1', cnf.clauses[:3], (0,), ('a',),
                          (('a', 0), ('b', 1), ('c', 2), ('d', 3), ('e', 4)))
    branches = apply_rule(cnf, 2, match)
    ret_val = [(branch.row.pattern, branch.assignment.included, branch.t) for branch in branches]
    expected_val = [('1', mask_of([0]), 1), ('0', mask_of([1, 2]), 0)]
    assert ret_val == expected_val
    assert branches[0].cnf.as_index_lists() == [[5, 6, 7]]


def test_apply_rule__dead_rows_are_dropped():
    cnf = _cnf(5, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    match = PropertyMatch('P0_1', 'P0_1:A', cnf.clauses, (0, 1), ('a', 'b'),
                          (('a', 0), ('b', 1), ('c', 2), ('d', 3), ('e', 4)))
    patterns = [branch.row.pattern for branch in apply_rule(cnf, 1, match)]
    assert '00' not in patterns


def test_apply_rule__audit_reports_weaker_type():
    cnf = _cnf(6, [(0, 1, 2), (3, 4, 5)])
    match = PropertyMatch('P0_2', 'P0_2', cnf.clauses[:1], (0,), ('a',), (('a', 0),))
    with pytest.raises(TypeMismatch):
        apply_rule(cnf, 2, match, audit=True)
    assert len(apply_rule(cnf, 2, match, audit=False)) == 2


@pytest.mark.parametrize('cnf, t, count, expected_bound', [
    (build_sum([K43, K43]), 4, 36, 36),
    (build_block(turan(5)), 2, 7, 7),
    (build_block(K33), 1, 3, 3),
])
def test_certify_bound__tight_constructions(cnf, t, count, expected_bound):
    ret_val = certify_bound(cnf, t, count)
    assert ret_val.ok
    assert ret_val.bound == expected_bound
    assert ret_val.slack == 0


def test_certify_bound__exceeding_count():
    ret_val = certify_bound(build_sum([K43, K43]), 4, 37)
    assert not ret_val.ok
    assert ret_val.six_quarter == Comparison.EXCEEDS


def test_certify_bound__units_are_taken_first():
    cnf = _cnf(5, [(0,), (1, 2, 3)])
    ret_val = certify_bound(cnf, 2, 3)
    assert ret_val.t == 1
    assert ret_val.ok


@pytest.mark.parametrize('copies', [1, 2, 3])
def test_enumerate_min_transversals__half_threshold_meets_six_quarter(copies):
    cnf = build_sum([K43] * copies)
    found, stats = enumerate_min_transversals(cnf, 2 * copies, certify=True)
    assert found.count == 6 ** copies
    assert stats.cert.ok
    assert stats.cert.slack == 0
    assert stats.cert.six_quarter == Comparison.EQUAL
