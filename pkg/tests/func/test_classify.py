import random
import pytest
from classify import (ConfigKind, FormulaType, check_property, detect_configuration, find_property,
                      formula_type, two_clause_graph)
from cnf import MonotoneCnf, random_cnf, transversal_number
from constructions import K43, build_block, turan
from errors import NoPropertyFound
from rules import RULES


def _cnf(n, clauses):
    return MonotoneCnf.from_clauses(n, clauses)


@pytest.mark.parametrize('clauses, expected_val', [
    ([(0, 1, 2), (2, 3, 4), (0, 1, 3)], FormulaType.T0),
    ([(0, 1), (2, 3, 4)], FormulaType.T1),
    ([(0, 1), (0, 2), (3, 4, 5)], FormulaType.T2O),
    ([(0, 1), (2, 3), (0, 4, 5)], FormulaType.T2D),
    ([(0, 1), (1, 2), (2, 3), (3, 4, 5)], FormulaType.T3),
    ([(0, 1), (1, 2), (0, 2)], FormulaType.T3),
    ([(0, 1), (0, 2), (0, 3)], FormulaType.T4),
    ([(0, 1), (2, 3), (4, 5), (1, 3)], FormulaType.T4),
])
def test_formula_type__by_two_clauses(clauses, expected_val):
    ret_val = formula_type(_cnf(6, clauses))
    assert ret_val == expected_val


def test_formula_type__parse_and_str():
    assert FormulaType.parse('T2o') == FormulaType.T2O
    assert FormulaType.parse('t2d') == FormulaType.T2D
    assert FormulaType.parse('3x') == FormulaType.T3
    assert FormulaType.parse(4) == FormulaType.T4
    assert str(FormulaType.T2O) == 'T2o'
    assert FormulaType.T3.rank > FormulaType.T2D.rank == FormulaType.T2O.rank
    with pytest.raises(ValueError):
        FormulaType.parse('5')


def test_find_property__pair_in_three_clauses():
    cnf = _cnf(5, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    ret_val = find_property(cnf, FormulaType.T0, t=1)
    assert ret_val.property_id == 'P0_1'
    assert ret_val.rule_id == 'P0_1:A'
    assert ret_val.cores == (0, 1)
    assert check_property(cnf, ret_val)


def test_find_property__unique_variable():
    cnf = _cnf(7, [(0, 1, 2), (1, 3, 4), (2, 5, 6)])
    ret_val = find_property(cnf, FormulaType.T0, t=2)
    assert ret_val.property_id == 'P0_6'
    assert ret_val.rule_id == 'P0_6:A'
    assert ret_val.cores == (0, 1, 2)
    assert check_property(cnf, ret_val)


def test_find_property__e_configuration():
    cnf = _cnf(9, [(0, 1, 2), (0, 3, 4), (1, 5, 6), (2, 7, 8)])
    ret_val = find_property(cnf, FormulaType.T0, t=3)
    assert ret_val.property_id == 'P0_5'
    assert ret_val.cores == (0, 1, 2)
    assert ret_val.var('h') == 7
    assert check_property(cnf, ret_val)


def test_find_property__variable_in_three_clauses():
    cnf = _cnf(7, [(0, 1, 2), (0, 3, 4), (0, 5, 6)])
    ret_val = find_property(cnf, FormulaType.T0, t=1)
    assert ret_val.property_id == 'P0_2'
    assert ret_val.cores == (0,)


def test_find_property__unit_two_clause_end():
    cnf = _cnf(5, [(0, 1), (1, 2, 3), (1, 3, 4)])
    ret_val = find_property(cnf, FormulaType.T1, t=2)
    assert ret_val.rule_id == 'P1_1'
    assert ret_val.var('a') == 0
    assert check_property(cnf, ret_val)


def test_find_property__star_of_two_clauses():
    cnf = _cnf(4, [(0, 1), (0, 2), (0, 3)])
    ret_val = find_property(cnf, FormulaType.T4, t=1)
    assert ret_val.property_id == 'P4_3'
    assert ret_val.var('a') == 0
    assert check_property(cnf, ret_val)


def test_find_property__nothing_in_an_empty_cnf():
    with pytest.raises(NoPropertyFound):
        find_property(MonotoneCnf((1 << 6) - 1), FormulaType.T0, t=0)


def test_check_property__rejects_foreign_match():
    cnf = _cnf(5, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    match = find_property(cnf, FormulaType.T0, t=1)
    other = _cnf(5, [(0, 1, 2), (0, 1, 3), (2, 3, 4)])
    assert not check_property(other, match)


def test_detect_configuration__triangle():
    cnf = _cnf(6, [(0, 1, 3), (1, 2, 4), (0, 2, 5)])
    ret_val = detect_configuration(cnf, ConfigKind.TRIANGLE)
    assert ret_val is not None
    assert ret_val.kind == ConfigKind.TRIANGLE
    assert set(ret_val.clauses) == set(cnf.clauses)


def test_detect_configuration__e_configuration():
    cnf = _cnf(9, [(0, 1, 2), (0, 3, 4), (1, 5, 6), (2, 7, 8)])
    ret_val = detect_configuration(cnf, ConfigKind.E_CONFIG)
    assert ret_val is not None
    assert sorted(ret_val.variables) == list(range(9))


def test_detect_configuration__clique_has_no_triangle():
    ret_val = detect_configuration(build_block(K43), ConfigKind.TRIANGLE)
    assert ret_val is None


def test_detect_configuration__path_and_cycle():
    path = detect_configuration(_cnf(5, [(0, 1), (1, 2), (2, 3), (0, 3, 4)]), ConfigKind.PATH)
    assert path.variables == (0, 1, 2, 3)
    cycle = detect_configuration(_cnf(4, [(0, 1), (1, 2), (0, 2), (0, 1, 3)]), ConfigKind.CYCLE)
    assert cycle.variables == (0, 1, 2)
    assert detect_configuration(_cnf(4, [(0, 1), (1, 2), (0, 2)]), ConfigKind.PATH) is None


def test_detect_configuration__pair_counts():
    cnf = build_block(turan(5))
    assert detect_configuration(cnf, ConfigKind.PAIR_IN_EXACTLY_2).variables == (0, 1)
    assert detect_configuration(cnf, ConfigKind.PAIR_IN_GE3_CLAUSES) is None


def test_two_clause_graph__edges():
    graph = two_clause_graph(_cnf(5, [(0, 1), (1, 2), (2, 3, 4)]))
    assert sorted(graph.edges()) == [(0, 1), (1, 2)]


def test_find_property__random_matches_hold():
    rng = random.Random(2024)
    found = 0
    for _ in range(400):
        n = rng.randint(5, 12)
        cnf = random_cnf(rng, n, rng.randint(n // 2, 2 * n), weights=(0, 1, 6))
        if cnf.unit_clauses or not cnf.clauses:
            continue
        t = transversal_number(cnf)
        if 3 * t - cnf.n <= 0:
            continue
        match = find_property(cnf, formula_type(cnf), t)
        found += 1
        assert check_property(cnf, match), (cnf.as_index_lists(), match)
        assert match.core_letters == RULES[match.rule_id].letters
        assert len(set(match.cores)) == len(match.cores)
    assert found > 0


def test_find_property__every_three_cnf_with_positive_deficit_matches():
    rng = random.Random(77)
    found = 0
    for _ in range(600):
        n = rng.randint(4, 12)
        cnf = random_cnf(rng, n, rng.randint(1, 3 * n), weights=(0, 0, 1))
        t = transversal_number(cnf)
        if 3 * t - cnf.n <= 0:
            continue
        assert formula_type(cnf) == FormulaType.T0
        match = find_property(cnf, FormulaType.T0, t)
        found += 1
        assert match.property_id.startswith('P0_')
        assert check_property(cnf, match), (cnf.as_index_lists(), match)
    assert found > 0
