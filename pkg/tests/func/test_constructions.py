from fractions import Fraction
import pytest
from classify import FormulaType
from cnf import MonotoneCnf, brute_force_transversals, count_transversals, transversal_number
from constructions import (GOLDEN_ROWS, K33, K43, TWO_CLAUSE, BlockKind, BlockSpec, Defect, FamilySpec,
                           block_tau, build_3t_minus_1, build_block, build_family, build_from_text, build_sum,
                           clique, clique_def, disjoint_sum, expected_count, family_recipe, free,
                           parse_block_spec, replacement_pair, turan, turan_def)
from errors import CombinedUniverseTooLarge, InvalidSpec
from oracle import verify_construction


def test_build_block__turan_6():
    ret_val = build_block(turan(6)).as_index_lists()
    expected_val = [[0, 1, 2], [0, 1, 3], [0, 4, 5], [1, 4, 5], [2, 3, 4], [2, 3, 5]]
    assert ret_val == expected_val


def test_build_block__turan_5():
    ret_val = build_block(turan(5)).as_index_lists()
    expected_val = [[0, 1, 2], [0, 1, 3], [2, 3, 4]]
    assert ret_val == expected_val


def test_build_block__clique_4_3():
    ret_val = build_block(K43).as_index_lists()
    expected_val = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    assert ret_val == expected_val


def test_build_block__defective_clique_count():
    cnf = build_block(clique_def(4, Defect.D1))
    ret_val = count_transversals(cnf, 2)
    expected_val = 5
    assert transversal_number(cnf) == 2
    assert ret_val == expected_val


@pytest.mark.parametrize('spec', [
    clique(3, 3), clique(5, 3), clique(5, 2), clique(4, 1), turan(5), turan(7), turan(9),
    clique_def(5, Defect.D1), clique_def(5, Defect.D2O), clique_def(5, Defect.D2D),
    turan_def(6, Defect.D1), turan_def(6, Defect.D2O), turan_def(6, Defect.D2D), TWO_CLAUSE, free(3),
])
def test_block_tau__matches_built_block(spec):
    ret_val = transversal_number(build_block(spec))
    expected_val = block_tau(spec)
    assert ret_val == expected_val


@pytest.mark.parametrize('spec', [
    clique(2, 3), clique(4, 4), turan(2), clique_def(3, Defect.D2D), turan_def(4, Defect.D2D),
    BlockSpec(BlockKind.N3T_MINUS_1, 1), free(-1),
])
def test_build_block__invalid_parameters(spec):
    with pytest.raises(InvalidSpec):
        build_block(spec)


def test_disjoint_sum__two_triangles():
    cnf = build_sum([K33, K33])
    assert transversal_number(cnf) == 2
    assert count_transversals(cnf, 2) == 9


def test_disjoint_sum__clique_and_turan():
    cnf = build_sum([K33, turan(6)])
    assert transversal_number(cnf) == 4
    assert count_transversals(cnf, 4) == 42


def test_disjoint_sum__empty_list():
    cnf = disjoint_sum([])
    assert cnf == MonotoneCnf(0)
    assert transversal_number(cnf) == 0
    assert brute_force_transversals(cnf, 0).count == 1


def test_disjoint_sum__too_many_variables():
    with pytest.raises(CombinedUniverseTooLarge):
        build_sum([turan(33), turan(32)])


def test_disjoint_sum__compacts_restricted_blocks():
    block = MonotoneCnf(0b1010100, (0b1000100, 0b0010100))
    ret_val = disjoint_sum([block, build_block(K33)]).as_index_lists()
    expected_val = [[0, 1], [0, 2], [3, 4, 5]]
    assert ret_val == expected_val


@pytest.mark.parametrize('spec, expected_text, expected_val', [
    (FamilySpec(FormulaType.T0, 1, 3), 'K(3,3)+T3(5)', 21),
    (FamilySpec(FormulaType.T0, 4, 4), '2*K(4,3)', 36),
    (FamilySpec(FormulaType.T2D, 4, 5), 'K(3,3)+2*Kdef(4,1)', 75),
])
def test_build_family__examples(spec, expected_text, expected_val):
    cnf = build_family(spec)
    assert sorted(map(str, family_recipe(spec).blocks)) == sorted(map(str, parse_block_spec(expected_text)))
    assert verify_construction(cnf, spec.t, expected_val)


@pytest.mark.parametrize('spec, expected_val', [
    (FamilySpec(FormulaType.T0, 0, 2), 9),
    (FamilySpec(FormulaType.T0, 1, 2), 7),
    (FamilySpec(FormulaType.T2O, 2, 2), 4),
    (FamilySpec(FormulaType.T1, 4, 4), 30),
    (FamilySpec(FormulaType.T0, -2, 3), 27),
])
def test_expected_count__closed_forms(spec, expected_val):
    ret_val = expected_count(spec)
    assert ret_val == Fraction(expected_val)


def test_family_recipe__pads_to_3t_minus_s():
    recipe = family_recipe(FamilySpec(FormulaType.T1, 0, 2))
    ret_val = sum(build_block(block).n for block in recipe.blocks)
    expected_val = 6
    assert ret_val == expected_val


@pytest.mark.parametrize('spec', [
    FamilySpec(FormulaType.T3, 2, 4),
    FamilySpec(FormulaType.T0, 5, 4),
    FamilySpec(FormulaType.T2D, 1, 1),
    FamilySpec(FormulaType.T0, 0, 0),
])
def test_family_recipe__no_family(spec):
    with pytest.raises(InvalidSpec):
        family_recipe(spec)


def _families(max_t):
    for family_type in (FormulaType.T0, FormulaType.T1, FormulaType.T2O, FormulaType.T2D):
        for t in range(1, max_t + 1):
            for s in sorted(set(range(0, t + 1)) | {2 * t - 2, 2 * t - 1, 2 * t}):
                try:
                    yield family_recipe(FamilySpec(family_type, s, t)), s, t
                except InvalidSpec:
                    continue


def test_build_family__small_families_attain_closed_form():
    for recipe, s, t in _families(4):
        cnf = build_sum(recipe.blocks)
        assert cnf.n == 3 * t - s
        assert verify_construction(cnf, t, int(recipe.count)), (recipe, s, t)


@pytest.mark.slow
def test_build_family__families_up_to_t6_attain_closed_form():
    for recipe, s, t in _families(6):
        assert verify_construction(build_sum(recipe.blocks), t, int(recipe.count)), (recipe, s, t)


@pytest.mark.parametrize('t, expected_val', [(2, 7), (3, 21), (4, 63)])
def test_build_3t_minus_1__counts(t, expected_val):
    cnf = build_3t_minus_1(t)
    assert cnf.n == 3 * t - 1
    assert verify_construction(cnf, t, expected_val)


@pytest.mark.slow
def test_build_3t_minus_1__t5():
    assert verify_construction(build_3t_minus_1(5), 5, 189)


def test_replacement_pair__same_count():
    first, second = replacement_pair()
    assert first.n == second.n == 9
    assert count_transversals(first, 4) == count_transversals(second, 4) == 42


def test_parse_block_spec__terms_and_multiplicity():
    ret_val = [str(block) for block in parse_block_spec('2*K(3,3) + T3(5) + Kdef(4,2o) + K22 + free(k=2)')]
    expected_val = ['K(3,3)', 'K(3,3)', 'T3(5)', 'Kdef(4,2o)', 'K22', 'free(2)']
    assert ret_val == expected_val


def test_parse_block_spec__families():
    ret_val = parse_block_spec('P(s=3,t=5)')
    expected_val = list(family_recipe(FamilySpec(FormulaType.T0, 3, 5)).blocks)
    assert ret_val == expected_val
    assert build_from_text('fam(2d,s=4,t=5)') == build_family(FamilySpec(FormulaType.T2D, 4, 5))
    assert build_from_text('n3tm1(t=3)') == build_3t_minus_1(3)


@pytest.mark.parametrize('text', ['', 'Q(3)', 'K(2,3)', 'K(x,3)', 'Kdef(4,3)', 'K(4)', 'fam(5,s=1,t=2)'])
def test_parse_block_spec__invalid(text):
    with pytest.raises(InvalidSpec):
        parse_block_spec(text)


def test_build_from_text__too_large():
    with pytest.raises(CombinedUniverseTooLarge):
        build_from_text('22*K(3,3)')


def test_golden_rows__small_rows():
    for row in GOLDEN_ROWS:
        if row.n > 9:
            continue
        cnf = build_from_text(row.recipe)
        assert cnf.n == row.n, row
        assert verify_construction(cnf, row.t, row.count), row


@pytest.mark.slow
def test_golden_rows__all_rows():
    for row in GOLDEN_ROWS:
        cnf = build_from_text(row.recipe)
        assert cnf.n == row.n, row
        assert verify_construction(cnf, row.t, row.count), row
