import io
import random
import pytest
from cnf import (MonotoneCnf, PartialAssignment, brute_force_transversals, count_transversals, is_transversal,
                 matching_lower_bound, normalize, parse_mcnf, random_cnf, read_mcnf, relabel, restrict,
                 serialize_mcnf, transversal_number, verify_critical_clauses)
from errors import McnfFormatError, UniverseTooLarge
from utils import mask_of


K33 = MonotoneCnf.from_clauses(3, [(0, 1, 2)])
K43 = MonotoneCnf.from_clauses(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
T5 = MonotoneCnf.from_clauses(5, [(0, 1, 2), (2, 3, 4), (0, 1, 3)])
T6 = MonotoneCnf.from_clauses(6, [(0, 1, 2), (0, 1, 3), (2, 3, 4), (2, 3, 5), (4, 5, 0), (4, 5, 1)])


def test_normalize__superset_is_removed():
    cnf = MonotoneCnf.from_clauses(3, [(0, 1), (0, 1, 2)])
    ret_val = normalize(cnf).as_index_lists()
    expected_val = [[0, 1]]
    assert ret_val == expected_val


def test_normalize__antichain_is_unchanged():
    ret_val = normalize(K33)
    expected_val = K33
    assert ret_val == expected_val


def test_normalize__duplicate_is_removed():
    cnf = MonotoneCnf(K43.universe, K43.clauses + (mask_of((0, 1, 2)),))
    ret_val = normalize(cnf)
    expected_val = K43
    assert ret_val == expected_val


def test_restrict__included_variable_satisfies_clause():
    ret_val = restrict(K33, PartialAssignment.of(included=[0]))
    assert ret_val.m == 0
    assert ret_val.n == 2


def test_restrict__excluded_variables_leave_unit_clause():
    ret_val = restrict(K33, PartialAssignment.of(excluded=[0, 1]))
    expected_val = [[2]]
    assert ret_val.as_index_lists() == expected_val


def test_restrict__emptied_clause_is_dead():
    cnf = MonotoneCnf.from_clauses(2, [(0, 1)])
    ret_val = restrict(cnf, PartialAssignment.of(excluded=[0, 1]))
    assert ret_val is None


def test_restrict__keeps_original_labels():
    ret_val = restrict(T5, PartialAssignment.of(included=[2]))
    expected_val = [[0, 1, 3]]
    assert ret_val.as_index_lists() == expected_val
    assert ret_val.variables() == [0, 1, 3, 4]


def test_partial_assignment__overlap_is_rejected():
    with pytest.raises(ValueError):
        PartialAssignment.of(included=[1], excluded=[1])


@pytest.mark.parametrize('cnf, expected_val', [
    (K43, 2),
    (T6, 3),
    (MonotoneCnf(0), 0),
    (T5, 2),
])
def test_transversal_number__known_blocks(cnf, expected_val):
    ret_val = transversal_number(cnf)
    assert ret_val == expected_val


def test_is_transversal__examples():
    assert is_transversal(K33, mask_of([0]))
    assert not is_transversal(K33, 0)
    assert is_transversal(T5, mask_of([2, 3]))
    assert not is_transversal(T5, mask_of([3, 4]))


@pytest.mark.parametrize('cnf, t, expected_val', [
    (K43, 2, 6),
    (T5, 2, 7),
    (T6, 3, 14),
    (MonotoneCnf(0), 0, 1),
])
def test_brute_force_transversals__counts(cnf, t, expected_val):
    ret_val = brute_force_transversals(cnf, t).count
    assert ret_val == expected_val


def test_brute_force_transversals__members_are_sorted():
    ret_val = brute_force_transversals(K43, 2).as_index_lists()
    expected_val = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
    assert ret_val == expected_val


def test_verify_critical_clauses__examples():
    assert verify_critical_clauses(K33, mask_of([0]))
    assert not verify_critical_clauses(K33, mask_of([0, 1]))
    for members in brute_force_transversals(T5, 2):
        assert verify_critical_clauses(T5, members)


def test_matching_lower_bound__disjoint_clauses():
    cnf = MonotoneCnf.from_clauses(7, [(0, 1, 2), (3, 4, 5), (0, 3, 6)])
    ret_val = matching_lower_bound(cnf.clauses)
    expected_val = 2
    assert ret_val == expected_val


def test_from_clauses__rejects_bad_clauses():
    with pytest.raises(ValueError):
        MonotoneCnf.from_clauses(3, [(0, 0, 1)])
    with pytest.raises(ValueError):
        MonotoneCnf.from_clauses(4, [(0, 1, 2, 3)])
    with pytest.raises(ValueError):
        MonotoneCnf.from_clauses(3, [(0, 3)])
    with pytest.raises(UniverseTooLarge):
        MonotoneCnf.from_clauses(65, [(0, 1, 2)])


def test_relabel__moves_clauses():
    ret_val = relabel(K33, [2, 3, 4, 0, 1])
    expected_val = [[2, 3, 4]]
    assert ret_val.as_index_lists() == expected_val


def test_serialize_mcnf__header_and_one_based_clauses():
    ret_val = serialize_mcnf(T5, comments=['T3(5)'])
    expected_val = 'c T3(5)\np mcnf 5 3\n1 2 3\n1 2 4\n3 4 5\n'
    assert ret_val == expected_val


def test_parse_mcnf__reads_serialized_text():
    ret_val = parse_mcnf(serialize_mcnf(T6))
    expected_val = T6
    assert ret_val == expected_val


def test_parse_mcnf__skips_comments_and_blank_lines():
    ret_val = parse_mcnf('c header\n\np mcnf 3 1\nc clause next\n1 2 3\n')
    expected_val = K33
    assert ret_val == expected_val


@pytest.mark.parametrize('text, line_number', [
    ('p cnf 3 1\n1 2 3\n', 1),
    ('p mcnf 3 1\n1 4\n', 2),
    ('p mcnf 3 1\n1 2 x\n', 2),
    ('p mcnf 4 1\n1 2 3 4\n', 2),
    ('p mcnf 3 1\n1 1\n', 2),
    ('p mcnf 3 2\n1 2\n', 0),
    ('1 2 3\n', 1),
    ('', 0),
])
def test_parse_mcnf__errors_carry_line_number(text, line_number):
    with pytest.raises(McnfFormatError) as e:
        parse_mcnf(text)
    assert e.value.line_number == line_number


def test_read_mcnf__file_and_stdin(tmp_path, monkeypatch):
    path = tmp_path / 'k33.mcnf'
    path.write_text('p mcnf 3 1\n1 2 3\n')
    assert read_mcnf(str(path)) == K33

    monkeypatch.setattr('sys.stdin', io.StringIO('p mcnf 3 1\n1 2 3\n'))
    assert read_mcnf('-') == K33


def test_random_cnf__normalized_and_in_range():
    rng = random.Random(7)
    for _ in range(50):
        cnf = random_cnf(rng, 8, 12)
        assert cnf == normalize(cnf)
        assert cnf.n == 8
        assert all(1 <= clause.bit_count() <= 3 for clause in cnf.clauses)


def test_count_transversals__non_minimum_size():
    ret_val = count_transversals(K33, 2)
    expected_val = 3
    assert ret_val == expected_val


def _raw_cnf(rng, n, m):
    clauses = [rng.sample(range(n), rng.choice((1, 2, 3, 3, 3))) for _ in range(m)]
    return MonotoneCnf.from_clauses(n, clauses)


def _random_assignment(rng, variables):
    included = [v for v in variables if rng.random() < 0.5]
    excluded = [v for v in variables if v not in included]
    return PartialAssignment.of(included=included, excluded=excluded)


def _restrict_or_none(cnf, pa):
    return None if cnf is None else restrict(cnf, pa)


def test_restrict__disjoint_assignments_commute():
    rng = random.Random(41)
    for _ in range(300):
        n = rng.randint(3, 10)
        cnf = random_cnf(rng, n, rng.randint(1, 2 * n))
        order = rng.sample(range(n), n)
        split = rng.randint(0, n // 2)
        first = _random_assignment(rng, order[:split])
        second = _random_assignment(rng, order[split:split + rng.randint(0, n - split)])
        ret_val = _restrict_or_none(restrict(cnf, first), second)
        expected_val = _restrict_or_none(restrict(cnf, second), first)
        assert ret_val == expected_val, cnf.as_index_lists()


def test_normalize__idempotent_and_keeps_transversals():
    rng = random.Random(43)
    for _ in range(200):
        n = rng.randint(3, 10)
        cnf = _raw_cnf(rng, n, rng.randint(1, 3 * n))
        once = normalize(cnf)
        assert normalize(once) == once
        t = transversal_number(cnf)
        assert brute_force_transversals(once, t) == brute_force_transversals(cnf, t), cnf.as_index_lists()


def test_brute_force_transversals__empty_below_transversal_number():
    rng = random.Random(47)
    for _ in range(200):
        n = rng.randint(3, 10)
        cnf = random_cnf(rng, n, rng.randint(1, 2 * n))
        tau = transversal_number(cnf)
        for t in range(tau):
            assert brute_force_transversals(cnf, t).count == 0
        assert brute_force_transversals(cnf, tau).count > 0


def test_verify_critical_clauses__every_minimum_transversal_of_random_cnfs():
    rng = random.Random(53)
    for _ in range(200):
        n = rng.randint(3, 10)
        cnf = random_cnf(rng, n, rng.randint(1, 2 * n))
        for members in brute_force_transversals(cnf, transversal_number(cnf)):
            assert verify_critical_clauses(cnf, members), (cnf.as_index_lists(), members)
