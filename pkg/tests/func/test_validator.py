import pytest
from validator import (is_bool, is_choice, is_file, is_formula_type, is_in_range, is_input_source, is_int,
                       is_non_negative_number, is_positive_number)


def test_is_file__boolean_should_return_false():
    ret_val = is_file(False)
    expected_val = False
    assert ret_val == expected_val


def test_is_file__directory_should_return_false():
    ret_val = is_file('tests/func/')
    expected_val = False
    assert ret_val == expected_val


def test_is_file__filename_should_return_true():
    ret_val = is_file('tests/func/test_validator.py')
    expected_val = True
    assert ret_val == expected_val


def test_is_input_source__dash_should_return_true():
    ret_val = is_input_source('-')
    expected_val = True
    assert ret_val == expected_val


def test_is_input_source__missing_file_should_return_false():
    ret_val = is_input_source('tests/func/missing.mcnf')
    expected_val = False
    assert ret_val == expected_val


def test_is_bool__string_should_return_false():
    ret_val = is_bool('True')
    expected_val = False
    assert ret_val == expected_val


def test_is_bool__boolean_should_return_true():
    ret_val = is_bool(False)
    expected_val = True
    assert ret_val == expected_val


def test_is_int__boolean_should_return_false():
    ret_val = is_int(True)
    expected_val = False
    assert ret_val == expected_val


def test_is_int__float_should_return_false():
    ret_val = is_int(3.0)
    expected_val = False
    assert ret_val == expected_val


@pytest.mark.parametrize('target, exclude, expected_val', [
    ('3', False, False),
    (1, True, False),
    (5, True, False),
    (1, False, True),
    (5, False, True),
    (2, True, True),
    (0, False, False),
    (6, False, False),
])
def test_is_in_range__bounds_with_and_without_exclude(target, exclude, expected_val):
    ret_val = is_in_range(target, 1, 5, exclude)
    assert ret_val == expected_val


@pytest.mark.parametrize('target, expected_val', [('10', False), (1, True), (0, False), (-1, False)])
def test_is_positive_number__values(target, expected_val):
    ret_val = is_positive_number(target)
    assert ret_val == expected_val


@pytest.mark.parametrize('target, expected_val', [(0, True), (3, True), (-1, False), (False, False)])
def test_is_non_negative_number__values(target, expected_val):
    ret_val = is_non_negative_number(target)
    assert ret_val == expected_val


def test_is_choice__member_should_return_true():
    ret_val = is_choice('generic', ('structured', 'generic', 'both'))
    expected_val = True
    assert ret_val == expected_val


def test_is_choice__unknown_should_return_false():
    ret_val = is_choice('fast', ('structured', 'generic', 'both'))
    expected_val = False
    assert ret_val == expected_val


@pytest.mark.parametrize('target, expected_val', [
    ('2o', True), ('T2d', True), ('t3', True), (0, True), (4, True),
    ('5', False), ('2x', False), (True, False), (None, False),
])
def test_is_formula_type__tags(target, expected_val):
    ret_val = is_formula_type(target)
    assert ret_val == expected_val
