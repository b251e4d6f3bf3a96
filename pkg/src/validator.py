import os
import re


FORMULA_TYPE_TAGS = ('0', '1', '2o', '2d', '3', '4')


def is_file(target: str) -> bool:
    """Check target is file."""
    if not isinstance(target, str):
        return False
    if not os.path.isfile(target):
        return False

    return True


def is_input_source(target: str) -> bool:
    """Check target is a readable file or '-' for stdin."""
    if target == '-':
        return True

    return is_file(target)


def is_bool(target: bool) -> bool:
    """Check target is boolean."""
    if not isinstance(target, bool):
        return False

    return True


def is_int(target: int) -> bool:
    """Check target is an integer and not a boolean."""
    if isinstance(target, bool):
        return False
    if not isinstance(target, int):
        return False

    return True


def is_in_range(target: int, min_num: int, max_num: int, exclude: bool = False) -> bool:
    """Check target is in range. Minimum and maximum number will be included in default."""
    if not is_int(target):
        return False

    if exclude:
        if min_num < target < max_num:
            return True
    else:
        if min_num <= target <= max_num:
            return True

    return False


def is_positive_number(target: int) -> bool:
    """Check target is a positive number.

    Args:
        target (int): Number.

    Returns:
        bool: Return True if the given integer is positive.
    """
    if not is_int(target):
        return False

    if target <= 0:
        return False

    return True


def is_non_negative_number(target: int) -> bool:
    """Check target is zero or a positive number."""
    if not is_int(target):
        return False

    if target < 0:
        return False

    return True


def is_choice(target: str, choices: tuple) -> bool:
    """Check target is one of the given choices."""
    if not isinstance(target, str):
        return False
    if target not in choices:
        return False

    return True


def is_formula_type(target: str) -> bool:
    """Check target names a formula type, with or without the leading T.

    e.g. `2o`, `T2o`, `t2d`
    """
    if not isinstance(target, (str, int)) or isinstance(target, bool):
        return False
    if not re.search(rf'^[tT]?({"|".join(FORMULA_TYPE_TAGS)})$', str(target)):
        return False

    return True
