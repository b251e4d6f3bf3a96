"""Exact values of the closed-form bounds on minimum transversal counts.

All arithmetic uses Fraction; no floating point.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Dict, Mapping, Optional, Tuple
from classify import FormulaType
from errors import NegativeResult, OutOfValidity, UnknownTheta
from utils import setup_logger


logger = setup_logger(__name__)

EVEN_COEFFICIENTS: Dict[FormulaType, Fraction] = {
    FormulaType.T0: Fraction(1),
    FormulaType.T1: Fraction(5, 6),
    FormulaType.T2O: Fraction(2, 3),
    FormulaType.T2D: Fraction(25, 36),
    FormulaType.T3: Fraction(7, 12),
    # mirrors T3; only odd s is proved for T4
    FormulaType.T4: Fraction(7, 12),
}

ODD_COEFFICIENTS: Dict[FormulaType, Fraction] = {
    FormulaType.T0: Fraction(7, 9),
    FormulaType.T1: Fraction(2, 3),
    FormulaType.T2O: Fraction(5, 9),
    FormulaType.T2D: Fraction(5, 9),
    FormulaType.T3: Fraction(1, 2),
    FormulaType.T4: Fraction(17, 36),
}

# Exact extremal counts outside the regions covered by a closed form.
THETA_TABLE: Dict[Tuple[int, int], int] = {
    (7, 4): 23, (8, 5): 36, (9, 6): 54, (10, 7): 75, (11, 8): 102, (12, 9): 136,
    (9, 5): 60, (10, 6): 100, (11, 6): 140, (11, 7): 150, (12, 7): 230, (12, 8): 225,
}


class Boundary(Enum):
    S_LE_0 = 's<=0'
    S_EQ_2T_MINUS_2 = 's=2t-2'
    S_EQ_2T_MINUS_1 = 's=2t-1'
    S_EQ_2T = 's=2t'

    @classmethod
    def parse(cls, text: str) -> 'Boundary':
        for boundary in cls:
            if boundary.value == text.replace(' ', ''):
                return boundary
        raise ValueError(f'unknown boundary {text!r}')


class Comparison(Enum):
    BELOW = 'below'
    EQUAL = 'equal'
    EXCEEDS = 'exceeds'


@dataclass(frozen=True)
class BoundQuery:
    type: FormulaType
    s: int
    t: int


def deficit(n: int, t: int) -> int:
    return 3 * t - n


def bound_coefficient(formula_type: FormulaType, s: int) -> Fraction:
    """Leading coefficient of the bound for the parity of s."""
    table = EVEN_COEFFICIENTS if s % 2 == 0 else ODD_COEFFICIENTS
    return table[formula_type]


def phi_upper(q: BoundQuery) -> Fraction:
    """Upper bound on the number of t-transversals of a type-q.type CNF.

    Args:
        q (BoundQuery): type, deficit s and threshold t.

    Raises:
        OutOfValidity: outside t >= 1, 0 <= s <= t.

    Returns:
        Fraction: coefficient * (2/3)^floor(s/2) * 3^t.
    """
    if q.t < 1 or not 0 <= q.s <= q.t:
        raise OutOfValidity(f'bound for {q.type} holds for t >= 1 and 0 <= s <= t, got s={q.s}, t={q.t}')
    return bound_coefficient(q.type, q.s) * Fraction(2, 3) ** (q.s // 2) * 3 ** q.t


_S_LE_0_SCALE = {
    FormulaType.T0: Fraction(1),
    FormulaType.T1: Fraction(2, 3),
    FormulaType.T2O: Fraction(4, 9),
    FormulaType.T2D: Fraction(4, 9),
}

_CLIQUE_CORRECTION = {
    FormulaType.T0: 0,
    FormulaType.T1: 1,
    FormulaType.T2O: 2,
    FormulaType.T2D: 2,
}


def phi_boundary(formula_type: FormulaType, t: int, which: Boundary) -> Fraction:
    """Exact extremal count at the edges of the deficit range.

    Args:
        formula_type (FormulaType): one of T0, T1, T2O, T2D.
        t (int): threshold.
        which (Boundary): the boundary row.

    Raises:
        OutOfValidity: no such row for this type and t.

    Returns:
        Fraction: the boundary value.
    """
    if formula_type not in _S_LE_0_SCALE:
        raise OutOfValidity(f'no boundary rows for {formula_type}')
    minimum_t = 2 if formula_type == FormulaType.T2D else 1
    if t < minimum_t:
        raise OutOfValidity(f'{formula_type} boundary rows need t >= {minimum_t}')

    if which == Boundary.S_LE_0:
        if formula_type == FormulaType.T2O and t == 1:
            return Fraction(1)
        return _S_LE_0_SCALE[formula_type] * 3 ** t
    if which == Boundary.S_EQ_2T_MINUS_2:
        return Fraction(comb(t + 2, 2) - _CLIQUE_CORRECTION[formula_type])
    if which == Boundary.S_EQ_2T_MINUS_1:
        if formula_type in (FormulaType.T2O, FormulaType.T2D) and t < 2:
            raise OutOfValidity(f'{formula_type} at s=2t-1 needs t >= 2')
        return Fraction(t + 1)
    if formula_type != FormulaType.T0:
        raise OutOfValidity(f'{formula_type} has no CNF with s=2t')
    return Fraction(1)


def certifiable_bound(formula_type: FormulaType, s: int, t: int) -> Fraction:
    """Best proved bound for (type, s, t), whichever statement covers it.

    For s <= 0 the boundary row of types 0, 1, 2o and 2d applies; types 3
    and 4 fall back to phi_upper at s = 0 and to 3^t below.

    Raises:
        OutOfValidity: no statement covers the query.
    """
    if t == 0:
        return Fraction(1)
    if s <= 0 and formula_type in _S_LE_0_SCALE:
        try:
            return phi_boundary(formula_type, t, Boundary.S_LE_0)
        except OutOfValidity:
            pass
    if s < 0:
        return Fraction(3 ** t)
    if s <= t:
        return phi_upper(BoundQuery(formula_type, s, t))
    for boundary, value in (
        (Boundary.S_EQ_2T_MINUS_2, 2 * t - 2),
        (Boundary.S_EQ_2T_MINUS_1, 2 * t - 1),
        (Boundary.S_EQ_2T, 2 * t),
    ):
        if s == value and formula_type in _S_LE_0_SCALE:
            return phi_boundary(formula_type, t, boundary)
    if 2 * t - 2 <= s <= 2 * t:
        # n <= t + 2: every t-set counts at most once
        return Fraction(comb(3 * t - s, t))
    raise OutOfValidity(f'no proved bound for {formula_type} at s={s}, t={t}')


def six_quarter_bound(n: int) -> Optional[int]:
    """6^(n/4) when it is an integer, else None."""
    if n % 4:
        return None
    return 6 ** (n // 4)


def six_quarter_compare(x: int, n: int) -> Comparison:
    """Compare x with 6^(n/4) exactly, by comparing x^4 with 6^n."""
    lhs, rhs = x ** 4, 6 ** n
    if lhs < rhs:
        return Comparison.BELOW
    if lhs == rhs:
        return Comparison.EQUAL
    return Comparison.EXCEEDS


def theta_turan_relation(n: int, k: int, theta: int) -> int:
    """Turan number T(n, k+1, k) implied by Theta(n, n-k, k) = theta.

    Args:
        n (int): number of variables.
        k (int): clause width.
        theta (int): extremal count of (n-k)-transversals.

    Raises:
        NegativeResult: theta exceeds C(n, k).

    Returns:
        int: C(n, k) - theta.
    """
    if n < k + 1:
        raise ValueError(f'need n >= k + 1, got n={n}, k={k}')
    result = comb(n, k) - theta
    if result < 0:
        raise NegativeResult(f'theta={theta} exceeds C({n},{k})={comb(n, k)}')
    return result


def theta_known(n: int, t: int, oracle_values: Optional[Mapping[Tuple[int, int], int]] = None) -> int:
    """Exact Theta(n, t, 3) where it is settled.

    Args:
        n (int): number of variables.
        t (int): threshold.
        oracle_values (Optional[Mapping[Tuple[int, int], int]], optional):
            values measured by exhaustive search. Defaults to None.

    Raises:
        UnknownTheta: no exact value is known.

    Returns:
        int: the maximum number of t-transversals of a t-threshold 3-CNF.
    """
    if t == 0:
        return 1
    if 1 <= t <= n:
        s = deficit(n, t)
        if s <= 0:
            return 3 ** t
        if s <= t:
            return int(phi_upper(BoundQuery(FormulaType.T0, s, t)))
        if 2 * t - 2 <= s <= 2 * t:
            return comb(n, t)
        if (n, t) in THETA_TABLE:
            return THETA_TABLE[(n, t)]
    if oracle_values and (n, t) in oracle_values:
        return oracle_values[(n, t)]
    raise UnknownTheta(f'no exact value known for n={n}, t={t}')
