"""Case tables of the structured branching rules.

Each table lists, per row, a pattern over the core letters ('1', '0' or '_'),
the assignments forced by that pattern, the change (dn, dt, ds) of the
parameters, the type of the restricted CNF and the printed fraction of the
bound for even and odd s. Fractions and totals are stored as printed; the
audit recomputes them from the deltas.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple
from bounds import bound_coefficient
from classify import FormulaType


@dataclass(frozen=True)
class BranchRow:
    pattern: str
    forced: Tuple[Tuple[str, int], ...]
    deltas: Tuple[int, int, int]
    expected: str
    even: Optional[Fraction] = None
    odd: Optional[Fraction] = None

    def fraction(self, parity: str) -> Optional[Fraction]:
        return self.even if parity == 'even' else self.odd


@dataclass(frozen=True)
class BranchRule:
    rule_id: str
    source: FormulaType
    letters: Tuple[str, ...]
    rows: Tuple[BranchRow, ...]
    total_even: Optional[Fraction] = None
    total_odd: Optional[Fraction] = None

    @property
    def property_id(self) -> str:
        return self.rule_id.split(':')[0]

    @property
    def parities(self) -> Tuple[str, ...]:
        return tuple(p for p, total in (('even', self.total_even), ('odd', self.total_odd)) if total is not None)

    def total(self, parity: str) -> Optional[Fraction]:
        return self.total_even if parity == 'even' else self.total_odd

    def effective_cube(self, row: BranchRow) -> Optional[Dict[str, int]]:
        """Core letters fixed by the row pattern and its forced values; None if they clash."""
        cube = {letter: int(char) for letter, char in zip(self.letters, row.pattern) if char != '_'}
        for letter, value in row.forced:
            if letter not in self.letters:
                continue
            if cube.get(letter, value) != value:
                return None
            cube[letter] = value
        return cube


def _forced(text: str) -> Tuple[Tuple[str, int], ...]:
    """'a=1,d=0' or 'c=d=e=1' into letter/value pairs."""
    forced = []
    for chain in filter(None, text.split(',')):
        *letters, value = chain.split('=')
        forced.extend((letter, int(value)) for letter in letters)
    return tuple(forced)


def _fraction(text: Optional[str]) -> Optional[Fraction]:
    return None if text is None else Fraction(text)


def _row(pattern: str, forced: str, deltas: Tuple[int, int, int], expected: str,
         even: Optional[str] = None, odd: Optional[str] = None) -> BranchRow:
    return BranchRow(pattern, _forced(forced), deltas, expected, _fraction(even), _fraction(odd))


def _rule(rule_id: str, source: FormulaType, letters: str, rows: Iterable[BranchRow],
          even: Optional[str] = None, odd: Optional[str] = None) -> BranchRule:
    return BranchRule(rule_id, source, tuple(letters), tuple(rows), _fraction(even), _fraction(odd))


T0, T1, T2O, T2D, T3, T4 = (FormulaType.T0, FormulaType.T1, FormulaType.T2O,
                            FormulaType.T2D, FormulaType.T3, FormulaType.T4)

IN1 = (-1, -1, -2)
PAIR = (-2, -1, -1)
OUT1 = (-1, 0, 1)
TRIPLE = (-3, -2, -3)
QUAD = (-4, -2, -2)
ONE_OF_THREE = (-3, -1, 0)

_TABLES = (
    _rule('P0_1:A', T0, 'ab', [
        _row('1_', 'b=0', PAIR, '0', '7/18', '3/7'),
        _row('01', '', PAIR, '0', '7/18', '3/7'),
        _row('00', 'c=d=e=1', (-5, -3, -4), '0', '1/12', '1/12'),
    ], '31/36', '79/84'),
    _rule('P0_1:B', T0, 'ab', [
        _row('1_', '', IN1, '0', '1/2', '1/2'),
        _row('01', '', PAIR, '1', '1/3', '5/14'),
        _row('00', 'c=d=e=1', (-5, -3, -4), '0', '1/12', '1/12'),
    ], '11/12', '79/84'),
    _rule('P0_2', T0, 'a', [
        _row('1', '', IN1, '0', '1/2', '1/2'),
        _row('0', '', OUT1, '3', '1/2', '1/2'),
    ], '1', '1'),
    _rule('P0_3', T0, 'a', [
        _row('1', 'b=0', PAIR, '0', '7/18', '3/7'),
        _row('0', '', OUT1, '2o', '5/9', '4/7'),
    ], '17/18', '1'),
    # the table has no 000 row; that branch goes to the residual
    _rule('P0_4', T0, 'abc', [
        _row('100', 'e=1', QUAD, '0', '1/6', '1/6'),
        _row('010', 'f=1', QUAD, '0', '1/6', '1/6'),
        _row('001', 'd=1', QUAD, '0', '1/6', '1/6'),
        _row('11_', 'c=e=f=0', QUAD, '0', '1/6', '1/6'),
        _row('_11', 'a=d=f=0', QUAD, '0', '1/6', '1/6'),
        _row('1_1', 'b=e=d=0', QUAD, '0', '1/6', '1/6'),
    ], '1', '1'),
    _rule('P0_5', T0, 'abc', [
        _row('100', '', ONE_OF_THREE, '2d', '25/108', '5/21'),
        _row('010', '', ONE_OF_THREE, '2d', '25/108', '5/21'),
        _row('001', '', ONE_OF_THREE, '2d', '25/108', '5/21'),
        _row('011', 'f=g=h=i=0', (-7, -2, 1), '1', '2/27', '5/63'),
        _row('101', 'd=e=h=i=0', (-7, -2, 1), '1', '2/27', '5/63'),
        _row('110', 'd=e=f=g=0', (-7, -2, 1), '1', '2/27', '5/63'),
        _row('111', 'd=e=f=g=h=i=0', (-9, -3, 0), '0', '1/27', '1/27'),
    ], '103/108', '187/189'),
    _rule('P0_6:A', T0, 'abc', [
        _row('100', '', ONE_OF_THREE, '2d', '25/108', '5/21'),
        _row('010', '', ONE_OF_THREE, '1', '5/18', '2/7'),
        _row('001', '', ONE_OF_THREE, '1', '5/18', '2/7'),
        _row('011', 'd=e=f=g=0', (-7, -2, 1), '0', '7/81', '2/21'),
    ], '283/324', '19/21'),
    _rule('P0_6:B', T0, 'cab', [
        _row('1__', 'a=b=0', ONE_OF_THREE, '0', '1/3', '1/3'),
        _row('010', '', ONE_OF_THREE, '0', '1/3', '1/3'),
        _row('001', '', ONE_OF_THREE, '0', '1/3', '1/3'),
    ], '1', '1'),

    _rule('P1_1', T1, 'a', [
        _row('1', 'b=0', PAIR, '0', '7/15', '1/2'),
        _row('0', 'b=1', PAIR, '0', '7/15', '1/2'),
    ], '14/15', '1'),
    _rule('P1_2', T1, 'a', [
        _row('1', '', IN1, '0', '3/5', '7/12'),
        _row('0', 'b=1', PAIR, '1', '2/5', '5/12'),
    ], '1', '1'),

    _rule('P2o_odd', T2O, 'a', [
        _row('1', '', IN1, '0', odd='7/10'),
        _row('0', 'b=c=1', TRIPLE, '0', odd='3/10'),
    ], odd='1'),
    _rule('P2o_1', T2O, 'a', [
        _row('1', '', IN1, '0', '3/4'),
        _row('0', 'b=c=1', TRIPLE, '1', '1/4'),
    ], '1'),
    _rule('P2o_2:1', T2O, 'b', [
        _row('1', '', IN1, '1', '5/8'),
        _row('0', 'a=1', PAIR, '3', '3/8'),
    ], '1'),
    _rule('P2o_2:2', T2O, 'bd', [
        _row('1_', '', IN1, '1', '5/8'),
        _row('00', 'a=e=g=i=1', (-6, -4, -6), '0', '1/16'),
        _row('01', 'a=1', TRIPLE, '0', '7/24'),
    ], '47/48'),
    _rule('P2o_3', T2O, 'ab', [
        _row('10', '', PAIR, '0', '7/12'),
        _row('01', 'c=1', TRIPLE, '0', '7/24'),
    ], '7/8'),
    _rule('P2o_4', T2O, 'abc', [
        _row('100', 'd=e=1', (-5, -3, -4), '0', '1/8'),
        _row('101', '', TRIPLE, '0', '7/24'),
        _row('110', '', TRIPLE, '0', '7/24'),
        _row('0__', 'b=c=1', TRIPLE, '0', '7/24'),
    ], '1'),
    _rule('P2o_5:1', T2O, 'bc', [
        _row('10', 'a=1', TRIPLE, '1', '1/4'),
        _row('01', 'a=1', TRIPLE, '1', '1/4'),
        _row('00', 'a=d=1', QUAD, '1', '5/24'),
        _row('11', 'a=0', TRIPLE, '0', '7/24'),
    ], '1'),
    _rule('P2o_5:2', T2O, 'bc', [
        _row('10', 'a=1,d=0', QUAD, '1', '5/24'),
        _row('11', 'a=0', TRIPLE, '0', '7/24'),
        _row('0_', 'a=1', PAIR, '2o', '5/12'),
    ], '11/12'),
    _rule('P2o_6', T2O, 'ab', [
        _row('10', '', PAIR, '2', '5/12'),
        _row('11', 'c=0', TRIPLE, '1', '1/4'),
        _row('0_', 'b=c=1', TRIPLE, '0', '7/24'),
    ], '23/24'),
    _rule('P2o_7:1', T2O, 'abc', [
        _row('100', '', ONE_OF_THREE, '3', '7/24'),
        # a and c are both included, so t drops by 2
        _row('101', '', TRIPLE, '2', '5/24'),
        _row('110', '', TRIPLE, '2', '5/24'),
        _row('0__', 'b=c=1', TRIPLE, '0', '7/24'),
    ], '1'),
    _rule('P2o_7:2', T2O, 'abcd', [
        _row('1000', 'e=g=ee=1', (-7, -4, -5), '0', '7/144'),
        _row('1001', '', QUAD, '1', '5/24'),
        _row('101_', '', TRIPLE, '2o', '5/24'),
        _row('110_', '', TRIPLE, '2', '5/24'),
        _row('0___', 'b=c=1', TRIPLE, '0', '7/24'),
    ], '1'),
    _rule('P2o_7:3', T2O, 'abcd', [
        _row('1000', 'e=g=ee=gg=1', (-8, -5, -7), '0', '7/288'),
        _row('1001', '', QUAD, '0', '1/4'),
        _row('101_', '', TRIPLE, '2o', '5/24'),
        _row('110_', '', TRIPLE, '2o', '5/24'),
        _row('0___', 'b=c=1', TRIPLE, '0', '7/24'),
    ], '283/288'),
    _rule('P2o_8:1', T2O, 'abc', [
        _row('100', '', ONE_OF_THREE, '3', '7/24'),
        _row('101', 'dd=ee=0', (-5, -2, -1), '2', '5/36'),
        _row('11_', 'c=0', TRIPLE, '1', '1/4'),
        _row('0__', 'b=c=1', TRIPLE, '0', '7/24'),
    ], '35/36'),
    _rule('P2o_8:2', T2O, 'abcd', [
        _row('1000', 'e=g=ee=1', (-7, -4, -5), '0', '7/144'),
        _row('1001', '', QUAD, '0', '1/4'),
        _row('101_', 'dd=ee=0', (-5, -2, -1), '2o', '5/36'),
        _row('11__', 'c=0', TRIPLE, '1', '1/4'),
        _row('0___', 'b=c=1', TRIPLE, '0', '7/24'),
    ], '47/48'),
    _rule('P2o_9:1', T2O, 'abc', [
        _row('100', 'd=1', QUAD, '0', '1/4'),
        _row('101', 'd=0', QUAD, '0', '1/4'),
        _row('11_', 'c=d=0', QUAD, '0', '1/4'),
        _row('0__', 'b=c=1,d=0', QUAD, '0', '1/4'),
    ], '1'),
    _rule('P2o_9:2', T2O, 'abc', [
        _row('100', 'd=1', QUAD, '0', '1/4'),
        _row('101', 'd=0', QUAD, '1', '5/24'),
        _row('11_', 'c=d=0', QUAD, '1', '5/24'),
        _row('0__', 'b=c=1', TRIPLE, '0', '7/24'),
    ], '23/24'),
    _rule('P2o_10', T2O, 'ab', [
        _row('10', '', PAIR, '1', '1/2'),
        _row('11', 'c=d=e=0', (-5, -2, -1), '1', '1/6'),
        _row('0_', 'b=c=1', TRIPLE, '0', '7/24'),
    ], '23/24'),

    _rule('P2d_1:1', T2D, 'ab', [
        _row('1_', '', IN1, '1', '3/5', '3/5'),
        _row('01', '', PAIR, '3', '9/25', '7/20'),
    ], '24/25', '19/20'),
    _rule('P2d_1:2', T2D, 'abd', [
        _row('1__', '', IN1, '1', '3/5', '3/5'),
        _row('010', 'f=h=c=1', (-6, -4, -6), '0', '3/50', '7/120'),
        _row('011', '', TRIPLE, '0', '7/25', '3/10'),
    ], '47/50', '23/24'),
    _rule('P2d_2', T2D, 'a', [
        _row('1', '', IN1, '1', '3/5', '3/5'),
        _row('0', 'b=1', PAIR, '2o', '2/5', '2/5'),
    ], '1', '1'),
    _rule('P2d_3:1', T2D, 'ac', [
        _row('10', 'd=1,b=0', QUAD, '1', '1/5', '1/5'),
        _row('01', 'b=1,d=0', QUAD, '1', '1/5', '1/5'),
        _row('00', 'b=d=1', QUAD, '1', '1/5', '1/5'),
        _row('11', '', (-2, -2, -4), '0', '9/25', '7/20'),
    ], '24/25', '19/20'),
    _rule('P2d_3:2', T2D, 'abef', [
        _row('1001', '', QUAD, '1', '1/5', '1/5'),
        _row('1010', '', QUAD, '1', '1/5', '1/5'),
        _row('0101', '', QUAD, '1', '1/5', '1/5'),
        _row('0110', '', QUAD, '1', '1/5', '1/5'),
        _row('1100', '', QUAD, '1', '1/5', '1/5'),
    ], '1', '1'),
    _rule('P2d_3:3', T2D, 'abef', [
        _row('101_', '', TRIPLE, '1', '6/25', '1/4'),
        _row('1001', '', QUAD, '2', '1/6', '1/6'),
        _row('011_', '', TRIPLE, '1', '6/25', '1/4'),
        _row('0101', '', QUAD, '2', '1/6', '1/6'),
        _row('1100', '', QUAD, '2', '1/6', '1/6'),
    ], '49/50', '1'),
    _rule('P2d_4', T2D, 'ab', [
        _row('10', '', PAIR, '1', '12/25', '1/2'),
        _row('01', '', PAIR, '1', '12/25', '1/2'),
    ], '24/25', '1'),
    _rule('P2d_5', T2D, 'ab', [
        _row('10', '', PAIR, '2d', '2/5', '5/12'),
        _row('01', '', PAIR, '2d', '2/5', '5/12'),
        _row('11', 'e=f=g=h=0', (-5, -2, -1), '1', '4/25', '1/6'),
    ], '24/25', '1'),

    _rule('P3p_1', T3, 'abcd', [
        _row('1___', 'b=0,c=1', TRIPLE, '0', '1/3', '1/3'),
        _row('0_1_', 'b=1', TRIPLE, '0', '1/3', '1/3'),
        _row('0_0_', 'b=d=1', QUAD, '0', '2/7', '7/27'),
    ], '20/21', '25/27'),
    _rule('P3p_2', T3, 'b', [
        _row('1', '', IN1, '1', '5/7', '2/3'),
        _row('0', 'a=c=1', TRIPLE, '1', '2/7', '5/18'),
    ], '1', '17/18'),
    _rule('P3t_1', T3, 'abc', [
        _row('0__', 'b=c=1', TRIPLE, '0', '1/3', '1/3'),
        _row('10_', 'c=1', TRIPLE, '0', '1/3', '1/3'),
        _row('11_', 'c=0', TRIPLE, '0', '1/3', '1/3'),
    ], '1', '1'),
    _rule('P3t_2', T3, 'abc', [
        _row('0__', 'b=c=1', TRIPLE, '1', '2/7', '5/18'),
        _row('10_', 'c=1', TRIPLE, '1', '2/7', '5/18'),
        _row('110', '', TRIPLE, '1', '2/7', '5/18'),
        _row('111', 'd=e=0', (-5, -3, -4), '0', '1/7', '7/54'),
    ], '1', '26/27'),
    _rule('P3t_3', T3, 'abc', [
        _row('0__', 'b=c=1', TRIPLE, '2', '5/21', '25/108'),
        _row('10_', 'c=1', TRIPLE, '2', '5/21', '25/108'),
        _row('110', '', TRIPLE, '2', '5/21', '25/108'),
        _row('111', '', (-3, -3, -6), '0', '3/14', '7/36'),
    ], '13/14', '8/9'),
    _rule('P3io_1', T3, 'a', [
        _row('1', '', IN1, '2o', odd='5/9'),
        _row('0', 'b=1', PAIR, '2o', odd='4/9'),
    ], odd='1'),
    _rule('P3io_2', T3, 'a', [
        _row('1', 'b=0', PAIR, '2d', odd='25/54'),
        _row('0', 'b=1', PAIR, '2d', odd='25/54'),
    ], odd='25/27'),
    _rule('P3io_3', T3, 'a', [
        _row('1', '', IN1, '2d', odd='5/9'),
        _row('0', 'b=1', PAIR, '3', odd='7/18'),
    ], odd='17/18'),
    _rule('P3ie_1', T3, 'a', [
        _row('1', 'b=0', PAIR, '2', '10/21'),
        _row('0', 'b=1', PAIR, '2', '10/21'),
    ], '20/21'),
    _rule('P3ie_2', T3, 'abc', [
        _row('1__', '', IN1, '2', '25/42'),
        _row('0_1', 'b=1', TRIPLE, '1', '2/7'),
        _row('0_0', 'b=d=x=1', (-5, -3, -4), '1', '5/42'),
    ], '1'),
    _rule('P3ie_3', T3, 'abc', [
        _row('1__', '', IN1, '2', '25/42'),
        _row('011', '', TRIPLE, '0', '1/3'),
        _row('010', 'd=e=x=1', (-6, -4, -6), '0', '1/14'),
    ], '1'),
    _rule('P3ie_4', T3, 'a', [
        _row('1', '', IN1, '2o', '4/7'),
        _row('0', 'b=1', PAIR, '3', '3/7'),
    ], '1'),
    _rule('P3ie_5', T3, 'abcd', [
        _row('1___', '', IN1, '2', '25/42'),
        _row('011_', '', TRIPLE, '2', '5/21'),
        _row('0101', '', QUAD, '3', '1/6'),
    ], '1'),
    _rule('P3ie_6', T3, 'a', [
        _row('1', '', IN1, '2', '25/42'),
        _row('0', 'b=1', PAIR, '4', '17/42'),
    ], '1'),

    # proved for odd s only; the engine applies them for both parities
    _rule('P4_1', T4, 'a', [
        _row('1', '', IN1, '3', odd='9/17'),
        _row('0', 'b=1', PAIR, '3', odd='7/17'),
    ], odd='16/17'),
    _rule('P4_2', T4, 'ab', [
        _row('1_', '', IN1, '2', odd='10/17'),
        _row('01', 'c=1', TRIPLE, '0', odd='6/17'),
    ], odd='16/17'),
    _rule('P4_3', T4, 'ab', [
        _row('1_', '', IN1, '0', odd='14/17'),
        _row('01', 'c=d=1', (-4, -3, -5), '0', odd='3/17'),
    ], odd='1'),
)

RULES: Dict[str, BranchRule] = {rule.rule_id: rule for rule in _TABLES}

# Representative deficits: only the parity and the floor(s/2) steps matter.
REPRESENTATIVE_S = {'even': 10, 'odd': 11}


def expected_formula_type(tag: str) -> FormulaType:
    """Type used for a row's bound; '2' (2o or 2d) takes the larger 2d coefficient."""
    return FormulaType.T2D if tag == '2' else FormulaType.parse(tag)


def recompute_fraction(rule: BranchRule, row: BranchRow, parity: str) -> Fraction:
    """Bound of the restricted CNF divided by the bound of the source CNF.

    Args:
        rule (BranchRule): the table the row belongs to.
        row (BranchRow): the row.
        parity (str): 'even' or 'odd', the parity of the source s.

    Returns:
        Fraction: coef(row type, s') / coef(rule type, s)
        * (2/3)^(floor(s'/2) - floor(s/2)) * 3^dt.
    """
    s = REPRESENTATIVE_S[parity]
    _, dt, ds = row.deltas
    s_after = s + ds
    ratio = bound_coefficient(expected_formula_type(row.expected), s_after) / bound_coefficient(rule.source, s)
    return ratio * Fraction(2, 3) ** (s_after // 2 - s // 2) * Fraction(3) ** dt


def included_letters(row: BranchRow, letters: Tuple[str, ...]) -> Tuple[str, ...]:
    """Letters the row puts into the transversal."""
    chosen = [letter for letter, char in zip(letters, row.pattern) if char == '1']
    chosen += [letter for letter, value in row.forced if value == 1 and letter not in chosen]
    return tuple(chosen)
