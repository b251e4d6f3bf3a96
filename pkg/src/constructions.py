"""Named building blocks, their disjoint sums and the extremal families.

Every block is built on variables 0..n-1. Sums relabel blocks onto
consecutive ranges, so the i-th block of a sum owns the i-th range.
"""
import re
import itertools
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction
from math import comb
from typing import List, NamedTuple, Optional, Sequence, Tuple
from classify import FormulaType
from cnf import MAX_VARIABLES, MAX_WIDTH, MonotoneCnf, normalize
from errors import CombinedUniverseTooLarge, InvalidSpec
from utils import bits_of, mask_of, setup_logger


logger = setup_logger(__name__)


class BlockKind(Enum):
    CLIQUE = auto()
    TURAN = auto()
    CLIQUE_DEF = auto()
    TURAN_DEF = auto()
    TWO_CLAUSE = auto()
    N3T_MINUS_1 = auto()
    FREE = auto()


class Defect(Enum):
    """2-clauses added to a defective block."""
    D1 = '1'
    D2O = '2o'
    D2D = '2d'

    @classmethod
    def parse(cls, text: str) -> 'Defect':
        for defect in cls:
            if defect.value == str(text).lower():
                return defect
        raise InvalidSpec(f'unknown defect {text!r}, expected one of 1, 2o, 2d')


@dataclass(frozen=True)
class BlockSpec:
    """One building block.

    `size` is l for cliques, n for Turan blocks, t for the n = 3t-1 block
    and the number of variables for free blocks. `width` is the clause
    width k of a clique.
    """
    kind: BlockKind
    size: int = 0
    width: int = 3
    defect: Optional[Defect] = None

    def __str__(self) -> str:
        if self.kind == BlockKind.CLIQUE:
            return f'K({self.size},{self.width})'
        if self.kind == BlockKind.TURAN:
            return f'T3({self.size})'
        if self.kind == BlockKind.CLIQUE_DEF:
            return f'Kdef({self.size},{self.defect.value})'
        if self.kind == BlockKind.TURAN_DEF:
            return f'Tdef({self.size},{self.defect.value})'
        if self.kind == BlockKind.TWO_CLAUSE:
            return 'K22'
        if self.kind == BlockKind.N3T_MINUS_1:
            return f'n3tm1({self.size})'
        return f'free({self.size})'


@dataclass(frozen=True)
class FamilySpec:
    type: FormulaType
    s: int
    t: int


def clique(l: int, k: int) -> BlockSpec:
    return BlockSpec(BlockKind.CLIQUE, l, k)


def turan(n: int) -> BlockSpec:
    return BlockSpec(BlockKind.TURAN, n)


def clique_def(l: int, defect: Defect) -> BlockSpec:
    return BlockSpec(BlockKind.CLIQUE_DEF, l, 3, defect)


def turan_def(n: int, defect: Defect) -> BlockSpec:
    return BlockSpec(BlockKind.TURAN_DEF, n, 3, defect)


def free(k: int) -> BlockSpec:
    return BlockSpec(BlockKind.FREE, k)


TWO_CLAUSE = BlockSpec(BlockKind.TWO_CLAUSE, 2, 2)
K33 = clique(3, 3)
K43 = clique(4, 3)


def _turan_parts(n: int) -> List[List[int]]:
    """Three parts of consecutive variables, sizes as equal as possible, largest first."""
    base, rem = divmod(n, 3)
    parts = []
    start = 0
    for i in range(3):
        size = base + (1 if i < rem else 0)
        parts.append(list(range(start, start + size)))
        start += size
    return parts


def _turan_clauses(n: int) -> List[Tuple[int, ...]]:
    parts = _turan_parts(n)
    clauses = []
    for i, part in enumerate(parts):
        clauses.extend(itertools.combinations(part, 3))
        following = parts[(i + 1) % 3]
        for pair in itertools.combinations(part, 2):
            clauses.extend(pair + (v,) for v in following)
    return clauses


def _defect_pairs_turan(n: int, defect: Defect) -> List[Tuple[int, int]]:
    parts = _turan_parts(n)
    pairs = [(parts[0][0], parts[0][1])]
    if defect == Defect.D2O:
        # third variable from the previous part in the circular order
        pairs.append((parts[0][0], parts[2][0]))
    elif defect == Defect.D2D:
        pairs.append((parts[1][0], parts[1][1]))
    return pairs


def _defect_pairs_clique(defect: Defect) -> List[Tuple[int, int]]:
    if defect == Defect.D1:
        return [(0, 1)]
    if defect == Defect.D2O:
        return [(0, 1), (0, 2)]
    return [(0, 1), (2, 3)]


def _validate_block(spec: BlockSpec) -> None:
    kind = spec.kind
    if kind == BlockKind.CLIQUE:
        if not 1 <= spec.width <= MAX_WIDTH or spec.size < spec.width:
            raise InvalidSpec(f'{spec} needs 1 <= k <= {MAX_WIDTH} and l >= k')
    elif kind == BlockKind.TURAN:
        if spec.size < 3:
            raise InvalidSpec(f'{spec} needs n >= 3')
    elif kind == BlockKind.CLIQUE_DEF:
        if spec.defect is None or spec.size < (4 if spec.defect == Defect.D2D else 3):
            raise InvalidSpec(f'{spec} needs l >= 3 (l >= 4 for 2d)')
    elif kind == BlockKind.TURAN_DEF:
        if spec.defect is None or spec.size < (5 if spec.defect == Defect.D2D else 4):
            raise InvalidSpec(f'{spec} needs n >= 4 (n >= 5 for 2d)')
    elif kind == BlockKind.N3T_MINUS_1:
        if spec.size < 2:
            raise InvalidSpec(f'{spec} needs t >= 2')
    elif kind == BlockKind.FREE:
        if spec.size < 0:
            raise InvalidSpec(f'{spec} needs k >= 0')
    if block_size(spec) > MAX_VARIABLES:
        raise CombinedUniverseTooLarge(f'{spec} needs more than {MAX_VARIABLES} variables')


def block_size(spec: BlockSpec) -> int:
    """Number of variables of a block."""
    if spec.kind == BlockKind.TWO_CLAUSE:
        return 2
    if spec.kind == BlockKind.N3T_MINUS_1:
        return 3 * spec.size - 1
    return spec.size


def block_tau(spec: BlockSpec) -> int:
    """Transversal number of a block, as the constructions claim it."""
    kind = spec.kind
    if kind == BlockKind.CLIQUE:
        return spec.size - spec.width + 1
    if kind == BlockKind.CLIQUE_DEF:
        return spec.size - 2
    if kind in (BlockKind.TURAN, BlockKind.TURAN_DEF):
        return spec.size - 3
    if kind == BlockKind.TWO_CLAUSE:
        return 1
    if kind == BlockKind.N3T_MINUS_1:
        return spec.size
    return 0


def build_block(spec: BlockSpec) -> MonotoneCnf:
    """Build one block on variables 0..n-1.

    Args:
        spec (BlockSpec): block to build.

    Raises:
        InvalidSpec: parameters outside the block's validity.

    Returns:
        MonotoneCnf: the normalized block.
    """
    _validate_block(spec)
    kind = spec.kind
    if kind == BlockKind.CLIQUE:
        clauses = list(itertools.combinations(range(spec.size), spec.width))
    elif kind == BlockKind.TURAN:
        clauses = _turan_clauses(spec.size)
    elif kind == BlockKind.CLIQUE_DEF:
        clauses = list(itertools.combinations(range(spec.size), 3))
        clauses += _defect_pairs_clique(spec.defect)
    elif kind == BlockKind.TURAN_DEF:
        clauses = _turan_clauses(spec.size) + _defect_pairs_turan(spec.size, spec.defect)
    elif kind == BlockKind.TWO_CLAUSE:
        clauses = [(0, 1)]
    elif kind == BlockKind.N3T_MINUS_1:
        head = MonotoneCnf.from_clauses(5, [(0, 1, 2), (0, 3, 4), (1, 2, 3)])
        return disjoint_sum([head] + [build_block(K33)] * (spec.size - 2))
    else:
        clauses = []
    return normalize(MonotoneCnf.from_clauses(block_size(spec), clauses))


def disjoint_sum(blocks: Sequence[MonotoneCnf]) -> MonotoneCnf:
    """Place blocks on disjoint consecutive variable ranges.

    Args:
        blocks (Sequence[MonotoneCnf]): summands, in order.

    Raises:
        CombinedUniverseTooLarge: more than 64 variables in total.

    Returns:
        MonotoneCnf: the sum; tau adds up and minimum transversal counts multiply.
    """
    total = sum(block.n for block in blocks)
    if total > MAX_VARIABLES:
        raise CombinedUniverseTooLarge(f'sum needs {total} variables, the limit is {MAX_VARIABLES}')

    clauses = []
    offset = 0
    for block in blocks:
        position = {v: offset + i for i, v in enumerate(block.variables())}
        for clause in block.clauses:
            clauses.append(mask_of(position[v] for v in bits_of(clause)))
        offset += block.n
    return MonotoneCnf((1 << total) - 1, tuple(clauses))


def build_sum(specs: Sequence[BlockSpec]) -> MonotoneCnf:
    return disjoint_sum([build_block(spec) for spec in specs])


def build_3t_minus_1(t: int) -> MonotoneCnf:
    """CNF on 3t-1 variables with tau = t and 7 * 3^(t-2) minimum transversals."""
    return build_block(BlockSpec(BlockKind.N3T_MINUS_1, t))


class FamilyRecipe(NamedTuple):
    blocks: Tuple[BlockSpec, ...]
    count: Fraction


def _repeat(spec: BlockSpec, times: int) -> List[BlockSpec]:
    return [spec] * times


def _power_term(coefficient: Fraction, s: int, t: int) -> Fraction:
    """coefficient * (2/3)^floor(s/2) * 3^t, the closed form for s >= 0."""
    return coefficient * Fraction(2, 3) ** (s // 2) * 3 ** t


def _recipe_t0(s: int, t: int) -> Optional[FamilyRecipe]:
    if s <= 0:
        return FamilyRecipe(tuple(_repeat(K33, t)), Fraction(3 ** t))
    if s == 1 and t >= 2:
        return FamilyRecipe(tuple(_repeat(K33, t - 2) + [turan(5)]), Fraction(7, 9) * 3 ** t)
    if 2 <= s <= t and s % 2 == 0:
        blocks = _repeat(K33, t - s) + _repeat(K43, s // 2)
        return FamilyRecipe(tuple(blocks), _power_term(Fraction(1), s, t))
    if 3 <= s <= t:
        blocks = _repeat(K33, t - s) + _repeat(K43, (s - 3) // 2) + [turan(6)]
        return FamilyRecipe(tuple(blocks), _power_term(Fraction(7, 9), s, t))
    if s == 2 * t - 2:
        return FamilyRecipe((clique(t + 2, 3),), Fraction(comb(t + 2, 2)))
    if s == 2 * t - 1:
        return FamilyRecipe((clique(t + 1, 2),), Fraction(t + 1))
    if s == 2 * t:
        return FamilyRecipe((clique(t, 1),), Fraction(1))
    return None


def _recipe_t1(s: int, t: int) -> Optional[FamilyRecipe]:
    k31 = clique_def(4, Defect.D1)
    if s <= 1:
        return FamilyRecipe(tuple([TWO_CLAUSE] + _repeat(K33, t - 1)), Fraction(2 * 3 ** (t - 1)))
    if 2 <= s <= t and s % 2 == 0:
        blocks = _repeat(K33, t - s) + _repeat(K43, (s - 2) // 2) + [k31]
        return FamilyRecipe(tuple(blocks), _power_term(Fraction(5, 6), s, t))
    if 3 <= s <= t:
        blocks = _repeat(K33, t - s) + _repeat(K43, (s - 1) // 2) + [TWO_CLAUSE]
        return FamilyRecipe(tuple(blocks), _power_term(Fraction(2, 3), s, t))
    if s == 2 * t - 2:
        return FamilyRecipe((clique_def(t + 2, Defect.D1),), Fraction(comb(t + 2, 2) - 1))
    if s == 2 * t - 1:
        return FamilyRecipe((clique(t + 1, 2),), Fraction(t + 1))
    return None


def _recipe_t2o(s: int, t: int) -> Optional[FamilyRecipe]:
    k32o = clique_def(4, Defect.D2O)
    if t == 1 and s <= 0:
        return FamilyRecipe((clique_def(3, Defect.D2O),), Fraction(1))
    if t >= 2 and s <= 2:
        return FamilyRecipe(tuple([k32o] + _repeat(K33, t - 2)), Fraction(4 * 3 ** (t - 2)))
    if 4 <= s <= t and s % 2 == 0:
        blocks = _repeat(K33, t - s) + _repeat(K43, (s - 2) // 2) + [k32o]
        return FamilyRecipe(tuple(blocks), _power_term(Fraction(2, 3), s, t))
    if 3 <= s <= t and s % 2 == 1:
        blocks = _repeat(K33, t - s) + _repeat(K43, (s - 3) // 2) + [turan_def(6, Defect.D2O)]
        return FamilyRecipe(tuple(blocks), _power_term(Fraction(5, 9), s, t))
    if s == 2 * t - 2:
        return FamilyRecipe((clique_def(t + 2, Defect.D2O),), Fraction(comb(t + 2, 2) - 2))
    if s == 2 * t - 1 and t >= 2:
        return FamilyRecipe((clique(t + 1, 2),), Fraction(t + 1))
    return None


def _recipe_t2d(s: int, t: int) -> Optional[FamilyRecipe]:
    k31 = clique_def(4, Defect.D1)
    if t >= 2 and s <= 2:
        blocks = [TWO_CLAUSE, TWO_CLAUSE] + _repeat(K33, t - 2)
        return FamilyRecipe(tuple(blocks), Fraction(4 * 3 ** (t - 2)))
    if 4 <= s <= t and s % 2 == 0:
        blocks = _repeat(K33, t - s) + _repeat(K43, (s - 4) // 2) + [k31, k31]
        return FamilyRecipe(tuple(blocks), _power_term(Fraction(25, 36), s, t))
    if 3 <= s <= t and s % 2 == 1:
        blocks = _repeat(K33, t - s) + _repeat(K43, (s - 3) // 2) + [k31, TWO_CLAUSE]
        return FamilyRecipe(tuple(blocks), _power_term(Fraction(5, 9), s, t))
    if s == 2 * t - 2 and t >= 3:
        return FamilyRecipe((clique_def(t + 2, Defect.D2D),), Fraction(comb(t + 2, 2) - 2))
    if s == 2 * t - 1 and t >= 3:
        return FamilyRecipe((clique(t + 1, 2),), Fraction(t + 1))
    return None


_RECIPES = {
    FormulaType.T0: _recipe_t0,
    FormulaType.T1: _recipe_t1,
    FormulaType.T2O: _recipe_t2o,
    FormulaType.T2D: _recipe_t2d,
}


def family_recipe(spec: FamilySpec) -> FamilyRecipe:
    """Blocks and closed-form count of an extremal family, padding included.

    Args:
        spec (FamilySpec): type, deficit and threshold.

    Raises:
        InvalidSpec: no family exists for these parameters.

    Returns:
        FamilyRecipe: blocks in sum order and the expected count.
    """
    recipe_of = _RECIPES.get(spec.type)
    if recipe_of is None or spec.t < 1:
        raise InvalidSpec(f'no family for type {spec.type} with s={spec.s}, t={spec.t}')
    recipe = recipe_of(spec.s, spec.t)
    if recipe is None:
        raise InvalidSpec(f'no family for type {spec.type} with s={spec.s}, t={spec.t}')

    natural_n = sum(block_size(block) for block in recipe.blocks)
    padding = (3 * spec.t - max(spec.s, 0)) - natural_n
    if padding < 0:
        raise InvalidSpec(f'family for type {spec.type} with s={spec.s}, t={spec.t} does not fit')
    if padding:
        recipe = FamilyRecipe(recipe.blocks + (free(padding),), recipe.count)
    if recipe.count.denominator != 1:
        raise ArithmeticError(f'closed form for {spec} is not an integer: {recipe.count}')
    return recipe


def build_family(spec: FamilySpec) -> MonotoneCnf:
    return build_sum(family_recipe(spec).blocks)


def expected_count(spec: FamilySpec) -> Fraction:
    return family_recipe(spec).count


def replacement_pair() -> Tuple[MonotoneCnf, MonotoneCnf]:
    """K_3^3 + T_6^3 and K_4^3 + T_5^3: same n, same tau, same count (42 at t=4)."""
    return build_sum([K33, turan(6)]), build_sum([K43, turan(5)])


_TERM = re.compile(r'^\s*(?:(\d+)\s*\*?\s*)?([A-Za-z][A-Za-z0-9]*)\s*(?:\((.*)\))?\s*$')


def _split_args(raw: Optional[str]) -> Tuple[List[str], dict]:
    positional, named = [], {}
    if raw is None or not raw.strip():
        return positional, named
    for part in raw.split(','):
        part = part.strip()
        if '=' in part:
            key, value = part.split('=', 1)
            named[key.strip()] = value.strip()
        else:
            positional.append(part)
    return positional, named


def _int_arg(value: str, text: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise InvalidSpec(f'{text!r}: {value!r} is not an integer')


def _parse_term(text: str) -> List[BlockSpec]:
    match = _TERM.match(text)
    if not match:
        raise InvalidSpec(f'cannot parse {text!r}')
    times = int(match.group(1)) if match.group(1) else 1
    name = match.group(2)
    positional, named = _split_args(match.group(3))

    def arg(index: int, key: str) -> str:
        if key in named:
            return named[key]
        if index < len(positional):
            return positional[index]
        raise InvalidSpec(f'{text!r}: missing argument {key}')

    if name == 'K':
        blocks = [clique(_int_arg(arg(0, 'l'), text), _int_arg(arg(1, 'k'), text))]
    elif name == 'T3':
        blocks = [turan(_int_arg(arg(0, 'n'), text))]
    elif name == 'Kdef':
        blocks = [clique_def(_int_arg(arg(0, 'l'), text), Defect.parse(arg(1, 'd')))]
    elif name == 'Tdef':
        blocks = [turan_def(_int_arg(arg(0, 'n'), text), Defect.parse(arg(1, 'd')))]
    elif name == 'K22':
        blocks = [TWO_CLAUSE]
    elif name == 'free':
        blocks = [free(_int_arg(arg(0, 'k'), text))]
    elif name == 'n3tm1':
        blocks = [BlockSpec(BlockKind.N3T_MINUS_1, _int_arg(arg(0, 't'), text))]
    elif name == 'P':
        spec = FamilySpec(FormulaType.T0, _int_arg(arg(0, 's'), text), _int_arg(arg(1, 't'), text))
        blocks = list(family_recipe(spec).blocks)
    elif name == 'fam':
        try:
            formula_type = FormulaType.parse(arg(0, 'type'))
        except ValueError as e:
            raise InvalidSpec(f'{text!r}: {e}')
        spec = FamilySpec(formula_type, _int_arg(arg(1, 's'), text), _int_arg(arg(2, 't'), text))
        blocks = list(family_recipe(spec).blocks)
    else:
        raise InvalidSpec(f'unknown block {name!r} in {text!r}')
    return blocks * times


def parse_block_spec(text: str) -> List[BlockSpec]:
    """Parse `K(4,3) + 2*T3(5) + fam(2d,s=4,t=5)` into a list of blocks.

    Args:
        text (str): sum of terms, each optionally prefixed by a multiplicity.

    Raises:
        InvalidSpec: unknown term or out-of-range parameters.

    Returns:
        List[BlockSpec]: blocks in sum order.
    """
    if not text or not text.strip():
        raise InvalidSpec('empty block specification')
    blocks = []
    for term in text.split('+'):
        blocks.extend(_parse_term(term))
    for block in blocks:
        _validate_block(block)
    return blocks


def build_from_text(text: str) -> MonotoneCnf:
    return build_sum(parse_block_spec(text))


class GoldenRow(NamedTuple):
    type: FormulaType
    n: int
    t: int
    recipe: str
    count: int

    @property
    def s(self) -> int:
        return 3 * self.t - self.n


def _rows(formula_type: FormulaType, rows: Sequence[Tuple[int, int, str, int]]) -> List[GoldenRow]:
    return [GoldenRow(formula_type, n, t, recipe, count) for n, t, recipe, count in rows]


# Small-case table rows with n <= 12: (n, t, recipe, printed count).
GOLDEN_ROWS: Tuple[GoldenRow, ...] = tuple(
    _rows(FormulaType.T0, [
        (3, 1, 'K(3,3)', 3), (3, 2, 'K(3,2)', 3), (3, 3, 'K(3,1)', 1),
        (4, 1, 'K(3,3)+free(1)', 3), (4, 2, 'K(4,3)', 6), (4, 3, 'K(4,2)', 4),
        (4, 4, 'K(4,1)', 1), (5, 1, 'K(3,3)+free(2)', 3), (5, 2, 'T3(5)', 7),
        (5, 3, 'K(5,3)', 10), (5, 4, 'K(5,2)', 5), (6, 2, '2*K(3,3)', 9),
        (6, 3, 'T3(6)', 14), (6, 4, 'K(6,3)', 15), (6, 5, 'K(6,2)', 6),
        (7, 3, 'K(3,3)+K(4,3)', 18), (7, 4, 'T3(7)', 23), (8, 3, 'K(3,3)+T3(5)', 21),
        (8, 4, '2*K(4,3)', 36), (8, 5, 'T3(8)', 36), (9, 4, 'K(3,3)+T3(6)', 42),
        (9, 4, 'K(4,3)+T3(5)', 42), (9, 5, 'K(4,3)+K(5,3)', 60), (9, 6, 'T3(9)', 54),
        (10, 4, '2*K(3,3)+K(4,3)', 54), (10, 5, 'K(4,3)+T3(6)', 84), (10, 6, '2*K(5,3)', 100),
        (10, 7, 'T3(10)', 75), (11, 4, '2*K(3,3)+T3(5)', 63), (11, 5, 'K(3,3)+2*K(4,3)', 108),
        (11, 6, 'K(5,3)+T3(6)', 140), (11, 7, 'K(5,3)+K(6,3)', 150), (11, 8, 'T3(11)', 102),
        (12, 5, 'K(3,3)+K(4,3)+T3(5)', 126), (12, 6, '3*K(4,3)', 216),
        (12, 7, 'K(5,3)+T3(7)', 230), (12, 8, '2*K(6,3)', 225), (12, 9, 'T3(12)', 136),
    ])
    + _rows(FormulaType.T1, [
        (3, 1, 'K22+free(1)', 2), (4, 2, 'Kdef(4,1)', 5), (5, 2, 'K22+K(3,3)', 6),
        (5, 3, 'Kdef(5,1)', 9), (6, 2, 'K22+K(3,3)+free(1)', 6), (6, 3, 'K22+K(4,3)', 12),
        (6, 4, 'Kdef(6,1)', 14), (7, 3, 'K22+K(4,3)+free(1)', 12), (8, 4, 'Kdef(4,1)+K(4,3)', 30),
    ])
    + _rows(FormulaType.T2O, [
        (3, 1, 'Kdef(3,2o)', 1), (4, 2, 'Kdef(4,2o)', 4), (5, 2, 'Tdef(5,2o)', 4),
        (5, 3, 'Kdef(5,2o)', 8), (6, 2, 'Kdef(4,2o)+free(2)', 4), (6, 3, 'Tdef(6,2o)', 10),
        (6, 4, 'Kdef(6,2o)', 13), (7, 3, 'Kdef(4,2o)+K(3,3)', 12), (7, 5, 'Kdef(7,2o)', 19),
        (8, 4, 'Kdef(4,2o)+K(4,3)', 24), (8, 6, 'Kdef(8,2o)', 26),
        (9, 3, 'Kdef(4,2o)+K(3,3)+free(2)', 12), (9, 4, 'Tdef(6,2o)+K(3,3)', 30),
        (10, 4, 'Kdef(4,2o)+2*K(3,3)', 36), (10, 5, 'Tdef(6,2o)+K(4,3)', 60),
        (11, 5, 'Kdef(4,2o)+K(4,3)+K(3,3)', 72),
    ])
    + _rows(FormulaType.T2D, [
        (4, 2, '2*K22', 4), (5, 2, 'Tdef(5,2d)', 4), (5, 3, 'Kdef(5,2d)', 8),
        (6, 3, 'Tdef(6,2d)', 10), (6, 3, 'K22+Kdef(4,1)', 10), (6, 4, 'Kdef(6,2d)', 13),
        (7, 3, '2*K22+K(3,3)', 12), (8, 4, '2*Kdef(4,1)', 25), (9, 4, 'Tdef(6,2d)+K(3,3)', 30),
        (10, 5, 'Tdef(6,2d)+K(4,3)', 60), (11, 5, '2*Kdef(4,1)+K(3,3)', 75),
    ])
)
