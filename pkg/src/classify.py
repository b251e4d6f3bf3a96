"""Formula types and the structural properties that select a branching rule.

Detection is deterministic: variables are scanned in ascending order and
clauses in canonical order, so the first witness found is the least one.
"""
import re
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum, auto
from typing import Dict, Iterable, List, Optional, Tuple
import networkx as nx
from cnf import MonotoneCnf, clause_key, transversal_number
from errors import NoPropertyFound
from utils import bits_of, iter_bits, lowest_bit, mask_of, setup_logger


logger = setup_logger(__name__)


class FormulaType(Enum):
    T0 = '0'
    T1 = '1'
    T2O = '2o'
    T2D = '2d'
    T3 = '3'
    T4 = '4'

    @property
    def rank(self) -> int:
        return TAG_RANKS[self.value]

    @classmethod
    def parse(cls, text) -> 'FormulaType':
        """Accept `2o`, `T2o`, `t2d`, `3x` and the like."""
        tag = re.sub(r'^[tT]', '', str(text)).lower()
        if tag == '3x':
            tag = '3'
        for formula_type in cls:
            if formula_type.value == tag:
                return formula_type
        raise ValueError(f'unknown formula type {text!r}')

    def __str__(self) -> str:
        return f'T{self.value}'


# '2' marks a row whose restriction is of type 2o or 2d.
TAG_RANKS: Dict[str, int] = {'0': 0, '1': 1, '2o': 2, '2d': 2, '2': 2, '3': 3, '4': 4}


class ConfigKind(Enum):
    PAIR_IN_GE3_CLAUSES = auto()
    VAR_IN_GE3_CLAUSES = auto()
    PAIR_IN_EXACTLY_2 = auto()
    TRIANGLE = auto()
    E_CONFIG = auto()
    UNIQUE_VAR = auto()
    PATH = auto()
    CYCLE = auto()


@dataclass(frozen=True)
class Configuration:
    kind: ConfigKind
    clauses: Tuple[int, ...]
    variables: Tuple[int, ...]


@dataclass(frozen=True)
class PropertyMatch:
    """A branching property found in a CNF.

    `binding` maps the letters of the case table to variables. `cores` are
    the branching variables in table order; `core_letters` names them.
    """
    property_id: str
    rule_id: str
    anchor: Tuple[int, ...]
    cores: Tuple[int, ...]
    core_letters: Tuple[str, ...]
    binding: Tuple[Tuple[str, int], ...]

    def var(self, letter: str) -> int:
        return dict(self.binding)[letter]


def _match(rule_id: str, anchor: Iterable[int], core_letters: str, binding: Dict[str, int]) -> PropertyMatch:
    return PropertyMatch(
        property_id=rule_id.split(':')[0],
        rule_id=rule_id,
        anchor=tuple(anchor),
        cores=tuple(binding[letter] for letter in core_letters),
        core_letters=tuple(core_letters),
        binding=tuple(binding.items()),
    )


def _pair(u: int, v: int) -> int:
    return 1 << u | 1 << v


class _Index:
    """Occurrence lists of one CNF."""

    def __init__(self, cnf: MonotoneCnf):
        self.cnf = cnf
        self.threes = cnf.clauses_of_width(3)
        self.twos = cnf.two_clauses
        self.clause_set = frozenset(cnf.clauses)
        self.occ: Dict[int, List[int]] = defaultdict(list)
        self.occ3: Dict[int, List[int]] = defaultdict(list)
        self.pairs: Dict[Tuple[int, int], List[int]] = defaultdict(list)
        for clause in cnf.clauses:
            members = bits_of(clause)
            for v in members:
                self.occ[v].append(clause)
            if len(members) == 3:
                for v in members:
                    self.occ3[v].append(clause)
                a, b, c = members
                for key in ((a, b), (a, c), (b, c)):
                    self.pairs[key].append(clause)

    @property
    def support(self) -> List[int]:
        return sorted(v for v in self.occ if self.occ[v])

    def degree(self, v: int) -> int:
        return len(self.occ[v])

    def sorted_pairs(self) -> List[Tuple[Tuple[int, int], List[int]]]:
        return sorted(self.pairs.items())

    def only(self, x: int, y: int) -> List[int]:
        """3-clauses containing x but not y."""
        return [clause for clause in self.occ3[x] if not clause >> y & 1]

    def both(self, x: int, y: int) -> List[int]:
        return self.pairs.get((min(x, y), max(x, y)), [])


def _third(clause: int, *members: int) -> int:
    return lowest_bit(clause & ~mask_of(members))


def _others(clause: int, *members: int) -> List[int]:
    return bits_of(clause & ~mask_of(members))


def two_clause_graph(cnf: MonotoneCnf) -> nx.Graph:
    """The 2-clauses of a CNF as an undirected graph on their variables."""
    graph = nx.Graph()
    for clause in cnf.two_clauses:
        u, v = bits_of(clause)
        graph.add_edge(u, v)
    return graph


def formula_type(cnf: MonotoneCnf) -> FormulaType:
    """Type of a CNF, from the number and overlap of its 2-clauses.

    Three 2-clauses through one variable form a star, which the type-3
    tables exclude; such CNFs are handled as type 4.
    """
    twos = cnf.two_clauses
    if len(twos) == 0:
        return FormulaType.T0
    if len(twos) == 1:
        return FormulaType.T1
    if len(twos) == 2:
        return FormulaType.T2O if twos[0] & twos[1] else FormulaType.T2D
    if len(twos) == 3:
        return FormulaType.T4 if twos[0] & twos[1] & twos[2] else FormulaType.T3
    return FormulaType.T4


def _component_configuration(cnf: MonotoneCnf, kind: ConfigKind, length: int) -> Optional[Configuration]:
    graph = two_clause_graph(cnf)
    for component in sorted(nx.connected_components(graph), key=min):
        sub = graph.subgraph(component)
        if sub.number_of_edges() != length or max(d for _, d in sub.degree()) > 2:
            continue
        if kind == ConfigKind.PATH and sub.number_of_nodes() == length + 1:
            start = min(v for v, d in sub.degree() if d == 1)
            order = list(nx.dfs_preorder_nodes(sub, start))
            clauses = tuple(_pair(u, v) for u, v in zip(order, order[1:]))
            return Configuration(kind, clauses, tuple(order))
        if kind == ConfigKind.CYCLE and sub.number_of_nodes() == length:
            order = sorted(component)
            clauses = tuple(sorted((_pair(u, v) for u, v in sub.edges()), key=clause_key))
            return Configuration(kind, clauses, tuple(order))
    return None


def _triangle(ix: _Index) -> Optional[Configuration]:
    threes = ix.threes
    for i, first in enumerate(threes):
        for second in threes[i + 1:]:
            common = first & second
            if common.bit_count() != 1:
                continue
            b = lowest_bit(common)
            for a in _others(first, b):
                d = _third(first, a, b)
                for c in _others(second, b):
                    e = _third(second, b, c)
                    for third in ix.both(a, c):
                        f = _third(third, a, c)
                        if mask_of((d, e, f)) & mask_of((a, b, c)):
                            continue
                        return Configuration(ConfigKind.TRIANGLE, (first, second, third), (a, b, c, d, e, f))
    return None


def _e_config(ix: _Index) -> Optional[Configuration]:
    for spine in ix.threes:
        arms = []
        for x in bits_of(spine):
            rest = spine & ~(1 << x)
            arm = next((clause for clause in ix.occ3[x] if not clause & rest), None)
            if arm is None:
                break
            arms.append(arm)
        else:
            a, b, c = bits_of(spine)
            d, e = _others(arms[0], a)
            f, g = _others(arms[1], b)
            h, i = _others(arms[2], c)
            return Configuration(ConfigKind.E_CONFIG, (spine, *arms), (a, b, c, d, e, f, g, h, i))
    return None


def detect_configuration(cnf: MonotoneCnf, kind: ConfigKind, length: int = 3) -> Optional[Configuration]:
    """Find the least witness of a configuration.

    Args:
        cnf (MonotoneCnf): normalized CNF.
        kind (ConfigKind): configuration to look for.
        length (int, optional): edges of a PATH or CYCLE among the
            2-clauses. Defaults to 3.

    Returns:
        Optional[Configuration]: the witness, or None when absent.
    """
    ix = _Index(cnf)
    if kind == ConfigKind.PAIR_IN_GE3_CLAUSES:
        for key, clauses in ix.sorted_pairs():
            if len(clauses) >= 3:
                return Configuration(kind, tuple(clauses[:3]), key)
    elif kind == ConfigKind.PAIR_IN_EXACTLY_2:
        for key, clauses in ix.sorted_pairs():
            if len(clauses) == 2:
                return Configuration(kind, tuple(clauses), key)
    elif kind == ConfigKind.VAR_IN_GE3_CLAUSES:
        for v in ix.support:
            if len(ix.occ3[v]) >= 3:
                return Configuration(kind, tuple(ix.occ3[v][:3]), (v,))
    elif kind == ConfigKind.UNIQUE_VAR:
        for v in ix.support:
            if ix.degree(v) == 1:
                return Configuration(kind, tuple(ix.occ[v]), (v,))
    elif kind == ConfigKind.TRIANGLE:
        return _triangle(ix)
    elif kind == ConfigKind.E_CONFIG:
        return _e_config(ix)
    elif kind in (ConfigKind.PATH, ConfigKind.CYCLE):
        return _component_configuration(cnf, kind, length)
    return None


def _find_t0(ix: _Index) -> Optional[PropertyMatch]:
    for (u, v), clauses in ix.sorted_pairs():
        if len(clauses) < 3:
            continue
        a, b, variant = u, v, 'B'
        if all(clause >> b & 1 for clause in ix.occ[a]):
            variant = 'A'
        elif all(clause >> a & 1 for clause in ix.occ[b]):
            a, b, variant = b, a, 'A'
        anchor = clauses[:3]
        c, d, e = (_third(clause, a, b) for clause in anchor)
        return _match(f'P0_1:{variant}', anchor, 'ab', dict(a=a, b=b, c=c, d=d, e=e))

    for v in ix.support:
        if len(ix.occ3[v]) >= 3:
            anchor = ix.occ3[v][:3]
            b, c = _others(anchor[0], v)
            d, e = _others(anchor[1], v)
            f, g = _others(anchor[2], v)
            return _match('P0_2', anchor, 'a', dict(a=v, b=b, c=c, d=d, e=e, f=f, g=g))

    for (u, v), clauses in ix.sorted_pairs():
        if len(clauses) == 2:
            c, d = (_third(clause, u, v) for clause in clauses)
            return _match('P0_3', clauses, 'a', dict(a=u, b=v, c=c, d=d))

    triangle = _triangle(ix)
    if triangle:
        binding = dict(zip('abcdef', triangle.variables))
        return _match('P0_4', triangle.clauses, 'abc', binding)

    e_config = _e_config(ix)
    if e_config:
        binding = dict(zip('abcdefghi', e_config.variables))
        return _match('P0_5', e_config.clauses, 'abc', binding)

    for v in ix.support:
        if ix.degree(v) != 1:
            continue
        (clause,) = ix.occ[v]
        p, q = _others(clause, v)
        for unique, rest in ((p, q), (q, p)):
            if ix.degree(unique) == 1:
                return _match('P0_6:B', [clause], 'cab', dict(a=v, b=unique, c=rest))
        b_clause = next((cl for cl in ix.only(p, q) if cl != clause), None)
        c_clause = next((cl for cl in ix.only(q, p) if cl != clause), None)
        if b_clause is None or c_clause is None:
            continue
        d, e = _others(b_clause, p)
        f, g = _others(c_clause, q)
        binding = dict(a=v, b=p, c=q, d=d, e=e, f=f, g=g)
        return _match('P0_6:A', [clause, b_clause, c_clause], 'abc', binding)
    return None


def _find_t1(ix: _Index) -> Optional[PropertyMatch]:
    (two,) = ix.twos
    u, v = bits_of(two)
    for a, b in ((u, v), (v, u)):
        if ix.degree(a) == 1:
            return _match('P1_1', [two], 'a', dict(a=a, b=b))
    clause = ix.occ3[u][0]
    c, d = _others(clause, u)
    return _match('P1_2', [two, clause], 'a', dict(a=u, b=v, c=c, d=d))


def _find_t2o_even(ix: _Index, a: int, b: int, c: int) -> Optional[PropertyMatch]:
    if ix.occ3[a]:
        clause = ix.occ3[a][0]
        d, e = _others(clause, a)
        return _match('P2o_1', [_pair(a, b), _pair(a, c), clause], 'a', dict(a=a, b=b, c=c, d=d, e=e))

    orientations = ((b, c), (c, b))
    for x, y in orientations:
        clauses = ix.occ3[x]
        if len(clauses) < 3:
            continue
        three = clauses[:3]
        pairs = [clause & ~(1 << x) for clause in three]
        anchor = [_pair(a, x), _pair(a, y)] + three
        common = pairs[0] & pairs[1] & pairs[2]
        if common:
            d = lowest_bit(common)
            e, g, i = (lowest_bit(pair & ~(1 << d)) for pair in pairs)
            return _match('P2o_2:2', anchor, 'bd', dict(a=a, b=x, c=y, d=d, e=e, g=g, i=i))
        (d, e), (f, g), (h, i) = (bits_of(pair) for pair in pairs)
        binding = dict(a=a, b=x, c=y, d=d, e=e, f=f, g=g, h=h, i=i)
        return _match('P2o_2:1', anchor, 'b', binding)

    for x, y in orientations:
        if ix.degree(x) == 1:
            return _match('P2o_3', [_pair(a, x), _pair(a, y)], 'ab', dict(a=a, b=x, c=y))

    both = ix.both(b, c)
    if len(both) >= 2:
        d, e = (_third(clause, b, c) for clause in both[:2])
        return _match('P2o_4', [_pair(a, b), _pair(a, c)] + both[:2], 'abc', dict(a=a, b=b, c=c, d=d, e=e))

    only_b, only_c = ix.only(b, c), ix.only(c, b)
    if len(both) == 1 and len(only_b) == 1 and len(only_c) == 1:
        d = _third(both[0], b, c)
        x, y, x_clause, y_clause = b, c, only_b[0], only_c[0]
        if not x_clause >> d & 1 and y_clause >> d & 1:
            x, y, x_clause, y_clause = c, b, only_c[0], only_b[0]
        anchor = [_pair(a, x), _pair(a, y), both[0], x_clause, y_clause]
        g, h = _others(y_clause, y)
        if x_clause >> d & 1:
            f = _third(x_clause, x, d)
            return _match('P2o_5:2', anchor, 'bc', dict(a=a, b=x, c=y, d=d, e=d, f=f, g=g, h=h))
        e, f = _others(x_clause, x)
        return _match('P2o_5:1', anchor, 'bc', dict(a=a, b=x, c=y, d=d, e=e, f=f, g=g, h=h))

    for x, y in orientations:
        only_x, only_y = ix.only(x, y), ix.only(y, x)
        for x_clause in only_x:
            shared = x_clause & ~(1 << x)
            if shared & (1 << a):
                continue
            y_clause = next((cl for cl in only_y if cl & ~(1 << y) == shared), None)
            extra = next((cl for cl in only_x if cl != x_clause), None)
            if y_clause is None or extra is None:
                continue
            d, e = bits_of(shared)
            f, g = _others(extra, x)
            anchor = [_pair(a, x), _pair(a, y), x_clause, y_clause, extra]
            return _match('P2o_6', anchor, 'ab', dict(a=a, b=x, c=y, d=d, e=e, f=f, g=g))

    if len(only_b) == 2 and len(only_c) == 2:
        return _p2o_7(a, b, c, only_b, only_c)

    for x, y in orientations:
        only_x, only_y = ix.only(x, y), ix.only(y, x)
        if len(only_x) != 2 or len(only_y) != 1:
            continue
        px = [clause & ~(1 << x) for clause in only_x]
        py = only_y[0] & ~(1 << y)
        anchor = [_pair(a, x), _pair(a, y)] + only_x + only_y
        common = px[0] & px[1] & py
        if common:
            d = lowest_bit(common)
            e, g, ee = (lowest_bit(pair & ~(1 << d)) for pair in (px[0], px[1], py))
            binding = dict(a=a, b=x, c=y, d=d, e=e, f=d, g=g, dd=d, ee=ee)
            return _match('P2o_8:2', anchor, 'abcd', binding)
        (d, e), (f, g), (dd, ee) = bits_of(px[0]), bits_of(px[1]), bits_of(py)
        binding = dict(a=a, b=x, c=y, d=d, e=e, f=f, g=g, dd=dd, ee=ee)
        return _match('P2o_8:1', anchor, 'abc', binding)

    if ix.occ3[b] == ix.occ3[c] and len(ix.occ3[b]) == 1:
        clause = ix.occ3[b][0]
        d = _third(clause, b, c)
        anchor = [_pair(a, b), _pair(a, c), clause]
        if ix.degree(d) == 1:
            return _match('P2o_9:1', anchor, 'abc', dict(a=a, b=b, c=c, d=d))
        other = next(cl for cl in ix.occ[d] if cl != clause)
        f, g = _others(other, d)
        return _match('P2o_9:2', anchor + [other], 'abc', dict(a=a, b=b, c=c, d=d, f=f, g=g))

    if len(ix.occ3[b]) == 1 and len(ix.occ3[c]) == 1 and not both:
        b_clause, c_clause = ix.occ3[b][0], ix.occ3[c][0]
        d, e = _others(b_clause, b)
        f, g = _others(c_clause, c)
        anchor = [_pair(a, b), _pair(a, c), b_clause, c_clause]
        return _match('P2o_10', anchor, 'ab', dict(a=a, b=b, c=c, d=d, e=e, f=f, g=g))
    return None


def _p2o_7(a: int, b: int, c: int, only_b: List[int], only_c: List[int]) -> PropertyMatch:
    pb = [clause & ~(1 << b) for clause in only_b]
    pc = [clause & ~(1 << c) for clause in only_c]
    counts: Dict[int, int] = defaultdict(int)
    for pair in pb + pc:
        for v in iter_bits(pair):
            counts[v] += 1
    in_all = sorted(v for v, k in counts.items() if k == 4)
    in_three = sorted(v for v, k in counts.items() if k == 3)

    if in_all:
        d = in_all[0]
        e, g = (lowest_bit(pair & ~(1 << d)) for pair in pb)
        ee, gg = (lowest_bit(pair & ~(1 << d)) for pair in pc)
        anchor = [_pair(a, b), _pair(a, c)] + only_b + only_c
        return _match('P2o_7:3', anchor, 'abcd', dict(a=a, b=b, c=c, d=d, e=e, g=g, ee=ee, gg=gg))

    if in_three:
        d = in_three[0]
        if not all(pair >> d & 1 for pair in pb):
            b, c, pb, pc, only_b, only_c = c, b, pc, pb, only_c, only_b
        if not pc[0] >> d & 1:
            pc, only_c = pc[::-1], only_c[::-1]
        e, g = (lowest_bit(pair & ~(1 << d)) for pair in pb)
        ee = lowest_bit(pc[0] & ~(1 << d))
        ff, gg = bits_of(pc[1])
        anchor = [_pair(a, b), _pair(a, c)] + only_b + only_c
        binding = dict(a=a, b=b, c=c, d=d, e=e, g=g, dd=d, ee=ee, ff=ff, gg=gg)
        return _match('P2o_7:2', anchor, 'abcd', binding)

    (d, e), (f, g) = bits_of(pb[0]), bits_of(pb[1])
    (dd, ee), (ff, gg) = bits_of(pc[0]), bits_of(pc[1])
    anchor = [_pair(a, b), _pair(a, c)] + only_b + only_c
    binding = dict(a=a, b=b, c=c, d=d, e=e, f=f, g=g, dd=dd, ee=ee, ff=ff, gg=gg)
    return _match('P2o_7:1', anchor, 'abc', binding)


def _find_t2o(ix: _Index, odd: bool) -> Optional[PropertyMatch]:
    first, second = ix.twos
    a = lowest_bit(first & second)
    b, c = sorted((_third(first, a), _third(second, a)))
    if odd:
        return _match('P2o_odd', [_pair(a, b), _pair(a, c)], 'a', dict(a=a, b=b, c=c))
    return _find_t2o_even(ix, a, b, c)


def _find_t2d(ix: _Index) -> Optional[PropertyMatch]:
    first, second = ix.twos
    a, b = bits_of(first)
    c, d = bits_of(second)
    partner = {a: b, b: a, c: d, d: c}
    clause_of = {a: first, b: first, c: second, d: second}
    spine = first | second

    def relabel(x: int, y: int) -> Dict[str, int]:
        """x becomes a, y becomes c; both partners follow."""
        return dict(a=x, b=partner[x], c=y, d=partner[y])

    for x in (a, b, c, d):
        clauses = ix.occ3[x]
        if len(clauses) < 2:
            continue
        y = min(v for v in (a, b, c, d) if clause_of[v] != clause_of[x])
        one, two = clauses[:2]
        p1, p2 = one & ~(1 << x), two & ~(1 << x)
        anchor = [clause_of[x], clause_of[y], one, two]
        common = p1 & p2 & ~clause_of[x] & spine
        if common:
            shared = lowest_bit(common)
            binding = relabel(x, partner[shared])
            f, h = _third(p1, shared), _third(p2, shared)
            binding.update(e=shared, f=f, g=shared, h=h)
            return _match('P2d_1:2', anchor, 'abd', binding)
        binding = relabel(x, y)
        (e, f), (g, h) = bits_of(p1), bits_of(p2)
        binding.update(e=e, f=f, g=g, h=h)
        return _match('P2d_1:1', anchor, 'ab', binding)

    for clause in ix.threes:
        for x in bits_of(clause & first):
            for y in bits_of(clause & second):
                binding = relabel(x, y)
                binding['e'] = _third(clause, x, y)
                return _match('P2d_2', [first, second, clause], 'a', binding)

    for (e, f), clauses in ix.sorted_pairs():
        if _pair(e, f) & spine:
            continue
        hits = [(clause, _third(clause, e, f)) for clause in clauses]
        hits = [(clause, v) for clause, v in hits if spine >> v & 1]
        if len(hits) < 2:
            continue
        (g_clause, g), (h_clause, h) = hits[:2]
        anchor = [first, second, g_clause, h_clause]
        if clause_of[g] != clause_of[h]:
            binding = relabel(g, h)
            binding.update(e=e, f=f)
            return _match('P2d_3:1', anchor, 'ac', binding)
        other = second if clause_of[g] == first else first
        c2, d2 = bits_of(other)
        binding = dict(a=g, b=h, c=c2, d=d2, e=e, f=f)
        if ix.degree(e) == 2 or ix.degree(f) == 2:
            return _match('P2d_3:2', anchor, 'abef', binding)
        return _match('P2d_3:3', anchor, 'abef', binding)

    for x in (a, b, c, d):
        if ix.degree(x) == 1:
            y = min(v for v in (a, b, c, d) if clause_of[v] != clause_of[x])
            return _match('P2d_4', [clause_of[x], clause_of[y]], 'ab', relabel(x, y))

    for x in (a, b, c, d):
        y = partner[x]
        for x_clause in ix.occ3[x]:
            for y_clause in ix.occ3[y]:
                if x_clause & ~(1 << x) == y_clause & ~(1 << y):
                    continue
                e, f = _others(x_clause, x)
                g, h = _others(y_clause, y)
                other = second if clause_of[x] == first else first
                c2, d2 = bits_of(other)
                binding = dict(a=x, b=y, c=c2, d=d2, e=e, f=f, g=g, h=h)
                return _match('P2d_5', [clause_of[x], other, x_clause, y_clause], 'ab', binding)
    return None


def _find_t3(ix: _Index, odd: bool) -> Optional[PropertyMatch]:
    cnf = ix.cnf
    twos = list(ix.twos)
    path = _component_configuration(cnf, ConfigKind.PATH, 3)
    if path:
        a, b, c, d = path.variables
        for order in ((a, b, c, d), (d, c, b, a)):
            if ix.degree(order[1]) == 2:
                return _match('P3p_1', twos, 'abcd', dict(zip('abcd', order)))
        clause = ix.occ3[b][0]
        e, f = _others(clause, b)
        return _match('P3p_2', twos + [clause], 'b', dict(a=a, b=b, c=c, d=d, e=e, f=f))

    cycle = _component_configuration(cnf, ConfigKind.CYCLE, 3)
    if cycle:
        triangle = cycle.variables
        outside = {v: ix.degree(v) - 2 for v in triangle}
        for wanted, rule_id in ((0, 'P3t_1'), (1, 'P3t_2')):
            chosen = [v for v in triangle if outside[v] == wanted]
            if chosen:
                a = chosen[0]
                b, c = (v for v in triangle if v != a)
                binding = dict(a=a, b=b, c=c)
                anchor = list(twos)
                if wanted == 1:
                    clause = ix.occ3[a][0]
                    binding['d'], binding['e'] = _others(clause, a)
                    anchor.append(clause)
                return _match(rule_id, anchor, 'abc', binding)
        return _match('P3t_3', twos, 'abc', dict(zip('abc', triangle)))

    graph = two_clause_graph(cnf)
    isolated = [clause for clause in twos if all(graph.degree(v) == 1 for v in iter_bits(clause))]
    for iso in isolated:
        rest = [clause for clause in twos if clause != iso]
        match = _isolated_odd(ix, iso, rest) if odd else _isolated_even(ix, iso, rest)
        if match:
            return match
    return None


def _isolated_odd(ix: _Index, iso: int, rest: List[int]) -> PropertyMatch:
    p, q = bits_of(iso)
    anchor = [iso] + rest
    if (rest[0] | rest[1]).bit_count() == 3:
        return _match('P3io_1', anchor, 'a', dict(a=p, b=q))
    for a, b in ((p, q), (q, p)):
        if ix.degree(a) == 1:
            return _match('P3io_2', anchor, 'a', dict(a=a, b=b))
    return _match('P3io_3', anchor + [ix.occ3[p][0]], 'a', dict(a=p, b=q))


def _isolated_even(ix: _Index, iso: int, rest: List[int]) -> Optional[PropertyMatch]:
    p, q = bits_of(iso)
    anchor = [iso] + rest
    covered = rest[0] | rest[1]
    six = iso | covered
    overlap = covered.bit_count() == 3
    ends = ((p, q), (q, p))

    for a, b in ends:
        if ix.degree(a) == 1:
            return _match('P3ie_1', anchor, 'a', dict(a=a, b=b))

    def partners(v: int) -> List[int]:
        return [_third(clause, v) for clause in rest if clause >> v & 1]

    for shared_wanted, rule_id in ((False, 'P3ie_2'), (True, 'P3ie_3')):
        for a, b in ends:
            for clause in ix.occ3[a]:
                for v in bits_of(clause & covered):
                    mates = partners(v)
                    if (len(mates) == 2) != shared_wanted:
                        continue
                    binding = dict(a=a, b=b, c=v, d=mates[0], x=_third(clause, a, v))
                    if shared_wanted:
                        binding['e'] = mates[1]
                    return _match(rule_id, anchor + [clause], 'abc', binding)

    if overlap:
        for a, b in ends:
            for clause in ix.occ3[a]:
                if not clause & covered:
                    return _match('P3ie_4', anchor + [clause], 'a', dict(a=a, b=b))
        return None

    for a, b in ends:
        outer_a = [clause for clause in ix.occ3[a] if not clause & six & ~(1 << a)]
        for v in bits_of(covered):
            outer_v = [clause for clause in ix.occ3[v] if not clause & six & ~(1 << v)]
            for x_clause in outer_a:
                for y_clause in outer_v:
                    if x_clause & ~(1 << a) == y_clause & ~(1 << v):
                        continue
                    binding = dict(a=a, b=b, c=v, d=partners(v)[0])
                    return _match('P3ie_5', anchor + [x_clause, y_clause], 'abcd', binding)

    for a, b in ends:
        outer_a = [clause for clause in ix.occ3[a] if not clause & six & ~(1 << a)]
        if len(outer_a) >= 2:
            return _match('P3ie_6', anchor + outer_a[:2], 'a', dict(a=a, b=b))
    return None


def _find_t4(ix: _Index) -> Optional[PropertyMatch]:
    graph = two_clause_graph(ix.cnf)
    if all(d == 1 for _, d in graph.degree()):
        first = ix.twos[0]
        a, b = bits_of(first)
        return _match('P4_1', [first], 'a', dict(a=a, b=b))
    for wanted, rule_id in ((2, 'P4_2'), (3, 'P4_3')):
        for a in sorted(graph.nodes):
            degree = graph.degree(a)
            if degree == wanted or (wanted == 3 and degree > 3):
                neighbours = sorted(graph.neighbors(a))[:wanted]
                binding = dict(a=a, **dict(zip('bcd', neighbours)))
                anchor = [_pair(a, v) for v in neighbours]
                return _match(rule_id, anchor, 'ab', binding)
    return None


def find_property(cnf: MonotoneCnf, formula_type: FormulaType, t: Optional[int] = None) -> PropertyMatch:
    """First branching property of the type that holds, with its least witness.

    Args:
        cnf (MonotoneCnf): normalized CNF without unit clauses.
        formula_type (FormulaType): type of the CNF.
        t (Optional[int], optional): threshold, which fixes the parity of
            s = 3t - n. Defaults to the transversal number.

    Raises:
        NoPropertyFound: no property of the type matches.

    Returns:
        PropertyMatch: the match.
    """
    if t is None:
        t = transversal_number(cnf)
    odd = (3 * t - cnf.n) % 2 == 1
    ix = _Index(cnf)
    if formula_type == FormulaType.T0:
        match = _find_t0(ix)
    elif formula_type == FormulaType.T1:
        match = _find_t1(ix)
    elif formula_type == FormulaType.T2O:
        match = _find_t2o(ix, odd)
    elif formula_type == FormulaType.T2D:
        match = _find_t2d(ix)
    elif formula_type == FormulaType.T3:
        match = _find_t3(ix, odd)
    else:
        match = _find_t4(ix)
    if match is None:
        raise NoPropertyFound(f'no {formula_type} property matches a CNF with {cnf.m} clauses')
    return match


# Clauses each property names explicitly, written with case-table letters.
_REQUIRED_CLAUSES: Dict[str, Tuple[str, ...]] = {
    'P0_3': ('abc', 'abd'),
    'P0_4': ('abd', 'bce', 'acf'),
    'P0_5': ('abc', 'ade', 'bfg', 'chi'),
    'P0_6': ('abc',),
    'P1_1': ('ab',),
    'P1_2': ('ab', 'acd'),
    'P2o_1': ('ab', 'ac', 'ade'),
    'P2o_3': ('ab', 'ac'),
    'P2o_4': ('ab', 'ac', 'bcd', 'bce'),
    'P2o_6': ('ab', 'ac', 'bde', 'cde', 'bfg'),
    'P2o_9': ('ab', 'ac', 'bcd'),
    'P2o_10': ('ab', 'ac', 'bde', 'cfg'),
    'P2d_1': ('ab', 'cd', 'aef'),
    'P2d_2': ('ab', 'cd', 'ace'),
    'P2d_3': ('ab', 'cd'),
    'P2d_4': ('ab', 'cd'),
    'P2d_5': ('ab', 'cd', 'aef', 'bgh'),
    'P3p_1': ('ab', 'bc', 'cd'),
    'P3p_2': ('ab', 'bc', 'cd', 'bef'),
    'P3t_1': ('ab', 'bc', 'ac'),
    'P3t_2': ('ab', 'bc', 'ac', 'ade'),
    'P3t_3': ('ab', 'bc', 'ac'),
    'P4_1': ('ab',),
    'P4_2': ('ab', 'ac'),
    'P4_3': ('ab', 'ac', 'ad'),
}


def check_property(cnf: MonotoneCnf, match: PropertyMatch) -> bool:
    """Re-check a match against the CNF without reusing the detection code.

    Args:
        cnf (MonotoneCnf): the CNF the match was found in.
        match (PropertyMatch): the match to check.

    Returns:
        bool: True iff the anchor is present and the property's defining
        condition holds for the bound variables.
    """
    present = set(cnf.clauses)
    if not all(clause in present for clause in match.anchor):
        return False
    if len(set(match.cores)) != len(match.cores):
        return False
    binding = dict(match.binding)

    def clause(letters: str) -> int:
        return mask_of(binding[letter] for letter in letters)

    for letters in _REQUIRED_CLAUSES.get(match.property_id, ()):
        if any(letter not in binding for letter in letters):
            return False
        if clause(letters) not in present:
            return False

    threes = cnf.clauses_of_width(3)
    pid = match.property_id
    a = binding.get('a')
    if pid == 'P0_1':
        ab = clause('ab')
        return sum(1 for c in threes if c & ab == ab) >= 3
    if pid == 'P0_2':
        return sum(1 for c in threes if c >> a & 1) >= 3
    if pid == 'P0_3':
        ab = clause('ab')
        return sum(1 for c in threes if c & ab == ab) == 2
    if pid == 'P0_4':
        return not clause('def') & clause('abc')
    if pid == 'P0_6':
        return cnf.degree(a) == 1
    if pid == 'P1_1':
        return cnf.degree(a) == 1
    if pid == 'P2o_3':
        return cnf.degree(binding['b']) == 1
    if pid in ('P2d_4', 'P3ie_1', 'P3io_2'):
        return cnf.degree(a) == 1
    if pid.startswith('P3i'):
        graph = two_clause_graph(cnf)
        return clause('ab') in present and graph.degree(a) == 1 and graph.degree(binding['b']) == 1
    if pid == 'P3t_1':
        return cnf.degree(a) == 2
    if pid == 'P3p_1':
        return cnf.degree(binding['b']) == 2
    return True
