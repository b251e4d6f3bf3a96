"""Monotone CNFs over at most 64 variables.

Clauses and variable sets are plain ints used as bitmasks: bit i set means
variable i (0-based) is present. External text is always 1-based.
"""
import sys
import random
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple
from errors import McnfFormatError, UniverseTooLarge
from utils import bits_of, iter_bits, mask_of, one_based, setup_logger


logger = setup_logger(__name__)

MAX_VARIABLES = 64
MAX_WIDTH = 3
MCNF_HEADER = 'p mcnf'


def clause_key(mask: int) -> Tuple[int, ...]:
    """Sort key giving lexicographic order on sorted index tuples."""
    return tuple(iter_bits(mask))


@dataclass(frozen=True)
class MonotoneCnf:
    """Variable universe plus a tuple of monotone clauses.

    `universe` is the bitmask of live variables. Restriction removes assigned
    variables from it, so surviving variables keep their original labels.
    Clauses are stored in canonical (lexicographic) order.
    """
    universe: int
    clauses: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.universe.bit_length() > MAX_VARIABLES:
            raise UniverseTooLarge(
                f'{self.universe.bit_length()} variables requested, the limit is {MAX_VARIABLES}'
            )
        for clause in self.clauses:
            if clause & ~self.universe:
                raise ValueError(f'clause {one_based(clause)} uses variables outside the universe')
        object.__setattr__(self, 'clauses', tuple(sorted(self.clauses, key=clause_key)))

    @classmethod
    def from_clauses(cls, n: int, clauses: Iterable[Iterable[int]]) -> 'MonotoneCnf':
        """Build a CNF on variables 0..n-1 from 0-based index lists.

        Args:
            n (int): universe size.
            clauses (Iterable[Iterable[int]]): each clause as 0-based indices.

        Returns:
            MonotoneCnf: the (not yet normalized) CNF.
        """
        if n > MAX_VARIABLES:
            raise UniverseTooLarge(f'{n} variables requested, the limit is {MAX_VARIABLES}')
        masks = []
        for clause in clauses:
            indices = list(clause)
            if len(set(indices)) != len(indices):
                raise ValueError(f'clause {indices} repeats a variable')
            if not 1 <= len(indices) <= MAX_WIDTH:
                raise ValueError(f'clause {indices} must have width 1..{MAX_WIDTH}')
            if any(index < 0 or index >= n for index in indices):
                raise ValueError(f'clause {indices} is outside 0..{n - 1}')
            masks.append(mask_of(indices))
        return cls((1 << n) - 1, tuple(masks))

    @property
    def n(self) -> int:
        return self.universe.bit_count()

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def support(self) -> int:
        """Variables that occur in at least one clause."""
        support = 0
        for clause in self.clauses:
            support |= clause
        return support

    def variables(self) -> List[int]:
        return bits_of(self.universe)

    def clauses_of_width(self, width: int) -> Tuple[int, ...]:
        return tuple(clause for clause in self.clauses if clause.bit_count() == width)

    @property
    def unit_clauses(self) -> Tuple[int, ...]:
        return self.clauses_of_width(1)

    @property
    def two_clauses(self) -> Tuple[int, ...]:
        return self.clauses_of_width(2)

    def clauses_with(self, variable: int) -> Tuple[int, ...]:
        bit = 1 << variable
        return tuple(clause for clause in self.clauses if clause & bit)

    def degree(self, variable: int) -> int:
        return len(self.clauses_with(variable))

    def as_index_lists(self) -> List[List[int]]:
        """Clauses as sorted 0-based index lists."""
        return [bits_of(clause) for clause in self.clauses]


@dataclass(frozen=True)
class PartialAssignment:
    """Variables forced into (included) or out of (excluded) a transversal."""
    included: int = 0
    excluded: int = 0

    def __post_init__(self):
        if self.included & self.excluded:
            raise ValueError(
                f'variables {one_based(self.included & self.excluded)} are both included and excluded'
            )

    @classmethod
    def of(cls, included: Iterable[int] = (), excluded: Iterable[int] = ()) -> 'PartialAssignment':
        return cls(mask_of(included), mask_of(excluded))

    @property
    def assigned(self) -> int:
        return self.included | self.excluded

    def merge(self, other: 'PartialAssignment') -> 'PartialAssignment':
        return PartialAssignment(self.included | other.included, self.excluded | other.excluded)


@dataclass(frozen=True)
class TransversalSet:
    """All transversals of size `t`, in lexicographic order."""
    t: int
    members: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'members', tuple(sorted(set(self.members), key=clause_key)))

    @property
    def count(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def as_index_lists(self) -> List[List[int]]:
        return [bits_of(member) for member in self.members]


def normalize(cnf: MonotoneCnf) -> MonotoneCnf:
    """Remove duplicate clauses and every clause that contains another one.

    Args:
        cnf (MonotoneCnf): any CNF.

    Returns:
        MonotoneCnf: an antichain with the same transversals.
    """
    kept: List[int] = []
    for clause in sorted(set(cnf.clauses), key=lambda c: (c.bit_count(), clause_key(c))):
        if any(smaller & clause == smaller for smaller in kept):
            continue
        kept.append(clause)
    return MonotoneCnf(cnf.universe, tuple(kept))


def restrict(cnf: MonotoneCnf, pa: PartialAssignment) -> Optional[MonotoneCnf]:
    """Apply a partial assignment.

    Clauses hit by an included variable disappear, excluded variables are
    deleted from the remaining clauses, and both kinds leave the universe.

    Args:
        cnf (MonotoneCnf): source CNF.
        pa (PartialAssignment): consistent assignment.

    Returns:
        Optional[MonotoneCnf]: normalized restriction, or None when a clause
        becomes empty (dead branch).
    """
    remaining = []
    for clause in cnf.clauses:
        if clause & pa.included:
            continue
        reduced = clause & ~pa.excluded
        if not reduced:
            return None
        remaining.append(reduced)
    return normalize(MonotoneCnf(cnf.universe & ~pa.assigned, tuple(remaining)))


def is_transversal(cnf: MonotoneCnf, s: int) -> bool:
    """True iff the variable set `s` meets every clause."""
    return all(clause & s for clause in cnf.clauses)


def matching_lower_bound(clauses: Sequence[int]) -> int:
    """Size of a greedy family of pairwise disjoint clauses, narrowest first."""
    used = 0
    size = 0
    for clause in sorted(clauses, key=lambda c: (c.bit_count(), clause_key(c))):
        if clause & used:
            continue
        used |= clause
        size += 1
    return size


def _greedy_upper_bound(clauses: Sequence[int]) -> int:
    remaining = list(clauses)
    size = 0
    while remaining:
        counts = {}
        for clause in remaining:
            for variable in iter_bits(clause):
                counts[variable] = counts.get(variable, 0) + 1
        best = min(counts, key=lambda v: (-counts[v], v))
        remaining = [clause for clause in remaining if not clause >> best & 1]
        size += 1
    return size


def branch_clause(clauses: Sequence[int]) -> int:
    """Narrowest clause, lowest canonical index on ties."""
    return min(clauses, key=lambda c: (c.bit_count(), clause_key(c)))


def _tau_search(clauses: Tuple[int, ...], size: int, best: List[int]) -> None:
    if not clauses:
        best[0] = min(best[0], size)
        return
    if size + matching_lower_bound(clauses) >= best[0]:
        return

    excluded = 0
    for variable in iter_bits(branch_clause(clauses)):
        bit = 1 << variable
        reduced = []
        for clause in clauses:
            if clause & bit:
                continue
            clause &= ~excluded
            if not clause:
                break
            reduced.append(clause)
        else:
            _tau_search(tuple(reduced), size + 1, best)
        excluded |= bit


def transversal_number(cnf: MonotoneCnf) -> int:
    """Minimum transversal size by branch-and-bound.

    Args:
        cnf (MonotoneCnf): CNF without empty clauses.

    Returns:
        int: tau(cnf); 0 for a CNF without clauses.
    """
    clauses = normalize(cnf).clauses
    if not clauses:
        return 0
    best = [_greedy_upper_bound(clauses)]
    _tau_search(clauses, 0, best)
    return best[0]


def brute_force_transversals(cnf: MonotoneCnf, t: int) -> TransversalSet:
    """Every size-t subset of the universe that meets all clauses.

    Args:
        cnf (MonotoneCnf): CNF.
        t (int): subset size.

    Returns:
        TransversalSet: members in lexicographic order.
    """
    members = []
    if 0 <= t <= cnf.n:
        for combo in itertools.combinations(cnf.variables(), t):
            candidate = mask_of(combo)
            if is_transversal(cnf, candidate):
                members.append(candidate)
    return TransversalSet(t, tuple(members))


def count_transversals(cnf: MonotoneCnf, t: int) -> int:
    return brute_force_transversals(cnf, t).count


def critical_clauses(cnf: MonotoneCnf, trans: int, variable: int) -> List[int]:
    """Clauses whose only member inside `trans` is `variable`."""
    bit = 1 << variable
    return [clause for clause in cnf.clauses if clause & trans == bit]


def verify_critical_clauses(cnf: MonotoneCnf, trans: int) -> bool:
    """True iff every member of `trans` owns a critical clause."""
    return all(critical_clauses(cnf, trans, variable) for variable in iter_bits(trans))


def relabel(cnf: MonotoneCnf, permutation: Sequence[int]) -> MonotoneCnf:
    """Rename variable i to permutation[i].

    Args:
        cnf (MonotoneCnf): CNF whose universe lies inside range(len(permutation)).
        permutation (Sequence[int]): a permutation of range(len(permutation)).

    Returns:
        MonotoneCnf: the relabelled CNF.
    """
    def image(mask: int) -> int:
        return mask_of(permutation[index] for index in iter_bits(mask))

    return MonotoneCnf(image(cnf.universe), tuple(image(clause) for clause in cnf.clauses))


def serialize_mcnf(cnf: MonotoneCnf, comments: Iterable[str] = ()) -> str:
    """Write MCNF v1 text.

    The universe is written as 1..n where n is the highest live index + 1.
    """
    lines = [f'c {comment}' for comment in comments]
    lines.append(f'{MCNF_HEADER} {cnf.universe.bit_length()} {cnf.m}')
    for clause in cnf.clauses:
        lines.append(' '.join(str(index) for index in one_based(clause)))
    return '\n'.join(lines) + '\n'


def parse_mcnf(text: str) -> MonotoneCnf:
    """Read MCNF v1 text.

    Args:
        text (str): header `p mcnf <n> <m>`, then m clause lines of 1-based
            indices. Lines starting with `c` are comments.

    Returns:
        MonotoneCnf: the CNF as written (not normalized).
    """
    n = None
    m = 0
    clauses = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == 'c' or line.startswith('c '):
            continue

        if n is None:
            parts = line.split()
            if len(parts) != 4 or ' '.join(parts[:2]) != MCNF_HEADER:
                raise McnfFormatError(line_number, f'expected "{MCNF_HEADER} <n> <m>", got {line!r}')
            if not (parts[2].isdigit() and parts[3].isdigit()):
                raise McnfFormatError(line_number, 'n and m must be non-negative integers')
            n, m = int(parts[2]), int(parts[3])
            if n > MAX_VARIABLES:
                raise McnfFormatError(line_number, f'n={n} exceeds {MAX_VARIABLES}')
            continue

        try:
            indices = [int(token) for token in line.split()]
        except ValueError:
            raise McnfFormatError(line_number, f'non-integer token in {line!r}')
        if not 1 <= len(indices) <= MAX_WIDTH:
            raise McnfFormatError(line_number, f'clause width must be 1..{MAX_WIDTH}')
        if len(set(indices)) != len(indices):
            raise McnfFormatError(line_number, 'clause repeats a variable')
        if any(index < 1 or index > n for index in indices):
            raise McnfFormatError(line_number, f'variable index outside 1..{n}')
        clauses.append([index - 1 for index in indices])

    if n is None:
        raise McnfFormatError(0, 'missing header')
    if len(clauses) != m:
        raise McnfFormatError(0, f'header announces {m} clauses, found {len(clauses)}')
    return MonotoneCnf.from_clauses(n, clauses)


def read_mcnf(source: str) -> MonotoneCnf:
    """Read MCNF from a file path, or from stdin when source is '-'."""
    if source == '-':
        return parse_mcnf(sys.stdin.read())
    with open(source, 'r') as f:
        return parse_mcnf(f.read())


def random_cnf(rng: random.Random, n: int, m: int, weights: Sequence[int] = (1, 3, 12)) -> MonotoneCnf:
    """Normalized random CNF on n variables from m drawn clauses.

    Args:
        rng (random.Random): source of randomness.
        n (int): universe size, at least 3.
        m (int): clauses drawn before normalization.
        weights (Sequence[int], optional): relative odds of widths 1, 2 and 3.
            Defaults to (1, 3, 12).

    Returns:
        MonotoneCnf: the normalized CNF.
    """
    clauses = []
    for _ in range(m):
        width = rng.choices((1, 2, 3), weights=weights)[0]
        clauses.append(rng.sample(range(n), width))
    return normalize(MonotoneCnf.from_clauses(n, clauses))
