"""Enumeration of minimum transversals by structured branching.

Every node of the search is self-contained: once a partial assignment is
applied, the extensions of the assignment to minimum transversals of the
input are exactly the minimum transversals of the restricted CNF at the
remaining size. Propagation therefore only ever looks at the node's own
clauses.
"""
import itertools
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple, Union
from bounds import Comparison, certifiable_bound, deficit, six_quarter_compare
from classify import TAG_RANKS, FormulaType, PropertyMatch, find_property, formula_type
from cnf import (MonotoneCnf, PartialAssignment, TransversalSet, branch_clause, matching_lower_bound,
                 normalize, restrict, transversal_number)
from errors import NoPropertyFound, OutOfValidity, PreconditionTauMismatch, TypeMismatch
from rules import RULES, BranchRow, BranchRule, included_letters, recompute_fraction
from utils import iter_bits, mask_of, one_based, setup_logger


logger = setup_logger(__name__)

# The printed total of this column is 1, but its rows add up to 139/144.
KNOWN_DISCREPANCIES = frozenset({'P2o_7:2 even: printed total 1, rows sum to 139/144'})


class Mode(Enum):
    STRUCTURED = 'structured'
    GENERIC = 'generic'


@dataclass(frozen=True)
class CertResult:
    ok: bool
    bound: Fraction
    slack: Fraction
    type: FormulaType
    s: int
    t: int
    six_quarter: Optional[Comparison] = None

    def to_record(self) -> Dict[str, object]:
        return {
            'ok': self.ok,
            'bound': str(self.bound),
            'slack': str(self.slack),
            'type': str(self.type),
            's': self.s,
            't': self.t,
            'six_quarter': self.six_quarter.value if self.six_quarter else None,
        }


@dataclass
class EnumStats:
    mode: Mode = Mode.STRUCTURED
    nodes: int = 0
    dead: int = 0
    max_depth: int = 0
    fallbacks: int = 0
    duplicates: int = 0
    type_histogram: Counter = field(default_factory=Counter)
    rule_histogram: Counter = field(default_factory=Counter)
    unconfirmed_forced: List[Tuple[str, str, str]] = field(default_factory=list)
    cert: Optional[CertResult] = None

    def to_record(self) -> Dict[str, object]:
        return {
            'mode': self.mode.value,
            'nodes': self.nodes,
            'dead': self.dead,
            'max_depth': self.max_depth,
            'fallbacks': self.fallbacks,
            'duplicates': self.duplicates,
            'types': {str(k): v for k, v in sorted(self.type_histogram.items(), key=lambda kv: kv[0].rank)},
            'rules': dict(sorted(self.rule_histogram.items())),
            'unconfirmed_forced': len(self.unconfirmed_forced),
            'cert': self.cert.to_record() if self.cert else None,
        }


@dataclass(frozen=True)
class RuleBranch:
    """One satisfiable child of a rule application.

    `row` is None for core assignments no table row covers.
    """
    row: Optional[BranchRow]
    assignment: PartialAssignment
    cnf: MonotoneCnf
    t: int


def propagate(cnf: MonotoneCnf, t: int, included: int = 0, excluded: int = 0) -> Optional[PartialAssignment]:
    """Close a partial assignment under rules sound for minimum transversals.

    Rules, applied until nothing changes:
      * a clause whose only unexcluded variable is x forces x in;
      * an included x needs a clause meeting the included set only in x;
        the variables common to all such clauses are forced out;
      * a variable lying in no clause free of included variables is out;
      * more than t included variables is a conflict.

    Args:
        cnf (MonotoneCnf): normalized CNF whose minimum transversals have size t.
        t (int): transversal size.
        included (int, optional): variables already in. Defaults to 0.
        excluded (int, optional): variables already out. Defaults to 0.

    Returns:
        Optional[PartialAssignment]: the closure, or None on a conflict.
    """
    while True:
        if included & excluded or included.bit_count() > t:
            return None
        before = (included, excluded)

        open_support = 0
        for clause in cnf.clauses:
            if clause & included:
                continue
            rest = clause & ~excluded
            if not rest:
                return None
            if rest.bit_count() == 1:
                included |= rest
            open_support |= rest
        if included & excluded:
            return None

        for x in iter_bits(included):
            bit = 1 << x
            common = -1
            for clause in cnf.clauses:
                if clause & included == bit:
                    common &= clause & ~bit
            if common == -1:
                return None
            excluded |= common

        excluded |= cnf.universe & ~included & ~open_support
        if (included, excluded) == before:
            return PartialAssignment(included, excluded)


def _strip(cnf: MonotoneCnf) -> MonotoneCnf:
    """Drop universe variables that no clause mentions."""
    support = cnf.support
    if support == cnf.universe:
        return cnf
    return MonotoneCnf(support, cnf.clauses)


def _node_parity(cnf: MonotoneCnf, t: int) -> str:
    return 'odd' if deficit(cnf.n, t) % 2 else 'even'


def _attribute(rule: BranchRule, values: Tuple[int, ...]) -> Optional[BranchRow]:
    for row in rule.rows:
        cube = rule.effective_cube(row)
        if cube is None:
            continue
        if all(values[rule.letters.index(letter)] == value for letter, value in cube.items()):
            return row
    return None


def _audit_branch(rule: BranchRule, row: BranchRow, match: PropertyMatch, pa: PartialAssignment,
                  child: MonotoneCnf, child_t: int, stats: Optional[EnumStats]) -> None:
    binding = dict(match.binding)
    confirmed = True
    for letter, value in row.forced:
        variable = binding.get(letter)
        if variable is None:
            continue
        side = pa.included if value else pa.excluded
        if not side >> variable & 1:
            confirmed = False
            logger.debug(f'{rule.rule_id} row {row.pattern}: {letter}={value} not confirmed')
            if stats is not None:
                stats.unconfirmed_forced.append((rule.rule_id, row.pattern, letter))
    if not confirmed or not child.clauses or child_t <= 0:
        return
    observed = formula_type(child)
    if observed.rank < TAG_RANKS[row.expected]:
        raise TypeMismatch(
            f'{rule.rule_id} row {row.pattern}: restricted CNF has type {observed}, table says T{row.expected}'
        )


def apply_rule(cnf: MonotoneCnf, t: int, match: PropertyMatch, audit: bool = False,
               stats: Optional[EnumStats] = None) -> List[RuleBranch]:
    """Branch on every assignment of a rule's core variables.

    Args:
        cnf (MonotoneCnf): normalized CNF without unit clauses.
        t (int): size of its minimum transversals.
        match (PropertyMatch): property found in `cnf`.
        audit (bool, optional): check forced values and row types. Defaults to False.
        stats (Optional[EnumStats], optional): counters to update. Defaults to None.

    Raises:
        TypeMismatch: in audit mode, when a fully confirmed row restricts to
            a CNF of weaker type than its table states.

    Returns:
        List[RuleBranch]: satisfiable children, in core-assignment order.
    """
    rule = RULES[match.rule_id]
    logger.debug(f'{rule.rule_id} on cores {one_based(mask_of(match.cores))} ({_node_parity(cnf, t)} s)')
    if stats is not None:
        stats.rule_histogram[rule.rule_id] += 1

    branches = []
    for values in itertools.product((1, 0), repeat=len(match.cores)):
        ones = mask_of(v for v, bit in zip(match.cores, values) if bit)
        zeros = mask_of(v for v, bit in zip(match.cores, values) if not bit)
        pa = propagate(cnf, t, ones, zeros)
        child = restrict(cnf, pa) if pa is not None else None
        if child is None:
            if stats is not None:
                stats.dead += 1
            continue
        child = _strip(child)
        child_t = t - pa.included.bit_count()
        row = _attribute(rule, values)
        if audit and row is not None:
            _audit_branch(rule, row, match, pa, child, child_t, stats)
        branches.append(RuleBranch(row, pa, child, child_t))
    return branches


class _Search:
    def __init__(self, mode: Mode, audit: bool, stats: EnumStats):
        self.mode = mode
        self.audit = audit
        self.stats = stats
        self.found: Set[int] = set()

    def emit(self, members: int) -> None:
        if members in self.found:
            self.stats.duplicates += 1
            return
        self.found.add(members)

    def settle(self, cnf: MonotoneCnf, t: int, acc: int) -> bool:
        """Handle the terminal cases; True when the node needs no branching."""
        if t < 0:
            self.stats.dead += 1
            return True
        if not cnf.clauses:
            if t == 0:
                self.emit(acc)
            else:
                self.stats.dead += 1
            return True
        if t == 0 or matching_lower_bound(cnf.clauses) > t:
            self.stats.dead += 1
            return True
        return False

    def generic(self, cnf: MonotoneCnf, t: int, acc: int, depth: int) -> None:
        self.stats.nodes += 1
        self.stats.max_depth = max(self.stats.max_depth, depth)
        if self.settle(cnf, t, acc):
            return
        self.branch_on_clause(cnf, t, acc, depth, self.generic)

    def branch_on_clause(self, cnf: MonotoneCnf, t: int, acc: int, depth: int, recurse) -> None:
        earlier = 0
        for x in iter_bits(branch_clause(cnf.clauses)):
            bit = 1 << x
            child = restrict(cnf, PartialAssignment(bit, earlier))
            if child is None:
                self.stats.dead += 1
            else:
                recurse(child, t - 1, acc | bit, depth + 1)
            earlier |= bit

    def structured(self, cnf: MonotoneCnf, t: int, acc: int, depth: int) -> None:
        self.stats.nodes += 1
        self.stats.max_depth = max(self.stats.max_depth, depth)
        if t < 0:
            self.stats.dead += 1
            return
        pa = propagate(cnf, t)
        if pa is None:
            self.stats.dead += 1
            return
        if pa.assigned:
            cnf = restrict(cnf, pa)
            if cnf is None:
                self.stats.dead += 1
                return
            cnf = _strip(cnf)
            t -= pa.included.bit_count()
            acc |= pa.included
        if self.settle(cnf, t, acc):
            return

        if deficit(cnf.n, t) > 0:
            node_type = formula_type(cnf)
            self.stats.type_histogram[node_type] += 1
            try:
                match = find_property(cnf, node_type, t)
            except NoPropertyFound:
                self.stats.fallbacks += 1
                logger.debug(f'no {node_type} property at depth {depth}, branching on a clause')
            else:
                for branch in apply_rule(cnf, t, match, self.audit, self.stats):
                    self.structured(branch.cnf, branch.t, acc | branch.assignment.included, depth + 1)
                return
        self.branch_on_clause(cnf, t, acc, depth, self.structured)


def enumerate_min_transversals(cnf: MonotoneCnf, t: int, mode: Union[Mode, str] = Mode.STRUCTURED,
                               audit: bool = False, certify: bool = False) -> Tuple[TransversalSet, EnumStats]:
    """All minimum transversals of a CNF.

    Args:
        cnf (MonotoneCnf): any monotone CNF.
        t (int): its transversal number.
        mode (Union[Mode, str], optional): structured or generic branching.
            Defaults to Mode.STRUCTURED.
        audit (bool, optional): audit every rule application. Defaults to False.
        certify (bool, optional): compare the count with the proved bound.
            Defaults to False.

    Raises:
        PreconditionTauMismatch: t is not the transversal number.

    Returns:
        Tuple[TransversalSet, EnumStats]: the transversals and search counters.
    """
    mode = Mode(mode)
    cnf = normalize(cnf)
    tau = transversal_number(cnf)
    if tau != t:
        raise PreconditionTauMismatch(tau, t)

    stats = EnumStats(mode=mode)
    search = _Search(mode, audit, stats)
    if mode == Mode.STRUCTURED:
        search.structured(cnf, t, 0, 0)
    else:
        search.generic(cnf, t, 0, 0)
    result = TransversalSet(t, tuple(search.found))
    logger.info(
        f'{mode.value}: {result.count} transversals of size {t}, '
        f'{stats.nodes} nodes, {stats.dead} dead, depth {stats.max_depth}'
    )

    if certify:
        try:
            stats.cert = certify_bound(cnf, t, result.count)
        except OutOfValidity as e:
            logger.warning(f'certification skipped: {e}')
    return result, stats


def count_min_transversals(cnf: MonotoneCnf, t: int, mode: Union[Mode, str] = Mode.STRUCTURED) -> int:
    return enumerate_min_transversals(cnf, t, mode)[0].count


def certify_bound(cnf: MonotoneCnf, t: int, count: int) -> CertResult:
    """Compare a transversal count with the bound proved for the CNF's type.

    Unit clauses are taken into the transversal first; the bound applies to
    what remains.

    Args:
        cnf (MonotoneCnf): CNF with transversal number t.
        t (int): transversal number.
        count (int): number of minimum transversals found.

    Raises:
        OutOfValidity: no proved bound covers the CNF's (type, s, t).

    Returns:
        CertResult: the bound, its slack and the 6^(n/4) comparison when
        t = floor(n/2).
    """
    cnf = normalize(cnf)
    units = mask_of(unit.bit_length() - 1 for unit in cnf.unit_clauses)
    core = restrict(cnf, PartialAssignment(units, 0)) if units else cnf
    core_t = t - units.bit_count()
    core_type = formula_type(core)
    s = deficit(core.n, core_t)
    bound = certifiable_bound(core_type, s, core_t)

    six_quarter = six_quarter_compare(count, cnf.n) if t == cnf.n // 2 else None
    ok = count <= bound and six_quarter != Comparison.EXCEEDS
    if not ok:
        logger.error(f'count {count} exceeds the bound {bound} for {core_type}, s={s}, t={core_t}')
    return CertResult(ok, bound, bound - count, core_type, s, core_t, six_quarter)


@dataclass(frozen=True)
class AuditEntry:
    rule_id: str
    parity: str
    printed_total: Fraction
    printed_sum: Fraction
    recomputed_total: Fraction
    mismatched_rows: Tuple[str, ...] = ()

    def to_record(self) -> Dict[str, object]:
        return {
            'rule': self.rule_id,
            'parity': self.parity,
            'printed_total': str(self.printed_total),
            'printed_sum': str(self.printed_sum),
            'recomputed_total': str(self.recomputed_total),
            'mismatched_rows': list(self.mismatched_rows),
        }


@dataclass
class AuditReport:
    entries: List[AuditEntry] = field(default_factory=list)
    discrepancies: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def entry(self, rule_id: str, parity: str) -> AuditEntry:
        return next(e for e in self.entries if e.rule_id == rule_id and e.parity == parity)


def _static_checks(rule: BranchRule) -> List[str]:
    problems = []
    cubes = [rule.effective_cube(row) for row in rule.rows]
    for row, cube in zip(rule.rows, cubes):
        if cube is None:
            problems.append(f'{rule.rule_id} row {row.pattern}: forced values contradict the pattern')
        dn, dt, ds = row.deltas
        if ds != 3 * dt - dn:
            problems.append(f'{rule.rule_id} row {row.pattern}: ds={ds} but 3dt-dn={3 * dt - dn}')
        if -dt != len(included_letters(row, rule.letters)):
            problems.append(f'{rule.rule_id} row {row.pattern}: dt={dt} does not match the included letters')
    for (i, first), (j, second) in itertools.combinations(enumerate(cubes), 2):
        if first is None or second is None:
            continue
        if not any(letter in second and second[letter] != value for letter, value in first.items()):
            problems.append(f'{rule.rule_id}: rows {rule.rows[i].pattern} and {rule.rows[j].pattern} overlap')
    return problems


def audit_rule_tables() -> AuditReport:
    """Recompute every case table from its deltas and compare with the printed values.

    Returns:
        AuditReport: one entry per (rule, parity) column and a list of
        discrepancies in readable form.
    """
    report = AuditReport()
    for rule in RULES.values():
        report.discrepancies.extend(_static_checks(rule))
        for parity in rule.parities:
            printed_total = rule.total(parity)
            printed_sum = sum((row.fraction(parity) for row in rule.rows), Fraction(0))
            recomputed = [recompute_fraction(rule, row, parity) for row in rule.rows]
            mismatched = tuple(
                row.pattern for row, value in zip(rule.rows, recomputed) if value != row.fraction(parity)
            )
            recomputed_total = sum(recomputed, Fraction(0))
            report.entries.append(
                AuditEntry(rule.rule_id, parity, printed_total, printed_sum, recomputed_total, mismatched)
            )
            for pattern, value in zip((row.pattern for row in rule.rows), recomputed):
                if pattern in mismatched:
                    report.discrepancies.append(f'{rule.rule_id} {parity} row {pattern}: recomputed {value}')
            if printed_sum != printed_total:
                report.discrepancies.append(
                    f'{rule.rule_id} {parity}: printed total {printed_total}, rows sum to {printed_sum}'
                )
            if recomputed_total > 1:
                report.discrepancies.append(f'{rule.rule_id} {parity}: total {recomputed_total} exceeds 1')
    logger.info(f'audited {len(report.entries)} table columns, {len(report.discrepancies)} discrepancies')
    return report
