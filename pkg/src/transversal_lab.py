import sys
import json
import random
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional
import fire
from alive_progress import alive_bar
from bounds import BoundQuery, Comparison, certifiable_bound, deficit, phi_upper, six_quarter_compare, theta_known
from circuits import GREEDY_SEED, build_threshold_circuit, extremal_seed, size_bounds, verify_circuit
from classify import FormulaType, find_property, formula_type
from cnf import (MonotoneCnf, brute_force_transversals, normalize, random_cnf, read_mcnf,
                 serialize_mcnf, transversal_number)
from constructions import (GOLDEN_ROWS, FamilySpec, build_3t_minus_1, build_from_text, build_sum,
                           family_recipe)
from enumerator import (KNOWN_DISCREPANCIES, Mode, audit_rule_tables, enumerate_min_transversals)
from errors import InvalidSpec, NoPropertyFound, TransversalLabError, UnknownTheta
from oracle import extremal_search, verify_construction
from utils import jobs_from_env, one_based, setup_logger, show_info
from validator import (is_bool, is_choice, is_formula_type, is_in_range, is_input_source, is_int,
                       is_non_negative_number, is_positive_number)


logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
MODES = ('structured', 'generic', 'both')
QUICK_SAMPLES = 200

# (n, t, Theta(n, t, 3)) settled by exhaustive search.
ORACLE_CASES = ((4, 2, 6), (5, 2, 7), (5, 3, 10), (6, 2, 9), (6, 3, 14), (6, 4, 15))


class Check(NamedTuple):
    name: str
    ok: bool
    detail: str = ''


def _emit(record: Dict[str, object]) -> None:
    print(json.dumps(record), flush=True)


def _check_oracle(jobs: int, progress: bool) -> Iterator[Check]:
    for n, t, expected in ORACLE_CASES:
        result = extremal_search(n, t, jobs=jobs, progress=progress)
        yield Check(f'oracle n={n} t={t}', result.max_count == expected, f'{result.max_count} (expected {expected})')


def _check_golden() -> Iterator[Check]:
    for row in GOLDEN_ROWS:
        cnf = build_from_text(row.recipe)
        ok = cnf.n == row.n and verify_construction(cnf, row.t, row.count)
        yield Check(f'golden {row.type} n={row.n} t={row.t} {row.recipe}', ok, str(row.count))


def _check_families(max_t: int) -> Iterator[Check]:
    for family_type in (FormulaType.T0, FormulaType.T1, FormulaType.T2O, FormulaType.T2D):
        for t in range(1, max_t + 1):
            for s in sorted(set(range(0, t + 1)) | {2 * t - 2, 2 * t - 1, 2 * t}):
                try:
                    recipe = family_recipe(FamilySpec(family_type, s, t))
                except InvalidSpec:
                    continue
                ok = verify_construction(build_sum(recipe.blocks), t, int(recipe.count))
                yield Check(f'family {family_type} s={s} t={t}', ok, str(recipe.count))


def _check_3t_minus_1() -> Iterator[Check]:
    for t in range(2, 6):
        expected = 7 * 3 ** (t - 2)
        cnf = build_3t_minus_1(t)
        ok = cnf.n == 3 * t - 1 and verify_construction(cnf, t, expected)
        yield Check(f'n=3t-1 t={t}', ok, str(expected))


def _check_corollary() -> Iterator[Check]:
    for n in (4, 8, 12):
        t = n // 2
        cnf = build_sum(family_recipe(FamilySpec(FormulaType.T0, deficit(n, t), t)).blocks)
        found, stats = enumerate_min_transversals(cnf, t, certify=True)
        cert = stats.cert
        ok = found.count == 6 ** (n // 4) and cert is not None and cert.ok and cert.slack == 0
        yield Check(f'corollary n={n}', ok, f'{found.count} vs {6 ** (n // 4)}')


def _check_equivalence(samples: int, seed: int, progress: bool) -> Iterator[Check]:
    rng = random.Random(seed)
    failures = []
    with alive_bar(samples, bar='filling', spinner='dots_waves', disable=not progress, file=sys.stderr) as bar:
        for _ in range(samples):
            n = rng.randint(3, 14)
            cnf = random_cnf(rng, n, rng.randint(1, 2 * n))
            tau = transversal_number(cnf)
            expected = brute_force_transversals(cnf, tau)
            structured, stats = enumerate_min_transversals(cnf, tau, Mode.STRUCTURED)
            generic, _ = enumerate_min_transversals(cnf, tau, Mode.GENERIC)
            ok = structured == expected and generic == expected and not stats.duplicates
            if ok and n % 2 == 0 and tau == n // 2:
                ok = six_quarter_compare(structured.count, n) != Comparison.EXCEEDS
            if not ok:
                failures.append(serialize_mcnf(cnf).replace('\n', ' | '))
            bar()
    yield Check('enumerator equivalence', not failures, f'{samples} samples, {len(failures)} counterexamples')
    for failure in failures[:5]:
        logger.error(f'counterexample: {failure}')


def _check_audit() -> Iterator[Check]:
    report = audit_rule_tables()
    found = set(report.discrepancies)
    unexpected = sorted(found - KNOWN_DISCREPANCIES)
    missing = sorted(KNOWN_DISCREPANCIES - found)
    for line in unexpected:
        logger.error(f'unexpected table discrepancy: {line}')
    yield Check('table audit', not unexpected and not missing, f'{len(report.entries)} columns')


def _check_bound_order() -> Iterator[Check]:
    types = (FormulaType.T0, FormulaType.T1, FormulaType.T2O, FormulaType.T2D, FormulaType.T3, FormulaType.T4)
    ok = True
    for t in range(1, 11):
        for s in range(0, t + 1):
            if phi_upper(BoundQuery(FormulaType.T2O, s, t)) > phi_upper(BoundQuery(FormulaType.T2D, s, t)):
                ok = False
            if s < t:
                for bound_type in types:
                    if phi_upper(BoundQuery(bound_type, s + 1, t)) > phi_upper(BoundQuery(bound_type, s, t)):
                        ok = False
    yield Check('bound order', ok, 't <= 10')


def _check_circuits(max_n: int, progress: bool) -> Iterator[Check]:
    for n in range(2, max_n + 1):
        for t in range(1, n // 2 + 1):
            circuit = build_threshold_circuit(n, t, extremal_seed(n, t), progress=progress)
            lower, actual = size_bounds(circuit)
            ok = verify_circuit(circuit) and lower <= actual <= n * n * lower
            yield Check(f'circuit n={n} t={t}', ok, f'size {actual}, lower {lower}')


class TransversalLab():
    """Count, enumerate and bound minimum transversals of monotone 3-CNFs."""

    def __init__(
        self,
        input_file: str = '-',
        t: Optional[int] = None,
        n: Optional[int] = None,
        s: Optional[int] = None,
        type: Optional[str] = None,
        spec: str = '',
        mode: str = 'structured',
        certify: bool = False,
        stats_json: bool = False,
        audit_branches: bool = False,
        mixed: bool = False,
        quick: bool = False,
        samples: int = 10000,
        seed: int = 0,
        jobs: Optional[int] = None,
        progress: bool = True
    ):
        """Initialize

        Args:
          input_file (str): MCNF file, '-' for stdin. Defaults to '-'.
          t (int): transversal size. Defaults to the transversal number.
          n (int): number of variables for bound, search and circuit. Defaults to None.
          s (int): deficit 3t - n for bound. Defaults to None.
          type (str): formula type for bound, e.g. 2o. Defaults to None.
          spec (str): block specification, e.g. 'K(4,3)+T3(5)'. Defaults to ''.
          mode (str): structured, generic or both. Defaults to 'structured'.
          certify (bool): compare counts with the proved bound. Defaults to False.
          stats_json (bool): print search counters as a record. Defaults to False.
          audit_branches (bool): audit every rule application. Defaults to False.
          mixed (bool): let search use 1- and 2-clauses. Defaults to False.
          quick (bool): short verify run. Defaults to False.
          samples (int): random CNFs for the equivalence check. Defaults to 10000.
          seed (int): seed for random sampling. Defaults to 0.
          jobs (int): worker processes. Defaults to $TRANSVERSAL_LAB_JOBS or 1.
          progress (bool): show progress bars on stderr. Defaults to True.
        """
        self.input_file: str = input_file
        self.t: Optional[int] = t
        self.n: Optional[int] = n
        self.s: Optional[int] = s
        self.type: Optional[str] = type
        self.spec: str = spec
        self.mode: str = mode
        self.certify: bool = certify
        self.stats_json: bool = stats_json
        self.audit_branches: bool = audit_branches
        self.mixed: bool = mixed
        self.quick: bool = quick
        self.samples: int = samples
        self.seed: int = seed
        self.jobs: int = jobs_from_env() if jobs is None else jobs
        self.progress: bool = progress

    def _input_is_valid(self, *required: str) -> bool:
        """Validator for input.

        Args:
            *required (str): flags the command cannot run without.

        Returns:
            bool: True if is valid, False otherwise.
        """
        is_valid = True

        for name in required:
            if getattr(self, name) in (None, ''):
                logger.error(f'You must type --{name} for this command.')
                is_valid = False

        # Check input_file
        if 'input_file' in required and not is_input_source(self.input_file):
            logger.error('You must type a readable MCNF file or - for stdin.')
            is_valid = False

        # Check t, n and s
        if self.t is not None and not is_non_negative_number(self.t):
            logger.error('You must type a non-negative integer for t.')
            is_valid = False
        if self.n is not None and not is_positive_number(self.n):
            logger.error('You must type a positive integer for n.')
            is_valid = False
        if self.s is not None and not is_int(self.s):
            logger.error('You must type an integer for s.')
            is_valid = False

        # Check type
        if self.type is not None and not is_formula_type(self.type):
            logger.error('You must type one of 0, 1, 2o, 2d, 3, 4 for type.')
            is_valid = False

        # Check mode
        if not is_choice(self.mode, MODES):
            logger.error(f'You must type one of {", ".join(MODES)} for mode.')
            is_valid = False

        # Check flags
        for name in ('certify', 'stats_json', 'audit_branches', 'mixed', 'quick', 'progress'):
            if not is_bool(getattr(self, name)):
                logger.error(f'You must just type --{name} flag. No need to type a parameter.')
                is_valid = False

        # Check samples, seed and jobs
        if not is_positive_number(self.samples):
            logger.error('You must type a positive integer for samples.')
            is_valid = False
        if not is_int(self.seed):
            logger.error('You must type an integer for seed.')
            is_valid = False
        if not is_in_range(self.jobs, 1, 256):
            logger.error('You must type a number of jobs between 1 and 256.')
            is_valid = False

        return is_valid

    def _start(self, *required: str) -> None:
        show_info(self)
        if not self._input_is_valid(*required):
            logger.info('Input parameter is not valid. Try again.')
            sys.exit(EXIT_USAGE)

    def _run(self, action: Callable[[], Optional[int]]) -> None:
        """Run a command body, mapping library errors to exit codes."""
        try:
            code = action()
        except TransversalLabError as e:
            logger.error(f'{type(e).__name__}: {e}')
            sys.exit(EXIT_USAGE)
        except (OSError, ValueError) as e:
            logger.error(str(e))
            sys.exit(EXIT_USAGE)
        if code:
            sys.exit(code)

    def _read(self) -> MonotoneCnf:
        cnf = normalize(read_mcnf(self.input_file))
        logger.info(f'Read {cnf.m} clauses over {cnf.n} variables.')
        return cnf

    def _threshold(self, cnf: MonotoneCnf) -> int:
        return transversal_number(cnf) if self.t is None else self.t

    def construct(self, spec: str = ''):
        """Print the MCNF of a block specification.

        e.g. construct 'T3(6)', construct '2*K(4,3)', construct 'fam(2d,s=4,t=5)'
        """
        if spec:
            self.spec = str(spec)
        self._start('spec')

        def action():
            sys.stdout.write(serialize_mcnf(build_from_text(self.spec)))

        self._run(action)

    def count(self, input_file: str = ''):
        """Count the minimum transversals of an MCNF file."""
        if input_file:
            self.input_file = input_file
        self._start('input_file')

        def action():
            cnf = self._read()
            t = self._threshold(cnf)
            found, _ = enumerate_min_transversals(cnf, t, Mode(self._single_mode()))
            _emit({'command': 'count', 'n': cnf.n, 'm': cnf.m, 't': t, 'count': found.count})

        self._run(action)

    def _single_mode(self) -> str:
        return 'structured' if self.mode == 'both' else self.mode

    def enumerate(self, input_file: str = ''):
        """Print every minimum transversal, one per line as 1-based indices."""
        if input_file:
            self.input_file = input_file
        self._start('input_file')

        def action():
            cnf = self._read()
            t = self._threshold(cnf)
            modes = ('structured', 'generic') if self.mode == 'both' else (self.mode,)
            results = [
                enumerate_min_transversals(cnf, t, mode, audit=self.audit_branches, certify=self.certify)
                for mode in modes
            ]
            found, stats = results[0]
            for members in found:
                print(' '.join(str(index) for index in one_based(members)))

            code = EXIT_OK
            if any(other != found for other, _ in results[1:]):
                logger.error('structured and generic enumeration disagree')
                code = EXIT_MISMATCH
            if self.certify and stats.cert is not None:
                logger.info(f'certificate: {stats.cert.to_record()}')
                if not stats.cert.ok:
                    code = EXIT_MISMATCH
            if self.stats_json:
                for _, mode_stats in results:
                    _emit({'command': 'enumerate', 'count': found.count, **mode_stats.to_record()})
            return code

        self._run(action)

    def classify(self, input_file: str = ''):
        """Print the type of a CNF and the branching property that applies to it."""
        if input_file:
            self.input_file = input_file
        self._start('input_file')

        def action():
            cnf = self._read()
            t = self._threshold(cnf)
            cnf_type = formula_type(cnf)
            s = deficit(cnf.n, t)
            record = {
                'command': 'classify', 'n': cnf.n, 'm': cnf.m, 't': t, 's': s,
                'type': str(cnf_type), 'property_id': None, 'rule': None, 'cores': [], 'anchor': [],
            }
            if cnf.unit_clauses:
                logger.warning('The CNF has unit clauses; properties are looked up after they are taken in.')
            elif s > 0:
                try:
                    match = find_property(cnf, cnf_type, t)
                except NoPropertyFound as e:
                    logger.info(str(e))
                else:
                    record.update(
                        property_id=match.property_id,
                        rule=match.rule_id,
                        cores=[v + 1 for v in match.cores],
                        anchor=[one_based(clause) for clause in match.anchor],
                    )
            _emit(record)

        self._run(action)

    def bound(self):
        """Print a proved bound.

        With --n and --t prints the exact extremal count where it is known;
        with --type, --s and --t prints the bound for that type.
        """
        self._start('t')

        def action():
            if self.n is not None and self.type is None:
                theta = theta_known(self.n, self.t)
                _emit({'command': 'bound', 'n': self.n, 't': self.t, 'theta': theta})
                return
            if self.type is None or (self.s is None and self.n is None):
                raise InvalidSpec('bound needs --type with --s (or --n), or --n alone')
            bound_type = FormulaType.parse(self.type)
            s = self.s if self.s is not None else deficit(self.n, self.t)
            value = certifiable_bound(bound_type, s, self.t)
            _emit({
                'command': 'bound', 'type': str(bound_type), 's': s, 't': self.t,
                'value_num': value.numerator, 'value_den': value.denominator, 'bound': str(value),
            })

        self._run(action)

    def search(self):
        """Exhaustive extremal search, then the MCNF of each CNF attaining the maximum."""
        self._start('n', 't')

        def action():
            result = extremal_search(self.n, self.t, self.mixed, self.jobs, self.progress)
            _emit({
                'command': 'search', 'n': result.n, 't': result.t, 'max_count': result.max_count,
                'argmax': len(result.argmax), 'mixed': result.mixed, 'elapsed': round(result.elapsed, 3),
            })
            for cnf in result.argmax:
                sys.stdout.write(serialize_mcnf(cnf))

        self._run(action)

    def circuit(self):
        """Build a threshold circuit from --spec (or the extremal family) and verify it."""
        self._start('n', 't')

        def action():
            seed = build_from_text(self.spec) if self.spec else extremal_seed(self.n, self.t)
            circuit = build_threshold_circuit(self.n, self.t, seed, rng_seed=self.seed or GREEDY_SEED,
                                              progress=self.progress)
            verified = verify_circuit(circuit)
            try:
                lower, _ = size_bounds(circuit)
            except UnknownTheta:
                lower = None
            _emit({
                'command': 'circuit', 'n': self.n, 't': self.t, 'size': circuit.size,
                'lower_bound': None if lower is None else int(lower), 'verified': verified,
            })
            return EXIT_OK if verified else EXIT_MISMATCH

        self._run(action)

    def audit(self):
        """Recompute every case table and list what does not match the printed values."""
        self._start()

        def action():
            report = audit_rule_tables()
            for entry in report.entries:
                _emit({'command': 'audit', **entry.to_record()})
            _emit({'command': 'audit', 'ok': report.ok, 'discrepancies': report.discrepancies})
            return EXIT_MISMATCH if any(e.recomputed_total > 1 for e in report.entries) else EXIT_OK

        self._run(action)

    def verify(self):
        """Run the golden suite; exit 1 on any mismatch."""
        self._start()

        def action():
            samples = QUICK_SAMPLES if self.quick else self.samples
            suites: List[Iterator[Check]] = [
                _check_oracle(self.jobs, self.progress),
                _check_golden(),
                _check_families(4 if self.quick else 6),
                _check_3t_minus_1(),
                _check_corollary(),
                _check_equivalence(samples, self.seed, self.progress),
                _check_audit(),
                _check_bound_order(),
                _check_circuits(8 if self.quick else 12, self.progress),
            ]
            failed = 0
            total = 0
            for suite in suites:
                for check in suite:
                    total += 1
                    if not check.ok:
                        failed += 1
                        logger.error(f'FAILED {check.name}: {check.detail}')
                    _emit({'command': 'verify', 'check': check.name, 'ok': check.ok, 'detail': check.detail})
            _emit({'command': 'verify', 'checks': total, 'failed': failed, 'ok': not failed})
            return EXIT_MISMATCH if failed else EXIT_OK

        self._run(action)


def main():
    fire.Fire(TransversalLab)


if __name__ == '__main__':
    main()
