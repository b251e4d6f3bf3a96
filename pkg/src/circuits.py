"""Depth-3 circuits for threshold functions built from extremal CNFs.

A circuit is an OR of monotone 3-CNFs, each a relabelled copy of one seed
CNF with transversal number t. A copy accepts a weight-t input exactly when
the input is the image of a minimum transversal of the seed, so covering the
weight-t layer with images is enough: monotonicity takes care of heavier
inputs, and no copy accepts anything lighter.
"""
import sys
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Mapping, Optional, Sequence, Tuple
import numpy as np
from alive_progress import alive_bar
from bounds import deficit, theta_known
from classify import FormulaType
from cnf import MonotoneCnf, brute_force_transversals, relabel, transversal_number
from constructions import FamilySpec, build_block, build_family, disjoint_sum, free
from errors import SeedMismatch, TooLarge
from utils import bits_of, setup_logger


logger = setup_logger(__name__)

CIRCUIT_MAX_N = 20
GREEDY_RESTARTS = 8
GREEDY_SEED = 0x5EED
RANDOM_CANDIDATES = 32
TARGETED_CANDIDATES = 8


@dataclass(frozen=True)
class Sigma3Circuit:
    n: int
    t: int
    subcircuits: Tuple[MonotoneCnf, ...]

    @property
    def size(self) -> int:
        return len(self.subcircuits)


def _pad(seed: MonotoneCnf, n: int) -> MonotoneCnf:
    if seed.n > n:
        raise ValueError(f'seed has {seed.n} variables, more than n={n}')
    if seed.n == n:
        return disjoint_sum([seed])
    return disjoint_sum([seed, build_block(free(n - seed.n))])


def extremal_seed(n: int, t: int) -> MonotoneCnf:
    """The type-0 extremal family for (n, t), padded with free variables to n."""
    return _pad(build_family(FamilySpec(FormulaType.T0, deficit(n, t), t)), n)


def _all_inputs(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Every input mask on n variables and its weight."""
    if n > CIRCUIT_MAX_N:
        raise TooLarge(f'exhaustive evaluation supports n <= {CIRCUIT_MAX_N}, got n={n}')
    inputs = np.arange(1 << n, dtype=np.uint64)
    weights = np.zeros(inputs.shape, dtype=np.int64)
    for i in range(n):
        weights += ((inputs >> np.uint64(i)) & np.uint64(1)).astype(np.int64)
    return inputs, weights


class _Layer:
    """Uncovered weight-t inputs, as a lookup table indexed by input mask."""

    def __init__(self, n: int, t: int):
        _, weights = _all_inputs(n)
        self.uncovered = weights == t
        self.remaining = int(self.uncovered.sum())

    def gain(self, images: np.ndarray) -> int:
        return int(self.uncovered[images].sum())

    def cover(self, images: np.ndarray) -> None:
        self.uncovered[images] = False
        self.remaining = int(self.uncovered.sum())

    def least_uncovered(self) -> int:
        return int(np.flatnonzero(self.uncovered)[0])


def _images(members: np.ndarray, permutation: Sequence[int]) -> np.ndarray:
    """Masks of the permuted seed transversals; members is (count, t) of indices."""
    mapped = np.asarray(permutation, dtype=np.uint64)[members]
    return np.bitwise_or.reduce(np.uint64(1) << mapped, axis=1).astype(np.int64)


def _targeted(source: List[int], target: List[int], n: int, rng: random.Random) -> List[int]:
    """Random permutation sending `source` onto `target` in order."""
    permutation = [-1] * n
    for u, v in zip(source, target):
        permutation[u] = v
    rest_from = [u for u in range(n) if permutation[u] < 0]
    rest_to = [v for v in range(n) if v not in target]
    rng.shuffle(rest_to)
    for u, v in zip(rest_from, rest_to):
        permutation[u] = v
    return permutation


def _greedy_cover(n: int, t: int, members: np.ndarray, rng: random.Random) -> List[List[int]]:
    layer = _Layer(n, t)
    chosen = []
    while layer.remaining:
        candidates = []
        for _ in range(RANDOM_CANDIDATES):
            permutation = list(range(n))
            rng.shuffle(permutation)
            candidates.append(permutation)
        target = bits_of(layer.least_uncovered())
        for row in members[:TARGETED_CANDIDATES]:
            candidates.append(_targeted([int(v) for v in row], target, n, rng))

        best, best_gain, best_images = None, -1, None
        for permutation in candidates:
            images = _images(members, permutation)
            gain = layer.gain(images)
            if gain > best_gain:
                best, best_gain, best_images = permutation, gain, images
        layer.cover(best_images)
        chosen.append(best)
    return chosen


def build_threshold_circuit(n: int, t: int, seed: MonotoneCnf, restarts: int = GREEDY_RESTARTS,
                            rng_seed: int = GREEDY_SEED, progress: bool = False) -> Sigma3Circuit:
    """Cover the weight-t layer with relabelled copies of a seed CNF.

    Args:
        n (int): number of inputs.
        t (int): threshold.
        seed (MonotoneCnf): CNF on at most n variables with tau = t.
        restarts (int, optional): greedy runs; the smallest cover wins.
            Defaults to GREEDY_RESTARTS.
        rng_seed (int, optional): seed of the permutation sampler.
            Defaults to GREEDY_SEED.
        progress (bool, optional): show a progress bar. Defaults to False.

    Raises:
        SeedMismatch: the seed's transversal number is not t.

    Returns:
        Sigma3Circuit: OR of the chosen copies.
    """
    seed = _pad(seed, n)
    tau = transversal_number(seed)
    if tau != t:
        raise SeedMismatch(f'seed has transversal number {tau}, expected {t}')
    if t == 0:
        return Sigma3Circuit(n, t, (seed,))

    members = np.array(brute_force_transversals(seed, t).as_index_lists(), dtype=np.int64)
    rng = random.Random(rng_seed)
    best: Optional[List[List[int]]] = None
    with alive_bar(restarts, bar='filling', spinner='dots_waves', disable=not progress, file=sys.stderr) as bar:
        for attempt in range(restarts):
            cover = _greedy_cover(n, t, members, rng)
            logger.debug(f'restart {attempt}: {len(cover)} subcircuits')
            if best is None or len(cover) < len(best):
                best = cover
            bar()

    subcircuits = tuple(relabel(seed, permutation) for permutation in best)
    logger.info(f'n={n}, t={t}: {len(subcircuits)} subcircuits from a seed with {len(members)} transversals')
    return Sigma3Circuit(n, t, subcircuits)


def _evaluate_cnf(cnf: MonotoneCnf, inputs: np.ndarray) -> np.ndarray:
    accepted = np.ones(inputs.shape, dtype=bool)
    for clause in cnf.clauses:
        accepted &= (inputs & np.uint64(clause)) != 0
    return accepted


def evaluate_circuit(c: Sigma3Circuit, inputs: np.ndarray) -> np.ndarray:
    """Output of the circuit on each input mask."""
    inputs = np.asarray(inputs, dtype=np.uint64)
    out = np.zeros(inputs.shape, dtype=bool)
    for sub in c.subcircuits:
        out |= _evaluate_cnf(sub, inputs)
    return out


def verify_circuit(c: Sigma3Circuit) -> bool:
    """True iff the circuit accepts exactly the inputs of weight >= t.

    Raises:
        TooLarge: more than 20 inputs.
    """
    inputs, weights = _all_inputs(c.n)
    return bool(np.array_equal(evaluate_circuit(c, inputs), weights >= c.t))


def rejects_below_threshold(sub: MonotoneCnf, n: int, t: int) -> bool:
    """True iff the CNF rejects every input of weight < t."""
    inputs, weights = _all_inputs(n)
    light = weights < t
    return not bool(_evaluate_cnf(sub, inputs[light]).any())


def layer_cover_implies_threshold(c: Sigma3Circuit) -> bool:
    """Check that accepting the whole weight-t layer means accepting every heavier input."""
    inputs, weights = _all_inputs(c.n)
    accepted = evaluate_circuit(c, inputs)
    if not accepted[weights == c.t].all():
        return True
    return bool(accepted[weights >= c.t].all())


def size_bounds(c: Sigma3Circuit, oracle_values: Optional[Mapping[Tuple[int, int], int]] = None) -> Tuple[Fraction, int]:
    """Lower bound ceil(C(n, t) / Theta(n, t, 3)) next to the actual size.

    Raises:
        UnknownTheta: Theta(n, t, 3) is not known.
    """
    theta = theta_known(c.n, c.t, oracle_values)
    return Fraction(-(-comb(c.n, c.t) // theta)), c.size
