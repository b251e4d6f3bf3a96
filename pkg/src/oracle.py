"""Exhaustive ground truth for small universes.

Each CNF is a subset of the candidate clauses, indexed by a bitmask over
the candidate list. A variable set S is a transversal of CNF m iff m has
no clause disjoint from S, i.e. `m & miss(S) == 0` where miss(S) marks the
candidates disjoint from S. numpy evaluates that test for a whole chunk of
CNFs at once.
"""
import sys
import time
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence, Tuple
import numpy as np
from alive_progress import alive_bar
from cnf import MonotoneCnf, count_transversals, transversal_number
from errors import TooLarge
from utils import mask_of, setup_logger


logger = setup_logger(__name__)

ORACLE_MAX_N = 6
MIXED_MAX_N = 5
ARGMAX_CAP = 32
CHUNK_SIZE = 1 << 20


@dataclass(frozen=True)
class SearchResult:
    n: int
    t: int
    max_count: int
    argmax: Tuple[MonotoneCnf, ...]
    elapsed: float
    mixed: bool = False


@dataclass(frozen=True)
class _Chunk:
    start: int
    stop: int
    lower_miss: Tuple[int, ...]
    exact_miss: Tuple[int, ...]
    chains: Tuple[int, ...]


def candidate_clauses(n: int, mixed: bool = False) -> List[int]:
    """Every clause the search may use, in canonical order."""
    widths = (1, 2, 3) if mixed else (3,)
    return [mask_of(combo) for width in widths for combo in itertools.combinations(range(n), width)]


def _miss_masks(candidates: Sequence[int], n: int, size: int) -> Tuple[int, ...]:
    masks = []
    for combo in itertools.combinations(range(n), size):
        chosen = mask_of(combo)
        masks.append(mask_of(i for i, clause in enumerate(candidates) if not clause & chosen))
    return tuple(masks)


def _chain_masks(candidates: Sequence[int]) -> Tuple[int, ...]:
    """Pairs (smaller, larger) of candidates with smaller strictly inside larger."""
    chains = []
    for i, small in enumerate(candidates):
        for j, large in enumerate(candidates):
            if small != large and small & large == small:
                chains.append(1 << i | 1 << j)
    return tuple(chains)


def _scan_chunk(chunk: _Chunk) -> Tuple[int, List[int]]:
    """Best count in [start, stop) and the first indices attaining it."""
    m = np.arange(chunk.start, chunk.stop, dtype=np.uint64)
    valid = np.ones(m.shape, dtype=bool)
    for miss in chunk.lower_miss:
        valid &= (m & np.uint64(miss)) != 0
    for chain in chunk.chains:
        valid &= (m & np.uint64(chain)) != np.uint64(chain)
    counts = np.zeros(m.shape, dtype=np.int32)
    for miss in chunk.exact_miss:
        counts += (m & np.uint64(miss)) == 0
    counts[~valid] = 0

    best = int(counts.max()) if counts.size else 0
    if best == 0:
        return 0, []
    hits = np.flatnonzero(counts == best)[:ARGMAX_CAP]
    return best, [chunk.start + int(i) for i in hits]


def extremal_search(n: int, t: int, mixed: bool = False, jobs: int = 1, progress: bool = False) -> SearchResult:
    """Maximum number of t-transversals over all CNFs on n variables with tau = t.

    Args:
        n (int): number of variables, at most 6 (5 with mixed widths).
        t (int): threshold, 1 <= t <= n.
        mixed (bool, optional): allow 1- and 2-clauses; non-antichains are
            skipped. Defaults to False (3-clauses only).
        jobs (int, optional): worker processes. Defaults to 1.
        progress (bool, optional): show a progress bar. Defaults to False.

    Raises:
        TooLarge: n beyond the exhaustive range.

    Returns:
        SearchResult: the maximum and up to 32 CNFs attaining it. When no
        CNF has tau = t the maximum is 0 and argmax is empty.
    """
    limit = MIXED_MAX_N if mixed else ORACLE_MAX_N
    if n > limit:
        raise TooLarge(f'exhaustive search supports n <= {limit}{" with mixed widths" if mixed else ""}, got n={n}')
    if not 1 <= t <= n:
        raise ValueError(f'need 1 <= t <= n, got n={n}, t={t}')

    started = time.perf_counter()
    candidates = candidate_clauses(n, mixed)
    lower_miss = _miss_masks(candidates, n, t - 1)
    exact_miss = _miss_masks(candidates, n, t)
    chains = _chain_masks(candidates) if mixed else ()
    total = 1 << len(candidates)
    chunks = [
        _Chunk(start, min(start + CHUNK_SIZE, total), lower_miss, exact_miss, chains)
        for start in range(0, total, CHUNK_SIZE)
    ]
    logger.debug(f'n={n}, t={t}: {len(candidates)} candidate clauses, {len(chunks)} chunks')

    results = []
    with alive_bar(len(chunks), bar='filling', spinner='dots_waves', disable=not progress, file=sys.stderr) as bar:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                for result in executor.map(_scan_chunk, chunks):
                    results.append(result)
                    bar()
        else:
            for chunk in chunks:
                results.append(_scan_chunk(chunk))
                bar()

    best = max((count for count, _ in results), default=0)
    indices: List[int] = []
    if best:
        for count, hits in results:
            if count == best:
                indices.extend(hits)
    universe = (1 << n) - 1
    argmax = tuple(
        MonotoneCnf(universe, tuple(clause for i, clause in enumerate(candidates) if index >> i & 1))
        for index in indices[:ARGMAX_CAP]
    )
    elapsed = time.perf_counter() - started
    logger.info(f'Theta({n},{t}) = {best} over {total} CNFs in {elapsed:.1f}s')
    return SearchResult(n, t, best, argmax, elapsed, mixed)


def verify_construction(cnf: MonotoneCnf, expect_t: int, expect_count: int) -> bool:
    """True iff the CNF has transversal number expect_t and expect_count minimum transversals."""
    tau = transversal_number(cnf)
    if tau != expect_t:
        logger.debug(f'transversal number {tau}, expected {expect_t}')
        return False
    count = count_transversals(cnf, expect_t)
    if count != expect_count:
        logger.debug(f'{count} transversals of size {expect_t}, expected {expect_count}')
        return False
    return True
