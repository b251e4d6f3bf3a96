import os
import logging
from typing import Iterable, Iterator, List


LOG_LEVEL_ENV = 'TRANSVERSAL_LAB_LOG_LEVEL'
JOBS_ENV = 'TRANSVERSAL_LAB_JOBS'


def setup_logger(name: str) -> logging.Logger:
    """Set up logger.

    The handler writes to stderr so that stdout only carries records.

    Args:
        name (str): name of logger.

    Returns:
        logger (logging.Logger): logger instance.
    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)

    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setLevel(os.environ.get(LOG_LEVEL_ENV, 'INFO').upper())
        handler_format = logging.Formatter(
            '[%(levelname)s]: %(asctime)s - %(name)s: %(message)s'
        )
        handler.setFormatter(handler_format)
        logger.addHandler(handler)

    logger.propagate = False
    return logger


logger = setup_logger(__name__)


def show_info(obj: object) -> None:
    """Show info for given paramters.

    Args:
        obj (object): instance
    """
    if not obj.__dict__:
        return
    max_chars = max([len(key) for key in obj.__dict__])
    for key in sorted(obj.__dict__):
        logger.info(f'{key: <{max_chars}} -> {obj.__dict__[key]}')


def jobs_from_env(default: int = 1) -> int:
    """Read the worker count from the environment.

    Args:
        default (int, optional): Fallback worker count. Defaults to 1.

    Returns:
        int: Positive number of workers.
    """
    raw = os.environ.get(JOBS_ENV, '')
    if not raw:
        return default
    if not raw.isdigit() or int(raw) <= 0:
        logger.warning(f'{JOBS_ENV}={raw!r} is not a positive integer. Using {default}.')
        return default
    return int(raw)


def mask_of(indices: Iterable[int]) -> int:
    """Pack variable indices into a bitmask.

    Args:
        indices (Iterable[int]): 0-based variable indices.

    Returns:
        int: bitmask with one bit per index.
    """
    mask = 0
    for index in indices:
        mask |= 1 << index
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(mask: int) -> List[int]:
    """Indices of the set bits as a sorted list."""
    return list(iter_bits(mask))


def lowest_bit(mask: int) -> int:
    """Index of the lowest set bit, -1 for an empty mask."""
    return (mask & -mask).bit_length() - 1


def one_based(mask: int) -> List[int]:
    """Sorted 1-based indices of a mask, as written in every external format."""
    return [index + 1 for index in iter_bits(mask)]
