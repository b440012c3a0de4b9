"""
Contains helper functions. None are related to a specific model object.
"""

import os
import re
import logging

import numpy as np
import pandas as pd

from src import config
from src.errors import ConfigError

logger = logging.getLogger(__name__)


def sign(value: float) -> int:
    """Returns +1 for non-negative values and -1 for negative values."""
    return -1 if value < 0 else 1


def chebyshev_nodes(lo: float, hi: float, count: int) -> np.ndarray:
    """Returns 'count' Chebyshev-Gauss nodes strictly inside (lo, hi), in increasing order."""
    k = np.arange(count)
    nodes = np.cos((2 * k + 1) * np.pi / (2 * count))[::-1]
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes


def thread_count() -> int:
    """Reads the worker cap from the environment.

    Returns:
        The number of worker threads to use. 0 or an unset variable means one per CPU.
    """
    raw = os.environ.get(config.THREADS_ENV, '0').strip() or '0'
    try:
        count = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r, expected an integer", config.THREADS_ENV, raw)
        count = 0
    if count <= 0:
        count = os.cpu_count() or 1
    return count


def get_extension(filepath: str) -> str:
    """Returns the file extension from a filepath, the suffix delimited by (and including)
    the final fullstop.

    Arguments:
        filepath: str, the path to a file. Can be full path or absolute.

    Returns:
        The extension as a string, including the leading fullstop.
        If no suffix is found, returns None instead.
    """
    ext = ''.join(re.findall(r'\.[^.\\/]*$', str(filepath)))
    return ext.lower() if ext else None


def read_pairs(path: str, what: str = 'table') -> np.ndarray:
    """Reads a two column numeric CSV. A header row is optional.
    Arguments:
        path: str, the CSV file.
        what: str, a description of the table used in error messages.
    Returns:
        An (n, 2) float array in file order.
    Raises:
        ConfigError if the file cannot be read or does not hold two numeric columns.
    """
    try:
        table = pd.read_csv(path, header=None, float_precision='round_trip')
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as read_error:
        raise ConfigError(f"Could not read {what} '{path}'") from read_error
    if table.shape[1] != 2:
        raise ConfigError(f"{what.capitalize()} '{path}' must have exactly two columns")
    if pd.to_numeric(table.iloc[0], errors='coerce').isna().any():
        table = table.iloc[1:]
    try:
        return table.astype(float).to_numpy()
    except ValueError as value_error:
        raise ConfigError(f"{what.capitalize()} '{path}' contains non-numeric values") from value_error


def write_table(path: str, columns: dict):
    """Writes equally long columns to a CSV with a mandatory header and shortest round-trip floats."""
    pd.DataFrame(columns).to_csv(path, index=False, lineterminator='\n')
