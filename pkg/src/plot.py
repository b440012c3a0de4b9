"""
SVG charts of tracks and spring curves. Output is byte-stable: the hash salt is fixed and no
creation date is written.
"""

import logging

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

from src import config

logger = logging.getLogger(__name__)

matplotlib.rcParams['svg.hashsalt'] = config.SVG_HASH_SALT


def _save(fig, path: str):
    fig.savefig(path, format='svg', metadata={'Date': None})
    plt.close(fig)
    logger.info("Wrote %s", path)


def _limits(ax, travel_limit: float):
    for y in (-travel_limit, travel_limit):
        ax.axhline(y, color='grey', linestyle=':', linewidth=0.8)


def plot_branch(path: str, record: dict):
    """One track with its domain ends marked.
    Arguments:
        record: dict, a branch record of a DesignReport.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(record['samples']['X'], record['samples']['Y'], 'k', label=record['label'])
    for x, kind in zip(record['domain'], record['boundary_kinds']):
        ax.axvline(x, color='r', linestyle='--', linewidth=0.8)
        ax.annotate(kind, (x, 0), fontsize=7, rotation=90, va='bottom')
    _limits(ax, record['travel_limit'])
    ax.set_xlabel('X [m]')
    ax.set_ylabel('Y [m]')
    ax.set_title(f"{record['label']}: K={record['stiffness']!r}, delta={record['sign'] * record['preload'] or 0.0!r}")
    ax.legend()
    _save(fig, path)


def plot_overlay(path: str, records):
    """All tracks of a report on one set of axes."""
    fig, ax = plt.subplots(figsize=(8, 6))
    for record in records:
        style = '-' if record['stiffness'] > 0 else '--'
        ax.plot(record['samples']['X'], record['samples']['Y'], style, label=record['label'])
    if records:
        _limits(ax, records[0]['travel_limit'])
    ax.set_xlabel('X [m]')
    ax.set_ylabel('Y [m]')
    ax.legend()
    _save(fig, path)


def plot_gsm_curve(path: str, curve):
    """Force and stiffness of the general spring model against Y.
    Arguments:
        curve: pandas DataFrame with columns Y, F, K.
    """
    fig, (force_ax, stiffness_ax) = plt.subplots(2, 1, figsize=(6, 7), sharex=True)
    force_ax.plot(curve['Y'], curve['F'], 'k')
    force_ax.set_ylabel('F [N]')
    stiffness_ax.plot(curve['Y'], curve['K'], 'b')
    stiffness_ax.set_ylabel('K [N/m]')
    stiffness_ax.set_xlabel('Y [m]')
    _save(fig, path)
