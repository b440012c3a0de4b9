"""
The machine-readable design report.

A report is a single JSON document with a fixed key order. Field names are part of the external
contract and are listed in README.md.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from src import config
from src.design import (BoundaryKind, BranchSet, TrackBranch, branch_from_record, eval_branch,
                        reconstruction_residual)
from src.force import IntegralCache, force_from_record, force_to_record
from src.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass
class DesignReport:
    """Everything cmd_design found.
    Attributes:
        version: str, the camforge version that wrote the report.
        problem: dict, echo of the design problem (force record, stiffness, preload, travel_limit,
            search_window, boundary_tolerance, quad_tolerance, exact_params).
        branches: list of dict, one record per branch in report order.
        notes: list of str, existence notes and labelling remarks.
        duration_s: float or None, wall-clock design time, only recorded on request.
    """
    version: str
    problem: dict
    branches: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    duration_s: Optional[float] = None

    def labels(self) -> List[str]:
        return [record['label'] for record in self.branches]

    def branch(self, label: str) -> dict:
        for record in self.branches:
            if record['label'] == label:
                return record
        raise ConfigError(f"Report has no branch '{label}'; available: {', '.join(self.labels())}")


def sample_branch(branch: TrackBranch, samples: int = config.REPORT_SAMPLES):
    """Returns (xs, ys) sampled across the open branch domain. X = 0 is included for one-sided domains
    so the table can be refitted as a track."""
    lo, hi = branch.domain
    if branch.lower_kind is BoundaryKind.ORIGIN:
        xs = np.linspace(0.0, hi, samples + 1)[:-1]
    elif branch.upper_kind is BoundaryKind.ORIGIN:
        xs = np.linspace(lo, 0.0, samples + 1)[1:]
    else:
        xs = np.linspace(lo, hi, samples + 2)[1:-1]
    ys = np.array([eval_branch(branch, float(x)) for x in xs])
    return xs, ys


def branch_record(branch: TrackBranch, samples: int = config.REPORT_SAMPLES) -> dict:
    residual = reconstruction_residual(branch)
    xs, ys = sample_branch(branch, samples)
    return {
        'label': branch.label,
        'sign': branch.sign,
        'stiffness': branch.stiffness,
        'preload': branch.preload,
        'travel_limit': branch.travel_limit,
        'stiffness_class': branch.stiffness_class,
        'preload_class': branch.preload_class,
        'domain': [branch.domain[0], branch.domain[1]],
        'boundary_kinds': [branch.lower_kind.value, branch.upper_kind.value],
        'scsm_equivalent': branch.scsm_equivalent,
        'residual': {
            'sup': residual.sup,
            'rms': residual.rms,
            'sup_relative': residual.sup_relative,
            'rms_relative': residual.rms_relative,
            'samples': residual.samples,
        },
        'samples': {'X': [float(x) for x in xs], 'Y': [float(y) for y in ys]},
    }


def build_report(branch_set: BranchSet, samples: int = config.REPORT_SAMPLES,
                 duration_s: float = None) -> DesignReport:
    problem = branch_set.problem
    notes = [line for line in branch_set.existence_note.splitlines() if line]
    aliased = [label for label in branch_set.labels() if label in config.ALTERNATIVE_LABELS]
    if aliased:
        notes.append('; '.join(f"{label} is also labelled {config.ALTERNATIVE_LABELS[label]} in softening "
                               f"Duffing examples" for label in aliased))
    return DesignReport(
        version=config.VERSION,
        problem={
            'force': force_to_record(problem.force),
            'stiffness': problem.stiffness,
            'preload': problem.preload,
            'travel_limit': problem.travel_limit,
            'search_window': problem.search_window,
            'boundary_tolerance': problem.boundary_tolerance,
            'quad_tolerance': problem.quad_tolerance,
            'exact_params': problem.exact_params,
        },
        branches=[branch_record(branch, samples) for branch in branch_set],
        notes=notes,
        duration_s=duration_s,
    )


def serialize(report: DesignReport) -> str:
    document = asdict(report)
    if document['duration_s'] is None:
        del document['duration_s']
    return json.dumps(document, indent=2, allow_nan=False) + '\n'


def parse(text: str) -> DesignReport:
    """Reads a serialized report.
    Raises:
        ConfigError if the text is not a report.
    """
    try:
        document = json.loads(text)
        return DesignReport(**document)
    except (json.JSONDecodeError, TypeError) as parse_error:
        raise ConfigError('Not a camforge design report') from parse_error


def write_report(path: str, report: DesignReport):
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(serialize(report))
    logger.info("Wrote report with %d branches to %s", len(report.branches), path)


def read_report(path: str) -> DesignReport:
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            text = fh.read()
    except OSError as read_error:
        raise ConfigError(f"Could not read report '{path}'") from read_error
    return parse(text)


def report_branch(report: DesignReport, label: str) -> TrackBranch:
    """Rebuilds one branch of a report, with the reported force and tolerances."""
    problem = report.problem
    force = force_from_record(problem['force'])
    cache = IntegralCache(force, problem['quad_tolerance'], problem['search_window'])
    return branch_from_record(report.branch(label), force, cache, problem['boundary_tolerance'])
