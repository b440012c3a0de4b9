"""
    camforge: synthesize roller-track profiles for arbitrary restoring forces

    This program is free software: you can redistribute it and/or modify
    it under the terms of the GNU General Public License as published by
    the Free Software Foundation, either version 3 of the License, or
    (at your option) any later version.
    This program is distributed in the hope that it will be useful,
    but WITHOUT ANY WARRANTY; without even the implied warranty of
    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
    GNU General Public License for more details.
    You should have received a copy of the GNU General Public License
    along with this program.  If not, see <https://www.gnu.org/licenses/>.
"""

import os
import sys
import time
import logging
import argparse
import configparser

import pandas as pd

from src import config
from src import plot
from src import report as reports
from src.tools import get_extension, write_table
from src.force import load_force_table, parse_force
from src.gsm import GsmParams, LinearGsm, gsm_curve, is_quasi_zero, linear_gsm, origin_stiffness
from src.track import fit_track, read_track_samples, track_residual, write_track_samples
from src.design import DesignProblem, design_branches, reconstruction_residual, to_track
from src.dynamics import (SimConfig, compare_trajectories, energy_drift, simulate_reference, simulate_track,
                          write_trajectory)
from src.errors import ConfigError, ModelError, ParameterError

logger = logging.getLogger(__name__)


def validate_file_type(filepath: str, expected: str) -> str:
    """Checks that an output path has a supported extension.

    Supported formats are defined in the config file.

    Arguments:
        filepath: str, the path to a file. Can be full path or absolute.
        expected: str, the extension the command writes, including the leading fullstop.

    Returns:
        The passed filepath.

    Raises:
        ConfigError if the file type is not the expected one.
    """
    ext = get_extension(filepath)
    if ext is not None:
        if ext not in config.supported_exts or ext != expected:
            raise ConfigError(f"Filetype {ext} is not supported here, expected {expected}.")
    return filepath


def load_config(path: str) -> dict:
    """Reads an INI config file into {section: {key: text}}.

    Keys use the flag names with underscores (travel_limit for --travel-limit).

    Raises:
        ConfigError if the file cannot be read or has an unknown section.
    """
    parser = configparser.ConfigParser()
    try:
        read = parser.read(path, encoding='utf-8')
    except configparser.Error as config_error:
        raise ConfigError(f"Could not parse config file '{path}'") from config_error
    if not read:
        raise ConfigError(f"Could not read config file '{path}'")
    sections = {}
    for section in parser.sections():
        if section not in config.CONFIG_SECTIONS:
            raise ConfigError(f"Unknown section [{section}] in '{path}', expected one of "
                              f"{', '.join(config.CONFIG_SECTIONS)}")
        sections[section] = {key.replace('-', '_'): value for key, value in parser.items(section)}
    return sections


def _apply_config(commands: dict, sections: dict):
    """Turns config values into subcommand defaults, so flags given on the command line still win."""
    for section, values in sections.items():
        known = set()
        for name in config.CONFIG_SECTIONS[section]:
            command = commands[name]
            defaults = {}
            for action in command._actions:
                known.add(action.dest)
                if action.dest not in values:
                    continue
                if isinstance(action, argparse._StoreTrueAction):
                    text = values[action.dest].strip().lower()
                    if text not in configparser.ConfigParser.BOOLEAN_STATES:
                        raise ConfigError(f"'{action.dest}' must be a boolean, got {values[action.dest]!r}")
                    defaults[action.dest] = configparser.ConfigParser.BOOLEAN_STATES[text]
                else:
                    defaults[action.dest] = values[action.dest]
            command.set_defaults(**defaults)
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown keys in [{section}]: {', '.join(unknown)}")


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ConfigError(f"missing --{name.replace('_', '-')}")


def _force(args):
    if args.force is not None and args.force_table is not None:
        raise ConfigError('give either --force or --force-table, not both')
    if args.force is not None:
        return parse_force(args.force)
    if args.force_table is not None:
        return load_force_table(args.force_table, args.interpolation)
    raise ConfigError('missing --force (or --force-table)')


def _spring(args) -> LinearGsm:
    """The linear spring from --stiffness, or from --k1/--k2 with B = 0."""
    _require(args, 'travel_limit')
    if args.stiffness is not None:
        return LinearGsm(args.stiffness, args.travel_limit)
    if args.k1 is not None:
        return linear_gsm(GsmParams(args.k1, args.k2 or 0.0, args.gap or 0.0, args.travel_limit))
    raise ConfigError('missing --stiffness (or --k1/--k2)')


def cmd_design(args) -> int:
    force = _force(args)
    spring = _spring(args)
    problem = DesignProblem(force, spring.stiffness, args.preload, spring.travel_limit, args.search_window,
                            args.boundary_tolerance, args.quad_tolerance, args.exact_params)
    start = time.perf_counter()
    report = reports.build_report(design_branches(problem), args.samples)
    if args.record_timing:
        report.duration_s = time.perf_counter() - start

    os.makedirs(args.output, exist_ok=True)
    reports.write_report(os.path.join(args.output, config.REPORT_NAME), report)
    for record in report.branches:
        samples = record['samples']
        write_track_samples(os.path.join(args.output, f"{record['label']}.csv"), samples['X'], samples['Y'])
        if args.svg:
            plot.plot_branch(os.path.join(args.output, f"{record['label']}.svg"), record)
    if args.svg:
        plot.plot_overlay(os.path.join(args.output, config.OVERLAY_NAME), report.branches)

    for record in report.branches:
        lo, hi = record['domain']
        print(f"{record['label']} K={record['stiffness']!r} delta={record['sign'] * record['preload'] or 0.0!r} "
              f"domain=({lo!r}, {hi!r}) [{'/'.join(record['boundary_kinds'])}] "
              f"residual={record['residual']['sup_relative']:.3e}")
    for note in report.notes:
        print(f"note: {note}")
    return config.EXIT_OK


def _simulation_track(args):
    """Returns (track, force) for simulate; force is None when neither the report nor a flag gives one."""
    if args.report is not None:
        _require(args, 'branch')
        branch = reports.report_branch(reports.read_report(args.report), args.branch)
        force = _force(args) if args.force or args.force_table else branch.force
        return to_track(branch), force
    if args.track is not None:
        track = fit_track(read_track_samples(args.track), _spring(args))
        force = _force(args) if args.force or args.force_table else None
        return track, force
    raise ConfigError('missing --report (or --track)')


def cmd_simulate(args) -> int:
    _require(args, 'mass', 'dt', 't_end', 'x0')
    sim = SimConfig(args.mass, args.dt, args.t_end, args.method, args.lock_guard, args.record_stride)
    track, force = _simulation_track(args)
    if args.compare and force is None:
        raise ConfigError('--compare needs a force: use --report or give --force')
    result = simulate_track(track, sim, args.x0, args.v0)
    write_trajectory(validate_file_type(args.trajectory, '.csv'), result)
    drift = energy_drift(result) if len(result.samples) > 1 else 0.0
    summary = f"{result.termination} steps={result.steps} drift={drift:.3e}"
    if args.compare:
        reference = simulate_reference(force, sim, args.x0, args.v0)
        summary += f" reference_deviation={compare_trajectories(result, reference):.3e}"
    print(summary)
    return config.EXIT_OK


def cmd_verify(args) -> int:
    rows = []
    if args.report is not None:
        report = reports.read_report(args.report)
        labels = [args.branch] if isinstance(args.branch, str) else (args.branch or report.labels())
        threshold = args.threshold or config.CLOSED_FORM_THRESHOLD
        override = _force(args) if args.force or args.force_table else None
        for label in labels:
            branch = reports.report_branch(report, label)
            if override is None:
                residual = reconstruction_residual(branch, args.residual_samples)
            else:
                residual = track_residual(to_track(branch), override, args.residual_samples,
                                          branch.boundary_tolerance)
            rows.append((label, residual))
    elif args.track is not None:
        track = fit_track(read_track_samples(args.track), _spring(args))
        threshold = args.threshold or config.SPLINE_THRESHOLD
        rows.append((os.path.basename(args.track), track_residual(track, _force(args), args.residual_samples)))
    else:
        raise ConfigError('missing --report (or --track)')

    table = pd.DataFrame([{'track': name, 'sup': r.sup, 'rms': r.rms, 'sup_relative': r.sup_relative,
                           'rms_relative': r.rms_relative, 'result': 'pass' if r.passes(threshold) else 'FAIL'}
                          for name, r in rows])
    print(table.to_string(index=False))
    passed = all(r.passes(threshold) for _, r in rows)
    print(f"{'pass' if passed else 'FAIL'} at relative threshold {threshold!r}")
    return config.EXIT_OK if passed else config.EXIT_VERIFY_FAILED


def cmd_gsm(args) -> int:
    _require(args, 'k1', 'k2', 'travel_limit')
    params = GsmParams(args.k1, args.k2, args.gap, args.travel_limit)
    curve = gsm_curve(params, args.range, args.samples)
    write_table(validate_file_type(args.output, '.csv'), curve)
    if args.svg is not None:
        plot.plot_gsm_curve(validate_file_type(args.svg, '.svg'), curve)
    print(f"linear_stiffness={params.k_vertical - 2 * params.k_oblique!r} "
          f"origin_stiffness={origin_stiffness(params)!r} qzs={is_quasi_zero(params)}")
    return config.EXIT_OK


def _add_force_options(parser):
    parser.add_argument('--force', help="target force F(X) [N], e.g. '5000*X^3'")
    parser.add_argument('--force-table', help='two column X,F CSV of the target force')
    parser.add_argument('--interpolation', choices=('cubic', 'linear'), default='cubic',
                        help='interpolation of --force-table (default: cubic)')


def _add_spring_options(parser):
    parser.add_argument('--stiffness', type=float, help='linear spring stiffness K_GSM [N/m]')
    parser.add_argument('--k1', type=float, help='vertical spring stiffness [N/m]')
    parser.add_argument('--k2', type=float, help='oblique spring stiffness [N/m]')
    parser.add_argument('--gap', type=float, default=0.0, help='half gap B [m] (default: 0)')
    parser.add_argument('--travel-limit', type=float, help='rod length L [m]')


def build_parser():
    """Returns the top level parser and its subcommand parsers by name."""
    parser = argparse.ArgumentParser(prog='camforge',
                                     description='Design roller tracks that realize a nonlinear restoring force.')
    parser.add_argument('--version', action='version', version=f"%(prog)s {config.VERSION}")
    parser.add_argument('--config', help='INI file with [force], [gsm], [design] and [simulate] sections')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='log debug messages')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='log warnings and errors only')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    design = subparsers.add_parser('design', help='enumerate every track branch for a target force')
    _add_force_options(design)
    _add_spring_options(design)
    design.add_argument('--preload', type=float, default=0.0, help='preload delta = Y(0) [m] (default: 0)')
    design.add_argument('--search-window', type=float, help='domain search half width X_max [m] (default: 10*L)')
    design.add_argument('--boundary-tolerance', type=float, default=config.BOUNDARY_TOLERANCE)
    design.add_argument('--quad-tolerance', type=float, default=config.QUAD_TOLERANCE)
    design.add_argument('--samples', type=int, default=config.REPORT_SAMPLES, help='samples per track table')
    design.add_argument('--exact-params', action='store_true',
                        help='design only the signed stiffness and preload class given')
    design.add_argument('--output', default='.', help='output directory (default: .)')
    design.add_argument('--svg', action='store_true', help='also plot every branch and an overlay')
    design.add_argument('--record-timing', action='store_true', help='write duration_s into the report')
    design.set_defaults(handler=cmd_design)

    simulate = subparsers.add_parser('simulate', help='integrate the mass on a designed or sampled track')
    simulate.add_argument('--report', help='design report to take the track from')
    simulate.add_argument('--branch', help='branch label within --report, e.g. Y13')
    simulate.add_argument('--track', help='X,Y track CSV, fitted with a natural cubic spline')
    _add_force_options(simulate)
    _add_spring_options(simulate)
    simulate.add_argument('--mass', type=float, help='mass M [kg]')
    simulate.add_argument('--x0', type=float, help='initial position [m]')
    simulate.add_argument('--v0', type=float, default=0.0, help='initial velocity [m/s] (default: 0)')
    simulate.add_argument('--dt', type=float, help='time step [s]')
    simulate.add_argument('--t-end', type=float, help='final time [s]')
    simulate.add_argument('--method', choices=config.METHODS, default=config.DEFAULT_METHOD)
    simulate.add_argument('--lock-guard', type=float, help='lock distance below L [m] (default: 1e-6*L)')
    simulate.add_argument('--record-stride', type=int, default=1)
    simulate.add_argument('--trajectory', default='trajectory.csv', help='t,X,V,E output CSV')
    simulate.add_argument('--compare', action='store_true',
                          help='also integrate the target force directly and report the largest deviation')
    simulate.set_defaults(handler=cmd_simulate)

    verify = subparsers.add_parser('verify', help='check that a track reproduces a force')
    verify.add_argument('--report', help='design report whose branches are checked')
    verify.add_argument('--branch', nargs='+', help='branch labels to check (default: all)')
    verify.add_argument('--track', help='X,Y track CSV, fitted with a natural cubic spline')
    _add_force_options(verify)
    _add_spring_options(verify)
    verify.add_argument('--threshold', type=float,
                        help=f"relative sup residual threshold (default: {config.CLOSED_FORM_THRESHOLD} for "
                             f"reports, {config.SPLINE_THRESHOLD} for CSV tracks)")
    verify.add_argument('--residual-samples', type=int, default=config.RESIDUAL_SAMPLES)
    verify.set_defaults(handler=cmd_verify)

    gsm = subparsers.add_parser('gsm', help='tabulate force and stiffness of the general spring model')
    gsm.add_argument('--k1', type=float, help='vertical spring stiffness [N/m]')
    gsm.add_argument('--k2', type=float, help='oblique spring stiffness [N/m]')
    gsm.add_argument('--gap', type=float, default=0.0, help='half gap B [m] (default: 0)')
    gsm.add_argument('--travel-limit', type=float, help='rod length L [m]')
    gsm.add_argument('--range', type=float, help='tabulate |Y| up to this value [m] (default: 0.9*L)')
    gsm.add_argument('--samples', type=int, default=config.GSM_SAMPLES)
    gsm.add_argument('--output', default='gsm.csv', help='Y,F,K output CSV')
    gsm.add_argument('--svg', help='also plot the curves to this SVG file')
    gsm.set_defaults(handler=cmd_gsm)

    return parser, {'design': design, 'simulate': simulate, 'verify': verify, 'gsm': gsm}


def _fail(error: Exception, code: int) -> int:
    print(f"camforge: error: {error}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    """Runs the command line and returns the exit code: 0 success, 1 verification failed,
    2 usage or configuration error, 3 model error."""
    argv = sys.argv[1:] if argv is None else list(argv)
    parser, commands = build_parser()
    preparser = argparse.ArgumentParser(add_help=False)
    preparser.add_argument('--config')
    known, _ = preparser.parse_known_args(argv)
    try:
        if known.config is not None:
            _apply_config(commands, load_config(known.config))
        args = parser.parse_args(argv)
    except ConfigError as error:
        return _fail(error, config.EXIT_USAGE)
    except SystemExit as exit_request:
        return exit_request.code

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        return args.handler(args)
    except ParameterError as error:
        return _fail(error, config.EXIT_USAGE)
    except ModelError as error:
        return _fail(error, config.EXIT_MODEL)


if __name__ == '__main__':
    sys.exit(main())
