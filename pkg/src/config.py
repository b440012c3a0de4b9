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

VERSION = '0.1.0'

# expressions
MAX_EXPONENT = 64               # largest |n| accepted after '^'

# quadrature
QUAD_TOLERANCE = 1e-12          # N*m, absolute
SIMPSON_MAX_DEPTH = 60
CONTINUITY_SAMPLES = 1024
DIFF_STEP = 1e-6                # relative step for central differences of expressions

# domain search
BOUNDARY_TOLERANCE = 1e-10      # m
MARCH_DIVISIONS = 1024
SEARCH_WINDOW_FACTOR = 10.0     # X_max = factor * L
FALLBACK_PRELOAD_FRACTION = 0.5 # |delta| used for the nonzero quartet when delta = 0 is requested

# gsm
QZS_RELATIVE = 1e-9
GSM_RANGE_FRACTION = 0.9
GSM_SAMPLES = 201

# dynamics
LOCK_GUARD_FRACTION = 1e-6      # eps_L = fraction * L
DEFAULT_METHOD = 'verlet'
METHODS = ('verlet', 'rk4')
ENERGY_FLOOR = 1e-300

# verification
RESIDUAL_SAMPLES = 64
CLOSED_FORM_THRESHOLD = 1e-6
SPLINE_THRESHOLD = 1e-3
SPLINE_END_KNOTS = 3            # knot spacings trimmed from each end of a spline track

# reporting
REPORT_SAMPLES = 201
REPORT_NAME = 'report.json'
OVERLAY_NAME = 'branches.svg'
SVG_HASH_SALT = 'camforge'

# branch labels in report order: (stiffness sign, preload is zero, branch sign) -> label
BRANCH_ORDER = ['Y11', 'Y21', 'Y12', 'Y22', 'Y13', 'Y23', 'Y14', 'Y24']
BRANCH_LABELS = {
                    (1, False, 1): 'Y11',
                    (1, False, -1): 'Y21',
                    (-1, False, 1): 'Y12',
                    (-1, False, -1): 'Y22',
                    (1, True, 1): 'Y13',
                    (1, True, -1): 'Y23',
                    (-1, True, 1): 'Y14',
                    (-1, True, -1): 'Y24',
                    }

# labels some softening Duffing examples use for the zero-preload, negative-stiffness pair
ALTERNATIVE_LABELS = {
                    'Y14': 'Y13',
                    'Y24': 'Y23',
                    }

# command line
THREADS_ENV = 'CAMFORGE_THREADS'
# INI section -> subcommands it configures
CONFIG_SECTIONS = {
                    'force': ('design', 'simulate', 'verify'),
                    'gsm': ('design', 'simulate', 'verify', 'gsm'),
                    'design': ('design',),
                    'simulate': ('simulate',),
                    }

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_MODEL = 3

supported_exts = [
                    '.csv',
                    '.json',
                    '.svg',
                    ]
