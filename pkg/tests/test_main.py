import json
import filecmp

import pandas as pd
import pytest

from src import config
from src import report as reports
from src.main import main, validate_file_type
from src.design import eval_branch
from src.errors import ConfigError

SOFTENING = ['--force', '5000*X^3', '--stiffness', '100', '--preload', '0.1', '--travel-limit', '0.2']


@pytest.fixture(scope='class')
def design_dir(testdir):
    """Runs the softening Duffing design once, with plots."""
    output = testdir.joinpath('design')
    assert main(['design', *SOFTENING, '--samples', '21', '--svg', '--output', str(output)]) == 0
    return output


class TestDesign:
    def test_outputs(self, design_dir):
        """Test that the report, one table per branch and the plots are written."""
        report = reports.read_report(str(design_dir.joinpath(config.REPORT_NAME)))
        assert report.labels() == ['Y11', 'Y21', 'Y12', 'Y22', 'Y14', 'Y24']
        for label in report.labels():
            table = pd.read_csv(design_dir.joinpath(f"{label}.csv"))
            assert list(table.columns) == ['X', 'Y']
            assert len(table) == 21
            assert design_dir.joinpath(f"{label}.svg").exists()
        assert design_dir.joinpath(config.OVERLAY_NAME).exists()

    def test_reproducible(self, design_dir, testdir, capsys):
        """Test that rerunning the same design writes byte-identical files."""
        rerun = testdir.joinpath('rerun')
        assert main(['design', *SOFTENING, '--samples', '21', '--svg', '--output', str(rerun)]) == 0
        names = sorted(path.name for path in design_dir.iterdir())
        assert names == sorted(path.name for path in rerun.iterdir())
        _, mismatch, errors = filecmp.cmpfiles(design_dir, rerun, names, shallow=False)
        assert mismatch == [] and errors == []

    def test_summary(self, testdir, capsys):
        assert main(['design', *SOFTENING, '--samples', '5', '--output', str(testdir.joinpath('summary'))]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert [line.split()[0] for line in lines if line.startswith('Y')] == \
            ['Y11', 'Y21', 'Y12', 'Y22', 'Y14', 'Y24']
        assert any(line.startswith('note: ') and 'Y13/Y23' in line for line in lines)

    def test_missing_force(self, capsys):
        assert main(['design', '--stiffness', '100', '--travel-limit', '0.2']) == 2
        assert '--force' in capsys.readouterr().err

    def test_quasi_zero_spring(self, tmp_path, capsys):
        """Test that a spring with K1 = 2*K2 cannot shape a track."""
        code = main(['design', '--force', 'X', '--k1', '100', '--k2', '50', '--travel-limit', '0.2',
                     '--output', str(tmp_path)])
        assert code == 3
        assert 'camforge: error:' in capsys.readouterr().err

    def test_parse_error(self, tmp_path, capsys):
        assert main(['design', '--force', '5000*X^', '--stiffness', '100', '--travel-limit', '0.2',
                     '--output', str(tmp_path)]) == 2

    @pytest.mark.parametrize('text', ['sqrt(-1)*X', 'exp(1000)*X', 'X^(1/0)'])
    def test_invalid_constant(self, tmp_path, capsys, text):
        """Test that a constant which cannot be evaluated is a usage error rather than a crash."""
        assert main(['design', '--force', text, '--stiffness', '100', '--travel-limit', '0.2',
                     '--output', str(tmp_path)]) == 2
        assert 'camforge: error:' in capsys.readouterr().err

    def test_unknown_command(self, capsys):
        assert main(['shape']) == 2


class TestVerify:
    def test_report(self, design_dir, capsys):
        assert main(['verify', '--report', str(design_dir.joinpath(config.REPORT_NAME))]) == 0
        output = capsys.readouterr().out
        assert 'FAIL' not in output
        assert output.count('pass') == 7

    def test_branch_subset(self, design_dir, capsys):
        assert main(['verify', '--report', str(design_dir.joinpath(config.REPORT_NAME)),
                     '--branch', 'Y12', 'Y14']) == 0
        assert capsys.readouterr().out.count('pass') == 3

    def test_csv_track(self, testdir, parabola_samples, capsys):
        """Test a sampled Y = 5*X^2 track against the force it realizes and a wrong one."""
        path = testdir.joinpath('parabola.csv')
        pd.DataFrame({'X': parabola_samples[:, 0], 'Y': parabola_samples[:, 1]}).to_csv(path, index=False)
        spring = ['--stiffness', '-100', '--travel-limit', '0.2']
        assert main(['verify', '--track', str(path), *spring, '--force', '5000*X^3']) == 0
        assert main(['verify', '--track', str(path), *spring, '--force', '4000*X^3']) == 1
        assert 'FAIL' in capsys.readouterr().out

    def test_unreadable_report(self, tmp_path, capsys):
        assert main(['verify', '--report', str(tmp_path.joinpath('missing.json'))]) == 2

    def test_not_a_report(self, tmp_path, capsys):
        path = tmp_path.joinpath('other.json')
        path.write_text('[1, 2, 3]')
        assert main(['verify', '--report', str(path)]) == 2


class TestSimulate:
    def test_compare(self, design_dir, testdir, capsys):
        """Test that the zero-preload softening track follows the target system until it leaves the track."""
        trajectory = testdir.joinpath('trajectory.csv')
        code = main(['simulate', '--report', str(design_dir.joinpath(config.REPORT_NAME)), '--branch', 'Y14',
                     '--mass', '1', '--x0', '0.05', '--dt', '1e-5', '--t-end', '1', '--compare',
                     '--trajectory', str(trajectory)])
        assert code == 0
        summary = capsys.readouterr().out.strip().splitlines()[-1]
        assert summary.split('(')[0] in ('Locked', 'DomainExit')
        deviation = float(summary.split('reference_deviation=')[1])
        assert deviation <= 1e-5
        assert list(pd.read_csv(trajectory).columns) == ['t', 'X', 'V', 'E']

    def test_initial_state_outside(self, design_dir, testdir, capsys):
        code = main(['simulate', '--report', str(design_dir.joinpath(config.REPORT_NAME)), '--branch', 'Y14',
                     '--mass', '1', '--x0', '0.3', '--dt', '1e-4', '--t-end', '0.1',
                     '--trajectory', str(testdir.joinpath('unused.csv'))])
        assert code == 3

    def test_unknown_branch(self, design_dir, testdir, capsys):
        code = main(['simulate', '--report', str(design_dir.joinpath(config.REPORT_NAME)), '--branch', 'Y13',
                     '--mass', '1', '--x0', '0.05', '--dt', '1e-4', '--t-end', '0.1',
                     '--trajectory', str(testdir.joinpath('unused.csv'))])
        assert code == 2
        assert 'Y13' in capsys.readouterr().err

    def test_csv_track(self, testdir, capsys):
        """Test a harmonic run on a sampled Y = X track."""
        path = testdir.joinpath('identity.csv')
        pd.DataFrame({'X': [-0.15, 0.0, 0.15], 'Y': [-0.15, 0.0, 0.15]}).to_csv(path, index=False)
        code = main(['simulate', '--track', str(path), '--stiffness', '100', '--travel-limit', '0.2',
                     '--mass', '1', '--x0', '0.1', '--dt', '1e-3', '--t-end', '1',
                     '--trajectory', str(testdir.joinpath('harmonic.csv'))])
        assert code == 0
        assert capsys.readouterr().out.startswith('Completed steps=1000')

    def test_compare_needs_force(self, testdir, capsys):
        path = testdir.joinpath('identity.csv')
        pd.DataFrame({'X': [-0.15, 0.0, 0.15], 'Y': [-0.15, 0.0, 0.15]}).to_csv(path, index=False)
        code = main(['simulate', '--track', str(path), '--stiffness', '100', '--travel-limit', '0.2',
                     '--mass', '1', '--x0', '0.1', '--dt', '1e-3', '--t-end', '1', '--compare'])
        assert code == 2


class TestGsm:
    def test_table(self, tmp_path, capsys):
        output = tmp_path.joinpath('gsm.csv')
        code = main(['gsm', '--k1', '100', '--k2', '30', '--gap', '0.05', '--travel-limit', '0.2',
                     '--range', '0.1', '--samples', '3', '--output', str(output)])
        assert code == 0
        curve = pd.read_csv(output)
        assert list(curve['Y']) == pytest.approx([-0.1, 0.0, 0.1])
        assert curve['F'].iloc[2] == pytest.approx(5.732050807568877, rel=1e-12)
        assert curve['K'].iloc[2] == pytest.approx(63.09401076758503, rel=1e-12)
        assert 'qzs=False' in capsys.readouterr().out

    def test_quasi_zero(self, tmp_path, capsys):
        output = tmp_path.joinpath('gsm.csv')
        assert main(['gsm', '--k1', '100', '--k2', '50', '--travel-limit', '0.2', '--output', str(output),
                     '--svg', str(tmp_path.joinpath('gsm.svg'))]) == 0
        assert (pd.read_csv(output)['K'] == 0).all()
        assert 'qzs=True' in capsys.readouterr().out
        assert tmp_path.joinpath('gsm.svg').exists()

    def test_gap_too_wide(self, tmp_path, capsys):
        assert main(['gsm', '--k1', '100', '--k2', '30', '--gap', '0.3', '--travel-limit', '0.2',
                     '--output', str(tmp_path.joinpath('gsm.csv'))]) == 2

    def test_wrong_extension(self, tmp_path, capsys):
        assert main(['gsm', '--k1', '100', '--k2', '30', '--travel-limit', '0.2',
                     '--output', str(tmp_path.joinpath('gsm.xlsx'))]) == 2


class TestConfigFile:
    def test_flags_override(self, tmp_path, capsys):
        """Test that command line flags win over the config file."""
        path = tmp_path.joinpath('softening.ini')
        path.write_text('[force]\nforce = 5000*X^3\n\n'
                        '[gsm]\nstiffness = -100\ntravel_limit = 0.2\n\n'
                        '[design]\npreload = 0.1\nexact_params = yes\nsamples = 11\n')
        output = tmp_path.joinpath('out')
        assert main(['--config', str(path), 'design', '--preload', '0', '--output', str(output)]) == 0
        report = reports.read_report(str(output.joinpath(config.REPORT_NAME)))
        assert report.labels() == ['Y14', 'Y24']
        assert report.problem['exact_params'] is True
        assert len(report.branch('Y14')['samples']['X']) == 11

    def test_sections_are_scoped(self, tmp_path, capsys, monkeypatch):
        """Test that a [design] key does not leak into the gsm command's option of the same name."""
        monkeypatch.chdir(tmp_path)
        path = tmp_path.joinpath('plots.ini')
        path.write_text('[gsm]\nk1 = 100\nk2 = 30\ntravel_limit = 0.2\n\n[design]\nsvg = yes\n')
        assert main(['--config', str(path), 'gsm']) == 0
        assert sorted(p.name for p in tmp_path.iterdir()) == ['gsm.csv', 'plots.ini']

    @pytest.mark.parametrize('content', ['[design]\nbogus = 1\n', '[plot]\nsvg = yes\n',
                                         '[design]\nsvg = maybe\n', 'not an ini file'])
    def test_bad_config(self, tmp_path, capsys, content):
        path = tmp_path.joinpath('bad.ini')
        path.write_text(content)
        assert main(['--config', str(path), 'gsm', '--k1', '1', '--k2', '0', '--travel-limit', '1']) == 2

    def test_missing_config(self, tmp_path, capsys):
        assert main(['--config', str(tmp_path.joinpath('missing.ini')), 'gsm']) == 2


class TestReport:
    def test_round_trip(self, softening_branches):
        """Test that a parsed report serializes to the same text."""
        text = reports.serialize(reports.build_report(softening_branches, samples=7))
        assert reports.serialize(reports.parse(text)) == text
        document = json.loads(text)
        assert 'duration_s' not in document
        assert list(document) == ['version', 'problem', 'branches', 'notes']

    def test_duration(self, softening_branches):
        report = reports.build_report(softening_branches, samples=3, duration_s=0.25)
        assert json.loads(reports.serialize(report))['duration_s'] == 0.25

    def test_alias_note(self, softening_branches):
        """Test that the zero-preload pair carries a note about its alternative label."""
        notes = reports.build_report(softening_branches, samples=3).notes
        assert any('Y14 is also labelled Y13' in note for note in notes)

    def test_rebuild_branch(self, softening_branches):
        report = reports.parse(reports.serialize(reports.build_report(softening_branches, samples=3)))
        for label in ('Y11', 'Y12', 'Y24'):
            rebuilt = reports.report_branch(report, label)
            original = softening_branches[label]
            assert rebuilt.domain == original.domain
            for x in (-0.1, 0.0, 0.05):
                assert eval_branch(rebuilt, x) == pytest.approx(eval_branch(original, x), rel=1e-12)
        with pytest.raises(ConfigError):
            reports.report_branch(report, 'Y13')

    def test_one_sided_samples(self, quadratic_branches):
        """Test that sampling a one-sided branch includes X = 0 and stays inside the domain."""
        xs, ys = reports.sample_branch(quadratic_branches['Y14'], 10)
        assert xs[0] == 0.0 and ys[0] == 0.0
        assert xs[-1] < quadratic_branches['Y14'].domain[1]
        xs, _ = reports.sample_branch(quadratic_branches['Y13'], 10)
        assert xs[-1] == 0.0


def test_validate_file_type():
    assert validate_file_type('out/report.json', '.json') == 'out/report.json'
    assert validate_file_type('trajectory', '.csv') == 'trajectory'
    with pytest.raises(ConfigError):
        validate_file_type('trajectory.json', '.csv')
