"""End-to-end tests for the command-line interface."""

import json

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from src.geometry.matrix_geometry import (
    AlgebraKind,
    AlgebraTag,
    MatrixGeometry,
    build_dirac_data,
    build_fermion_space,
)
from src.input.file_reader import geometry_to_dict, one_form_to_dict, read_geometry
from src.main import cli
from src.utils.errors import NonAntiHermitianCoefficient, NotInAlgebra
from src.utils.file_utils import canonical_json, write_json


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def sampled(runner, tmp_path):
    def sample(name='geometry.json', algebra='R', n=2, seed=1, scale=1.0):
        path = tmp_path / name
        result = runner.invoke(cli, [
            'sample', '--algebra', algebra, '--n', str(n), '--seed', str(seed),
            '--scale', str(scale), '--out', str(path),
        ])
        assert result.exit_code == 0, result.output
        return path
    return sample


@pytest.fixture
def one_form_file(tmp_path, rng):
    path = tmp_path / 'one_form.json'
    pairs = [(rng.standard_normal((2, 2)), rng.standard_normal((2, 2))) for _ in range(2)]
    write_json(path, one_form_to_dict(pairs))
    return path


def read(path):
    return json.loads(path.read_text())


def test_sample_then_verify(runner, sampled, tmp_path):
    report_path = tmp_path / 'report.json'
    result = runner.invoke(cli, ['verify', '--geometry', str(sampled()), '--out', str(report_path)])
    assert result.exit_code == 0
    report = read(report_path)
    assert report['all_pass'] is True
    assert report['first_order']['passed'] is True


def test_quaternionic_sample_needs_even_size(runner, tmp_path):
    result = runner.invoke(cli, ['sample', '--algebra', 'H', '--n', '3', '--out', str(tmp_path / 'g.json')])
    assert result.exit_code == 2
    assert not (tmp_path / 'g.json').exists()


def test_sample_is_deterministic(sampled):
    first = sampled('a.json', seed=9)
    second = sampled('b.json', seed=9)
    assert first.read_bytes() == second.read_bytes()
    assert sampled('c.json', seed=10).read_bytes() != first.read_bytes()


def test_geometry_file_round_trip(sampled):
    path = sampled(algebra='H', n=2)
    bundle = read_geometry(path)
    assert canonical_json(geometry_to_dict(bundle.geometry)) == path.read_text()


def test_corrupted_geometry_reports_algebra_violation(runner, sampled, tmp_path):
    path = sampled()
    data = read(path)
    data['H'][0][0][0][1] = 0.5
    path.write_text(json.dumps(data))
    report_path = tmp_path / 'report.json'
    result = runner.invoke(cli, ['verify', '--geometry', str(path), '--out', str(report_path)])
    assert result.exit_code == 1
    report = read(report_path)
    assert report['all_pass'] is False
    assert 'NotInAlgebra' in report['errors']


def test_broken_vector_coefficient_fails_verification(runner, sampled, tmp_path):
    path = sampled()
    data = read(path)
    data['L'][0] = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
    path.write_text(json.dumps(data))
    report_path = tmp_path / 'r.json'
    result = runner.invoke(cli, ['verify', '--geometry', str(path), '--out', str(report_path)])
    assert result.exit_code == 1
    assert 'NonAntiHermitianCoefficient' in read(report_path)['errors']


def test_malformed_json_is_a_usage_error(runner, tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"version": 1, "algebra": ')
    result = runner.invoke(cli, ['verify', '--geometry', str(path), '--out', str(tmp_path / 'r.json')])
    assert result.exit_code == 2
    assert 'ParseError' in read(tmp_path / 'r.json')['errors']


def test_batch_verify(runner, sampled, tmp_path):
    paths = [sampled('g1.json', seed=1), sampled('g2.json', algebra='H', seed=2)]
    report_path = tmp_path / 'batch.json'
    args = ['verify', '--out', str(report_path), '--jobs', '2']
    for p in paths:
        args += ['--geometry', str(p)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0
    reports = read(report_path)
    assert [r['geometry'] for r in reports] == [str(p) for p in paths]
    summary = pd.read_csv(report_path.with_suffix('.csv'))
    assert list(summary['all_pass']) == [True, True]


def test_integrate_zero_geometry(runner, sampled, tmp_path):
    out = tmp_path / 'z.json'
    result = runner.invoke(cli, ['integrate', '--geometry', str(sampled(scale=0.0)), '--out', str(out)])
    assert result.exit_code == 0
    report = read(out)
    assert report['Z'] == 0.0
    assert report['condition_flag'] is True


def test_integrate_scalar_geometry(runner, tmp_path):
    space = build_fermion_space(AlgebraKind(AlgebraTag.RealMat, 1))
    zero = np.zeros((1, 1))
    data = build_dirac_data([zero] * 4, [np.ones((1, 1)), zero, zero, zero], space)
    path = tmp_path / 'scalar.json'
    write_json(path, geometry_to_dict(MatrixGeometry(space=space, dirac=data)))
    out = tmp_path / 'z.json'
    result = runner.invoke(cli, ['integrate', '--geometry', str(path), '--out', str(out)])
    assert result.exit_code == 0
    report = read(out)
    assert report['Z'] == pytest.approx(16.0, rel=1e-12)
    assert report['condition_flag'] is False


def test_real_one_form_integral_matches_manifold_spectrum(runner, sampled, one_form_file, tmp_path):
    geometry = sampled()
    spectrum_path = tmp_path / 'spectrum.json'
    integral_path = tmp_path / 'z.json'
    result = runner.invoke(cli, [
        'spectrum', '--geometry', str(geometry), '--one-form', str(one_form_file), '--out', str(spectrum_path),
    ])
    assert result.exit_code == 0
    result = runner.invoke(cli, [
        'integrate', '--geometry', str(geometry), '--one-form', str(one_form_file), '--out', str(integral_path),
    ])
    assert result.exit_code == 0
    manifold = read(spectrum_path)['manifold_spectrum']
    assert len(read(spectrum_path)['spectrum']) == 2 * len(manifold)
    assert read(integral_path)['Z'] == pytest.approx(abs(np.prod(manifold)), rel=1e-8)


def test_spectrum_as_csv(runner, sampled, tmp_path):
    out = tmp_path / 'spectrum.csv'
    result = runner.invoke(cli, ['spectrum', '--geometry', str(sampled()), '--out', str(out)])
    assert result.exit_code == 0
    table = pd.read_csv(out)
    assert list(table.columns) == ['operator', 'index', 'eigenvalue']
    assert (table['operator'] == 'full').sum() == 32
    assert (table['operator'] == 'manifold').sum() == 16
    full = table[table['operator'] == 'full']['eigenvalue'].to_numpy()
    np.testing.assert_allclose(np.sort(full), -np.sort(full)[::-1], atol=1e-10)


def test_fluctuation_bundle_integrates_like_its_one_form(runner, sampled, one_form_file, tmp_path):
    geometry = sampled(seed=4)
    bundle = tmp_path / 'bundle.json'
    direct = tmp_path / 'direct.json'
    via_bundle = tmp_path / 'via_bundle.json'
    assert runner.invoke(cli, [
        'fluctuate', '--geometry', str(geometry), '--one-form', str(one_form_file), '--out', str(bundle),
    ]).exit_code == 0
    assert set(read(bundle)) >= {'L', 'H', 'theta', 'y'}
    assert runner.invoke(cli, [
        'integrate', '--geometry', str(geometry), '--one-form', str(one_form_file), '--out', str(direct),
    ]).exit_code == 0
    assert runner.invoke(cli, ['integrate', '--geometry', str(bundle), '--out', str(via_bundle)]).exit_code == 0
    assert read(via_bundle)['Z'] == pytest.approx(read(direct)['Z'], rel=1e-10)


@pytest.fixture
def bundle_file(runner, sampled, one_form_file, tmp_path):
    path = tmp_path / 'bundle.json'
    result = runner.invoke(cli, ['fluctuate', '--geometry', str(sampled()), '--one-form', str(one_form_file), '--out', str(path)])
    assert result.exit_code == 0
    return path


@pytest.mark.parametrize("command", ['spectrum', 'integrate'])
def test_bundle_with_charged_coefficient_outside_algebra_is_rejected(runner, bundle_file, tmp_path, command):
    data = read(bundle_file)
    data['theta'][1] = [[[0.0, 0.0], [0.0, 1.0]], [[0.0, -1.0], [0.0, 0.0]]]
    bundle_file.write_text(json.dumps(data))
    with pytest.raises(NotInAlgebra) as info:
        read_geometry(bundle_file)
    assert (info.value.which, info.value.index) == ('theta', 1)

    out = tmp_path / 'out.json'
    result = runner.invoke(cli, [command, '--geometry', str(bundle_file), '--out', str(out)])
    assert result.exit_code == 1
    assert not out.exists()


def test_bundle_with_hermitian_y_is_rejected(runner, bundle_file, tmp_path):
    data = read(bundle_file)
    data['y'][2] = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    bundle_file.write_text(json.dumps(data))
    with pytest.raises(NonAntiHermitianCoefficient) as info:
        read_geometry(bundle_file)
    assert (info.value.which, info.value.index) == ('y', 2)
    result = runner.invoke(cli, ['integrate', '--geometry', str(bundle_file), '--out', str(tmp_path / 'z.json')])
    assert result.exit_code == 1


def test_bundle_cannot_be_fluctuated_again(runner, sampled, one_form_file, tmp_path):
    bundle = tmp_path / 'bundle.json'
    runner.invoke(cli, ['fluctuate', '--geometry', str(sampled()), '--one-form', str(one_form_file), '--out', str(bundle)])
    result = runner.invoke(cli, [
        'integrate', '--geometry', str(bundle), '--one-form', str(one_form_file), '--out', str(tmp_path / 'z.json'),
    ])
    assert result.exit_code == 2
