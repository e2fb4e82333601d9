"""
Main application entry point for the NCG toolkit
"""
import functools
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import click
from tqdm import tqdm

from src.config.settings import settings
from src.fermion.field_strength import det_identity_residual
from src.fermion.integral import fermion_integral
from src.fluctuations.one_forms import (
    FluctuatedDirac,
    build_generators,
    connes_one_form,
    make_fluctuated,
    manifold_operator,
    total_fluctuation,
    vacuum,
)
from src.geometry.axioms import verify_axioms
from src.geometry.matrix_geometry import (
    AlgebraKind,
    DiracData,
    MatrixGeometry,
    sample_random_geometry,
)
from src.input.file_reader import (
    geometry_to_dict,
    read_geometry,
    read_one_form,
)
from src.numerics.linalg import eig_hermitian
from src.numerics.tolerance import Tolerance
from src.product.product_triple import ProductTriple, build_product_triple
from src.utils.errors import InvalidConfig, NCGError
from src.utils.file_utils import (
    encode_complex,
    encode_float,
    get_file_extension,
    write_json,
    write_table,
)
from src.utils.logger import logger, set_level

def handle_errors(command: Callable) -> Callable:
    """Log toolkit errors and exit with their code"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except NCGError as e:
            logger.error(f"{type(e).__name__}: {e}")
            sys.exit(e.exit_code)
    return wrapper

def tolerance_options(command: Callable) -> Callable:
    command = click.option('--tol-rel', type=float, default=settings.TOL_REL, show_default=True,
                           help='Relative tolerance')(command)
    command = click.option('--tol-abs', type=float, default=settings.TOL_ABS, show_default=True,
                           help='Absolute tolerance')(command)
    return command

def make_tolerance(tol_abs: float, tol_rel: float) -> Tolerance:
    try:
        return Tolerance(abs_eps=tol_abs, rel_eps=tol_rel)
    except ValueError as e:
        raise InvalidConfig(str(e))

def run_batch(worker: Callable, paths: Sequence[Path], jobs: int, desc: str) -> List:
    """
    Apply worker to every path, in parallel when jobs > 1

    Args:
        worker: Callable taking a path
        paths: Input files
        jobs: Worker thread count
        desc: Progress bar label

    Returns:
        Results in input order
    """
    if jobs < 1:
        raise InvalidConfig(f"--jobs must be positive, got {jobs}")
    quiet = len(paths) == 1
    if jobs == 1 or quiet:
        return [worker(p) for p in tqdm(paths, desc=desc, disable=quiet)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(tqdm(pool.map(worker, paths), total=len(paths), desc=desc))

def build_operator(
    geometry_path: Path,
    one_form_path: Optional[Path],
    symmetrize: Optional[bool],
    tol: Tolerance
) -> Tuple[ProductTriple, FluctuatedDirac]:
    """Product triple of a geometry file and its (optionally fluctuated) Dirac operator"""
    bundle = read_geometry(geometry_path, tol)
    t = build_product_triple(bundle.geometry, tol)
    if bundle.charged:
        if one_form_path:
            raise InvalidConfig("A fluctuation bundle cannot be fluctuated again with --one-form")
        return t, make_fluctuated(t, t.base.dirac.L, t.base.dirac.H, bundle.theta, bundle.ygrav)
    if not one_form_path:
        return t, vacuum(t)
    one_form = read_one_form(one_form_path)
    gen = build_generators(t, one_form.pairs, tol)
    sym = one_form.symmetrize if symmetrize is None else symmetrize
    coeffs = connes_one_form(t, gen, symmetrize=sym, tol=tol)
    return t, total_fluctuation(t, coeffs, tol)

def spectrum_csv_rows(full: Sequence[float], manifold: Sequence[float]) -> List[Dict]:
    rows = [{'operator': 'full', 'index': i, 'eigenvalue': v} for i, v in enumerate(full)]
    rows += [{'operator': 'manifold', 'index': i, 'eigenvalue': v} for i, v in enumerate(manifold)]
    return rows

@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
def cli(verbose: bool):
    """
    NCG - finite spectral triples, fluctuations and fermionic integrals

    Builds matrix geometries of type (0,4), their product with the U(1)
    internal space, Connes fluctuations and the exact fermion integral.
    """
    if verbose:
        set_level('debug')

@cli.command()
@click.option('--algebra', type=click.Choice(['R', 'H', 'C']), default='R', show_default=True, help='Algebra code')
@click.option('--n', 'n', type=int, required=True, help='Matrix size')
@click.option('--seed', type=int, default=settings.DEFAULT_SEED, show_default=True, help='Random seed')
@click.option('--scale', type=float, default=settings.DEFAULT_SCALE, show_default=True, help='Entry standard deviation')
@click.option('--out', '-o', type=click.Path(dir_okay=False), required=True, help='Output geometry file')
@tolerance_options
@handle_errors
def sample(algebra: str, n: int, seed: int, scale: float, out: str, tol_abs: float, tol_rel: float):
    """Sample a random geometry and write it"""
    tol = make_tolerance(tol_abs, tol_rel)
    kind = AlgebraKind.from_code(algebra, n)
    geom = sample_random_geometry(kind, scale, seed)
    report = verify_axioms(geom, tol)
    if not report.all_pass:
        logger.warning(f"Sampled geometry fails the axioms (max residual {report.max_residual:.3e})")
    write_json(Path(out), geometry_to_dict(geom))
    logger.info(f"Wrote geometry to {out}")

def _verify_one(path: Path, tol: Tolerance) -> Tuple[Dict, int]:
    try:
        report = verify_axioms(read_geometry(path, tol).geometry, tol)
    except NCGError as e:
        logger.error(f"{path}: {type(e).__name__}: {e}")
        return {'all_pass': False, 'errors': {type(e).__name__: str(e)}}, e.exit_code
    if not report.all_pass:
        logger.warning(f"{path}: axioms fail (max residual {report.max_residual:.3e})")
    return report.to_dict(), 0 if report.all_pass else 1

@cli.command()
@click.option('--geometry', '-g', type=click.Path(dir_okay=False), multiple=True, required=True, help='Geometry file(s)')
@click.option('--out', '-o', type=click.Path(dir_okay=False), required=True, help='Output report file')
@click.option('--jobs', type=int, default=settings.JOBS, show_default=True, help='Parallel workers for several files')
@tolerance_options
@handle_errors
def verify(geometry: Tuple[str, ...], out: str, jobs: int, tol_abs: float, tol_rel: float):
    """Check the spectral triple axioms of geometry files"""
    tol = make_tolerance(tol_abs, tol_rel)
    paths = [Path(p) for p in geometry]
    results = run_batch(lambda p: _verify_one(p, tol), paths, jobs, "Verifying")

    out_path = Path(out)
    if len(paths) == 1:
        write_json(out_path, results[0][0])
    else:
        reports = [dict(report, geometry=str(p)) for p, (report, _) in zip(paths, results)]
        write_json(out_path, reports)
        summary = [
            {'geometry': str(p), 'all_pass': r['all_pass'], 'exit_code': code,
             'max_residual': max((r[k]['residual'] for k in ('hermitian', 'reality', 'first_order', 'chirality') if k in r), default=None)}
            for p, (r, code) in zip(paths, results)
        ]
        write_table(out_path.with_suffix('.csv'), summary)
    exit_code = max(code for _, code in results)
    logger.info(f"Verified {len(paths)} geometr{'y' if len(paths) == 1 else 'ies'}: exit code {exit_code}")
    sys.exit(exit_code)

@cli.command()
@click.option('--geometry', '-g', type=click.Path(dir_okay=False), required=True, help='Geometry file')
@click.option('--one-form', type=click.Path(dir_okay=False), required=True, help='One-form generator file')
@click.option('--out', '-o', type=click.Path(dir_okay=False), required=True, help='Output bundle file')
@click.option('--symmetrize', type=click.BOOL, default=None, help='Override the one-form file flag')
@tolerance_options
@handle_errors
def fluctuate(geometry: str, one_form: str, out: str, symmetrize: Optional[bool], tol_abs: float, tol_rel: float):
    """Fluctuate a geometry and write the coefficient bundle"""
    tol = make_tolerance(tol_abs, tol_rel)
    t, fd = build_operator(Path(geometry), Path(one_form), symmetrize, tol)
    shifted = MatrixGeometry(space=t.base.space, dirac=DiracData(L=fd.Lprime, H=fd.Hprime))
    write_json(Path(out), geometry_to_dict(shifted, fd.theta, fd.ygrav))
    logger.info(f"Wrote fluctuation bundle to {out}")

@cli.command()
@click.option('--geometry', '-g', type=click.Path(dir_okay=False), required=True, help='Geometry file')
@click.option('--one-form', type=click.Path(dir_okay=False), default=None, help='Optional one-form generator file')
@click.option('--out', '-o', type=click.Path(dir_okay=False), required=True, help='Output file (.json or .csv)')
@click.option('--symmetrize', type=click.BOOL, default=None, help='Override the one-form file flag')
@tolerance_options
@handle_errors
def spectrum(geometry: str, one_form: Optional[str], out: str, symmetrize: Optional[bool], tol_abs: float, tol_rel: float):
    """Write the sorted spectra of the product and manifold operators"""
    tol = make_tolerance(tol_abs, tol_rel)
    t, fd = build_operator(Path(geometry), Path(one_form) if one_form else None, symmetrize, tol)
    full = [encode_float(v) for v in eig_hermitian(fd.assembled, tol)]
    manifold = [encode_float(v) for v in eig_hermitian(manifold_operator(t.base.space, fd.Lprime, fd.Hprime), tol)]
    if get_file_extension(out) == '.csv':
        write_table(Path(out), spectrum_csv_rows(full, manifold), columns=['operator', 'index', 'eigenvalue'])
    else:
        write_json(Path(out), {'spectrum': full, 'manifold_spectrum': manifold})
    logger.info(f"Wrote spectrum ({len(full)} eigenvalues) to {out}")

def _integrate_one(path: Path, one_form: Optional[Path], symmetrize: Optional[bool], seed: Optional[int], tol: Tolerance) -> Dict:
    t, fd = build_operator(path, one_form, symmetrize, tol)
    result = fermion_integral(t, fd.assembled, tol, seed)
    return {
        'Z': encode_float(result.Z),
        'pfaffian': encode_complex(result.pfaffian),
        'sqrt_det': encode_float(result.sqrt_det),
        'det_identity_residual': encode_float(det_identity_residual(t, fd)),
        'spectrum': [encode_float(v) for v in result.spectrum],
        'condition_flag': result.condition_flag,
    }

@cli.command()
@click.option('--geometry', '-g', type=click.Path(dir_okay=False), multiple=True, required=True, help='Geometry file(s)')
@click.option('--one-form', type=click.Path(dir_okay=False), default=None, help='Optional one-form generator file')
@click.option('--out', '-o', type=click.Path(dir_okay=False), required=True, help='Output report file')
@click.option('--seed', type=int, default=None, help='Seed for a random canonical basis')
@click.option('--symmetrize', type=click.BOOL, default=None, help='Override the one-form file flag')
@click.option('--jobs', type=int, default=settings.JOBS, show_default=True, help='Parallel workers for several files')
@tolerance_options
@handle_errors
def integrate(geometry: Tuple[str, ...], one_form: Optional[str], out: str, seed: Optional[int],
              symmetrize: Optional[bool], jobs: int, tol_abs: float, tol_rel: float):
    """Evaluate the fermionic integral of a (fluctuated) product operator"""
    tol = make_tolerance(tol_abs, tol_rel)
    paths = [Path(p) for p in geometry]
    one_form_path = Path(one_form) if one_form else None
    reports = run_batch(lambda p: _integrate_one(p, one_form_path, symmetrize, seed, tol), paths, jobs, "Integrating")

    out_path = Path(out)
    if len(paths) == 1:
        write_json(out_path, reports[0])
    else:
        write_json(out_path, [dict(r, geometry=str(p)) for p, r in zip(paths, reports)])
        summary = [
            {'geometry': str(p), 'Z': r['Z'], 'sqrt_det': r['sqrt_det'],
             'det_identity_residual': r['det_identity_residual'], 'condition_flag': r['condition_flag']}
            for p, r in zip(paths, reports)
        ]
        write_table(out_path.with_suffix('.csv'), summary)
    logger.info(f"Wrote fermion report to {out}")

if __name__ == '__main__':
    cli()
