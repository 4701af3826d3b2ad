# main.py - foldlab command line

import json
import logging
import random
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import click

from config.settings import (
    CACHE_DIR,
    CACHE_ENABLED,
    DIMENSION_CAP,
    LOG_FORMAT,
    LOG_LEVEL,
    OUTPUT_FORMAT,
    SEED,
    TRUNCATION_ORDER,
)
from src.foldlab.acceptance import DEFAULT_SUITE, run_suite
from src.foldlab.errors import ComputationError, FoldlabError, InconclusiveError, InvalidInputError
from src.foldlab.folding import (
    classify_isogeny,
    fold,
    invariant_fold,
    orbit_coroots,
    validate_automorphism,
)
from src.foldlab.gaudin import quad_hamiltonians, sample_regular_chi, sigma_eigenline_check, spectrum
from src.foldlab.invariants import (
    chevalley_report,
    chi_from_values,
    compatible_pair,
    hc_canonical_check,
    hc_quadratic,
    mf_family,
    sigma_section_check,
)
from src.foldlab.opers import (
    fixed_oper_match,
    gauge_reduce,
    lambda_residue,
    parse_connection,
    random_connection,
    residue,
)
from src.foldlab.realizations import folded_realization, get_realization
from src.foldlab.reps import construct_module, sigma_on_module, twining_report
from src.foldlab.rootdata import build_root_datum
from src.foldlab.serialization import dumps, parse_int_list, parse_rational_list, rational_str
from src.foldlab.tensor_maps import lr_by_characters, lr_coefficients, lr_report, nonmonoidality_witness
from src.middleware.cache import cache_manager, cached
from src.middleware.log_setup import configure_logging

logger = logging.getLogger("foldlab")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INCONCLUSIVE = 2
EXIT_INVALID = 3


# =========================
# Run configuration
# =========================
@dataclass(frozen=True)
class RunConfig:
    seed: int = SEED
    truncation_order: int = TRUNCATION_ORDER
    dimension_cap: int = DIMENSION_CAP
    cache_dir: str = CACHE_DIR
    output: str = OUTPUT_FORMAT


def _config(ctx: click.Context) -> RunConfig:
    return ctx.find_object(RunConfig) or RunConfig()


def _emit(cfg: RunConfig, payload: Dict) -> int:
    click.echo(dumps(payload, pretty=cfg.output == "pretty"))
    return _exit_code(payload)


def _exit_code(payload: Dict) -> int:
    if payload.get("status") == "inconclusive":
        return EXIT_INCONCLUSIVE
    if payload.get("passed") is False:
        return EXIT_FAILED
    return EXIT_OK


# =========================
# Option parsing
# =========================
def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(parse_int_list(value))
    except ValueError:
        raise click.BadParameter(f"'{value}' is not a comma-separated integer list")


def _rational_list(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(parse_rational_list(value))
    except (ValueError, TypeError):
        raise click.BadParameter(f"'{value}' is not a comma-separated list of rationals")


def _int_lists(ctx, param, values):
    return tuple(_int_list(ctx, param, v) for v in values)


def _chi_coords(g, values: Optional[Sequence]):
    """Full coordinates, diagonal entries or h_i coefficients"""
    if values is None:
        return None
    if len(values) == g.dim:
        return list(values)
    return chi_from_values(g, values)


def _load_json(path: str) -> Dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read connection from {path}: {exc}", path=path)


# =========================
# Cached payload builders
# =========================
@cached("fold")
def fold_payload(series: str, rank: int, isogeny: str, perm: tuple) -> Dict:
    datum = build_root_datum(series, rank, isogeny)
    sigma = validate_automorphism(list(perm), datum)
    folded = fold(datum, sigma)
    payload = {
        "input": {**datum.to_dict(), "isogeny_class": classify_isogeny(datum).to_dict()},
        "automorphism": sigma.to_dict(),
        "orbits": [o.to_dict() for o in sigma.orbits(datum.cartan)],
        "folded": {
            **folded.to_dict(),
            "type": folded.label,
            "isogeny_class": classify_isogeny(folded).to_dict(),
        },
    }
    if not sigma.is_identity():
        payload["orbit_coroots"] = orbit_coroots(folded)
    return payload


@cached("module")
def twining_payload(series: str, rank: int, isogeny: str, perm: tuple, labels: tuple, cap: int) -> Dict:
    datum = build_root_datum(series, rank, isogeny)
    sigma = validate_automorphism(list(perm), datum)
    module = construct_module(datum, datum.weight_from_labels(list(labels)), cap)
    folded = invariant_fold(datum, sigma)
    report = twining_report(module, sigma, folded, sigma_on_module(module, sigma))
    return {"type": datum.label, "isogeny": datum.isogeny, "module_dim": module.dim, **report.to_dict()}


@cached("spectrum")
def spectrum_payload(algebra: str, labels: tuple, chi: Optional[tuple], sigma: Optional[tuple], seed: int, cap: int) -> Dict:
    g = get_realization(algebra)
    chi_values = None if chi is None else list(parse_rational_list(",".join(chi)))
    if sigma is not None:
        if g.sigma is None or tuple(g.sigma.perm) != tuple(sigma):
            raise InvalidInputError(f"{g.name} supports the automorphism {g.sigma.perm if g.sigma else None} only")
        return sigma_eigenline_check(g.name, labels, chi_values, seed, cap)
    if chi_values is None:
        coords, chi_values = sample_regular_chi(g, random.Random(seed))
    else:
        coords = _chi_coords(g, chi_values)
    family = quad_hamiltonians(g, coords)
    module = construct_module(g.datum, g.datum.weight_from_labels(list(labels)), cap)
    report = spectrum(family, module, seed)
    return {"chi_values": list(chi_values), "family": family.to_dict(), **report.to_dict()}


# =========================
# Command group
# =========================
@click.group(name="foldlab")
@click.option("--seed", type=int, default=SEED, show_default=True, help="Seed for every sampled quantity")
@click.option("--order", "truncation_order", type=click.IntRange(min=1), default=TRUNCATION_ORDER, show_default=True)
@click.option("--dimension-cap", type=click.IntRange(min=1), default=DIMENSION_CAP, show_default=True)
@click.option("--cache-dir", type=click.Path(file_okay=False), default=CACHE_DIR, show_default=True)
@click.option("--no-cache", is_flag=True, help="Compute without reading or writing the cache")
@click.option("--output", type=click.Choice(["json", "pretty"]), default=OUTPUT_FORMAT, show_default=True)
@click.option("--log-level", default=LOG_LEVEL, show_default=True)
@click.option("--log-format", type=click.Choice(["json", "text"]), default=LOG_FORMAT, show_default=True)
@click.pass_context
def cli(ctx, seed, truncation_order, dimension_cap, cache_dir, no_cache, output, log_level, log_format):
    """Exact computations around Dynkin folding and Langlands duality"""
    configure_logging(log_level, log_format)
    cache_manager.reconfigure(cache_dir=cache_dir, enabled=CACHE_ENABLED and not no_cache)
    ctx.obj = RunConfig(
        seed=seed,
        truncation_order=truncation_order,
        dimension_cap=dimension_cap,
        cache_dir=cache_dir,
        output=output,
    )


def _datum_options(func):
    func = click.option("--perm", default="", callback=_int_list, help='1-based node permutation, e.g. "3,2,1"')(func)
    func = click.option("--isogeny", default="sc", show_default=True, help="sc | ad")(func)
    func = click.option("--rank", type=int, required=True)(func)
    func = click.option("--type", "series", required=True, help="Cartan type letter A-G")(func)
    return func


@cli.command("fold")
@_datum_options
@click.pass_context
def fold_command(ctx, series, rank, isogeny, perm):
    """Fold a root datum along a diagram automorphism"""
    cfg = _config(ctx)
    return _emit(cfg, fold_payload(series.upper(), rank, isogeny, perm))


@cli.command("dual")
@_datum_options
@click.pass_context
def dual_command(ctx, series, rank, isogeny, perm):
    """Langlands dual of a datum, and of its fold when --perm is given"""
    cfg = _config(ctx)
    datum = build_root_datum(series, rank, isogeny)
    dual = datum.dual()
    payload = {
        "input": {"type": datum.label, "isogeny": classify_isogeny(datum).label},
        "dual": {**dual.to_dict(), "type": dual.label, "isogeny_class": classify_isogeny(dual).to_dict()},
    }
    if perm:
        folded_dual = fold(datum, validate_automorphism(perm, datum)).dual()
        payload["folded_dual"] = {
            **folded_dual.to_dict(),
            "type": folded_dual.label,
            "isogeny_class": classify_isogeny(folded_dual).to_dict(),
        }
    return _emit(cfg, payload)


@cli.command("twining")
@_datum_options
@click.option("--weight", required=True, callback=_int_list, help='Dynkin labels, e.g. "0,1,0"')
@click.pass_context
def twining_command(ctx, series, rank, isogeny, perm, weight):
    """Twining traces of sigma against folded weight multiplicities"""
    cfg = _config(ctx)
    payload = twining_payload(series.upper(), rank, isogeny, perm, weight, cfg.dimension_cap)
    return _emit(cfg, payload)


@cli.command("lr")
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--lhs", required=True, callback=_int_list)
@click.option("--rhs", required=True, callback=_int_list)
@click.option("--check-characters", is_flag=True, help="Compare with the character-product oracle")
@click.pass_context
def lr_command(ctx, n, lhs, rhs, check_characters):
    """Littlewood-Richardson decomposition in GL_n / PGL_n"""
    cfg = _config(ctx)
    payload = lr_report(lhs, rhs, n)
    if check_characters:
        agrees = lr_by_characters(lhs, rhs, n) == lr_coefficients(lhs, rhs, n)
        payload["characters_agree"] = agrees
        payload["passed"] = payload["passed"] and agrees
    return _emit(cfg, payload)


@cli.command("witness-nonmonoidal")
@click.pass_context
def witness_command(ctx):
    """PGL_4 tensor product leaving the self-dual weights"""
    return _emit(_config(ctx), nonmonoidality_witness())


@cli.command("invariants")
@click.option("--algebra", required=True)
@click.pass_context
def invariants_command(ctx, algebra):
    """Chevalley generators and their degree bookkeeping"""
    return _emit(_config(ctx), chevalley_report(get_realization(algebra)))


@cli.command("mf")
@click.option("--algebra", required=True)
@click.option("--chi", callback=_rational_list, help="h_i coefficients, diagonal entries or full coordinates")
@click.pass_context
def mf_command(ctx, algebra, chi):
    """Shift-of-argument family at chi"""
    cfg = _config(ctx)
    g = get_realization(algebra)
    if chi is None:
        coords, _ = sample_regular_chi(g, random.Random(cfg.seed))
    else:
        coords = _chi_coords(g, chi)
    return _emit(cfg, mf_family(g, coords, cfg.seed).to_dict())


@cli.command("section-check")
@click.option("--pair", "pair", default=None, help="g:g_sigma, e.g. sl4:sp4")
@click.option("--algebra", default=None)
@click.pass_context
def section_check_command(ctx, pair, algebra):
    """sigma-fixed Kostant section against the folded one"""
    cfg = _config(ctx)
    if pair:
        parent, _, child = pair.partition(":")
        g = get_realization(parent)
        if child and folded_realization(g).name != child.strip().lower():
            raise InvalidInputError(f"{child} is not the folded algebra of {g.name}", folded=folded_realization(g).name)
    elif algebra:
        g = get_realization(algebra)
    else:
        raise click.UsageError("give --pair or --algebra")
    return _emit(cfg, sigma_section_check(g))


@cli.command("hc")
@click.option("--algebra", required=True)
@click.option("--weight", "weights", multiple=True, required=True, callback=_int_lists)
@click.pass_context
def hc_command(ctx, algebra, weights):
    """Casimir eigenvalue on V(lambda); three or more weights run the folded comparison"""
    cfg = _config(ctx)
    g = get_realization(algebra)
    if len(weights) == 1:
        return _emit(cfg, hc_quadratic(g, weights[0], cfg.dimension_cap))
    return _emit(cfg, hc_canonical_check(g, weights, cfg.dimension_cap))


@cli.command("compatible-pair")
@click.option("--algebra", required=True)
@click.option("--policy", type=click.Choice(["zero", "random", "explicit"]), default="random", show_default=True)
@click.option("--chi", callback=_rational_list)
@click.pass_context
def compatible_pair_command(ctx, algebra, policy, chi):
    """(chi, chi') with equal images in h_sigma // W^sigma"""
    cfg = _config(ctx)
    pair = compatible_pair(get_realization(algebra), policy, chi, cfg.seed)
    return _emit(cfg, pair.to_dict())


# =========================
# Opers
# =========================
@cli.group("oper")
def oper_group():
    """Oper connections: canonical form and residues"""


@oper_group.command("reduce")
@click.option("--algebra", required=True)
@click.option("--input", "source", default=None, help="Connection JSON file ('-' for stdin); random when omitted")
@click.option("--fixed", is_flag=True, help="Also read the result as a canonical oper of the folded algebra")
@click.pass_context
def oper_reduce_command(ctx, algebra, source, fixed):
    """Gauge a regular connection to canonical form"""
    cfg = _config(ctx)
    g = get_realization(algebra)
    if source:
        connection = parse_connection(g, _load_json(source), cfg.truncation_order)
    else:
        connection = random_connection(g, random.Random(cfg.seed), cfg.truncation_order)
    canonical = gauge_reduce(connection)
    payload = {"input": connection.to_dict(), "canonical": canonical.to_dict()}
    if fixed:
        match = fixed_oper_match(canonical)
        payload.update({"fixed": match.to_dict(), "passed": match.ok})
    return _emit(cfg, payload)


@oper_group.command("residue")
@click.option("--algebra", required=True)
@click.option("--input", "source", default=None, help="Connection JSON with pole_order >= 1")
@click.option("--weight", callback=_rational_list, help="Synthesize the connection with residue pi(-lambda - rho)")
@click.pass_context
def oper_residue_command(ctx, algebra, source, weight):
    """Invariant values of the residue of a connection with a pole"""
    cfg = _config(ctx)
    g = get_realization(algebra)
    if weight is not None:
        return _emit(cfg, lambda_residue(g, weight, cfg.truncation_order))
    if not source:
        raise click.UsageError("give --input or --weight")
    return _emit(cfg, residue(parse_connection(g, _load_json(source), cfg.truncation_order)))


# =========================
# Spectra and acceptance
# =========================
@cli.command("spectrum")
@click.option("--algebra", required=True)
@click.option("--weight", required=True, callback=_int_list)
@click.option("--chi", callback=_rational_list, help="Regular chi in the Cartan; seeded when omitted")
@click.option("--sigma", callback=_int_list, help="Diagram automorphism; runs the fixed-eigenline analysis")
@click.pass_context
def spectrum_command(ctx, algebra, weight, chi, sigma):
    """Joint spectrum of the quadratic family on V(lambda)"""
    cfg = _config(ctx)
    chi_key = None if chi is None else tuple(rational_str(c) for c in chi)
    payload = spectrum_payload(algebra.lower(), weight, chi_key, sigma, cfg.seed, cfg.dimension_cap)
    return _emit(cfg, payload)


@cli.command("accept")
@click.option("--suite", "suite_path", type=click.Path(dir_okay=False), default=DEFAULT_SUITE, show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--only", multiple=True, help="Run only the given item ids")
@click.pass_context
def accept_command(ctx, suite_path, jobs, only):
    """Run the acceptance suite"""
    cfg = _config(ctx)
    return _emit(cfg, run_suite(suite_path, jobs=jobs, only=list(only), seed=cfg.seed))


@cli.command("cache-stats")
@click.option("--flush", is_flag=True)
@click.pass_context
def cache_stats_command(ctx, flush):
    """Cache counters; --flush empties the cache first"""
    if flush:
        cache_manager.flush_all()
    return _emit(_config(ctx), cache_manager.get_stats())


# =========================
# Entry point
# =========================
def _error(payload: Dict, code: int) -> int:
    click.echo(dumps(payload))
    return code


def run_command(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and map outcomes onto exit codes 0/1/2/3"""
    try:
        result = cli.main(args=argv, prog_name="foldlab", standalone_mode=False)
    except click.UsageError as exc:
        return _error({"error": "usage", "detail": exc.format_message()}, EXIT_INVALID)
    except click.ClickException as exc:
        return _error({"error": "usage", "detail": exc.format_message()}, EXIT_INVALID)
    except click.Abort:
        return _error({"error": "aborted", "detail": "aborted"}, EXIT_FAILED)
    except InvalidInputError as exc:
        return _error(exc.to_dict(), EXIT_INVALID)
    except InconclusiveError as exc:
        return _error(exc.to_dict(), EXIT_INCONCLUSIVE)
    except (ComputationError, FoldlabError) as exc:
        logger.error(f"Computation failed: {exc.message}")
        return _error(exc.to_dict(), EXIT_FAILED)
    return result if isinstance(result, int) else EXIT_OK


@click.command(
    name="foldlab",
    context_settings={"ignore_unknown_options": True, "allow_extra_args": True, "help_option_names": []},
)
@click.argument("argv", nargs=-1, type=click.UNPROCESSED)
@click.pass_context
def entry(ctx, argv):
    """Process entry point: run the CLI and exit with its status code"""
    ctx.exit(run_command(list(argv)))


def main():
    entry()


if __name__ == "__main__":
    main()
