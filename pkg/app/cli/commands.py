"""Batch command-line surface.

Results go to stdout as JSON (or a readable transcript with ``--pretty``);
logs and progress go to stderr. Exit codes: 0 positive verdict, 1 negative
verdict, 2 input error, 3 search bound exceeded.
"""

from __future__ import annotations

import argparse
import json
from collections.abc import Callable
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Any

import structlog
from pydantic import BaseModel, ValidationError

from app.census.checkpoint import write_json_atomic
from app.certify.bipartition import verify_bipartition_certificate
from app.certify.examples import build_example8, build_example9
from app.certify.turan import certify_uniform_turan_1_27, verify_turan_certificate
from app.cli.manifest import RunRecorder
from app.config.settings import get_settings
from app.core.constants import EXIT_BOUNDS, EXIT_INPUT_ERROR, EXIT_NEGATIVE, EXIT_OK, VERTEX_LETTERS
from app.core.exceptions import AppError, CertificateFormatError, SearchBoundExceededError
from app.hypergraphs.hypergraph import Hypergraph3
from app.hypergraphs.text_format import read_hypergraph, serialize_hypergraph, write_hypergraph
from app.logging.setup import bind_run_context, configure_logging
from app.models.schemas import (
    BipartitionCertificate,
    DensityMode,
    DigraphColoring,
    PaletteEmbedding,
    Role,
    TuranCertificate,
    VanishingCertificate,
    pair_key,
)
from app.orderings.digraph import digraph_vanishing_oracle
from app.orderings.roles import verify_vanishing_certificate
from app.orderings.search import find_vanishing_ordering
from app.palettes.embedding import find_palette_embedding, verify_palette_embedding
from app.palettes.palette import load_palette, palette_density
from app.quasirandom.density import check_d_eps_dense, epsilon_linear_density
from app.quasirandom.sampling import BIT_GENERATORS, sample_palette_host
from app.services.container import ServiceContainer

logger = structlog.get_logger(__name__)

Handler = Callable[[argparse.Namespace, RunRecorder], int]


def _name(v: int) -> str:
    return VERTEX_LETTERS[v] if v < len(VERTEX_LETTERS) else str(v)


def _word(vertices: list[int] | tuple[int, ...]) -> str:
    return " ".join(_name(v) for v in vertices)


def _roles_lines(roles: dict[tuple[int, int], Role]) -> list[str]:
    return [f"  {_name(u)}{_name(v)}  {role.value}" for (u, v), role in sorted(roles.items())]


def _coloring_lines(coloring: DigraphColoring) -> list[str]:
    lines = [f"  {_name(arc.tail)} -> {_name(arc.head)}  color {arc.color}" for arc in coloring.arcs]
    for colors, acyclic in sorted(coloring.acyclic.items()):
        cycle = coloring.cycles.get(colors)
        state = "acyclic" if acyclic else f"cycle {_word(cycle or [])}"
        lines.append(f"  colors {colors}: {state}")
    return lines


def _bipartition_lines(cert: BipartitionCertificate) -> list[str]:
    lines = [
        f"{cert.mode.value} intersection",
        f"  ordering: {_word(cert.ordering)}",
        "  part 1: " + ", ".join("".join(_name(v) for v in edge) for edge in cert.part1),
        "  part 2: " + ", ".join("".join(_name(v) for v in edge) for edge in cert.part2),
    ]
    for pair in sorted(set(cert.roles1) & set(cert.roles2)):
        u, v = pair
        lines.append(f"  shared pair {_name(u)}{_name(v)}: {cert.roles1[pair].value} in part 1, {cert.roles2[pair].value} in part 2")
    return lines


def _emit(run: RunRecorder, args: argparse.Namespace, payload: dict[str, Any], transcript: list[str]) -> None:
    if args.pretty:
        run.emit("\n".join(transcript))
    else:
        run.emit(json.dumps(payload, sort_keys=True))


def _model_json(model: BaseModel) -> Any:
    return model.model_dump(mode="json")


def _fraction(value: Fraction | None) -> str | None:
    return None if value is None else str(value)


def _write_model(run: RunRecorder, path: Path, model: BaseModel) -> None:
    write_json_atomic(path, model, get_settings().checkpoint_retry_attempts)
    run.outputs.append(path)


def cmd_check_vanishing(args: argparse.Namespace, run: RunRecorder) -> int:
    h = read_hypergraph(args.input)
    cert = find_vanishing_ordering(h)
    if cert is not None:
        transcript = [f"vanishing ordering: {_word(cert.ordering)}", "roles:", *_roles_lines(cert.roles)]
        _emit(run, args, {"vanishing": True, "certificate": _model_json(cert)}, transcript)
        return EXIT_OK

    oracle = digraph_vanishing_oracle(h)
    payload: dict[str, Any] = {
        "vanishing": False,
        "evidence": None if oracle.coloring is None else _model_json(oracle.coloring),
        "conflict_pair": None if oracle.conflict_pair is None else pair_key(oracle.conflict_pair),
    }
    transcript = ["no vanishing ordering"]
    if oracle.coloring is not None:
        transcript += ["digraph evidence:", *_coloring_lines(oracle.coloring)]
    if oracle.conflict_pair is not None:
        u, v = oracle.conflict_pair
        transcript.append(f"no consistent digraph: propagation contradicts itself at pair {_name(u)}{_name(v)}")
    _emit(run, args, payload, transcript)
    return EXIT_NEGATIVE


def _turan_transcript(cert: TuranCertificate) -> list[str]:
    lines = ["uniform Turan density 1/27 certified", "condition 1: no vanishing ordering"]
    if cert.nonvanishing.evidence is not None:
        lines += ["digraph evidence:", *_coloring_lines(cert.nonvanishing.evidence)]
    lines += ["condition 2:", *_bipartition_lines(cert.horizontal)]
    lines += ["condition 3:", *_bipartition_lines(cert.vertical)]
    return lines


def _load_certificate(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CertificateFormatError(f"cannot read certificate {path}: {exc}") from exc


def _validate(model: type[BaseModel], data: Any, path: Path) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise CertificateFormatError(f"{path} is not a valid {model.__name__}: {exc}") from exc


def cmd_certify(args: argparse.Namespace, run: RunRecorder) -> int:
    h = read_hypergraph(args.input)
    if args.verify_only is not None:
        cert = _validate(TuranCertificate, _load_certificate(args.verify_only), args.verify_only)
        valid = verify_turan_certificate(h, cert)
        _emit(run, args, {"certified": valid, "verified": valid}, ["certificate verifies" if valid else "certificate rejected"])
        return EXIT_OK if valid else EXIT_NEGATIVE

    report = certify_uniform_turan_1_27(h, jobs=get_settings().jobs if args.jobs is None else args.jobs)
    if report.certificate is not None:
        if args.output is not None:
            _write_model(run, args.output, report.certificate)
        _emit(run, args, {"certified": True, "certificate": _model_json(report.certificate)}, _turan_transcript(report.certificate))
        return EXIT_OK

    payload: dict[str, Any] = {"certified": False, "failed_conditions": report.failed_conditions}
    transcript = ["not certified", *(f"  {reason}" for reason in report.failed_conditions)]
    if report.vanishing is not None:
        payload["vanishing_certificate"] = _model_json(report.vanishing)
        transcript.append(f"  vanishing ordering: {_word(report.vanishing.ordering)}")
    _emit(run, args, payload, transcript)
    return EXIT_NEGATIVE


def cmd_verify(args: argparse.Namespace, run: RunRecorder) -> int:
    """Replay any certificate kind against the hypergraph; the kind is read from the JSON keys."""
    h = read_hypergraph(args.input)
    data = _load_certificate(args.certificate)
    if not isinstance(data, dict):
        raise CertificateFormatError(f"{args.certificate} does not hold a JSON object")

    if "horizontal" in data:
        kind = "turan"
        valid = verify_turan_certificate(h, _validate(TuranCertificate, data, args.certificate))
    elif "mode" in data:
        kind = "bipartition"
        valid = verify_bipartition_certificate(h, _validate(BipartitionCertificate, data, args.certificate))
    elif "coloring" in data:
        kind = "palette_embedding"
        entry = load_palette(args.palette)
        valid = verify_palette_embedding(h, entry.palette, _validate(PaletteEmbedding, data, args.certificate))
    elif "roles" in data:
        kind = "vanishing"
        valid = verify_vanishing_certificate(h, _validate(VanishingCertificate, data, args.certificate))
    else:
        raise CertificateFormatError(f"{args.certificate} is not a recognised certificate")

    _emit(run, args, {"kind": kind, "valid": valid}, [f"{kind} certificate {'verifies' if valid else 'rejected'}"])
    return EXIT_OK if valid else EXIT_NEGATIVE


def cmd_embed_palette(args: argparse.Namespace, run: RunRecorder) -> int:
    h = read_hypergraph(args.input)
    entry = load_palette(args.palette)
    embedding = find_palette_embedding(h, entry.palette)
    if embedding is None:
        _emit(run, args, {"embeddable": False, "palette": args.palette}, [f"does not embed in palette {args.palette}"])
        return EXIT_NEGATIVE
    transcript = [
        f"embeds in palette {args.palette}",
        f"  ordering: {_word(embedding.ordering)}",
        *(f"  {_name(u)}{_name(v)}  {color}" for (u, v), color in sorted(embedding.coloring.items())),
    ]
    _emit(run, args, {"embeddable": True, "palette": args.palette, "embedding": _model_json(embedding)}, transcript)
    return EXIT_OK


def cmd_census(args: argparse.Namespace, run: RunRecorder) -> int:
    container = ServiceContainer(get_settings())
    result = container.census_service.run(
        args.vertices,
        max_edges=args.max_edges,
        jobs=args.jobs,
        checkpoint=args.checkpoint,
        resume=args.resume,
        output=args.output,
        progress=not args.no_progress,
    )
    run.outputs.extend(result.outputs)
    summary = result.summary
    payload = {
        "n": summary.n,
        "minimal": summary.minimal,
        "certified": summary.certified,
        "avoided": summary.avoided,
        "unresolved": summary.unresolved,
        "isolated": summary.isolated,
        "summary": summary.line(),
    }
    _emit(run, args, payload, [summary.line()])
    return EXIT_OK


def cmd_sample(args: argparse.Namespace, run: RunRecorder) -> int:
    entry = load_palette(args.palette)
    sample = sample_palette_host(
        args.n, entry.palette, entry.distribution, args.seed, palette_name=args.palette, generator=args.generator
    )
    run.seeds.append(args.seed)
    output = args.output or get_settings().output_dir / "samples"
    run.outputs.extend(sample.write(output, stem=f"{Path(args.palette).stem}-n{args.n}-s{args.seed}"))

    h = sample.hypergraph
    overall = Fraction(h.edge_count, comb(h.n, 3)) if h.n >= 3 else None
    expected = palette_density(entry.palette, entry.distribution)
    payload = {
        "n": h.n,
        "palette": args.palette,
        "seed": args.seed,
        "generator": sample.generator,
        "edge_count": h.edge_count,
        "edge_density": _fraction(overall),
        "palette_density": str(expected),
        "files": [path.name for path in run.outputs],
    }
    transcript = [
        f"palette {args.palette}: limiting density {expected}",
        f"sampled n={h.n} seed={args.seed}: {h.edge_count} edges, density {float(overall or 0):.6f}",
    ]
    _emit(run, args, payload, transcript)
    return EXIT_OK


def _measure_mode(args: argparse.Namespace, h: Hypergraph3) -> DensityMode:
    if args.mode != "auto":
        return DensityMode(args.mode)
    return DensityMode.exact if h.n <= get_settings().exact_density_max_vertices else DensityMode.sampled


def cmd_measure(args: argparse.Namespace, run: RunRecorder) -> int:
    h = read_hypergraph(args.input)
    mode = _measure_mode(args, h)
    run.seeds.append(args.seed)
    estimate = epsilon_linear_density(h, args.eps, mode=mode, trials=args.trials, seed=args.seed)
    payload: dict[str, Any] = {
        "n": h.n,
        "mode": mode.value,
        "eps": args.eps,
        "epsilon_linear_density": _fraction(estimate.value),
        "upper_bound_only": estimate.is_upper_bound,
        "min_subset_size": estimate.subset_size,
        "witness_subset": list(estimate.subset),
        "subsets_checked": estimate.subsets_checked,
    }
    qualifier = "at most" if estimate.is_upper_bound else "exactly"
    transcript = [f"{args.eps}-linear density ({mode.value}): {qualifier} {_fraction(estimate.value)}"]
    code = EXIT_OK
    if args.d is not None:
        check = check_d_eps_dense(h, args.d, args.eps, mode=mode, trials=args.trials, seed=args.seed)
        payload["dense"] = {
            "d": str(check.d),
            "holds": check.holds,
            "subsets_checked": check.subsets_checked,
            "violation": None if check.violation is None else list(check.violation),
            "violation_edges": check.violation_edges,
            "required": _fraction(check.required),
        }
        if check.holds:
            transcript.append(f"({check.d}, {args.eps})-dense: no violation in {check.subsets_checked} subsets")
        else:
            transcript.append(f"({check.d}, {args.eps})-dense: violated by {_word(check.violation or ())}")
            code = EXIT_NEGATIVE
    _emit(run, args, payload, transcript)
    return code


def cmd_examples(args: argparse.Namespace, run: RunRecorder) -> int:
    if args.which == "example9":
        h, cert = build_example9()
        stem = "example9"
    else:
        h, cert = build_example8(args.k)
        stem = f"example8-k{args.k}"
    if args.output is not None:
        args.output.mkdir(parents=True, exist_ok=True)
        graph_path = args.output / f"{stem}.txt"
        write_hypergraph(graph_path, h, comment=stem)
        run.outputs.append(graph_path)
        _write_model(run, args.output / f"{stem}.cert.json", cert)
    payload = {"name": stem, "hypergraph": serialize_hypergraph(h), "certificate": _model_json(cert)}
    transcript = [f"{stem}: {h.n} vertices, {h.edge_count} edges", serialize_hypergraph(h), *_turan_transcript(cert)]
    _emit(run, args, payload, transcript)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="print a readable transcript instead of JSON")
    common.add_argument("--log-level", default=None, help="override TURAN_LOG_LEVEL")
    common.add_argument("--manifest", type=Path, default=None, help="also write the run manifest to this path")

    parser = argparse.ArgumentParser(prog="turan27", description="Uniform Turan density 1/27 toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check-vanishing", parents=[common], help="search for a vanishing ordering")
    check.add_argument("input", type=Path)
    check.set_defaults(handler=cmd_check_vanishing)

    certify = sub.add_parser("certify", parents=[common], help="certify uniform Turan density 1/27")
    certify.add_argument("input", type=Path)
    certify.add_argument("--verify-only", type=Path, default=None, metavar="CERT")
    certify.add_argument("--jobs", type=int, default=None)
    certify.add_argument("--output", type=Path, default=None, help="write the certificate JSON here")
    certify.set_defaults(handler=cmd_certify)

    verify = sub.add_parser("verify", parents=[common], help="replay a certificate")
    verify.add_argument("input", type=Path)
    verify.add_argument("certificate", type=Path)
    verify.add_argument("--palette", default="vanishing", help="palette for embedding certificates")
    verify.set_defaults(handler=cmd_verify)

    embed = sub.add_parser("embed-palette", parents=[common], help="embed a 3-graph in a palette")
    embed.add_argument("input", type=Path)
    embed.add_argument("--palette", required=True)
    embed.set_defaults(handler=cmd_embed_palette)

    census = sub.add_parser("census", parents=[common], help="minimal non-vanishing census")
    census.add_argument("--vertices", type=int, required=True)
    census.add_argument("--max-edges", type=int, default=None)
    census.add_argument("--jobs", type=int, default=None)
    census.add_argument("--checkpoint", type=Path, default=None)
    census.add_argument("--resume", action="store_true")
    census.add_argument("--output", type=Path, default=None)
    census.add_argument("--no-progress", action="store_true")
    census.set_defaults(handler=cmd_census)

    sample = sub.add_parser("sample", parents=[common], help="sample a random palette host")
    sample.add_argument("--n", type=int, required=True)
    sample.add_argument("--palette", required=True)
    sample.add_argument("--seed", type=int, required=True)
    sample.add_argument("--generator", choices=BIT_GENERATORS, default=None)
    sample.add_argument("--output", type=Path, default=None)
    sample.set_defaults(handler=cmd_sample)

    measure = sub.add_parser("measure", parents=[common], help="epsilon-linear density and (d, eps)-denseness")
    measure.add_argument("--input", type=Path, required=True)
    measure.add_argument("--eps", required=True)
    measure.add_argument("--d", default=None)
    measure.add_argument("--mode", choices=("auto", "exact", "sampled"), default="auto")
    measure.add_argument("--trials", type=int, default=1000)
    measure.add_argument("--seed", type=int, default=0)
    measure.set_defaults(handler=cmd_measure)

    examples = sub.add_parser("examples", parents=[common], help="emit a known 1/27 example with its certificate")
    examples.add_argument("which", choices=("example9", "example8"))
    examples.add_argument("--k", type=int, default=1)
    examples.add_argument("--output", type=Path, default=None)
    examples.set_defaults(handler=cmd_examples)
    return parser


def run_cli(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT_ERROR
    configure_logging(args.log_level or get_settings().log_level)
    bind_run_context(args.command)
    if getattr(args, "resume", False) and args.checkpoint is None:
        logger.error("command_failed", error="--resume needs --checkpoint")
        return EXIT_INPUT_ERROR

    run = RunRecorder(args.command, list(argv))
    handler: Handler = args.handler
    try:
        code = handler(args, run)
    except SearchBoundExceededError as exc:
        logger.error("search_bound_exceeded", what=exc.what, limit=exc.limit, actual=exc.actual)
        code = EXIT_BOUNDS
    except AppError as exc:
        logger.error("command_failed", error=str(exc))
        code = EXIT_INPUT_ERROR
    except OSError as exc:
        logger.error("command_failed", error=str(exc))
        code = EXIT_INPUT_ERROR
    except Exception as exc:
        logger.exception("unhandled_exception", error=str(exc))
        code = EXIT_INPUT_ERROR

    manifest = run.finish(code)
    if args.manifest is not None:
        write_json_atomic(args.manifest, manifest, get_settings().checkpoint_retry_attempts)
    return code
