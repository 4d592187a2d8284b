"""Command-line entry point.

Every subcommand writes its artifacts plus a ``manifest.json`` (parameters,
seed, sha256 of each artifact) into ``--output``; without ``--output`` the
main artifact goes to stdout. Artifacts carry no timestamps, so identical
arguments give byte-identical files.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import TriregError, Timeout

SCHEMA_VERSION = 1
RANDOMIZED = {"generate", "sample"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", help="directory for artifacts and manifest")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trireg", description="Triangle-dense random regular graphs: census, bounds, structure, sampling.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("generate", help="random or planted d-regular graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=_fraction, default=Fraction(0))
    p.add_argument("--kind", choices=["configuration", "clique", "matched"], default="configuration")
    p.add_argument("--blocks", type=int, help="number of planted blocks (overrides --c)")
    p.add_argument("--seed", type=int)
    _common(p)

    p = sub.add_parser("census", help="triangles, k-cliques and t_e histogram")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, action="append")
    _common(p)

    p = sub.add_parser("phi", help="reveal profile and relabeling experiments")
    p.add_argument("--input", required=True)
    p.add_argument("--c", type=_fraction)
    p.add_argument("--samples", type=int, help="Monte Carlo relabelings (requires --seed)")
    p.add_argument("--seed", type=int)
    _common(p)

    p = sub.add_parser("bounds", help="explicit finite-n bound sheet")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=_fraction, required=True)
    p.add_argument("--eps", type=_fraction)
    p.add_argument("--delta", type=_fraction)
    p.add_argument("--exact", action="store_true", help="also enumerate the exact count")
    p.add_argument("--residual", choices=["exact", "pairs", "asymptotic"], default="exact")
    _common(p)

    p = sub.add_parser("structure", help="bad edges/nodes, cliques and pseudo-cliques")
    p.add_argument("--input", required=True)
    p.add_argument("--c", type=_fraction, default=Fraction(0))
    p.add_argument("--mode", choices=["fixed", "growing"], default="fixed")
    p.add_argument("--delta", type=_fraction)
    _common(p)

    p = sub.add_parser("sample", help="conditioned double-edge-swap chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=_fraction, default=Fraction(0))
    p.add_argument("--seed", type=int)
    p.add_argument("--chain-id", type=int, default=0)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--record-every", type=int, default=100)
    p.add_argument("--start", choices=["random", "planted"], default="random")
    p.add_argument("--config", help="ChainConfig JSON file (overrides the flags above)")
    _common(p)

    p = sub.add_parser("enumerate", help="exact oracles for tiny (n, d)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=_fraction)
    p.add_argument("--k", type=int)
    p.add_argument("--pairings", action="store_true", help="full pairing sweep with reveal-profile preimages")
    _common(p)

    p = sub.add_parser("certify", help="run the acceptance checks")
    p.add_argument("--suite", choices=["core", "full"], default="core")
    p.add_argument("--only", type=int, action="append", choices=range(1, 11), metavar="N")
    _common(p)
    return parser


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, default=str) + "\n"


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
    return buf.getvalue()


def _read_graph(path: str):
    from .graph import read_edgelist

    try:
        return read_edgelist(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


# -- subcommands return (artifacts, ok) where artifacts maps file name -> text --------


def _cmd_generate(a):
    from .generators import BlockKind, PlantedSpec, plant_family, random_regular_graph
    from .graph import format_edgelist

    if a.kind == "configuration":
        g = random_regular_graph(a.n, a.d, a.seed)
        return {"graph.edges": format_edgelist(g)}, True
    kind = BlockKind.CLIQUE if a.kind == "clique" else BlockKind.MATCHED_COMPLEMENT
    if a.blocks is not None:
        spec = PlantedSpec.for_blocks(a.n, a.d, a.blocks, kind)
    else:
        spec = PlantedSpec.build(a.n, a.d, a.c, kind)
    g = plant_family(spec, a.seed)
    return {"graph.edges": format_edgelist(g), "spec.json": spec.to_json() + "\n"}, True


def _cmd_census(a):
    from .census import census_report

    rep = census_report(_read_graph(a.input), a.k)
    if a.format == "csv":
        rows = [{"t_e": k, "edges": v} for k, v in rep["histogram_of_t_e"].items()]
        return {"census.json": _dump(rep), "t_e_histogram.csv": _rows_csv(rows)}, True
    return {"census.json": _dump(rep)}, True


def _cmd_phi(a):
    from .reveal import (
        MonteCarlo,
        mean_phi_over_permutations,
        permutation_success_fraction,
        profile_report,
        reveal_threshold,
    )

    g = _read_graph(a.input)
    rep = profile_report(g)
    mode = "exact"
    if a.samples is not None:
        if a.seed is None:
            raise UsageError("--samples requires --seed")
        mode = MonteCarlo(a.samples, a.seed)
    elif g.n > 9:
        raise UsageError("exact relabeling sweep needs n <= 9; pass --samples and --seed")
    mean = mean_phi_over_permutations(g, mode)
    rep["mean_over_relabelings"] = str(mean) if mode == "exact" else {"mean": mean.mean, "stderr": mean.stderr}
    if a.c is not None:
        frac = permutation_success_fraction(g, a.c, mode)
        rep["reveal_threshold"] = reveal_threshold(g.n, g.d, a.c)
        rep["success_fraction"] = str(frac) if mode == "exact" else {"mean": frac.mean, "stderr": frac.stderr}
    return {"phi.json": _dump(rep)}, True


def _cmd_bounds(a):
    import mpmath

    from .bounds import badness_bound_log, bound_sheet

    sheet = bound_sheet(a.n, a.d, a.c, exact=a.exact, residual_count=a.residual)
    rec = sheet.to_dict()
    if a.eps is not None and a.delta is not None:
        try:
            rec["badness_log"] = mpmath.nstr(badness_bound_log(a.n, a.d, a.c, a.eps, a.delta), 17)
        except TriregError as exc:
            rec["notes"].append(f"badness: {exc}")
    if a.format == "csv":
        row = {k: v for k, v in rec.items() if k != "notes"}
        row["notes"] = "; ".join(rec["notes"])
        return {"bounds.csv": _rows_csv([row])}, True
    return {"bounds.json": _dump(rec)}, True


def _cmd_structure(a):
    from .structure import Mode, structure_report

    g = _read_graph(a.input)
    mode = Mode.FIXED_D if a.mode == "fixed" else Mode.GROWING_D
    rep = structure_report(g, a.c, mode, a.delta)
    ok = all(v is not False for v in rep.checks.values())
    return {"structure.json": _dump(rep.to_dict())}, ok


def _cmd_sample(a):
    from .graph import format_edgelist
    from .sampler import ChainConfig, sample_conditioned

    if a.config:
        cfg = ChainConfig.from_json(Path(a.config).read_text())
    else:
        cfg = ChainConfig(
            a.n,
            a.d,
            a.c,
            seed=a.seed,
            chain_id=a.chain_id,
            burn_in=a.burn_in,
            max_steps=a.max_steps,
            record_every=a.record_every,
            start=a.start,
        )
    try:
        g, trace = sample_conditioned(cfg)
        ok = True
    except Timeout as exc:
        trace, ok = exc.trace, False
        g = trace.final_graph
    out = {"config.json": cfg.to_json() + "\n", "final.edges": format_edgelist(g)}
    if a.format == "csv":
        out["trace.csv"] = trace.to_csv()
    else:
        rec = trace.to_dict()
        rec.pop("final_graph")
        out["trace.json"] = _dump(rec)
    return out, ok


def _cmd_enumerate(a):
    from .census import t_max, threshold
    from .enumeration import count_by_triangles, exact_k_clique_conditioned_count, phi_preimage_histogram

    if a.pairings:
        res = phi_preimage_histogram(a.n, a.d, jobs=a.jobs)
        return {"pairings.json": _dump(res.to_dict())}, True
    by_t = count_by_triangles(a.n, a.d)
    rec = {
        "n": a.n,
        "d": a.d,
        "total": sum(by_t.values()),
        "count_by_triangles": {str(k): v for k, v in by_t.items()},
    }
    if a.c is not None:
        need = threshold(a.c * t_max(a.n, a.d))
        rec["c"] = str(a.c)
        rec["threshold"] = need
        rec["count"] = sum(v for t, v in by_t.items() if t >= need)
        if a.k is not None:
            rec["k"] = a.k
            rec["k_clique_count"] = exact_k_clique_conditioned_count(a.n, a.d, a.c, a.k)
    if a.format == "csv":
        rows = [{"T": k, "graphs": v} for k, v in by_t.items()]
        return {"enumerate.json": _dump(rec), "count_by_triangles.csv": _rows_csv(rows)}, True
    return {"enumerate.json": _dump(rec)}, True


def _cmd_certify(a):
    from .certify import results_json, results_table, run_suite

    results = run_suite(a.suite, a.only)
    out = {"results.txt": results_table(results), "results.json": results_json(results) + "\n"}
    if a.format == "csv":
        out["results.csv"] = _rows_csv([{"number": r.number, "name": r.name, "passed": r.passed} for r in results])
    return out, all(r.passed for r in results)


COMMANDS = {
    "generate": _cmd_generate,
    "census": _cmd_census,
    "phi": _cmd_phi,
    "bounds": _cmd_bounds,
    "structure": _cmd_structure,
    "sample": _cmd_sample,
    "enumerate": _cmd_enumerate,
    "certify": _cmd_certify,
}


def _manifest(a, artifacts: dict[str, str]) -> str:
    params = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(vars(a).items()) if k != "output"}
    return _dump(
        {
            "schema_version": SCHEMA_VERSION,
            "subcommand": a.command,
            "params": params,
            "seed": getattr(a, "seed", None),
            "artifacts": {name: hashlib.sha256(text.encode()).hexdigest() for name, text in sorted(artifacts.items())},
        }
    )


def _usage(stream, message: str) -> int:
    stream.write(json.dumps({"error": "usage", "message": message, "schema_version": SCHEMA_VERSION}) + "\n")
    return 2


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        a = build_parser().parse_args(argv)
        if a.command is None:
            raise UsageError("a subcommand is required")
        if a.command in RANDOMIZED and a.seed is None and not getattr(a, "config", None):
            raise UsageError(f"{a.command} is randomized and requires --seed")
        artifacts, ok = COMMANDS[a.command](a)
    except UsageError as exc:
        return _usage(stderr, str(exc))
    except (TriregError, ValueError) as exc:
        return _usage(stderr, f"{type(exc).__name__}: {exc}")

    if a.output:
        out = Path(a.output)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in artifacts.items():
            (out / name).write_text(text)
        (out / "manifest.json").write_text(_manifest(a, artifacts))
        if a.command == "certify":
            stdout.write(artifacts["results.txt"])
    else:
        for name in artifacts:
            if a.format == "csv" and name.endswith(".csv"):
                stdout.write(artifacts[name])
                break
        else:
            stdout.write(next(iter(artifacts.values())))
    stdout.flush()
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
