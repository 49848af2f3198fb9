"""Command-line surface.

Every subcommand is scriptable: identical inputs and seeds produce
byte-identical output, exact values serialize as "p/q" strings, results go
to stdout and structured errors to stderr.  Exit codes: 0 success, 1 domain
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction

from . import classify, construct, core, hom, search, signed, spectral, stochastic, trees
from .errors import ToursidError

CACHE_ENV = "TOURSID_CACHE_DIR"


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _emit_text(lines) -> None:
    for line in lines:
        sys.stdout.write(line + "\n")


def _read_file(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _cmd_classify_path(args) -> int:
    res = classify.classify_path(args.orientation, best_effort=args.best_effort)
    if args.json:
        _emit_json(res.to_json_dict())
    else:
        _emit_text([f"{res.input_text}: {res.verdict.value} [{res.rule}]"])
    return 0


def _cmd_classify_cycle(args) -> int:
    res = classify.classify_cycle(args.orientation, best_effort=args.best_effort)
    if args.json:
        _emit_json(res.to_json_dict())
    else:
        _emit_text(
            [f"cycle {res.input_text} (flips={res.flips}): {res.verdict.value} [{res.rule}]"]
        )
    return 0


def _cmd_counts(args) -> int:
    if args.cycle:
        c = signed.cycle_counts(args.orientation)
    else:
        c = signed.path_counts(args.orientation)
    payload = {
        "input": args.orientation,
        "kind": "cycle" if args.cycle else "path",
        "c_p3": c.c_p3,
        "c_p5": c.c_p5,
        "c_2p3": c.c_2p3,
        "min_k": c.min_k,
        "c_min_k": c.c_min_k,
    }
    if args.json:
        _emit_json(payload)
    else:
        _emit_text([
            f"C(P3)={c.c_p3} C(P5)={c.c_p5} C(2P3)={c.c_2p3} "
            f"min_k={c.min_k} C(P_2k+1)={c.c_min_k}"
        ])
    return 0


def _load_host(args):
    text = _read_file(args.host_file)
    header = text.splitlines()[0] if text.splitlines() else ""
    if header.startswith("tournament"):
        from .tournament import parse_tournament_text, with_half_loops

        t = parse_tournament_text(text)
        return with_half_loops(t) if not args.no_loops else t
    from .tournament import parse_weighted_text

    return parse_weighted_text(text)


def _cmd_hom(args) -> int:
    host = _load_host(args)
    if getattr(args, "float_backend", False) and hasattr(host, "entries"):
        from .tournament import WeightedTournament, _freeze

        host = WeightedTournament(
            host.n,
            _freeze([[float(x) for x in row] for row in host.entries]),
            loops_half=host.loops_half,
        )
    if args.pattern_cycle:
        res = hom.hom_cycle(args.pattern_cycle, host)
        label = f"cycle {args.pattern_cycle}"
    elif args.pattern_file:
        d = core.parse_digraph_text(_read_file(args.pattern_file))
        res = hom.hom_auto(d, host)
        label = f"digraph v={d.v}"
    else:
        res = hom.hom_path(args.pattern_path, host)
        label = f"path {args.pattern_path}"
    raw, dens = res.raw, res.density
    if isinstance(raw, (Fraction, int)):
        payload = {"pattern": label, "h": _frac(raw), "t": _frac(dens)}
    else:
        payload = {"pattern": label, "h": raw, "t": dens}
    if args.json:
        _emit_json(payload)
    else:
        _emit_text([f"h = {payload['h']}", f"t = {payload['t']}"])
    return 0


def _cmd_expand(args) -> int:
    p = spectral.expand_path(args.orientation)
    if args.json:
        terms = [
            {"n_power": z, "s_indices": list(runs), "coeff": _frac(c)}
            for (z, runs), c in p.terms
        ]
        _emit_json({"orientation": args.orientation, "v": p.v, "e": p.e, "terms": terms})
    else:
        _emit_text([p.to_text()])
    return 0


def _cmd_certify_sign(args) -> int:
    p = spectral.expand_path(args.orientation)
    res = spectral.certify_sign(p)
    if args.json:
        _emit_json({
            "orientation": args.orientation,
            "verdict": res.verdict.value,
            "trace": list(res.trace),
        })
    else:
        _emit_text([res.verdict.value] + [f"  {line}" for line in res.trace])
    return 0


def _cmd_kernels(args) -> int:
    k = construct.named_kernel(args.name)
    payload = {
        "name": k.name,
        "n": k.matrix.n,
        "rows": [[_frac(x) for x in row] for row in k.matrix.entries],
        "t_p3": _frac(hom.t_kernel_path(k.matrix, 2)),
        "t_p5": _frac(hom.t_kernel_path(k.matrix, 4)),
        "t_2p3": _frac(Fraction(hom.t_kernel_path(k.matrix, 2)) ** 2),
    }
    if args.json:
        _emit_json(payload)
    else:
        _emit_text([f"{k.name}: n={k.matrix.n}"] +
                   [" ".join(_frac(x) for x in row) for row in k.matrix.entries] +
                   [f"t_P3={payload['t_p3']} t_P5={payload['t_p5']} t_2P3={payload['t_2p3']}"])
    return 0


def _cmd_certificate(args) -> int:
    delta = Fraction(args.delta) if args.delta is not None else Fraction(1, 100)
    cert = construct.certificate(args.name, delta=delta)
    if args.out:
        from .tournament import format_weighted_text

        with open(args.out + ".wt", "w", encoding="utf-8") as fh:
            fh.write(format_weighted_text(cert.host))
        with open(args.out + ".json", "w", encoding="utf-8") as fh:
            fh.write(construct.certificate_sidecar_json(cert))
    _emit_json(cert.to_json_dict())
    return 0


def _cache_path(cache_dir: str, pattern: str, mode: str, n: int) -> str:
    key = hashlib.sha256(f"{pattern}|{mode}|{n}".encode()).hexdigest()[:24]
    return os.path.join(cache_dir, f"refute_{key}.json")


def _cmd_verify(args) -> int:
    mode = args.mode.upper()
    if args.pattern_file:
        pattern = core.parse_digraph_text(_read_file(args.pattern_file))
        pattern_key = core.format_digraph_text(pattern)
    else:
        pattern = args.pattern
        pattern_key = str(core.as_orientation(pattern))
    if args.budget and args.seed is None:
        raise ToursidError("--seed is required when the optimizer budget is nonzero")
    cache_dir = os.environ.get(CACHE_ENV)
    cached = None
    if cache_dir and not args.budget:
        os.makedirs(cache_dir, exist_ok=True)
        p = _cache_path(cache_dir, pattern_key, mode, args.max_n)
        if os.path.exists(p):
            with open(p, "r", encoding="utf-8") as fh:
                entry = json.load(fh)
            if entry.get("violation") is None:
                margin = Fraction(entry["margin_min"]) if entry.get("margin_min") else None
                cached = search.RefutationReport(
                    entry["pattern_text"], mode, entry["n"], entry["samples"], None, margin
                )
    if cached is not None:
        report = cached
    else:
        report = search.refute(
            pattern, mode, n_max=args.max_n, budget=args.budget, seed=args.seed or 0,
            threads=max(1, args.threads),
        )
        if cache_dir and not args.budget and report.violation is None:
            p = _cache_path(cache_dir, pattern_key, mode, args.max_n)
            with open(p, "w", encoding="utf-8") as fh:
                json.dump({
                    "violation": None,
                    "n": report.n_checked,
                    "samples": report.samples,
                    "pattern_text": report.pattern_text,
                    "margin_min": _frac(report.margin_min) if report.margin_min is not None else None,
                }, fh)
    if args.out and report.violation is not None:
        from .tournament import format_weighted_text

        with open(args.out + ".wt", "w", encoding="utf-8") as fh:
            fh.write(format_weighted_text(report.violation.host))
        with open(args.out + ".json", "w", encoding="utf-8") as fh:
            fh.write(construct.certificate_sidecar_json(report.violation))
    if args.json:
        _emit_json(report.to_json_dict())
    else:
        out = [f"pattern {report.pattern_text} mode {mode}: "
               + ("violation found" if report.violation else "no violation")]
        if report.violation:
            out.append(json.dumps(report.violation.to_json_dict(), sort_keys=True))
        _emit_text(out)
    return 0


def _cmd_orient_tree(args) -> int:
    t = core.parse_tree_text(_read_file(args.file))
    res = trees.orient_tree_tas(t)
    if res.arcs is None:
        _emit_json({"provenance": res.provenance, "arcs": None})
        return 0
    payload = {
        "provenance": res.provenance,
        "arcs": [[u, w] for u, w in sorted(res.arcs)],
    }
    if args.json:
        _emit_json(payload)
    else:
        _emit_text([core.format_digraph_text(res.as_digraph()).rstrip("\n"),
                    f"provenance: {res.provenance}"])
    return 0


def _cmd_iso_pair(args) -> int:
    t = core.parse_tree_text(_read_file(args.file))
    pair = trees.find_isomorphic_pair(t)
    if pair is None:
        _emit_json({"found": False})
    else:
        _emit_json({
            "found": True,
            "v": pair.v,
            "w": pair.w,
            "h1": sorted(pair.h1),
            "h2": sorted(pair.h2),
            "phi": [[a, b] for a, b in pair.phi],
        })
    return 0


def _cmd_strong_tas(args) -> int:
    d = core.parse_digraph_text(_read_file(args.file))
    i_set = [int(x) for x in args.independent.split(",")] if args.independent else []
    rep = trees.strong_tas_check(d, i_set, n_max=args.max_n)
    payload = {"passed": rep.passed, "checked": rep.checked}
    if rep.counterexample:
        ce = dict(rep.counterexample)
        ce["bound"] = _frac(ce["bound"])
        ce["adj"] = [list(r) for r in ce["adj"]]
        ce["embedding"] = [list(p) for p in ce["embedding"]]
        payload["counterexample"] = ce
    _emit_json(payload)
    return 0


def _cmd_lyapunov(args) -> int:
    beta = Fraction(args.beta) if args.beta is not None else None
    est = stochastic.lyapunov_estimate(
        args.mode, steps=args.steps, seed=args.seed, beta=beta, batches=args.batches
    )
    if args.csv:
        batch_len = args.steps // args.batches
        sys.stdout.write("batch,steps,lambda_hat\n")
        for i, m in enumerate(est.batch_means):
            sys.stdout.write(f"{i},{batch_len},{m!r}\n")
        return 0
    d = est.to_json_dict()
    if d["beta"] is not None:
        d["beta"] = _frac(Fraction(args.beta))
    _emit_json(d)
    return 0


def _cmd_fg(args) -> int:
    if args.sample:
        n, trials = args.sample
        if args.seed is None and not args.exhaustive:
            raise ToursidError("--seed is required for Monte Carlo sampling")
        summary = stochastic.sample_fg(n, trials, seed=args.seed, exhaustive=args.exhaustive)
        payload = {
            "n": summary.n,
            "trials": summary.trials,
            "exhaustive": summary.exhaustive,
            "mean_log_ratio": summary.mean_log_ratio,
            "median_log_ratio": summary.median_log_ratio,
            "frac_at_least": summary.frac_at_least,
        }
        if isinstance(summary.mean_total, Fraction):
            payload["mean_total"] = _frac(summary.mean_total)
        else:
            payload["mean_total"] = summary.mean_total
        _emit_json(payload)
        return 0
    st = stochastic.fg_process(args.orientation or "")
    _emit_json({
        "orientation": args.orientation or "",
        "f": _frac(st.f),
        "g": _frac(st.g),
        "total": _frac(st.total),
        "steps": st.i,
    })
    return 0


def _cmd_localwalk(args) -> int:
    w = signed.walk_fractions(args.steps)
    _emit_json({
        "steps": args.steps,
        "p_zero": _frac(w.p_zero),
        "p_pos": _frac(w.p_pos),
        "p_neg": _frac(w.p_neg),
    })
    return 0


def _cmd_sparse(args) -> int:
    sizes = [int(x) for x in args.parts.split(",")]
    sc = construct.sparse_non_tas(sizes)
    _emit_json({
        "m": sc.m,
        "k": sc.k,
        "e": sc.e,
        "violates": sc.violates,
        "edges": [[u, w] for u, w in sc.edges],
        "parts": [list(p) for p in sc.parts],
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toursid", description=__doc__)
    ap.add_argument("--threads", type=int, default=1, help="worker cap for fan-out stages")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, json_flag=True):
        if json_flag:
            p.add_argument("--json", action="store_true")

    p = sub.add_parser("classify-path")
    p.add_argument("orientation")
    p.add_argument("--best-effort", action="store_true")
    common(p)
    p.set_defaults(fn=_cmd_classify_path)

    p = sub.add_parser("classify-cycle")
    p.add_argument("orientation")
    p.add_argument("--best-effort", action="store_true")
    common(p)
    p.set_defaults(fn=_cmd_classify_cycle)

    p = sub.add_parser("counts")
    p.add_argument("orientation")
    p.add_argument("--cycle", action="store_true")
    common(p)
    p.set_defaults(fn=_cmd_counts)

    p = sub.add_parser("hom")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--pattern-path")
    g.add_argument("--pattern-cycle")
    g.add_argument("--pattern-file")
    p.add_argument("--host-file", required=True)
    p.add_argument("--no-loops", action="store_true",
                   help="keep a tournament host unweighted (0/1, no loops)")
    backend = p.add_mutually_exclusive_group()
    backend.add_argument("--exact", dest="float_backend", action="store_false",
                         help="exact rational arithmetic (default)")
    backend.add_argument("--float", dest="float_backend", action="store_true")
    p.set_defaults(float_backend=False)
    common(p)
    p.set_defaults(fn=_cmd_hom)

    p = sub.add_parser("expand")
    p.add_argument("orientation")
    common(p)
    p.set_defaults(fn=_cmd_expand)

    p = sub.add_parser("certify-sign")
    p.add_argument("orientation")
    common(p)
    p.set_defaults(fn=_cmd_certify_sign)

    p = sub.add_parser("kernels")
    p.add_argument("name", choices=["B1", "BPrime", "MBalanced"])
    common(p)
    p.set_defaults(fn=_cmd_kernels)

    p = sub.add_parser("certificate")
    p.add_argument("name", choices=["TransitiveTriangle", "PerturbedCyclic"])
    p.add_argument("--delta", default=None)
    p.add_argument("--out", default=None, help="write host + sidecar with this prefix")
    p.set_defaults(fn=_cmd_certificate)

    p = sub.add_parser("verify")
    p.add_argument("--mode", required=True, choices=["tas", "ts", "TAS", "TS"])
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--pattern")
    g.add_argument("--pattern-file")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--budget", type=int, default=0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None,
                   help="write a found certificate host + sidecar with this prefix")
    common(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("orient-tree")
    p.add_argument("--file", required=True)
    common(p)
    p.set_defaults(fn=_cmd_orient_tree)

    p = sub.add_parser("iso-pair")
    p.add_argument("--file", required=True)
    p.set_defaults(fn=_cmd_iso_pair)

    p = sub.add_parser("strong-tas")
    p.add_argument("--file", required=True)
    p.add_argument("--independent", default="")
    p.add_argument("--max-n", type=int, default=4)
    p.set_defaults(fn=_cmd_strong_tas)

    p = sub.add_parser("lyapunov")
    p.add_argument("--mode", required=True, choices=["recurrence", "fg"])
    p.add_argument("--beta", default=None)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--batches", type=int, default=100)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(fn=_cmd_lyapunov)

    p = sub.add_parser("fg")
    p.add_argument("--orientation", default=None)
    p.add_argument("--sample", nargs=2, type=int, metavar=("N", "TRIALS"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(fn=_cmd_fg)

    p = sub.add_parser("localwalk")
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(fn=_cmd_localwalk)

    p = sub.add_parser("sparse")
    p.add_argument("--parts", required=True, help="comma-separated part sizes")
    p.set_defaults(fn=_cmd_sparse)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ToursidError as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)},
            sort_keys=True, separators=(",", ":"),
        ) + "\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
