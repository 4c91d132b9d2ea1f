"""Command-line front end.

Exit status: 0 on success, 1 when a check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path

from . import __version__
from .boolfun import BooleanFunction, is_bent, is_bent_mod, is_hyper_bent, walsh_transform
from .certigraph import (Certificate, build_graph, certify_nonnegative, export_json,
                         scc_decompose, verify_certificate, weight_histogram)
from .errors import DomainError, RegistryError
from .expsums import kloosterman
from .field import field
from .mesnager import _family, characterize, reproduce_example, search_bent
from .padic import (PadicCtx, davenport_hasse_check, dillon_gauss_identity_check,
                    interpolation_check, kloosterman_gauss_check, stickelberger_check)
from .registry import load_registry, registry_hash
from .verify import EXPECTED_HISTOGRAM, check_carries, run_all


@dataclass
class RunManifest:
    tool_version: str
    registry_hash: str
    subcommand: str
    parameters: dict
    wall_clock: float = 0.0
    checks: dict[str, bool] = dc_field(default_factory=dict)


def _hex(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex value: {text!r}") from None


def _emit(args, manifest: RunManifest, payload, text: str):
    manifest.wall_clock = round(time.perf_counter() - args._t0, 4)
    if args.json:
        print(json.dumps({"manifest": asdict(manifest), "result": payload}, indent=2))
    else:
        print(text)
        print(f"manifest: {json.dumps(asdict(manifest), sort_keys=True)}", file=sys.stderr)


def _manifest(args, registry) -> RunManifest:
    params = {k: v for k, v in vars(args).items()
              if not k.startswith("_") and k not in ("func", "json", "command", "action")}
    sub = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    return RunManifest(__version__, registry_hash(registry), sub, params)


def _function_from_args(args, registry) -> BooleanFunction:
    if args.table_hex is not None:
        if args.degree is None:
            raise DomainError("--table-hex needs --degree")
        return BooleanFunction.from_hex(field(args.degree, registry), args.table_hex)
    if args.m is None or args.a_hex is None:
        raise DomainError("give either --m with --a-hex, or --degree with --table-hex")
    fam = _family(args.m, registry)
    b = fam.emb_4(args.b_hex) if args.b_hex is not None else 1
    return fam.function(args.a_hex, b)


# -- subcommands -------------------------------------------------------------

def cmd_field(args, registry) -> int:
    ctx = field(args.degree, registry)
    out = {"degree": ctx.degree, "modulus": f"{ctx.modulus:#x}",
           "primitive": f"{ctx.primitive:#x}", "trace_mask": f"{ctx.trace_mask:#x}"}
    if args.mul:
        out["mul"] = f"{ctx.mul(*args.mul):#x}"
    if args.inv is not None:
        out["inv"] = f"{ctx.inv(args.inv):#x}"
    if args.trace is not None:
        out["trace"] = ctx.trace(args.trace)
    _emit(args, _manifest(args, registry), out,
          "\n".join(f"{k:<11} {v}" for k, v in out.items()))
    return 0


def cmd_walsh(args, registry) -> int:
    f = _function_from_args(args, registry)
    spec = walsh_transform(f)
    if args.out:
        Path(args.out).write_text(spec.to_json())
    hist = spec.histogram()
    payload = {"n": spec.n, "histogram": {str(k): v for k, v in hist.items()},
               "parseval": spec.parseval_ok()}
    text = "\n".join(f"W = {k:>8}  x {v}" for k, v in hist.items())
    _emit(args, _manifest(args, registry), payload, text)
    return 0


def cmd_bent(args, registry) -> int:
    f = _function_from_args(args, registry)
    spec = walsh_transform(f)
    out = {"bent": is_bent(f, spec), "bent_mod": is_bent_mod(f, spec)}
    if args.hyper:
        out["hyper_bent"] = is_hyper_bent(f, args.threads)
    _emit(args, _manifest(args, registry), out,
          "\n".join(f"{k:<11} {v}" for k, v in out.items()))
    return 0


def cmd_kloosterman(args, registry) -> int:
    fam = _family(args.m, registry)
    points = [args.a_hex] if args.a_hex is not None else range(1, fam.ctx_n.order)
    rows = []
    for a in points:
        k = fam.norm_kloosterman(a)
        bent = is_bent(fam.function(a)) if args.m % 2 == 0 else None
        rows.append({"a": f"{a:#x}", "K": k, "bent": bent})
    if args.csv:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["a", "K", "bent"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        print(buf.getvalue(), end="")
        return 0
    text = "\n".join(f"{r['a']:>8}  K={r['K']:>4}  bent={r['bent']}" for r in rows)
    _emit(args, _manifest(args, registry), rows, text)
    return 0


PADIC_CHECKS = ("stickelberger", "interpolation", "davenport-hasse", "kloosterman-gauss", "dillon")


def cmd_padic(args, registry) -> int:
    ctx = PadicCtx(field(args.degree, registry), args.precision)
    wanted = PADIC_CHECKS if args.check == "all" else (args.check,)
    results = {}
    for name in wanted:
        if name == "stickelberger":
            results[name] = stickelberger_check(ctx)
        elif name == "interpolation":
            results[name] = interpolation_check(ctx)
        elif ctx.n % 2:
            continue
        elif name == "davenport-hasse":
            results[name] = davenport_hasse_check(ctx)
        elif name == "kloosterman-gauss":
            results[name] = kloosterman_gauss_check(ctx)
        elif name == "dillon":
            rng = random.Random(args.seed)
            q = ctx.field.order
            results[name] = all(dillon_gauss_identity_check(ctx, rng.randrange(1, q), rng.randrange(1, q))
                                for _ in range(args.samples))
    man = _manifest(args, registry)
    man.checks = results
    _emit(args, man, results, "\n".join(f"{'PASS' if v else 'FAIL'}  {k}" for k, v in results.items()))
    return 0 if all(results.values()) else 1


def cmd_carry(args, registry) -> int:
    out = check_carries(args.count, args.seed)
    payload = {"count": args.count, "passed": out.passed, "detail": out.detail}
    man = _manifest(args, registry)
    man.checks = {"carry-batch": out.passed}
    print(json.dumps({"manifest": asdict(man), "result": payload} if args.json else payload))
    return 0 if out.passed else 1


def cmd_graph(args, registry) -> int:
    g = build_graph()
    comps = scc_decompose(g)
    h = g.subgraph(max(comps, key=len))
    hist = weight_histogram(h)
    cert = certify_nonnegative(h)
    certified = isinstance(cert, Certificate) and verify_certificate(h, cert)
    if args.out:
        Path(args.out).write_text(export_json(g, comps, cert if certified else None))
    sizes = sorted((len(c) for c in comps), reverse=True)
    rows = [("vertices", len(g), 72), ("SCCs", len(comps), 33), ("largest SCC", sizes[0], 40),
            ("singleton SCCs", sizes.count(1), 32)]
    rows += [(f"arcs of weight {w}", hist.get(w, 0), c) for w, c in EXPECTED_HISTOGRAM.items()]
    ok = certified and all(got == want for _, got, want in rows)
    text = "\n".join(f"{name:<20} {got:>4}   expected {want:>4}" for name, got, want in rows)
    text += f"\n{'CERTIFIED' if certified else 'NOT CERTIFIED'}\n{'PASS' if ok else 'FAIL'}"
    payload = {"table": [{"item": n, "computed": g_, "expected": w} for n, g_, w in rows],
               "certified": certified, "passed": ok}
    man = _manifest(args, registry)
    man.checks = {"graph-certify": ok}
    _emit(args, man, payload, text)
    return 0 if ok else 1


def cmd_mesnager(args, registry) -> int:
    man = _manifest(args, registry)
    if args.action == "characterize":
        rows = characterize(args.m, threads=args.threads, sample=args.sample, registry=registry)
        data = [r.to_dict() for r in rows]
        if args.out:
            Path(args.out).write_text(json.dumps(data, indent=1))
        consistent = all(r.consistent for r in rows)
        man.checks = {"bent iff K=4": consistent}
        text = (f"m={args.m}: {len(rows)} values of a, {sum(r.bent for r in rows)} bent, "
                f"{sum(r.kloosterman == 4 for r in rows)} with K=4\n"
                f"{'PASS' if consistent else 'FAIL'}  bent iff K = 4")
        _emit(args, man, data, text)
        return 0 if consistent else 1
    if args.action == "example":
        report = reproduce_example(registry=registry, threads=args.threads)
        man.checks = {c.name: c.passed for c in report.checks}
        text = "\n".join(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.detail})" for c in report.checks)
        _emit(args, man, report.to_dict(), text)
        return 0 if report.passed else 1
    hits = search_bent(args.m, args.limit, registry=registry)
    _emit(args, man, [f"{int(a):#x}" for a in hits], "\n".join(f"{int(a):#x}" for a in hits))
    return 0


def cmd_verify(args, registry) -> int:
    results = run_all(args.only or None)
    man = _manifest(args, registry)
    man.checks = {r.key: r.ok for r in results}
    payload = [{"criterion": r.key, "passed": r.ok, "seconds": round(r.seconds, 3),
                "budget": r.budget, "detail": r.detail} for r in results]
    _emit(args, man, payload, "\n".join(r.line() for r in results))
    return 0 if all(r.ok for r in results) else 1


# -- parser ------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field-registry", metavar="PATH", help="JSON degree -> hex modulus overrides")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--threads", type=int, default=1, help="worker cap for scans")
    return p


def _function_args(p: argparse.ArgumentParser):
    p.add_argument("--m", type=int, help="half degree; selects f_{a,b} on F_{2^(2m)}")
    p.add_argument("--a-hex", type=_hex, help="a in F_{2^(2m)}")
    p.add_argument("--b-hex", type=_hex, help="b in F_4^* as an F_4 element (1, 2 or 3)")
    p.add_argument("--degree", type=int, help="field degree for --table-hex")
    p.add_argument("--table-hex", help="little-endian hex truth table")


def _mesnager_actions(sub, common):
    ch = sub.add_parser("characterize", parents=[common], help="bent verdict vs Kloosterman value")
    ch.add_argument("--m", type=int, required=True)
    ch.add_argument("--sample", type=int, help="sample this many a instead of all")
    ch.add_argument("--out", help="write rows as JSON")
    sub.add_parser("example", parents=[common], help="recompute the m = 6 worked example")
    se = sub.add_parser("search", parents=[common], help="list a with K = 4, certified bent")
    se.add_argument("--m", type=int, required=True)
    se.add_argument("--limit", type=int, default=10)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = argparse.ArgumentParser(prog="bentforge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("field", parents=[common], help="field parameters and arithmetic")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--mul", type=_hex, nargs=2, metavar="HEX")
    s.add_argument("--inv", type=_hex, metavar="HEX")
    s.add_argument("--trace", type=_hex, metavar="HEX")
    s.set_defaults(func=cmd_field)

    s = sub.add_parser("walsh", parents=[common], help="Walsh spectrum summary")
    _function_args(s)
    s.add_argument("--out", help="write the full spectrum as JSON")
    s.set_defaults(func=cmd_walsh)

    s = sub.add_parser("bent", parents=[common], help="bent / hyper-bent verdicts")
    _function_args(s)
    s.add_argument("--hyper", action="store_true", help="also scan decimations")
    s.set_defaults(func=cmd_bent)

    s = sub.add_parser("kloosterman", parents=[common], help="K_m(a^(2^m+1)) table")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--a-hex", type=_hex)
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_kloosterman)

    s = sub.add_parser("padic-check", parents=[common], help="Gauss-sum identities in Z_q/2^M")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--precision", type=int, default=None)
    s.add_argument("--check", choices=PADIC_CHECKS + ("all",), default="all")
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_padic)

    s = sub.add_parser("carry-check", parents=[common], help="random carry-theorem batch")
    s.add_argument("--count", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=11)
    s.set_defaults(func=cmd_carry)

    s = sub.add_parser("graph-certify", parents=[common], help="build and certify the carry digraph")
    s.add_argument("--out", help="write graph, SCC labels and potentials as JSON")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("mesnager", help="the binomial family")
    msub = s.add_subparsers(dest="action", required=True)
    _mesnager_actions(msub, common)
    s.set_defaults(func=cmd_mesnager)

    s = sub.add_parser("verify-paper", parents=[common], help="run every acceptance check")
    s.add_argument("--only", nargs="*", metavar="KEY")
    s.set_defaults(func=cmd_verify)
    return p


def dispatch(argv: list[str] | None, parser: argparse.ArgumentParser | None = None) -> int:
    parser = parser or build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return 2
    args._t0 = time.perf_counter()
    try:
        registry = load_registry(args.field_registry if hasattr(args, "field_registry") else None)
        return args.func(args, registry)
    except (DomainError, RegistryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(None))


def mesnager_main() -> None:
    """``mesnager ACTION ...`` as a shorthand for ``bentforge mesnager ACTION ...``."""
    argv = sys.argv[1:]
    sys.exit(dispatch(["mesnager", *argv] if argv else []))
