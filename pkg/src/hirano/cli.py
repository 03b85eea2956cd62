"""Command-line interface.

Exit codes: 0 when a command ran and reported (a failed verdict is still
data), 2 for unreadable input or bad usage, 3 for dimension problems, 4 when
the requested inverse or splitting does not exist.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import blockthm as bt
from . import decomp, formats, genfuzz
from . import gendrazin as gd
from .errors import DimensionMismatch, NonexistentInverse, ParseError
from .ratmat import Matrix, char_poly

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_NONEXISTENT = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _out(text: str = "") -> None:
    sys.stdout.write(text + "\n")


def _err(text: str) -> None:
    sys.stderr.write(text + "\n")


def _factor_string(p0: int, p1: int, pm1: int) -> str:
    parts = []
    for base, e in (("x", p0), ("(x - 1)", p1), ("(x + 1)", pm1)):
        if e:
            parts.append(base if e == 1 else f"{base}^{e}")
    return " * ".join(parts) or "1"


def _yes(exponent: int | None) -> str:
    if exponent is None:
        return "no"
    return "yes" if exponent == 1 else f"yes (exponent {exponent})"


def check_lines(a: Matrix) -> list[str]:
    hir = gd.is_hirano_invertible(a)
    sd = gd.is_strongly_drazin_invertible(a)
    nil = gd.is_nilpotent(a)
    poly = char_poly(a)
    lines = [f"hirano: {_yes(hir)}, strongly-drazin: {_yes(sd)}, nilpotent: {_yes(nil)}"]
    lines.append(f"index: {gd.index(a)}")
    fac = gd.tripotent_factorization(poly)
    if fac is None:
        lines.append(f"char poly: {poly} (not a product of x, x - 1, x + 1)")
    else:
        lines.append(f"char poly: {poly} = {_factor_string(*fac)}")
    return lines


def cmd_check(args) -> int:
    a = formats.load_matrix(args.matrix)
    for line in check_lines(a):
        _out(line)
    return EXIT_OK


def _drazin_certificate(a: Matrix, data: gd.DrazinData) -> dict:
    res = gd.drazin_residuals(a, data.dinv)
    return {
        "index": data.index_k,
        "core_projection": formats.render_rows(data.core_proj),
        "az-za": formats.render_rows(res["az-za"]),
        "zaz-z": formats.render_rows(res["zaz-z"]),
        "a-a^2z": formats.render_rows(res["a-a^2z"]),
        "a-a^2z nil_exponent": gd.is_nilpotent(res["a-a^2z"]),
    }


def cmd_invert(args) -> int:
    a = formats.load_matrix(args.matrix)
    if args.kind == "drazin":
        data = gd.drazin_inverse(a)
        z, cert = data.dinv, _drazin_certificate(a, data)
    elif args.kind == "hirano":
        hc = gd.hirano_inverse(a)
        z = hc.z
        cert = formats.certificate_json(hc)
        cert["(a^2-az) nil_exponent"] = cert.pop("nil_exponent")
        cert.update(_drazin_certificate(a, gd.drazin_inverse(a)))
    else:
        sc = gd.strongly_drazin_inverse(a)
        z = sc.z
        cert = formats.certificate_json(sc)
        cert["(a-az) nil_exponent"] = cert.pop("nil_exponent")
        cert.update(_drazin_certificate(a, gd.drazin_inverse(a)))
    cert.pop("inverse", None)
    payload = {"kind": args.kind, "rows": formats.render_rows(z), "certificate": cert}
    _emit(payload, args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    a = formats.load_matrix(args.matrix)
    split = {
        "tripotent": decomp.tripotent_nilpotent,
        "idempotent": decomp.idempotent_nilpotent,
        "jc": decomp.jordan_chevalley,
    }[args.mode](a)
    payload = {
        "mode": args.mode,
        "structured_part": formats.render_matrix(split.structured_part),
        "nilpart": formats.render_matrix(split.nilpart),
        "nil_exponent": split.nil_exponent,
        "newton_steps": split.newton_steps,
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_theorem(args) -> int:
    tid = _theorem_id(args.id)
    inst, _ = formats.load_blocks(args.blocks)
    report = bt.verify_conclusion(tid, inst, args.as_stated)
    _emit(formats.theorem_report_json(report), args.out)
    return EXIT_OK


def _counterexample_path(out_dir: str, tid, seed: int, size: int, trial: int) -> Path:
    return Path(out_dir) / f"counterexample-{tid}-seed{seed}-n{size}-trial{trial}.json"


def _write_counterexample(args, tid, inst, trial: int) -> Path:
    meta = {
        "theorem": tid.value,
        "seed": args.seed,
        "trial": trial,
        "block_size": args.size,
        "entry_bound": args.entry_bound,
        "dropped": args.drop,
        "as_stated": args.as_stated,
    }
    path = _counterexample_path(args.out_dir, tid, args.seed, args.size, trial)
    path.parent.mkdir(parents=True, exist_ok=True)
    formats.dump_json(formats.render_blocks(inst, meta), path)
    return path


def cmd_fuzz(args) -> int:
    tid = _theorem_id(args.id)
    if not 0 <= args.seed < 2**64:
        raise _UsageError("--seed must be a 64-bit unsigned integer")
    if args.trials < 0 or args.size < 1 or args.entry_bound < 1:
        raise _UsageError("--trials must be >= 0, --size and --entry-bound >= 1")
    if args.drop is not None and args.drop not in bt.hypothesis_names(tid):
        names = ", ".join(bt.hypothesis_names(tid))
        raise _UsageError(f"{tid} has no hypothesis {args.drop!r} (choose from: {names})")
    cfg = genfuzz.GenConfig(
        seed=args.seed, block_size=args.size, entry_bound=args.entry_bound,
        trials=args.trials, as_stated=args.as_stated,
    )
    summary = {"theorem": tid.value, "size": args.size, "seed": args.seed, "dropped": args.drop,
               "as_stated": args.as_stated}
    if args.drop is None:
        results = genfuzz.run_trials(tid, cfg, None, args.threads)
        counts = {"Verified": 0, "HypothesesFail": 0, "ConclusionFail": 0, "skipped": 0}
        side: dict[str, int] = {}
        first_fail = None
        for res in results:
            counts[res.verdict or "skipped"] += 1
            for name in res.failed_side_conditions:
                if name != "<all-nonzero>":
                    side[name] = side.get(name, 0) + 1
            if res.verdict == "ConclusionFail" and first_fail is None:
                first_fail = res
        summary.update(trials=len(results), **counts, side_condition_failures=side)
        if first_fail is not None:
            summary["counterexample"] = str(_write_counterexample(args, tid, first_fail.instance, first_fail.trial))
        line = (f"{tid} size {args.size} seed {args.seed}: {len(results)} trials, "
                f"{counts['Verified']} verified, {counts['HypothesesFail']} hypotheses-fail, "
                f"{counts['ConclusionFail']} conclusion-fail, {counts['skipped']} skipped")
        extra = [f"proof side condition {k} failed in {v} trials" for k, v in sorted(side.items())]
    else:
        probe = genfuzz.necessity_probe(tid, args.drop, cfg)
        summary.update(trials=probe.trials_run, skipped=probe.trials_skipped,
                       counterexample_trial=probe.counterexample_trial)
        found = probe.counterexample is not None
        if found:
            path = _write_counterexample(args, tid, probe.counterexample[0], probe.counterexample_trial)
            summary["counterexample"] = str(path)
        line = (f"{tid} size {args.size} seed {args.seed} dropping {args.drop}: "
                f"{probe.trials_run} trials, {probe.trials_skipped} skipped, "
                + (f"counterexample at trial {probe.counterexample_trial}" if found else "no counterexample"))
        extra = []
    if args.json:
        _out(json.dumps(summary, indent=2))
    else:
        _out(line)
        for e in extra:
            _out(e)
        if "counterexample" in summary:
            _out(f"counterexample written to {summary['counterexample']}")
    return EXIT_OK


def _theorem_id(text: str) -> bt.TheoremId:
    try:
        return bt.TheoremId(text.strip().upper())
    except ValueError:
        raise _UsageError(f"unknown theorem id {text!r}") from None


def _emit(payload: dict, out: str | None) -> None:
    text = formats.dump_json(payload, out)
    if out is None:
        _out(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hirano", description="Exact Drazin, strongly Drazin and Hirano inverses "
                "and block-matrix theorem checks over the rationals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="class membership of a matrix")
    c.add_argument("--matrix", required=True)
    c.set_defaults(func=cmd_check)

    i = sub.add_parser("invert", help="Drazin, strongly Drazin or Hirano inverse with certificate")
    i.add_argument("--matrix", required=True)
    i.add_argument("--kind", choices=("drazin", "strong", "hirano"), default="drazin")
    i.add_argument("--out")
    i.set_defaults(func=cmd_invert)

    d = sub.add_parser("decompose", help="commuting structured + nilpotent splitting")
    d.add_argument("--matrix", required=True)
    d.add_argument("--mode", choices=("tripotent", "idempotent", "jc"), default="tripotent")
    d.add_argument("--out")
    d.set_defaults(func=cmd_decompose)

    t = sub.add_parser("theorem", help="check hypotheses and conclusion on a block file")
    t.add_argument("--id", required=True)
    t.add_argument("--blocks", required=True)
    t.add_argument("--as-stated", action="store_true",
                   help="use the literal hypothesis list (differs only for C2_9)")
    t.add_argument("--out")
    t.set_defaults(func=cmd_theorem)

    f = sub.add_parser("fuzz", help="soundness sweep, or necessity probe with --drop")
    f.add_argument("--id", required=True)
    f.add_argument("--trials", type=int, default=100)
    f.add_argument("--size", type=int, default=3)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--entry-bound", type=int, default=3)
    f.add_argument("--drop")
    f.add_argument("--as-stated", action="store_true")
    f.add_argument("--out-dir", default=".")
    f.add_argument("--threads", type=int, default=None, help="worker processes (default: $THREADS or 1)")
    f.add_argument("--json", action="store_true", help="print the summary as JSON")
    f.set_defaults(func=cmd_fuzz)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        _err(f"error: {exc}")
        return EXIT_PARSE
    except ParseError as exc:
        _err(f"parse error: {exc}")
        return EXIT_PARSE
    except DimensionMismatch as exc:
        _err(f"dimension error: {exc}")
        return EXIT_DIMENSION
    except NonexistentInverse as exc:
        _err(f"does not exist: {exc}")
        if exc.residual is not None:
            _err("residual:")
            _err(str(exc.residual))
        return EXIT_NONEXISTENT


if __name__ == "__main__":
    sys.exit(main())
