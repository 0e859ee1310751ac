"""Command line entry point: ``restrix <subcommand>``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, genericq, modular, pipeline, tables
from .fusion import FusionError, candidates, cached_fusions
from .restrict import InvalidFusionError, decompose


def _write_json(obj, dest: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def _prime(text: str):
    if text == "all":
        return "all"
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer prime, 0 or 'all', got {text!r}") from None


def cmd_validate(args) -> int:
    directory = Path(args.dir) if args.dir else tables.corpus_dir(args.corpus)
    ok = True
    for path in tables.iter_table_files(directory):
        t = tables.load(path)
        report = tables.validate(t)
        print(report if args.verbose or not report.ok else f"{t.group_name}: ok")
        ok &= report.ok
        for bpath in sorted(directory.glob(f"{path.stem}.mod*.json")):
            bt = modular.load_brauer(bpath, t)
            breport = modular.validate_brauer(bt)
            print(breport if args.verbose or not breport.ok else f"{breport.group_name}: ok")
            ok &= breport.ok
    return 0 if ok else 1


def cmd_classify(args) -> int:
    verdicts = pipeline.classify(args.ambient, args.prime, args.corpus)
    if args.format == "tsv":
        sys.stdout.write(pipeline.to_tsv(verdicts))
    elif args.format == "exceptions":
        sys.stdout.write(pipeline.exceptions_text(verdicts))
    else:
        sys.stdout.write(pipeline.summary_text(verdicts))
    if args.json:
        Path(args.json).write_text(pipeline.to_json(verdicts))
    if args.report:
        stem = f"classify_{args.ambient}_{args.prime}"
        for p in pipeline.write_report(verdicts, args.report, stem):
            print(f"wrote {p}", file=sys.stderr)
    bad = pipeline.undecidable(verdicts)
    if bad:
        print(f"{len(bad)} undecidable verdict(s)", file=sys.stderr)
    return 1 if bad else 0


def cmd_restrict(args) -> int:
    amb = tables.load_table(args.ambient, args.corpus)
    sub = tables.load_table(args.sub, args.corpus)
    fusions = cached_fusions(sub, amb)
    if not fusions:
        print(f"no admissible fusion {sub.group_name} -> {amb.group_name}", file=sys.stderr)
        return 1
    if args.prime:
        bt_amb = modular.brauer_table(amb, args.prime, args.corpus)
        bt_sub = modular.brauer_table(sub, args.prime, args.corpus)
        chars = [c for c in bt_amb.irreducibles if args.char in ("all", c.name)]
        if not chars and args.char in (c.name for c in amb.irreducibles):
            ordinary = amb.character(args.char)
            chars = [tables.Character(args.char + "^", modular.hat(ordinary, bt_amb))]
    else:
        chars = [c for c in amb.irreducibles if args.char in ("all", c.name)]
    if not chars:
        print(f"no character {args.char!r} of {amb.group_name}", file=sys.stderr)
        return 2
    out = []
    for chi in chars:
        results = {}
        for f in fusions:
            try:
                if args.prime:
                    dec = modular.restrict_brauer(chi.values, f, bt_sub, bt_amb)
                else:
                    dec = decompose(chi, f)
            except InvalidFusionError as exc:
                results.setdefault(f"error: {exc}", []).append(f.map)
                continue
            results.setdefault(str(dec), []).append(f.map)
        out.append({"character": chi.name, "degree": chi.degree,
                    "decompositions": {k: len(v) for k, v in sorted(results.items())}})
        for k, v in sorted(results.items()):
            print(f"{chi.name} ({chi.degree}) -> {sub.group_name}: {k}  [{len(v)} of {len(fusions)} fusions]")
    if args.json:
        _write_json(out, args.json)
    return 0


def cmd_fusions(args) -> int:
    amb = tables.load_table(args.ambient, args.corpus)
    sub = tables.load_table(args.sub, args.corpus)
    try:
        c = candidates(sub, amb)
    except FusionError as exc:
        print(exc, file=sys.stderr)
        return 1
    fusions = cached_fusions(sub, amb)
    print(f"{sub.group_name} -> {amb.group_name}: {len(fusions)} admissible fusion(s)")
    for name, imgs in c.names().items():
        forced = {amb.classes[f.map[sub.class_index(name)]].name for f in fusions}
        print(f"  {name}: candidates {', '.join(imgs)}; images {', '.join(sorted(forced))}")
    if args.json:
        _write_json({"sub": sub.group_name, "ambient": amb.group_name,
                     "fusions": [[amb.classes[j].name for j in f.map] for f in fusions],
                     "sub_classes": [c.name for c in sub.classes]}, args.json)
    return 0 if fusions else 1


def cmd_reduction(args) -> int:
    cases = [genericq.case(args.case)] if args.case else list(genericq.CASES)
    reports = [genericq.verify_reduction(c, args.spot_check_n) for c in cases]
    for r in reports:
        print(f"{r.number:>2}) {r.case}: {r.status} ({r.certificate.kind}, t >= {r.certificate.shift_point})")
    if args.json:
        _write_json([r.to_dict() for r in reports], args.json)
    if args.report:
        from . import plotting
        out = Path(args.report)
        out.mkdir(parents=True, exist_ok=True)
        rows = [[r.number, r.case, r.status, r.certificate.kind, r.certificate.shift_point] for r in reports]
        (out / "reduction.tsv").write_text(
            "number\tcase\tstatus\tcertificate_kind\tshift_point\n"
            + "".join("\t".join(map(str, row)) + "\n" for row in rows))
        plotting.reduction_margins(cases, args.spot_check_n, out / "reduction.png")
    return 0 if all(r.status == "certified" for r in reports) else 1


def cmd_parabolic(args) -> int:
    rows = [genericq.row(args.row)] if args.row else list(genericq.PARABOLIC_ROWS)
    reports = [genericq.check_parabolic(r) for r in rows]
    for r in reports:
        vals = "; ".join(f"q={e['q']}: u={e['u']}, v={e['v']}" for e in r.evaluations)
        print(f"{r.row}: {r.status} ({r.direction}, {r.certificate.kind})  {vals}")
    if args.json:
        _write_json([r.to_dict() for r in reports], args.json)
    if args.report:
        from . import plotting
        out = Path(args.report)
        out.mkdir(parents=True, exist_ok=True)
        lines = ["row\tq\tu\tv\n"] + [f"{r.row}\t{e['q']}\t{e['u']}\t{e['v']}\n"
                                     for r in reports for e in r.evaluations]
        (out / "parabolic.tsv").write_text("".join(lines))
        plotting.parabolic_values(rows, [2, 4, 8, 16, 32], out / "parabolic.png")
    return 0 if all(r.status == "certified" for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="restrix", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--corpus", default=None,
                   help=f"corpus directory (default: ${tables.CORPUS_ENV} or the bundled data)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="validate every table in a corpus directory")
    s.add_argument("dir", nargs="?")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("classify", help="irreducible restrictions to proper subgroups")
    s.add_argument("--ambient", required=True, choices=["2F4p", "2F4"])
    s.add_argument("--prime", required=True, type=_prime, help="an odd prime, 0, or 'all'")
    s.add_argument("--json", help="write the full verdict list as JSON")
    s.add_argument("--report", help="directory for JSON/TSV/text reports and a figure")
    s.add_argument("--format", choices=["text", "tsv", "exceptions"], default="text")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("restrict", help="decompose restrictions under every admissible fusion")
    s.add_argument("--ambient", required=True)
    s.add_argument("--sub", required=True)
    s.add_argument("--char", default="all")
    s.add_argument("--prime", type=int, default=0)
    s.add_argument("--json")
    s.set_defaults(func=cmd_restrict)

    s = sub.add_parser("fusions", help="infer class fusions")
    s.add_argument("--sub", required=True)
    s.add_argument("--ambient", required=True)
    s.add_argument("--json")
    s.set_defaults(func=cmd_fusions)

    s = sub.add_parser("reduction", help="certify the generic-q reduction cases")
    s.add_argument("--case")
    s.add_argument("--spot-check-n", type=int, default=10)
    s.add_argument("--json")
    s.add_argument("--report")
    s.set_defaults(func=cmd_reduction)

    s = sub.add_parser("parabolic", help="certify u != v for the parabolic value rows")
    s.add_argument("--row")
    s.add_argument("--json")
    s.add_argument("--report")
    s.set_defaults(func=cmd_parabolic)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (KeyError, FileNotFoundError, ValueError, tables.TableFormatError) as exc:
        print(f"restrix: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
