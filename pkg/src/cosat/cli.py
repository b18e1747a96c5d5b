"""Command-line front-end.

Exit codes: 10 SAT, 20 UNSAT, 30 witness verification failure, 2 parse or
usage error, 3 resource limit, 0 for informational commands (valid, batch,
check-model, selftest succeed), 1 for a failed check-model or selftest.
"""

from __future__ import annotations

import argparse
import sys
import time
from multiprocessing import Pool
from pathlib import Path

from .errors import CosatError, ParseError, ResourceLimitError
from .formula import parse, rank
from .logics import LOGIC_IDS, get_logic
from .solver import sat, valid
from .suites import run_suite
from .witness import deserialize, model_check, serialize, verify

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_VERIFY_FAILED = 30
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--logic", required=True, help="logic id, e.g. " + ", ".join(LOGIC_IDS))
    p.add_argument("--strategy", choices=["small", "carrier", "both"], default=None)
    p.add_argument("--max-ilp-box", type=int, default=None, metavar="N")
    p.add_argument("--stats", action="store_true")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cosat",
        description="satisfiability and validity for non-iterative modal logics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide satisfiability of one formula")
    p.add_argument("formula")
    _add_common(p)
    p.add_argument("--model", metavar="PATH", help="write the witness model as JSON")
    p.add_argument("--verify", action="store_true", help="re-check any witness")

    p = sub.add_parser("valid", help="decide validity of one formula")
    p.add_argument("formula")
    _add_common(p)

    p = sub.add_parser("batch", help="decide one formula per line, TAP output")
    p.add_argument("file")
    p.add_argument("--logic", default=None, help="logic id (or use an @logic: header)")
    p.add_argument("--strategy", choices=["small", "carrier", "both"], default=None)
    p.add_argument("--max-ilp-box", type=int, default=None, metavar="N")
    p.add_argument("--jobs", type=int, default=1, metavar="N")

    p = sub.add_parser("check-model", help="independently check a witness model")
    p.add_argument("model")
    p.add_argument("formula")
    p.add_argument("--logic", default=None, help="defaults to the id stored in the model")
    p.add_argument("--strategy", choices=["small", "carrier", "both"], default=None)

    sub.add_parser("selftest", help="run the embedded axiom suites")
    return ap


def _print_stats(result, elapsed: float, strategy: str, verified: str) -> None:
    s = result.stats
    print(
        f"# time={elapsed:.3f}s depth={s.depth} max-carrier={s.max_carrier}"
        f" max-structure={s.max_structure} sign-maps={s.sign_maps}"
        f" strategy={strategy} verification={verified}"
    )


def _cmd_solve(args) -> int:
    cfg = get_logic(args.logic, args.strategy, args.max_ilp_box)
    f = parse(args.formula, args.logic)
    start = time.monotonic()
    result = sat(f, cfg)
    elapsed = time.monotonic() - start
    verified = "skipped"
    code = EXIT_SAT if result.satisfiable else EXIT_UNSAT
    print("SAT" if result.satisfiable else "UNSAT")
    if result.model is not None and args.model:
        Path(args.model).write_text(serialize(result.model))
    if args.verify and result.model is not None:
        report = verify(result.model, f, cfg)
        verified = "ok" if report.ok else "FAILED"
        if not report.ok:
            print(report, file=sys.stderr)
            code = EXIT_VERIFY_FAILED
    if args.stats:
        _print_stats(result, elapsed, cfg.strategy, verified)
    return code


def _cmd_valid(args) -> int:
    cfg = get_logic(args.logic, args.strategy, args.max_ilp_box)
    f = parse(args.formula, args.logic)
    print("VALID" if valid(f, cfg) else "INVALID")
    return 0


def _batch_line(job) -> tuple[int, str]:
    number, logic_id, strategy, box, text = job
    try:
        cfg = get_logic(logic_id, strategy, box)
        f = parse(text, logic_id)
        result = sat(f, cfg)
        verdict = "SAT" if result.satisfiable else "UNSAT"
        return number, f"ok {number} - {verdict}"
    except ResourceLimitError as exc:
        return number, f"not ok {number} - resource limit: {exc}"
    except CosatError as exc:
        return number, f"not ok {number} - error: {exc}"


def _cmd_batch(args) -> int:
    lines = Path(args.file).read_text(encoding="utf-8").splitlines()
    logic_id = args.logic
    formulas: list[str] = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@logic:"):
            logic_id = line.split(":", 1)[1].strip()
            continue
        formulas.append(line)
    if logic_id is None:
        print("error: no --logic flag and no @logic: header", file=sys.stderr)
        return EXIT_USAGE
    jobs = [
        (i + 1, logic_id, args.strategy, args.max_ilp_box, text)
        for i, text in enumerate(formulas)
    ]
    print(f"1..{len(jobs)}")
    if args.jobs > 1:
        with Pool(args.jobs) as pool:
            results = pool.map(_batch_line, jobs)
    else:
        results = [_batch_line(j) for j in jobs]
    for _, line in sorted(results):
        print(line)
    return 0


def _cmd_check_model(args) -> int:
    text = Path(args.model).read_text(encoding="utf-8")
    model = deserialize(text)
    logic_id = args.logic or model.logic_id
    cfg = get_logic(logic_id, args.strategy)
    f = parse(args.formula, logic_id)
    holds = model_check(model, model.root, f, cfg)
    print("true" if holds else "false")
    return 0 if holds else 1


def _cmd_selftest(args) -> int:
    failures = 0
    for logic_id, text, expect, passed, _ in run_suite():
        status = "ok" if passed else "FAIL"
        print(f"{status} [{logic_id}] {text} (expected {expect})")
        failures += 0 if passed else 1
    print(f"selftest: {'all passed' if not failures else f'{failures} failures'}")
    return 0 if failures == 0 else 1


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "valid":
            return _cmd_valid(args)
        if args.command == "batch":
            return _cmd_batch(args)
        if args.command == "check-model":
            return _cmd_check_model(args)
        return _cmd_selftest(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (CosatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
