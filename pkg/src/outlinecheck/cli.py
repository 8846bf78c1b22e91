"""The `acheck` executable: parse theorem files, check them, report verdicts.

One verdict line per theorem, machine-parseable and stable:

    NAME: ok (decides=D, unfoldL=A, unfoldR=S, steps=N)
    NAME: FAIL <reason>
    NAME: BUDGET

Exit status: 0 when every theorem of every file is accepted (and, with
--replay, every trace replays); 1 when any theorem is rejected or runs out
of steps; 2 on usage, file, or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .frontend import ElabError, ParseError, TheoremResult, parse_file, run_session
from .kernel import ResourceLimits
from .replay import explain_failure
from .trace import count_rule, trace_to_lines


def _verdict_line(r: TheoremResult) -> str:
    if r.outcome == "ok":
        assert r.trace is not None
        return (f"{r.name}: ok (decides={count_rule(r.trace, 'decideL')},"
                f" unfoldL={count_rule(r.trace, 'unfoldL')},"
                f" unfoldR={count_rule(r.trace, 'unfoldR')},"
                f" steps={r.steps})")
    if r.outcome == "budget":
        return f"{r.name}: BUDGET"
    return f"{r.name}: FAIL {r.detail}"


def _check_file(path: Path, limits: ResourceLimits,
                stop_on_failure: bool) -> tuple[list[str], list[TheoremResult]]:
    text = path.read_text(encoding="utf-8")
    results = run_session(parse_file(text), limits, stop_on_failure)
    return [_verdict_line(r) for r in results], results


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="acheck",
        description="Check proof outlines in theorem files.")
    ap.add_argument("files", nargs="+", metavar="FILE", type=Path)
    ap.add_argument("--trace", metavar="DIR", type=Path,
                    help="write a replayable trace per accepted theorem")
    ap.add_argument("--replay", action="store_true",
                    help="re-verify every accepted proof from its trace")
    ap.add_argument("--max-steps", metavar="N", type=int, default=1_000_000,
                    help="per-theorem search step limit (default 10^6)")
    ap.add_argument("--stop-on-failure", action="store_true",
                    help="stop a file at its first non-accepted theorem")
    ap.add_argument("--jobs", metavar="N", type=int, default=1,
                    help="check this many files concurrently")
    args = ap.parse_args(argv)

    if args.max_steps <= 0 or args.jobs <= 0:
        print("acheck: --max-steps and --jobs must be positive", file=sys.stderr)
        return 2
    for path in args.files:
        if not path.is_file():
            print(f"acheck: no such file: {path}", file=sys.stderr)
            return 2

    limits = ResourceLimits(max_steps=args.max_steps)

    def work(path: Path):
        return _check_file(path, limits, args.stop_on_failure)

    try:
        if args.jobs > 1 and len(args.files) > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                outputs = list(pool.map(work, args.files))
        else:
            outputs = [work(p) for p in args.files]
    except (ParseError, ElabError) as e:
        print(f"acheck: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"acheck: {e}", file=sys.stderr)
        return 2

    failed = False
    for path, (lines, results) in zip(args.files, outputs):
        if len(args.files) > 1:
            print(f"== {path}")
        for line in lines:
            print(line)
        failed = failed or any(r.outcome != "ok" for r in results)

        accepted = [r for r in results if r.outcome == "ok"]
        if args.trace:
            args.trace.mkdir(parents=True, exist_ok=True)
            for r in accepted:
                assert r.trace is not None
                out = args.trace / f"{path.stem}.{r.name}.trace"
                out.write_text("\n".join(trace_to_lines(r.trace)) + "\n",
                               encoding="utf-8")
        if args.replay:
            bad = []
            for r in accepted:
                assert r.trace is not None
                reason = explain_failure(r.lemmas, r.goal, r.trace)
                if reason is not None:
                    bad.append((r.name, reason))
            print(f"replay: {len(accepted) - len(bad)}/{len(accepted)} ok")
            for name, reason in bad:
                print(f"replay mismatch in {name}: {reason}")
                failed = True

    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
