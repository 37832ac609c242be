"""Command-line entry point: bobylev <command> --config FILE --out DIR.

Exit code 0 means every assertion of the scenario passed; nonzero names the
failing criterion in summary.txt. BOBYLEV_THREADS caps the BLAS thread count
(set before numpy is imported by the runners).
"""

from __future__ import annotations

import argparse
import os
import sys


def _cap_threads():
    n = os.environ.get("BOBYLEV_THREADS")
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, n)


def main(argv=None) -> int:
    _cap_threads()
    parser = argparse.ArgumentParser(
        prog="bobylev",
        description="Fourier-side laboratory for the non-cutoff Maxwellian-molecule "
                    "Boltzmann equation")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("constants", "angular-integral constants for a kernel/(alpha, delta)"),
        ("converge", "bounded-kernel cutoff limit sweep"),
        ("selfsim", "construct a self-similar profile and report its diagnostics"),
        ("evolve", "integrate the Bobylev flow with an observer schedule"),
        ("verify", "run a theorem-verification experiment (kind from the config)"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="flat key=value scenario file")
        p.add_argument("--out", required=True, help="output directory for CSV/summary")
    args = parser.parse_args(argv)

    from . import lab

    cfg = lab.read_config(args.config)
    forced_kind = {
        "constants": "constants_report",
        "converge": "cutoff_limits",
        "selfsim": "selfsim",
        "evolve": "evolve",
    }.get(args.command)
    if forced_kind is not None:
        cfg["kind"] = forced_kind
    report = lab.run_scenario(cfg)
    code = lab.emit_report(report, args.out)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}  {check.detail}")
    print(f"report written to {args.out} (exit {code})")
    return code


if __name__ == "__main__":
    sys.exit(main())
