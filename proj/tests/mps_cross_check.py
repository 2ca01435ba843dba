#!/usr/bin/env python3
"""Cross-checks exported MPS models against an independent MIP solver.

For a handful of generated instances, the optimum HiGHS finds on the exported
CS1 and CS2 models (with and without network reduction) must equal the value
the built-in branch and bound reports.

usage: mps_cross_check.py CARSHARE_CLI WORKDIR
"""

import json
import pathlib
import subprocess
import sys

import highspy


def run(cli, *args):
    return subprocess.run([cli, *args], check=True, capture_output=True, text=True).stdout


def highs_optimum(path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.readModel(str(path))
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        raise RuntimeError(f"{path}: HiGHS status {h.modelStatusToString(h.getModelStatus())}")
    return round(h.getInfo().objective_function_value)


def main():
    cli, work = sys.argv[1], pathlib.Path(sys.argv[2])
    work.mkdir(parents=True, exist_ok=True)
    instances = []
    for group, n in (("st", 120), ("ft", 200), ("fc", 200), ("st", 300)):
        run(cli, "generate", "--group", group, "--n", str(n), "--count", "2", "--seed", "11", "--out", str(work))
        instances += sorted(work.glob(f"{group}-n{n}-s*.txt"))

    failures = 0
    for inst in instances:
        bb = json.loads(run(cli, "solve", "--method", "bb", "--time-limit", "120", str(inst)))
        if bb["status"] != "optimal":
            print(f"{inst.name}: branch and bound did not finish, skipped")
            continue
        for model in ("cs1", "cs2"):
            for flag in ([], ["--no-preprocess"]):
                mps = work / f"{inst.stem}-{model}{'-raw' if flag else ''}.mps"
                run(cli, "export", "--format", "mps", "--model", model, *flag, "-o", str(mps), str(inst))
                value = highs_optimum(mps)
                ok = value == bb["value"]
                failures += not ok
                print(f"{mps.name}: highs {value} bb {bb['value']} {'ok' if ok else 'MISMATCH'}")
    print(f"{failures} mismatches")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
