"""Rewrite the golden CLI outputs after an intentional output change.

    python3 tests/golden/regenerate.py

Review the diff before committing: every changed byte is a behaviour change.
"""

import io
import json
from pathlib import Path

from cfineq.cli import run_command

HERE = Path(__file__).parent

CASES = [
    ("young_json", ["young", "--a", "4", "--b", "1", "--lambda", "0.5", "--json"]),
    ("young_text", ["young", "--a", "4", "--b", "1", "--lambda", "0.5"]),
    ("young_csv", ["young", "--a", "4", "--b", "1", "--lambda", "0.5", "--csv"]),
    ("young_oracle", ["young", "--a", "3", "--b", "0.7", "--lambda", "0.25",
                      "--precision-bits", "256", "--json"]),
    ("sandwich_json", ["sandwich", "--points", "1,2,4", "--json"]),
    ("bernoulli_json", ["bernoulli", "--x", "3", "--lambda", "0.5", "--json"]),
    ("tightness_counterexample", ["tightness", "--a", "0.99", "--b", "0.0001",
                                  "--lambda", "0.5", "--json"]),
    ("power_mean_oracle", ["power-mean", "--values", "1,2", "--weights", "1,1", "--r", "1",
                           "--s", "2", "--precision-bits", "256", "--json"]),
    ("holder_json", ["holder", "--a", "1,2", "--b", "2,1", "--p", "2", "--json"]),
    ("cauchy_json", ["cauchy", "--a", "1,2", "--b", "2,1", "--json"]),
    ("bergstrom_signed", ["bergstrom", "--x=-1,2", "--a", "1,1", "--json"]),
    ("bergstrom_zero", ["bergstrom", "--x", "0,0", "--a", "1,1", "--json"]),
    ("arith_corrected", ["arith", "--n", "6", "--k", "1", "--json"]),
    ("arith_as_printed", ["arith", "--n", "6", "--k", "1", "--variant", "as-printed", "--json"]),
    ("arith_as_printed_text", ["arith", "--n", "6", "--k", "1", "--variant", "as-printed"]),
    ("arith_scan", ["arith-scan", "--n-max", "60", "--json"]),
    ("arith_scan_as_printed", ["arith-scan", "--n-max", "12", "--variant", "as-printed",
                               "--max-examples", "3", "--json"]),
    ("matrix_t41_diag", ["matrix-t41", "--A", "[[1,0],[0,2]]", "--B", "[[4,0],[0,3]]",
                         "--lambda", "0.3", "--json"]),
    ("matrix_c42_scalar", ["matrix-c42", "--A", "[[1]]", "--B", "[[4]]", "--lambda", "0.5",
                           "--json"]),
    ("matrix_c43", ["matrix-c43", "--A", "[[2,1],[1,2]]", "--B", "[[3,1],[1,4]]", "--json"]),
    ("matrix_chain", ["matrix-chain", "--A", "[[2,1],[1,2]]", "--B", "[[3,0],[0,1]]",
                      "--lambda", "0.3", "--json"]),
    ("verify_scalar", ["verify", "--suite", "scalar", "--trials", "300", "--seed", "42",
                       "--json"]),
    ("verify_sums", ["verify", "--suite", "sums", "--trials", "40", "--seed", "7", "--json"]),
    ("verify_matrix", ["verify", "--suite", "matrix", "--trials", "5", "--seed", "3",
                       "--dims", "1,3", "--lambda", "0.25,0.5", "--json"]),
    ("verify_text", ["verify", "--suite", "coherence", "--trials", "50", "--seed", "1"]),
    ("usage_missing_argument", ["young", "--a", "4"]),
    ("usage_unknown_command", ["frobnicate"]),
    ("usage_bad_variant", ["arith", "--n", "6", "--variant", "sideways"]),
    ("usage_bad_matrix", ["matrix-c43", "--A", "[[1,2", "--B", "[[1]]"]),
    ("domain_negative", ["young", "--a", "-4", "--b", "1", "--lambda", "0.5", "--json"]),
    ("domain_incomparable", ["matrix-t41", "--A", "[[1,0],[0,3]]", "--B", "[[2,0],[0,1]]",
                             "--lambda", "0.5", "--json"]),
    ("domain_trials", ["verify", "--suite", "scalar", "--trials", "0"]),
]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def main():
    manifest = []
    for name, argv in CASES:
        code, out, _ = run(argv)
        (HERE / f"{name}.out").write_text(out)
        manifest.append({"name": name, "argv": argv, "exit": code})
    (HERE / "cases.json").write_text(json.dumps(manifest, indent=1) + "\n")
    print(f"wrote {len(manifest)} golden cases")


if __name__ == "__main__":
    main()
