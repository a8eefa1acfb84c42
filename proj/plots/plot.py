# Copyright 2026 The rlsmrac Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Figure front end over rlsmrac trace CSVs.

Interface only: argument parsing and column checks against the trace schema.
Rendering is not part of this package.

    plot --trace a.csv [--trace b.csv] --panels speed_tracking,spacing_error --out fig.png
"""

import argparse
import csv
import sys

# Panel -> columns (or column prefixes ending in "_") it reads.
ACC_PANELS = {
    "speed_tracking": ["t", "v_l", "v", "v_m"],
    "spacing_error": ["t", "delta"],
    "control_input": ["t", "u"],
    "gains": ["t", "k1", "k2", "k3"],
    "covariance_diag": ["t", "P11", "P22", "P33"],
    "lyapunov": ["t", "V"],
}
MRAC_PANELS = {
    "speed_tracking": ["t", "r", "y_p", "y_m"],
    "spacing_error": ["t", "e1"],
    "control_input": ["t", "u_p"],
    "gains": ["t", "theta_"],
    "covariance_diag": ["t", "P_diag_"],
    "lyapunov": ["t", "V"],
}


def read_header(path):
    with open(path, newline="") as f:
        header = next(csv.reader(f), None)
        if not header:
            raise ValueError(f"{path}: empty CSV")
        if next(csv.reader(f), None) is None:
            raise ValueError(f"{path}: no data rows")
    return header


def check_columns(path, header, panels):
    table = ACC_PANELS if "v_l" in header else MRAC_PANELS
    for panel in panels:
        if panel not in table:
            raise ValueError(f"unknown panel '{panel}'")
        for col in table[panel]:
            if col.endswith("_"):
                # Gradient traces carry Gamma_diag_* instead of P_diag_*.
                alts = [col, "Gamma_diag_"] if col == "P_diag_" else [col]
                if not any(h.startswith(a) for h in header for a in alts):
                    raise ValueError(f"{path}: missing column {col}*")
            elif col not in header:
                raise ValueError(f"{path}: missing column {col}")


def main(argv=None):
    ap = argparse.ArgumentParser(prog="plot")
    ap.add_argument("--trace", action="append", required=True)
    ap.add_argument("--panels", default="speed_tracking,spacing_error")
    ap.add_argument("--out", required=True)
    ap.add_argument("--title", default="")
    args = ap.parse_args(argv)
    panels = [p for p in args.panels.split(",") if p]
    try:
        for path in args.trace:
            check_columns(path, read_header(path), panels)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print("error: rendering is not included in this build", file=sys.stderr)
    return 3


if __name__ == "__main__":
    sys.exit(main())
