#!/usr/bin/env python3
"""Regenerate the built-in validation table and check every cell.

Equivalent to ``pmulab reproduce table1`` but driven through the library
API.  Theory cells come from the closed-form gain, measured cells from
time-domain simulation at 60 fps (and 240 fps for the starred column);
both are compared against the stored reference values.

Usage:
    python demos/05_validation_table.py
"""

import sys

import pmulab


def main() -> int:
    cells, all_ok = pmulab.reproduce_table1()
    for kind in ("magnitude", "angle"):
        rows = [c for c in cells if c.kind == kind]
        unit = "RMS p.u." if kind == "magnitude" else "deg"
        print(f"\n[{kind} modulation, amplitudes in {unit}]")
        header = "".join(
            f"{f'h={c.h}' + ('*' if c.fps == 240 else ''):>12s}" for c in rows
        )
        print(f"{'':12s}{header}   (* = 240 fps)")
        for label, attr in (
            ("A_theory", "a_theory"),
            ("A_meas", "a_meas"),
            ("th_theory", "theta_theory_deg"),
            ("th_meas", "theta_meas_deg"),
        ):
            print(f"{label:12s}" + "".join(f"{getattr(c, attr):12.6f}" for c in rows))
        flags = "".join(f"{'pass' if c.all_ok else 'FAIL':>12s}" for c in rows)
        print(f"{'flags':12s}{flags}")
    print(f"\noverall: {'pass' if all_ok else 'FAIL'}")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
