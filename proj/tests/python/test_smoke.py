#!/usr/bin/env python3
"""Smoke tests for the python bindings: one evaluation per exposed
operation, exact-string results, and a fast identity suite."""

import sys

import _verlinde as v

failures = []


def check(name, cond, detail=""):
    print(f"[{'ok' if cond else 'FAIL'}] {name}" + (f"  ({detail})" if detail and not cond else ""))
    if not cond:
        failures.append(name)


val = v.chi_line(g=2, r=2, k=1, **{"lambda": [0, 0]}, c=["3/10", "-3/10"])
check("line bundle value is an exact string", val == "4" and isinstance(val, str), repr(val))

val = v.chi_vector(g=2, r=3, k=1, **{"lambda": [1, 0, -1]}, nu=[1, 0, 0],
                   c=["1/5", "1/10", "-3/10"])
check("vector bundle value", val == "3", repr(val))

val = v.rank2_closed(g=2, k=3, lambda1=1, nu=[2, 1])
check("rank-2 closed form", val == "-4" and int(val) == -4, repr(val))

val = v.wallcross_residue(g=2, r=3, k=1, **{"lambda": [1, 0, -1]}, nu=[1, 0, 0],
                          c=["1/5", "1/10", "-3/10"], pi_prime=[2], level=0)
check("wall-crossing residue", val == "0", repr(val))

fam = v.diagonal_family(3)
check("diagonal family size", len(fam) == 2, repr(fam))
check("diagonal family members are edge lists",
      all(len(t) == 2 and all(len(e) == 2 for e in t) for t in fam))

names = v.suite_names()
check("suite names are exposed",
      set(names) == {"rank2", "facts", "wallcross", "symmetry", "characters", "engine", "oracle"},
      repr(names))

rep = v.run_suite("characters", jobs=2)
check("identity suite runs clean",
      rep["ok"] and all(c["ok"] for c in rep["checks"]) and len(rep["checks"]) > 0)

try:
    v.chi_line(g=2, r=2, k=1, **{"lambda": [1, 0]}, c=["3/10", "-3/10"])
    check("invalid twist raises", False)
except ValueError:
    check("invalid twist raises", True)

print(f"\n{len(failures)} failure(s)" if failures else "\nall python checks passed")
sys.exit(1 if failures else 0)
