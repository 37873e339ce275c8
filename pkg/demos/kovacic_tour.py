"""Run the Kovacic procedure on a few operators and print the decisions."""

from bianchi_galois.kovacic import run
from bianchi_galois.model import build_ve_suite

CORPUS = {
    "r = 0": "0",
    "r = 3/(4x^2)": "3/(4*x^2)",
    "r = 1/x^2": "1/x^2",
    "Airy": "x",
    "tetrahedral": "(-3/16)/x^2 + (-2/9)/(x-1)^2 + (3/16)/(x*(x-1))",
}

for name, r in CORPUS.items():
    rep = run(r)
    print(f"{name:14s} -> {rep.outcome:11s} {rep.galois_label}")

rep = run(build_ve_suite(("3/28", "9/7")).g, exhaustive=True)
print("\nnormal VE at lambda=3/28, E=9/7")
for a in rep.attempts:
    tag = f"case {a.case_id}" + (f", n={a.n}" if a.case_id == 3 else "")
    print(f"  {tag:12s} {a.status:10s} d={a.degree}")
print(f"  decision: {rep.outcome} ({rep.galois_label})")
print(f"  theta = {rep.attempt(2).theta}")
