"""Resolve the closed-form constants and print the numerical evidence."""

from fractions import Fraction as F

from bianchi_galois.evidence import (default_loops, galois_identities, monodromy_increments,
                                     reference_path, resolve_constants, second_ve_equivalence)
from bianchi_galois.model import VEPath, build_ve_suite

suite = build_ve_suite((F(3, 28), F(9, 7)))
print("roots of C1:", suite.rho)
path = VEPath(suite, reference_path())
res = resolve_constants(suite, path)
print("mu^2 candidate:", res.verdict, res.candidate.label)
for r in res.reports:
    print(f"  {r.quantity:45s} {r.max_residual:.2e}")
w = res.wronskian
print(f"Wronskian constancy {w['constancy']:.1e}, value error {w['value_error']:.1e} ({w['orientation']})")

for r in galois_identities(res.suite, path):
    print(f"identity {r.quantity:40s} {r.max_residual:.1e}")

eq = second_ve_equivalence(res.suite, path)
print(f"second VE: derived P {eq[0].max_residual:.1e}, printed P {eq[0].details['printed_coefficients']:.2e}, "
      f"omega_p {eq[1].max_residual:.1e}")

loops, radius = default_loops(res.suite)
for name in ("rho1", "empty"):
    m = monodromy_increments(res.suite, loops[name])
    print(f"loop {name:5s}: |g1|={abs(m.gamma1):.3e} +- {m.error1:.1e}  |g2|={abs(m.gamma2):.3e} +- {m.error2:.1e}")
