"""Driver for the Kovacic algorithm and the structured report it produces."""

import json
from dataclasses import dataclass, field

import mpmath
import numpy as np

from ..algebra import RationalFunction, parse_expression, render_scalar
from ..algebra.roots import AlgebraicNumber
from ..algebra.scalars import parts
from ..errors import UnsupportedOrderError
from .cases import (CaseAttempt, KovacicInput, case1, case2, case3, necessary_conditions)

GALOIS_LABELS = {
    1: "reducible/triangular",
    2: "infinite dihedral",
    3: "finite primitive",
    None: "full SL(2)",
}

ORDERS = {"canonical": (1, 2, 3), "paper": (1, 3, 2)}


def _render_b(b):
    if b is None:
        return None
    if isinstance(b, AlgebraicNumber):
        return f"({b.rep}) mod ({b.modulus})"
    return render_scalar(b)


def _render_order(o):
    return "inf" if o == float("inf") else int(o)


@dataclass
class KovacicReport:
    """Outcome of :func:`run`.

    ``outcome`` is ``"case1"``, ``"case2"``, ``"case3"``, ``"all-failed"`` or
    ``"unsupported"``.  ``attempts`` holds every case that was tried, in the
    order tried.
    """

    input: str
    profile: list
    attempts: list
    outcome: str
    order: str
    degree: int = None
    omega_data: list = None
    solution: dict = None
    galois_label: str = None
    notes: list = field(default_factory=list)

    @property
    def succeeded_attempt(self):
        for a in self.attempts:
            if a.succeeded:
                return a
        return None

    def attempt(self, case_id, n=None):
        for a in self.attempts:
            if a.case_id == case_id and (n is None or a.n == n):
                return a
        return None

    def to_dict(self):
        return {
            "input": self.input,
            "profile": self.profile,
            "order": self.order,
            "attempts": [a.to_dict() for a in self.attempts],
            "outcome": self.outcome,
            "degree": self.degree,
            "galois_label": self.galois_label,
            "omega_data": [str(c) for c in self.omega_data] if self.omega_data else None,
            "solution": self.solution,
            "notes": self.notes,
        }

    def to_json(self, indent=2):
        """Canonical JSON; identical input gives byte-identical text."""
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def _excluded(case_id, n, reason):
    return CaseAttempt(case_id=case_id, n=n, status="excluded", reason=reason)


def _run_case(cid, inp, admissible, notes):
    if cid == 1:
        return [case1(inp) if 1 in admissible else _excluded(1, 1, notes[1])]
    if cid == 2:
        return [case2(inp) if 2 in admissible else _excluded(2, 2, notes[2])]
    if 3 in admissible:
        return case3(inp)
    return [_excluded(3, n, notes[3]) for n in (4, 6, 12)]


def run(g, order="canonical", exhaustive=False):
    """Run the algorithm on ``xi'' = g xi``.

    ``g`` is a :class:`RationalFunction` or expression text.  ``order`` picks
    the case sequence (``"canonical"`` 1, 2, 3 or ``"paper"`` 1, 3, 2).  With
    ``exhaustive`` every case is attempted even after a success.  Either way
    the outcome is the lowest-numbered case that succeeds, since a dihedral
    group also passes the case-3 test.
    """
    text = g if isinstance(g, str) else None
    if text is not None:
        g = parse_expression(text)
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}")
    inp = KovacicInput(g)
    profile = [{"location": s.label(), "order": _render_order(s.order), "b": _render_b(s.b)}
               for s in inp.profile]
    admissible, notes = necessary_conditions(inp)
    attempts = []
    # The decision always follows group containment: the lowest succeeding
    # case wins, so a later case is skipped only if a smaller one succeeded.
    for cid in ORDERS[order]:
        if not exhaustive and any(a.succeeded and a.case_id < cid for a in attempts):
            break
        attempts.extend(_run_case(cid, inp, admissible, notes))
    ok = [a for a in attempts if a.succeeded]
    winner = min(ok, key=lambda a: (a.case_id, a.n)) if ok else None
    report = KovacicReport(input=str(g), profile=profile, attempts=attempts,
                           outcome="all-failed", order=order)
    unsupported = [a for a in attempts if a.status == "unsupported"]
    if winner is None:
        if unsupported:
            report.outcome = "unsupported"
            report.notes.append("undecided: " + "; ".join(
                f"case {a.case_id}: {a.reason}" for a in unsupported))
        else:
            report.galois_label = GALOIS_LABELS[None]
        return report
    report.outcome = f"case{winner.case_id}"
    report.degree = winner.degree
    report.omega_data = winner.omega_data
    report.solution = winner.solution
    report.galois_label = GALOIS_LABELS[winner.case_id]
    earlier = [a for a in attempts if a.status == "unsupported" and a.case_id < winner.case_id]
    if earlier:
        report.notes.append("an earlier case was unsupported; the group may be smaller")
    if winner.case_id == 2:
        audit = quadratic_variant_audit(winner, g, audit_points(inp))
        winner.checks["quadratic_variant"] = audit["resolved"]
        winner.checks["quadratic_residuals"] = {k: f"{audit[k]:.3e}" for k in ("standard", "alternative")}
        report.notes.append(f"case-2 quadratic constant term resolved as {audit['resolved']}")
    return report


def audit_points(inp, count=24):
    """Sample points on a circle enclosing every finite pole."""
    radius = 1.0 + 2.0 * max([abs(s.approx) for s in inp.profile if not s.is_infinity] or [0.0])
    t = (np.arange(count) + 0.5) / count * 2 * np.pi
    return radius * np.exp(1j * t)


# ----------------------------------------------------------------------
# numerical access to omega
# ----------------------------------------------------------------------
class OmegaBranch:
    """Numerical root ``omega(x)`` of ``sum_i a_i(x) omega^i = 0``.

    Roots are followed continuously along a sampled path; the starting root
    is chosen by ``index`` in order of increasing real part.  With ``dps``
    set, coefficients and roots are evaluated in mpmath at that precision
    (high-degree case-3 polynomials are ill-conditioned in doubles).
    """

    def __init__(self, omega_data, dps=None):
        self.coeffs = [RationalFunction._lift(c) for c in omega_data]
        self.dcoeffs = [c.derivative() for c in self.coeffs]
        self.dps = dps

    def _values(self, funcs, z):
        if self.dps is None:
            return [complex(c.evaluate(z)) for c in funcs]
        with mpmath.workdps(self.dps):
            return [_mp_eval(c, z) for c in funcs]

    def roots_at(self, z):
        a = self._values(self.coeffs, z)
        if self.dps is not None:
            with mpmath.workdps(self.dps):
                r = mpmath.polyroots(a[::-1], maxsteps=200, extraprec=2 * self.dps)
            return sorted(r, key=lambda w: (round(float(w.real), 12), float(w.imag)))
        c = np.array(a[::-1])
        dc = np.polyder(c)
        r = np.roots(c)
        # companion-matrix roots lose digits for high degree; polish by Newton
        for _ in range(3):
            d = np.polyval(dc, r)
            r = np.where(d != 0, r - np.polyval(c, r) / np.where(d != 0, d, 1), r)
        return sorted(r, key=lambda w: (round(w.real, 12), w.imag))

    def along(self, zs, index=0):
        """(omega, omega') at each point of ``zs``."""
        zs = np.asarray(zs, dtype=complex)
        w = self.roots_at(zs[0])[index]
        ws, dws = [], []
        for z in zs:
            cand = self.roots_at(z)
            w = min(cand, key=lambda c: abs(c - w))
            ws.append(w)
            dws.append(self.derivative(z, w))
        return np.array([complex(v) for v in ws]), np.array([complex(v) for v in dws])

    def derivative(self, z, w):
        """Implicit derivative of the algebraic function at (z, w)."""
        a = self._values(self.coeffs, z)
        da = self._values(self.dcoeffs, z)
        num = sum(d * w ** i for i, d in enumerate(da))
        den = sum(i * c * w ** (i - 1) for i, c in enumerate(a) if i)
        return -num / den

    def riccati_residual(self, g, zs, index=0):
        """max |omega' + omega^2 - g| / max(1, |g|) along ``zs``."""
        zs = np.asarray(zs, dtype=complex)
        if self.dps is None:
            w, dw = self.along(zs, index)
            gv = np.asarray(g.evaluate(zs))
            return float(np.max(np.abs(dw + w * w - gv) / np.maximum(1.0, np.abs(gv))))
        with mpmath.workdps(self.dps):
            w = self.roots_at(zs[0])[index]
            worst = mpmath.mpf(0)
            for z in zs:
                w = min(self.roots_at(z), key=lambda c: abs(c - w))
                gv = _mp_eval(g, z)
                worst = max(worst, abs(self.derivative(z, w) + w * w - gv) / max(1, abs(gv)))
            return float(worst)


def _mp_eval(f, z):
    """Evaluate an exact rational function at ``z`` in current mpmath precision."""
    z = mpmath.mpc(z)

    def poly(p):
        acc = mpmath.mpc(0)
        for c in reversed(p.coeffs):
            re, im = parts(c)
            acc = acc * z + mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator,
                                       mpmath.mpf(im.numerator) / im.denominator)
        return acc

    return poly(f.num) / poly(f.den)


def quadratic_variant_audit(attempt, g, zs):
    """Residuals of the two case-2 constant terms on the true Riccati solution.

    The standard term is ``(phi' + phi^2 - 2g)/2``; the alternative replaces
    ``phi', phi^2`` by ``omega', omega^2``.  Both are evaluated with the
    ``omega`` produced by the standard quadratic.
    """
    phi = attempt._phi
    branch = OmegaBranch(attempt.omega_data)
    w, dw = branch.along(zs, 0)
    z = np.asarray(zs, dtype=complex)
    ph = phi.evaluate(z)
    gv = g.evaluate(z)
    scale = np.maximum(1.0, np.abs(gv))
    riccati = np.max(np.abs(dw + w * w - gv) / scale)
    alt = np.max(np.abs(w * w - ph * w + 0.5 * (dw + w * w - 2 * gv)) / scale)
    return {"standard": float(riccati), "alternative": float(alt),
            "resolved": "standard" if riccati < alt else "alternative"}


__all__ = ["KovacicReport", "run", "GALOIS_LABELS", "OmegaBranch", "quadratic_variant_audit",
           "UnsupportedOrderError"]
