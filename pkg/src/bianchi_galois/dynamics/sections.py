"""Initial conditions on the section P_B = 0, batch runs and output files."""

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import DomainError, InfeasibleICError
from ..model.physics import ModelState, hamiltonian
from .integrator import IntegratorConfig, SectionRecord, crossings_from_brackets, integrate_batch

CSV_HEADER = ["lambda", "energy", "ic_index", "crossing_index", "t", "A", "P_A", "B", "fate"]


@dataclass
class ICSolution:
    state: ModelState
    multiplicity: int
    roots: list


def solve_ic(A, PA, lam, E, floor=1e-8, radius=20.0):
    """Smallest B in (floor, radius) with H(A, B, P_A, 0) = E.

    With u = B^2 the constraint is the quadratic
    ``2 lam A u^2 - (2A - E) u + A (P_A^2/8 + A^2/2) = 0``; roots come from the
    closed form and are polished by Newton on H itself.
    """
    A, PA, lam, E = float(A), float(PA), float(lam), float(E)
    if A <= 0:
        raise InfeasibleICError("A must be positive")
    a2 = 2 * lam * A
    a1 = -(2 * A - E)
    a0 = A * (PA * PA / 8 + A * A / 2)
    us = []
    if a2 == 0:
        if a1 != 0:
            us = [(-a0 / a1, 1)]
    else:
        disc = a1 * a1 - 4 * a2 * a0
        tol = 64 * np.finfo(float).eps * max(a1 * a1, abs(4 * a2 * a0))
        if abs(disc) <= tol:
            us = [(-a1 / (2 * a2), 2)]
        elif disc > 0:
            s = math.sqrt(disc)
            q = -0.5 * (a1 + math.copysign(s, a1))
            us = sorted([(q / a2, 1), (a0 / q, 1)] if q != 0 else [(0.0, 1)])
    roots = []
    for u, m in us:
        if u <= 0:
            continue
        B = math.sqrt(u)
        if m == 1:
            for _ in range(3):
                r = float(hamiltonian((A, B, PA, 0.0), lam)) - E
                dH = A * PA * PA / (4 * B ** 3) + A ** 3 / B ** 3 - 4 * lam * A * B
                if dH == 0:
                    break
                B -= r / dH
        if floor < B < radius:
            roots.append((B, m))
    if not roots:
        raise InfeasibleICError(f"no positive B solves H = {E} at A = {A}, P_A = {PA}")
    roots.sort()
    B, m = roots[0]
    return ICSolution(ModelState(A, B, PA, 0.0), m, [r for r, _ in roots])


@dataclass
class GridSpec:
    """Rectangle in (A, P_A) sampled with ``n_a`` x ``n_pa`` points (ends included)."""

    a_lo: float
    a_hi: float
    n_a: int
    pa_lo: float
    pa_hi: float
    n_pa: int

    @classmethod
    def parse(cls, a_range, pa_range):
        def one(s):
            parts = s.split(":")
            if len(parts) != 3:
                raise ValueError(f"range must be lo:hi:n, got {s!r}")
            return float(parts[0]), float(parts[1]), int(parts[2])
        return cls(*one(a_range), *one(pa_range))

    def points(self):
        if self.n_a <= 0 or self.n_pa <= 0:
            return []
        As = np.linspace(self.a_lo, self.a_hi, self.n_a)
        Ps = np.linspace(self.pa_lo, self.pa_hi, self.n_pa)
        return [(float(a), float(p)) for a in As for p in Ps]


@dataclass
class FateRecord:
    ic_index: int
    A: float
    P_A: float
    B: float
    fate: str
    time: float
    crossings: int
    drift: float
    detail: str = ""


@dataclass
class SectionResult:
    lam: float
    energy: float
    records: list
    fates: list
    infeasible: list
    ambiguous: list
    config: dict = field(default_factory=dict)

    def fate_of(self, ic_index):
        for f in self.fates:
            if f.ic_index == ic_index:
                return f
        return None

    def summary(self):
        counts = {}
        for f in self.fates:
            counts[f.fate] = counts.get(f.fate, 0) + 1
        bounded = [f for f in self.fates if f.fate == "ran-to-tmax"]
        return {
            "lambda": self.lam, "energy": self.energy, "orbits": len(self.fates),
            "infeasible": len(self.infeasible), "records": len(self.records), "fates": counts,
            "bounded": len(bounded),
            "max_crossings": max([f.crossings for f in self.fates] or [0]),
            "max_drift_bounded": max([f.drift for f in bounded] or [0.0]),
        }


def _run_chunk(states, lam, cfg):
    Y = np.array([s.as_array() for s in states]).reshape(-1, 4)
    res = integrate_batch(Y, lam, cfg)
    records, ambiguous = crossings_from_brackets(res.brackets, lam)
    return res, records, ambiguous


def section_batch(lam, E, grid, config=None, threads=1, chunk=None):
    """Run every feasible grid IC; output ordered by (ic_index, crossing_index).

    ICs are split into contiguous chunks handled by a thread pool; per-orbit
    arithmetic does not depend on the chunking, so the result is identical
    for any thread count.
    """
    cfg = config or IntegratorConfig()
    pts = grid.points() if isinstance(grid, GridSpec) else list(grid)
    feasible, infeasible = [], []
    for idx, (a, pa) in enumerate(pts):
        try:
            sol = solve_ic(a, pa, lam, E, cfg.floor, cfg.escape_radius)
        except InfeasibleICError as exc:
            infeasible.append({"ic_index": idx, "A": a, "P_A": pa, "reason": str(exc)})
            continue
        feasible.append((idx, sol.state))
    threads = max(1, int(threads))
    chunk = chunk or max(1, math.ceil(len(feasible) / threads)) if feasible else 1
    parts = [feasible[k:k + chunk] for k in range(0, len(feasible), chunk)]

    def job(part):
        return part, _run_chunk([s for _, s in part], lam, cfg)

    if threads == 1 or len(parts) <= 1:
        outs = [job(p) for p in parts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            outs = list(ex.map(job, parts))
    records, fates, ambiguous = [], [], []
    for part, (res, recs, amb) in outs:
        counts = {}
        for r in recs:
            r.ic_index = part[r.ic_index][0]
            counts[r.ic_index] = counts.get(r.ic_index, 0) + 1
            records.append(r)
        for i, t, why in amb:
            ambiguous.append({"ic_index": part[i][0], "t": t, "reason": why})
        for k, (idx, st) in enumerate(part):
            f = res.fates[k]
            fates.append(FateRecord(idx, st.A, st.PA, st.B, f.fate, f.time, counts.get(idx, 0),
                                    float(res.drift[k]), f.detail))
    records.sort(key=lambda r: (r.ic_index, r.crossing_index))
    fates.sort(key=lambda f: f.ic_index)
    ambiguous.sort(key=lambda a: (a["ic_index"], a["t"]))
    meta = {"integrator": cfg.to_dict(), "threads": threads,
            "grid": asdict(grid) if isinstance(grid, GridSpec) else None}
    return SectionResult(float(lam), float(E), records, fates, infeasible, ambiguous, meta)


def energy_trend(lam, energies, grid, config=None, threads=1):
    """Bounded-orbit counts across energies (reported, not asserted)."""
    rows = []
    for E in energies:
        res = section_batch(lam, E, grid, config, threads)
        s = res.summary()
        rows.append({"energy": float(E), "bounded": s["bounded"], "orbits": s["orbits"],
                     "fates": s["fates"]})
    counts = [r["bounded"] for r in rows]
    monotone = all(a <= b for a, b in zip(counts, counts[1:]))
    return {"lambda": float(lam), "rows": rows, "nondecreasing": monotone}


# ----------------------------------------------------------------------
# output
# ----------------------------------------------------------------------
def _g17(v):
    return format(float(v), ".17g")


def csv_text(result):
    """CSV of section records (fixed header, 17 significant digits)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    fate = {f.ic_index: f.fate for f in result.fates}
    for r in result.records:
        w.writerow([_g17(result.lam), _g17(result.energy), r.ic_index, r.crossing_index, _g17(r.t),
                    _g17(r.A), _g17(r.P_A), _g17(r.B), fate.get(r.ic_index, "")])
    return buf.getvalue()


def read_csv(path_or_text):
    """Parse a section CSV back into (lambda, energy, SectionRecord, fate) rows."""
    text = path_or_text
    if "\n" not in path_or_text:
        with open(path_or_text, newline="") as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    out = []
    for r in rows[1:]:
        rec = SectionRecord(int(r[2]), int(r[3]), float(r[4]), float(r[5]), float(r[6]), float(r[7]))
        out.append((float(r[0]), float(r[1]), rec, r[8]))
    return out


def svg_text(result, width=640, height=480, margin=40):
    """SVG scatter of (A, P_A) with one circle per record."""
    recs = result.records
    xs = [r.A for r in recs] or [0.0, 1.0]
    ys = [r.P_A for r in recs] or [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0

    def sx(v):
        return margin + (v - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - y0) / (y1 - y0) * (height - 2 * margin)

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<text x="{margin}" y="20" font-size="12">lambda={_g17(result.lam)} energy={_g17(result.energy)}'
             f' records={len(recs)}</text>',
             f'<text x="{width // 2}" y="{height - 8}" font-size="12">A</text>',
             f'<text x="8" y="{height // 2}" font-size="12">P_A</text>']
    for r in recs:
        lines.append(f'<circle class="record" cx="{sx(r.A):.3f}" cy="{sy(r.P_A):.3f}" r="1.2" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit(result, csv_path=None, svg_path=None):
    """Write CSV (and optionally SVG); returns the paths written."""
    written = []
    if csv_path:
        try:
            with open(csv_path, "w", newline="") as fh:
                fh.write(csv_text(result))
        except OSError as exc:
            raise DomainError(f"cannot write {csv_path}: {exc}") from exc
        written.append(csv_path)
    if svg_path:
        try:
            with open(svg_path, "w") as fh:
                fh.write(svg_text(result))
        except OSError as exc:
            raise DomainError(f"cannot write {svg_path}: {exc}") from exc
        written.append(svg_path)
    return written


__all__ = ["CSV_HEADER", "ICSolution", "GridSpec", "FateRecord", "SectionResult", "solve_ic",
           "section_batch", "energy_trend", "csv_text", "read_csv", "svg_text", "emit"]
