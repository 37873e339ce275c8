"""Piecewise-linear complex paths, branch continuation and path quadrature.

Multivalued factors are always products of powers of polynomials, so a
branch is fixed by continuing ``log P(z)`` for each polynomial ``P`` along
the path.  Paths are cut into pieces no longer than a fraction of the
distance to the nearest root; on such a piece the principal logarithm of
``P(z)/P(z_start)`` never crosses its cut.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PathError

# Gauss-Kronrod 7/15 (QUADPACK qk15)
_XGK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                 0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                 0.207784955007898467600689403773245, 0.0])
_WGK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                 0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                 0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss weights live on the odd-indexed Kronrod nodes (x_1, x_3, ..., 0, ...)
G_WEIGHTS = np.zeros(15)
G_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], [_WG[-1]], _WG[:-1][::-1]])

EPS = np.finfo(float).eps


def gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


_GL20 = gauss_legendre(20)
_GL30 = gauss_legendre(30)


@dataclass
class QuadResult:
    value: complex
    error: float
    abs_integral: float

    @property
    def bound(self):
        return self.error + 50 * EPS * self.abs_integral


def gk15(f, a, b):
    """One GK15 panel of ``f`` on the straight segment [a, b]."""
    half = (b - a) / 2
    mid = (a + b) / 2
    z = mid + half * GK_NODES
    fz = np.asarray(f(z), dtype=complex)
    k = half * np.dot(GK_WEIGHTS, fz)
    g = half * np.dot(G_WEIGHTS, fz)
    return k, abs(k - g), abs(half) * float(np.dot(GK_WEIGHTS, np.abs(fz)))


def adaptive_segment(f, a, b, rtol=1e-10, atol=1e-300, max_panels=2000):
    """Adaptive GK15 on [a, b] (bisection of the worst panel)."""
    panels = [(a, b) + gk15(f, a, b)]
    while len(panels) < max_panels:
        total = sum(p[2] for p in panels)
        err = sum(p[3] for p in panels)
        absint = sum(p[4] for p in panels)
        if err <= max(atol, rtol * abs(total), 10 * EPS * absint):
            break
        i = max(range(len(panels)), key=lambda j: panels[j][3])
        pa, pb = panels.pop(i)[:2]
        m = (pa + pb) / 2
        panels += [(pa, m) + gk15(f, pa, m), (m, pb) + gk15(f, m, pb)]
    return QuadResult(sum(p[2] for p in panels), sum(p[3] for p in panels),
                      sum(p[4] for p in panels))


class Path:
    """Piecewise-linear path through complex ``vertices``.

    ``closed`` appends the first vertex at the end.
    """

    def __init__(self, vertices, closed=False):
        v = [complex(z) for z in vertices]
        if closed and v[0] != v[-1]:
            v.append(v[0])
        if len(v) < 2:
            raise PathError("a path needs at least two vertices")
        self.vertices = np.array(v)
        self.closed = closed
        seg = np.abs(np.diff(self.vertices))
        self.cum = np.concatenate([[0.0], np.cumsum(seg)])

    @property
    def length(self):
        return float(self.cum[-1])

    def point(self, s):
        """Point at arclength ``s``."""
        s = min(max(s, 0.0), self.length)
        i = int(np.searchsorted(self.cum, s, side="right") - 1)
        i = min(i, len(self.vertices) - 2)
        seg = self.cum[i + 1] - self.cum[i]
        t = 0.0 if seg == 0 else (s - self.cum[i]) / seg
        return self.vertices[i] + t * (self.vertices[i + 1] - self.vertices[i])

    def samples(self, n):
        """``n`` points equally spaced in arclength, endpoints included."""
        return np.array([self.point(s) for s in np.linspace(0.0, self.length, n)])

    def reversed(self):
        return Path(self.vertices[::-1], closed=False)

    def min_distance(self, points):
        """Distance from the path to a set of points."""
        best = np.inf
        for a, b in zip(self.vertices[:-1], self.vertices[1:]):
            d = b - a
            for c in points:
                c = complex(c)
                if d == 0:
                    t = 0.0
                else:
                    t = min(max(((c - a) * np.conj(d)).real / abs(d) ** 2, 0.0), 1.0)
                best = min(best, abs(a + t * d - c))
        return best


def circle(center, radius, segments=64, start_angle=0.0):
    """Closed polygon approximating a positively oriented circle."""
    t = start_angle + 2 * np.pi * np.arange(segments) / segments
    return Path(center + radius * np.exp(1j * t), closed=True)


class BranchTracker:
    """Continued logarithms of several polynomials along a path.

    ``polys`` are :class:`Polynomial` objects; ``breakpoints`` (arclengths)
    are forced into the piece list so that sample points are piece ends.
    """

    def __init__(self, path, polys, margin=0.0, fraction=0.25, max_piece=None, breakpoints=()):
        self.path = path
        self.polys = list(polys)
        self.coeffs = [p.numeric_coeffs() for p in self.polys]
        roots = []
        for p in self.polys:
            if p.degree >= 1:
                roots.extend(np.roots(p.numeric_coeffs()))
        self.roots = np.array(roots, dtype=complex)
        if len(self.roots) and margin > 0:
            d = path.min_distance(self.roots)
            if d < margin:
                raise PathError(f"path passes within {d:.3g} of a singular point (margin {margin})")
        max_piece = max_piece or path.length / 8 or 1.0
        s_list = [0.0]
        s = 0.0
        forced = sorted(set(float(b) for b in breakpoints if 0 < b < path.length)
                        | {float(c) for c in path.cum[1:-1]})
        fi = 0
        while s < path.length:
            z = path.point(s)
            dist = np.min(np.abs(self.roots - z)) if len(self.roots) else np.inf
            if dist == 0:
                raise PathError(f"path hits a singular point at {z}")
            step = min(fraction * dist, max_piece)
            nxt = min(s + step, path.length)
            while fi < len(forced) and forced[fi] <= s:
                fi += 1
            if fi < len(forced) and forced[fi] < nxt:
                nxt = forced[fi]
            s_list.append(nxt)
            s = nxt
        self.s = np.array(s_list)
        self.z = np.array([path.point(v) for v in self.s])
        logs = np.zeros((len(self.z), len(self.polys)), dtype=complex)
        vals0 = self._values(self.z[:1])[0]
        logs[0] = np.log(vals0.astype(complex))
        for i in range(1, len(self.z)):
            v_prev = self._values(self.z[i - 1:i])[0]
            v_new = self._values(self.z[i:i + 1])[0]
            logs[i] = logs[i - 1] + np.log(v_new.astype(complex) / v_prev)
        self.logs = logs

    def _values(self, z):
        z = np.asarray(z, dtype=complex)
        return np.stack([np.polyval(c, z) for c in self.coeffs], axis=-1)

    @property
    def pieces(self):
        return len(self.z) - 1

    def logs_in_piece(self, i, z):
        """Continued logs at points ``z`` lying on piece ``i``."""
        z = np.asarray(z, dtype=complex)
        base = self._values(self.z[i:i + 1])[0]
        vals = self._values(z)
        return self.logs[i] + np.log(vals / base)

    def index_of(self, s):
        """Index of the breakpoint at arclength ``s`` (must be a breakpoint)."""
        i = int(np.argmin(np.abs(self.s - s)))
        if abs(self.s[i] - s) > 1e-12 * max(1.0, self.path.length):
            raise PathError("requested point is not a breakpoint")
        return i

    def monodromy(self):
        """exp of (end log - start log) for each polynomial (closed paths)."""
        return np.exp(self.logs[-1] - self.logs[0])

    def winding(self):
        """Integer winding numbers of each polynomial's value around 0."""
        return np.round(((self.logs[-1] - self.logs[0]).imag) / (2 * np.pi)).astype(int)


def piece_integral_gl(f, za, zb, n=20):
    """Fixed Gauss-Legendre rule on the segment [za, zb] (vectorized over zb)."""
    x, w = _GL20 if n == 20 else (_GL30 if n == 30 else gauss_legendre(n))
    za = np.asarray(za, dtype=complex)
    zb = np.asarray(zb, dtype=complex)
    half = (zb - za) / 2
    mid = (za + zb) / 2
    z = mid[..., None] + half[..., None] * x
    return half * np.sum(w * f(z), axis=-1)


__all__ = ["Path", "BranchTracker", "QuadResult", "adaptive_segment", "circle", "gk15",
           "gauss_legendre", "piece_integral_gl", "EPS"]
