"""Renormalized energy of a boundary jump pair and its landscape.

For a simply connected domain with conformal map phi onto the upper
half-plane, the renormalized energy of the jump points (p, q) is

    W(p, q) = (2/pi) log( |phi(p) - phi(q)|^2 / (|phi'(p)| |phi'(q)|) ),

independent of the choice of phi (cross-ratio invariance).  On circle-model
domains Phi: D -> Omega this collapses to

    W = (2/pi) ( 2 log|zeta_p - zeta_q| + log w(t_p) + log w(t_q) ),

with zeta = e^{i t} and w the boundary metric factor, because composing any
disk-to-half-plane Moebius map m into phi = m o Phi^{-1} contributes exactly
|zeta_p - zeta_q|^2 through the disk identity |m(a)-m(b)|^2/(|m'(a)||m'(b)|)
= |a-b|^2.  On line-model domains (image of {Im z > b} under psi) the same
reduction gives W = (2/pi) log(|P-Q|^2 |psi'(P+ib)| |psi'(Q+ib)|).

The rectangle has no conformal map here; it is handled through the
eigenfunction series of its Green's function:

    phi(x, xt) = (2 pi / L^2) sum_n n sin(n pi x/L) sin(n pi xt/L) / sinh(n pi H/L),
    W((x,0), (xt,H)) = -(2/pi) log phi(x, xt),

for one point on the bottom edge and one on the top.  Note this series route
fixes the additive normalization of W differently from the conformal route
(by the constant (2/pi) log pi); landscape shape, critical points and
Hessians are unaffected.

W -> -infinity as q -> p, so landscapes exclude a band around the diagonal.
"""

import cmath
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy import optimize

from .errors import BVortexError, CapabilityError, GeometryError
from .geometry import (BoundaryPoint, DomainSpec, boundary_point,
                       boundary_weights, sc_derivative_magnitude)

log = logging.getLogger(__name__)

TWO_OVER_PI = 2.0 / math.pi


# ---------------------------------------------------------------------------
# pairwise energies
# ---------------------------------------------------------------------------

def w_from_map_data(phi_p: complex, phi_q: complex, dphi_p: complex,
                    dphi_q: complex) -> float:
    """W from values and derivatives of any conformal map onto the half-plane."""
    num = abs(phi_p - phi_q) ** 2
    den = abs(dphi_p) * abs(dphi_q)
    if num == 0.0:
        raise GeometryError("coincident jump points: W diverges on the diagonal")
    return TWO_OVER_PI * math.log(num / den)


def _as_param(point, spec: DomainSpec) -> float:
    if isinstance(point, BoundaryPoint):
        return float(point.t)
    return float(point)


def _disk_mobius(tp: float, tq: float):
    """Normalized map of the disk sending p -> 0, q -> 1, arc midpoint -> inf.

    Returns (phi'(p), phi'(q)); by construction phi(p) - phi(q) = -1.
    """
    p = cmath.exp(1j * tp)
    q = cmath.exp(1j * tq)
    # midpoint of the counterclockwise arc from q back to p
    gap = (tp - tq) % (2.0 * math.pi)
    m = cmath.exp(1j * (tq + 0.5 * gap))
    c = (q - m) / (q - p)
    dphi = lambda z: c * (p - m) / (z - m) ** 2
    return dphi(p), dphi(q)


def renorm_w_conformal(spec: DomainSpec, p, q) -> float:
    """W(p, q) through the domain's conformal representation."""
    tp, tq = _as_param(p, spec), _as_param(q, spec)
    if spec.kind == "unit_disk":
        if abs(cmath.exp(1j * tp) - cmath.exp(1j * tq)) < 1e-12:
            raise GeometryError("coincident jump points: W diverges on the diagonal")
        dp, dq = _disk_mobius(tp, tq)
        return w_from_map_data(0.0, 1.0, dp, dq)
    if spec.kind == "regular_polygon_disk":
        chord = abs(cmath.exp(1j * tp) - cmath.exp(1j * tq))
        if chord < 1e-12:
            raise GeometryError("coincident jump points: W diverges on the diagonal")
        wp, wq = boundary_weights(spec, [tp, tq])
        return TWO_OVER_PI * (2.0 * math.log(chord) + math.log(wp) + math.log(wq))
    if spec.kind == "sc_polygon":
        if abs(tp - tq) < 1e-12:
            raise GeometryError("coincident jump points: W diverges on the diagonal")
        wp, wq = sc_derivative_magnitude(spec, [tp, tq])
        return TWO_OVER_PI * (2.0 * math.log(abs(tp - tq)) + math.log(wp) + math.log(wq))
    raise CapabilityError(f"{spec.kind} has no conformal representation here")


def _disk_regular_part(ta: float, tb: float, alpha: float) -> float:
    """R(a,b) = -(1/pi) log(|phi(a)-phi(b)| / |a-b|) with one fixed Cayley map.

    All regular-part terms entering a single W evaluation must share the
    same map; ``alpha`` rotates the configuration away from the Cayley
    pole at z = 1 once for the whole pair.
    """
    a = cmath.exp(1j * (ta + alpha))
    b = cmath.exp(1j * (tb + alpha))
    phi = lambda z: 1j * (1.0 + z) / (1.0 - z)
    if abs(a - b) < 1e-15:
        dphi = 2j / (1.0 - a) ** 2
        return -math.log(abs(dphi)) / math.pi
    return -math.log(abs(phi(a) - phi(b)) / abs(a - b)) / math.pi


def renorm_w_green(spec: DomainSpec, p, q, n_terms: int | None = None) -> float:
    """W(p, q) through Green's-function data (disk closed form, rectangle series)."""
    if spec.kind == "unit_disk":
        tp, tq = _as_param(p, spec), _as_param(q, spec)
        chord = abs(cmath.exp(1j * tp) - cmath.exp(1j * tq))
        if chord < 1e-12:
            raise GeometryError("coincident jump points: W diverges on the diagonal")
        d = (tq - tp) % (2.0 * math.pi)
        if d > math.pi:
            d -= 2.0 * math.pi
        alpha = math.pi - (tp + 0.5 * d)  # pair midpoint -> angle pi, away from the pole
        rpp = _disk_regular_part(tp, tp, alpha)
        rqq = _disk_regular_part(tq, tq, alpha)
        rpq = _disk_regular_part(tp, tq, alpha)
        return 2.0 * TWO_OVER_PI * math.log(chord) + 2.0 * (rpp + rqq - 2.0 * rpq)
    if spec.kind == "rectangle":
        x, xt = _rectangle_pair_coords(spec, p, q)
        return rectangle_w(spec.L, spec.H, x, xt, n_terms=n_terms)
    raise CapabilityError(f"no Green's-function route for domain kind {spec.kind}")


def _rectangle_pair_coords(spec: DomainSpec, p, q):
    """Extract (bottom-x, top-x) chart coordinates.

    Accepts plain floats (already chart coordinates, first bottom then top),
    complex/tuple physical coordinates, or BoundaryPoints carrying physical z.
    """
    def coord(point):
        if isinstance(point, BoundaryPoint):
            z = complex(point.z)
        elif isinstance(point, complex):
            z = point
        elif isinstance(point, (tuple, list)) and len(point) == 2:
            z = complex(point[0], point[1])
        else:
            return float(point), None
        on_top = abs(z.imag - spec.H) < 1e-9
        on_bottom = abs(z.imag) < 1e-9
        if not (on_top or on_bottom):
            raise GeometryError(f"rectangle jump point {z} must lie on the bottom or top edge")
        return z.real, on_top

    xa, top_a = coord(p)
    xb, top_b = coord(q)
    if top_a is not None and top_b is not None:
        if top_a == top_b:
            raise GeometryError("rectangle jump points must lie on opposite horizontal edges")
        if top_a:  # normalize order: first coordinate on the bottom
            xa, xb = xb, xa
    return float(xa), float(xb)


# ---------------------------------------------------------------------------
# rectangle series
# ---------------------------------------------------------------------------

def _rectangle_n_terms(L: float, H: float, power: int = 1, tol: float = 1e-14) -> int:
    """Smallest n0 with (2 pi/L^2) sum_{n>n0} n^power e^{-n pi H/L} below tol."""
    kappa = math.pi * H / L
    n = 8
    while n < 100000:
        # geometric tail bound: sum_{m>n} m^p e^{-kappa m} <= n^p e^{-kappa n} * C
        bound = (2.0 * math.pi / L**2) * (n ** power) * math.exp(-kappa * n) / (1.0 - math.exp(-kappa)) ** (power + 1)
        if bound < tol:
            return n
        n *= 2
    raise BVortexError("rectangle series does not reach the tail tolerance")


def rectangle_phi(L: float, H: float, x, xt, n_terms: int | None = None):
    """Normal-normal Green's kernel between the bottom and top edges (series).

    ``x`` and ``xt`` broadcast element-wise (pairs, not a tensor grid).
    """
    if n_terms is None:
        n_terms = _rectangle_n_terms(L, H, power=1)
    n = np.arange(1, n_terms + 1, dtype=float)
    coef = n / np.sinh(n * math.pi * H / L)
    x, xt = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xt, dtype=float))
    sx = np.sin(np.multiply.outer(x, n) * math.pi / L)
    sxt = np.sin(np.multiply.outer(xt, n) * math.pi / L)
    out = (2.0 * math.pi / L**2) * np.einsum("...n,...n->...", sx * coef, sxt)
    return float(out) if out.ndim == 0 else out


def _rectangle_phi_grid(L: float, H: float, xs: np.ndarray, xts: np.ndarray) -> np.ndarray:
    """Series kernel on the tensor grid xs x xts."""
    n_terms = _rectangle_n_terms(L, H, power=1)
    n = np.arange(1, n_terms + 1, dtype=float)
    coef = n / np.sinh(n * math.pi * H / L)
    sx = np.sin(np.multiply.outer(np.asarray(xs, float), n) * math.pi / L)
    sxt = np.sin(np.multiply.outer(np.asarray(xts, float), n) * math.pi / L)
    return (2.0 * math.pi / L**2) * (sx * coef) @ sxt.T


def rectangle_w(L: float, H: float, x: float, xt: float, n_terms: int | None = None) -> float:
    """W for a bottom-top jump pair: -(2/pi) log phi(x, xt)."""
    val = rectangle_phi(L, H, x, xt, n_terms=n_terms)
    if val <= 0:
        raise GeometryError(f"series kernel nonpositive at ({x}, {xt}); point too close to a corner")
    return -TWO_OVER_PI * math.log(val)


@dataclass(frozen=True)
class MidpointHessian:
    """Second derivatives of the series kernel at the midpoint pair."""
    phi_xx: float
    phi_xxt: float
    phi_value: float
    matrix: tuple            # D^2 phi rows
    negative_definite: bool
    w_hessian: tuple         # D^2 W rows at the midpoint (positive definite iff above)


def rectangle_hessian_at_midpoint(L: float, H: float) -> MidpointHessian:
    """Certify the isolated midpoint maximum of phi (hence the minimum of W).

    At (L/2, L/2): phi_x = 0 term-by-term, phi_xx = phi_xtxt < 0, and
    D^2 phi is negative definite iff phi_xxt < -phi_xx, i.e. iff the odd-n
    series dominates the even-n series of n^3 / sinh(n pi H / L).
    """
    if L > H:
        log.warning("rectangle_hessian_at_midpoint with L > H: certificate may fail")
    n_terms = _rectangle_n_terms(L, H, power=3)
    n = np.arange(1, n_terms + 1, dtype=float)
    coef = n**3 / np.sinh(n * math.pi * H / L)
    odd = coef[::2].sum()    # n = 1, 3, 5, ...
    even = coef[1::2].sum()  # n = 2, 4, 6, ...
    pref = 2.0 * math.pi**3 / L**4
    phi_xx = -pref * odd
    phi_xxt = pref * even
    neg_def = (phi_xx < 0.0) and (phi_xxt < -phi_xx)
    phi_mid = rectangle_phi(L, H, L / 2.0, L / 2.0)
    # W = -(2/pi) log phi and grad phi = 0 at the midpoint, so
    # D^2 W = -(2/pi) D^2 phi / phi there
    s = TWO_OVER_PI / phi_mid
    wh = ((-s * phi_xx, -s * phi_xxt), (-s * phi_xxt, -s * phi_xx))
    return MidpointHessian(
        phi_xx=float(phi_xx), phi_xxt=float(phi_xxt), phi_value=float(phi_mid),
        matrix=((float(phi_xx), float(phi_xxt)), (float(phi_xxt), float(phi_xx))),
        negative_definite=bool(neg_def), w_hessian=wh,
    )


def three_tanh_root() -> float:
    """Positive root of t = 3 tanh t, bracketed in [2.5, 3.0]."""
    g = lambda t: t - 3.0 * math.tanh(t)
    root = optimize.brentq(g, 2.5, 3.0, xtol=1e-15, rtol=8.9e-16)
    assert abs(g(root)) <= 1e-12
    return float(root)


# ---------------------------------------------------------------------------
# landscapes and minimizer search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyLandscape:
    """W sampled on a parameter grid, with the diagonal band removed."""
    domain: DomainSpec
    t_p: np.ndarray
    t_q: np.ndarray
    values: np.ndarray       # shape (len(t_p), len(t_q)); NaN on excluded pairs
    excluded_band: float


@dataclass(frozen=True)
class CriticalPoint:
    p: BoundaryPoint
    q: BoundaryPoint
    W_value: float
    hessian: np.ndarray
    classification: str      # isolated_min | saddle | max | degenerate
    grad_norm: float


class _Chart:
    """Two-parameter chart of a domain's landscape with a scalar W."""

    def __init__(self, spec: DomainSpec, delta_diag: float | None):
        self.spec = spec
        kind = spec.kind
        if kind in ("unit_disk", "regular_polygon_disk"):
            self.period = 2.0 * math.pi
            self.lo, self.hi = 0.0, 2.0 * math.pi
            self.periodic = True
            self.scale = 2.0 * math.pi
            self.delta = 0.05 * self.scale if delta_diag is None else delta_diag
        elif kind == "rectangle":
            self.period = None
            margin = 0.02 * spec.L
            self.lo, self.hi = margin, spec.L - margin
            self.periodic = False
            self.scale = spec.L
            self.delta = 0.0 if delta_diag is None else delta_diag
        elif kind == "sc_polygon":
            a = spec.prevertices
            pad = 0.25 * (a[-1] - a[0] if len(a) > 1 else 1.0)
            self.lo, self.hi = a[0] - pad, a[-1] + pad
            self.period = None
            self.periodic = False
            self.scale = self.hi - self.lo
            self.delta = 0.05 * self.scale if delta_diag is None else delta_diag
        else:
            raise CapabilityError(f"no landscape chart for domain kind {kind}")

    def separated(self, tp, tq) -> bool:
        if self.spec.kind == "rectangle":
            return True  # bottom and top edges never meet
        d = abs(tp - tq)
        if self.periodic:
            d = min(d % self.period, self.period - d % self.period)
        return d >= self.delta

    def w(self, tp: float, tq: float) -> float:
        if self.spec.kind == "rectangle":
            return rectangle_w(self.spec.L, self.spec.H, tp, tq)
        return renorm_w_conformal(self.spec, tp, tq)

    def w_grid(self, tps: np.ndarray, tqs: np.ndarray) -> np.ndarray:
        spec = self.spec
        if spec.kind == "rectangle":
            phi = _rectangle_phi_grid(spec.L, spec.H, tps, tqs)
            with np.errstate(divide="ignore", invalid="ignore"):
                return -TWO_OVER_PI * np.log(phi)
        if spec.kind in ("unit_disk", "regular_polygon_disk"):
            chord = 2.0 * np.abs(np.sin(0.5 * (tps[:, None] - tqs[None, :])))
            logw_p = np.log(boundary_weights(spec, tps))
            logw_q = np.log(boundary_weights(spec, tqs))
            with np.errstate(divide="ignore"):
                return TWO_OVER_PI * (2.0 * np.log(chord) + logw_p[:, None] + logw_q[None, :])
        dist = np.abs(tps[:, None] - tqs[None, :])
        logw_p = np.log(sc_derivative_magnitude(spec, tps))
        logw_q = np.log(sc_derivative_magnitude(spec, tqs))
        with np.errstate(divide="ignore"):
            return TWO_OVER_PI * (2.0 * np.log(dist) + logw_p[:, None] + logw_q[None, :])

    def chart_point(self, t: float) -> BoundaryPoint:
        if self.spec.kind == "rectangle":
            return BoundaryPoint(t=t, z=complex(t, 0.0), map_deriv=1.0)
        return boundary_point(self.spec, t)

    def chart_point_q(self, t: float) -> BoundaryPoint:
        if self.spec.kind == "rectangle":
            return BoundaryPoint(t=t, z=complex(t, self.spec.H), map_deriv=1.0)
        return boundary_point(self.spec, t)


def landscape(spec: DomainSpec, grid_n: int = 128, delta_diag: float | None = None) -> EnergyLandscape:
    """Sample W on a grid_n x grid_n chart grid, NaN on the diagonal band."""
    chart = _Chart(spec, delta_diag)
    if chart.periodic:
        tps = np.linspace(chart.lo, chart.hi, grid_n, endpoint=False)
    else:
        tps = np.linspace(chart.lo, chart.hi, grid_n)
    tqs = tps.copy()
    vals = chart.w_grid(tps, tqs)
    if chart.spec.kind != "rectangle" and chart.delta > 0:
        d = np.abs(tps[:, None] - tqs[None, :])
        if chart.periodic:
            d = np.minimum(d % chart.period, chart.period - d % chart.period)
        vals = np.where(d < chart.delta, np.nan, vals)
    return EnergyLandscape(domain=spec, t_p=tps, t_q=tqs, values=vals,
                           excluded_band=chart.delta)


def _fd_grad_hess(fun, tp: float, tq: float, h: float):
    """Central finite differences of a scalar function of two parameters."""
    f = fun
    f00 = f(tp, tq)
    gp = (f(tp + h, tq) - f(tp - h, tq)) / (2 * h)
    gq = (f(tp, tq + h) - f(tp, tq - h)) / (2 * h)
    hpp = (f(tp + h, tq) - 2 * f00 + f(tp - h, tq)) / h**2
    hqq = (f(tp, tq + h) - 2 * f00 + f(tp, tq - h)) / h**2
    hpq = (f(tp + h, tq + h) - f(tp + h, tq - h)
           - f(tp - h, tq + h) + f(tp - h, tq - h)) / (4 * h**2)
    return f00, np.array([gp, gq]), np.array([[hpp, hpq], [hpq, hqq]])


def _classify(hess: np.ndarray, tol: float) -> str:
    ev = np.linalg.eigvalsh(hess)
    thresh = tol * max(np.max(np.abs(ev)), 1e-30)
    if np.all(ev > thresh):
        return "isolated_min"
    if np.all(ev < -thresh):
        return "max"
    if ev[0] < -thresh and ev[1] > thresh:
        return "saddle"
    return "degenerate"


def find_local_minima(spec: DomainSpec, grid_n: int = 128,
                      delta_diag: float | None = None, tol: float = 1e-8,
                      gtol: float = 1e-8) -> list:
    """Grid-scan the landscape and Newton-refine candidate local minima.

    Returns only points whose refined Hessian is positive definite beyond
    the relative tolerance ``tol`` (isolated minimizers).  Grid candidates
    that fail to converge or refine to non-minima are dropped.
    """
    if grid_n < 64:
        raise BVortexError(f"grid_n must be at least 64, got {grid_n}")
    chart = _Chart(spec, delta_diag)
    land = landscape(spec, grid_n=grid_n, delta_diag=delta_diag)
    vals = np.where(np.isfinite(land.values), land.values, np.inf)

    # candidate rule: no strictly smaller neighbor, at least one strictly
    # larger (plain strict minimality misses symmetric minima that tie on
    # an even grid; fully flat directions are filtered by classification)
    candidates = []
    n = grid_n
    for i in range(n):
        for j in range(n):
            v = vals[i, j]
            if not np.isfinite(v):
                continue
            ok = True
            strictly_above = False
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    if di == 0 and dj == 0:
                        continue
                    ii, jj = i + di, j + dj
                    if chart.periodic:
                        ii, jj = ii % n, jj % n
                    elif not (0 <= ii < n and 0 <= jj < n):
                        ok = False
                        break
                    if vals[ii, jj] < v:
                        ok = False
                        break
                    if vals[ii, jj] > v:
                        strictly_above = True
                if not ok:
                    break
            if ok and strictly_above:
                candidates.append((land.t_p[i], land.t_q[j]))

    h = 1e-5 * chart.scale
    cell = (chart.hi - chart.lo) / n
    found = []
    for tp0, tq0 in candidates:
        tp, tq = float(tp0), float(tq0)
        ok = False
        for _ in range(60):
            if not chart.separated(tp, tq):
                break
            _, grad, hess = _fd_grad_hess(chart.w, tp, tq, h)
            if np.linalg.norm(grad, np.inf) <= gtol:
                ok = True
                break
            try:
                step = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                break
            norm = np.linalg.norm(step, np.inf)
            if norm > cell:
                step *= cell / norm
            tp, tq = tp + step[0], tq + step[1]
            if not chart.periodic:
                tp = min(max(tp, chart.lo), chart.hi)
                tq = min(max(tq, chart.lo), chart.hi)
        if not ok:
            log.info("dropping candidate (%.6f, %.6f): Newton did not converge", tp0, tq0)
            continue
        w0, grad, hess = _fd_grad_hess(chart.w, tp, tq, h)
        cls = _classify(hess, tol)
        if cls != "isolated_min":
            log.info("dropping candidate (%.6f, %.6f): classified %s", tp, tq, cls)
            continue
        if chart.periodic:
            tp %= chart.period
            tq %= chart.period
        dup = False
        for other in found:
            dp = abs(other[0] - tp)
            dq = abs(other[1] - tq)
            if chart.periodic:
                dp = min(dp, chart.period - dp)
                dq = min(dq, chart.period - dq)
            if max(dp, dq) < 1e-4 * chart.scale:
                dup = True
                break
        if dup:
            continue
        found.append((tp, tq, w0, hess, np.linalg.norm(grad, np.inf)))

    found.sort(key=lambda rec: (rec[0], rec[1]))
    out = []
    for tp, tq, w0, hess, gn in found:
        out.append(CriticalPoint(
            p=chart.chart_point(tp), q=chart.chart_point_q(tq),
            W_value=float(w0), hessian=np.asarray(hess),
            classification="isolated_min", grad_norm=float(gn)))
    return out


# ---------------------------------------------------------------------------
# polygon minimizer certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertificateResult:
    """Closed-form cell certificate for line-model polygon landscapes.

    ``certified`` uses the boundary bound with exponent (1/N - 2), which is
    what the cell-boundary estimate actually yields; ``certified_variant``
    records the weaker-hypothesis inequality with exponent (1/N - 1) that
    also circulates.  Both bound values are reported.
    """
    N: int
    b: float
    A: int
    B: int
    center_bound: float
    boundary_bound: float
    boundary_bound_variant: float
    certified: bool
    certified_variant: bool


def polygon_minima_certificate(N: int, b: float, A: int, B: int) -> CertificateResult:
    """Certify a local minimum of W in the cell (A, A+1) x (B, B+1).

    The uniform prevertex layout a_k = k, alpha_k = 2/N is assumed.  The
    center value of F = |P-Q|^2 |psi'(P+ib)| |psi'(Q+ib)| is at most 16 N^2,
    while on the cell boundary F >= b^(-2/N) (N^2+1)^(1/N-2); when the
    center bound is strictly below the boundary bound, a minimum of F (hence
    of W) must lie inside the open cell.
    """
    if not (0.0 < b < 1.0):
        raise BVortexError(f"certificate needs b in (0,1), got {b}")
    if not (1 <= A and A + 1 < B and B + 1 <= N):
        raise BVortexError(f"(A,B)=({A},{B}) is not an admissible nonadjacent cell for N={N}")
    center = 16.0 * N**2
    base = float(N**2 + 1)
    boundary = b ** (-2.0 / N) * base ** (1.0 / N - 2.0)
    boundary_variant = b ** (-2.0 / N) * base ** (1.0 / N - 1.0)
    return CertificateResult(
        N=N, b=b, A=A, B=B,
        center_bound=center,
        boundary_bound=boundary,
        boundary_bound_variant=boundary_variant,
        certified=bool(center < boundary),
        certified_variant=bool(center < boundary_variant),
    )


def certificate_threshold(N: int, variant: bool = False) -> float:
    """Largest b for which the cell certificate passes, in closed form."""
    expo = (1.0 / N - 1.0) if variant else (1.0 / N - 2.0)
    base = float(N**2 + 1)
    return (base**expo / (16.0 * N**2)) ** (N / 2.0)


def uniform_polygon_spec(N: int, b: float) -> DomainSpec:
    """Line-model polygon with prevertices 1..N and equal angles 2/N."""
    return DomainSpec.sc_polygon(list(range(1, N + 1)), [2.0 / N] * N, b)
