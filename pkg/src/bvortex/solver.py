"""Spectral solver for the nonlinear boundary-reaction problem.

A harmonic function on a circle-model domain is determined by its boundary
trace; the normal derivative is the Dirichlet-to-Neumann multiplier |k|
divided by the boundary metric factor w(theta) = |Phi'(e^{i theta})|.  The
reaction condition  d_nu u = f(u)/eps  therefore collocates to

    Lambda u - (w / eps) f(u) = 0

on n uniform angles, with Lambda the dense symmetric |k| matrix.  Newton
iteration with residual line search solves it; the linearization

    J = Lambda - (w / eps) diag f'(u)

doubles as the stability operator: the solution is stable exactly when the
smallest eigenvalue of J is nonnegative (up to spec_tol = 1e-8 / eps).

Energies use the spectral Dirichlet form (conformally invariant) plus the
weighted trapezoid rule for the boundary well term.
"""

from dataclasses import dataclass, field
import logging
import math

import numpy as np
from scipy import linalg

from .errors import BVortexError, CapabilityError, ConvergenceError, GeometryError
from .geometry import BoundaryPoint, DomainSpec, boundary_weights
from .layer import LayerProfile
from .nonlinearity import Nonlinearity
from . import spectral

log = logging.getLogger(__name__)

CLAMP = 1.2
MAXPRINCIPLE_SLACK = 1e-9


@dataclass
class BoundaryField:
    """Real trace samples and metric weights on uniform circle angles."""

    values: np.ndarray
    weight: np.ndarray
    domain: DomainSpec | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.weight = np.asarray(self.weight, dtype=float)
        if self.values.shape != self.weight.shape:
            raise BVortexError("trace and weight must share a grid")

    @property
    def n_modes(self) -> int:
        return len(self.values)

    @property
    def thetas(self) -> np.ndarray:
        return spectral.uniform_nodes(self.n_modes)


def boundary_field(spec: DomainSpec, n_modes: int, values=None) -> BoundaryField:
    """Field on a circle-model domain; values default to zero."""
    if spec.model != "circle":
        raise CapabilityError(f"{spec.kind} has no circle-model trace grid")
    thetas = spectral.uniform_nodes(n_modes)
    w = boundary_weights(spec, thetas)
    if not np.all(np.isfinite(w)):
        raise GeometryError("corner-singular weight: use r < 1 polygon smoothing")
    v = np.zeros(n_modes) if values is None else np.asarray(values, dtype=float)
    return BoundaryField(values=v, weight=w, domain=spec)


def dtn_apply(field_or_values) -> np.ndarray:
    """Normal derivative of the harmonic extension: |k| multiplier on the trace."""
    values = field_or_values.values if isinstance(field_or_values, BoundaryField) else field_or_values
    return spectral.apply_multiplier(values)


def residual(fld: BoundaryField, f: Nonlinearity, eps: float) -> np.ndarray:
    """Collocation residual Lambda u - (w/eps) f(u)."""
    if eps <= 0:
        raise BVortexError(f"eps must be positive, got {eps}")
    if not np.all(np.isfinite(fld.weight)):
        raise GeometryError("corner-singular weight in residual evaluation")
    return dtn_apply(fld) - (fld.weight / eps) * f.f(fld.values)


def jacobian(fld: BoundaryField, f: Nonlinearity, eps: float) -> np.ndarray:
    """Dense symmetric linearization Lambda - (w/eps) diag f'(u)."""
    J = spectral.dtn_matrix(fld.n_modes).copy()
    J[np.diag_indices_from(J)] -= (fld.weight / eps) * f.fprime(fld.values)
    return J


def trace_energy(fld: BoundaryField, f: Nonlinearity, eps: float) -> dict:
    """Energy split {dirichlet, potential, total} of a trace."""
    dirichlet = spectral.dirichlet_energy(fld.values)
    h = 2.0 * math.pi / fld.n_modes
    potential = float(h * np.sum(fld.weight * f.G(fld.values)) / eps)
    return {"dirichlet": dirichlet, "potential": potential,
            "total": dirichlet + potential}


def extract_vortices(values: np.ndarray) -> list:
    """Angles where the trace crosses zero, by linear interpolation."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    h = 2.0 * math.pi / n
    out = []
    for j in range(n):
        a, b = values[j], values[(j + 1) % n]
        if a == 0.0:
            out.append(j * h)
        elif a * b < 0.0:
            out.append((j + a / (a - b)) * h % (2.0 * math.pi))
    return out


@dataclass
class SolutionRecord:
    """A converged trace with its residual, energy, spectrum and vortices."""

    eps: float
    trace: BoundaryField
    residual_norm: float
    energy: dict
    spectrum_head: np.ndarray
    vortices: list
    stable: bool
    iterations: int = 0
    nonlinearity: str = ""

    @property
    def lambda_min(self) -> float:
        return float(self.spectrum_head[0])

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "n_modes": self.trace.n_modes,
            "residual_norm": self.residual_norm,
            "energy": self.energy,
            "spectrum_head": [float(v) for v in self.spectrum_head],
            "vortices": [float(v) for v in self.vortices],
            "stable": self.stable,
            "iterations": self.iterations,
            "nonlinearity": self.nonlinearity,
            "trace": [float(v) for v in self.trace.values],
        }


def spec_tol(eps: float) -> float:
    """Stability slack: eigenvalues above -spec_tol count as stable."""
    return 1e-8 / eps


def stability_spectrum(fld: BoundaryField, f: Nonlinearity, eps: float,
                       k: int = 6) -> np.ndarray:
    """k smallest eigenvalues of the symmetric stability operator."""
    J = jacobian(fld, f, eps)
    k = min(k, fld.n_modes)
    try:
        vals = linalg.eigh(J, eigvals_only=True, subset_by_index=[0, k - 1])
    except linalg.LinAlgError as exc:
        raise BVortexError(f"eigensolver failure: {exc}; cond~{np.linalg.cond(J):.2e}")
    return np.asarray(vals)


def newton_solve(initial: BoundaryField, f: Nonlinearity, eps: float,
                 tol: float = 1e-10, max_iter: int = 40,
                 spectrum_k: int = 6) -> SolutionRecord:
    """Damped Newton on the collocated boundary problem.

    Iterates are clamped to [-1.2, 1.2]; the converged trace must satisfy
    the maximum principle within 1e-9 slack, otherwise the solve is
    rejected as under-resolved.
    """
    if np.max(np.abs(initial.values)) > 1.0 + 1e-12:
        raise BVortexError("initial trace must lie within [-1, 1]")
    u = np.clip(initial.values.copy(), -1.0, 1.0)
    w = initial.weight
    fld = BoundaryField(values=u, weight=w, domain=initial.domain)
    r = residual(fld, f, eps)
    history = [float(np.max(np.abs(r)))]
    it = 0
    while history[-1] > tol:
        if it >= max_iter:
            raise ConvergenceError(
                f"Newton did not converge at eps={eps}: residual {history[-1]:.3e}",
                history=history)
        J = jacobian(fld, f, eps)
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            raise ConvergenceError(
                f"singular Jacobian at eps={eps}; continuation should perturb eps",
                history=history)
        alpha = 1.0
        accepted = False
        for _ in range(9):
            u_try = np.clip(u + alpha * step, -CLAMP, CLAMP)
            fld_try = BoundaryField(values=u_try, weight=w, domain=initial.domain)
            r_try = residual(fld_try, f, eps)
            norm = float(np.max(np.abs(r_try)))
            if norm < history[-1]:
                u, fld, r = u_try, fld_try, r_try
                history.append(norm)
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            raise ConvergenceError(
                f"Newton line search stalled at eps={eps}: residual {history[-1]:.3e}",
                history=history)
        it += 1

    if np.max(np.abs(u)) > 1.0 + MAXPRINCIPLE_SLACK:
        raise ConvergenceError(
            f"converged trace violates the maximum principle (max |u| = {np.max(np.abs(u)):.6f}); "
            "increase n_modes", history=history)
    spectrum = stability_spectrum(fld, f, eps, k=spectrum_k)
    return SolutionRecord(
        eps=float(eps), trace=fld, residual_norm=history[-1],
        energy=trace_energy(fld, f, eps), spectrum_head=spectrum,
        vortices=extract_vortices(u),
        stable=bool(spectrum[0] >= -spec_tol(eps)),
        iterations=it, nonlinearity=f.name)


# ---------------------------------------------------------------------------
# glued initial guess
# ---------------------------------------------------------------------------

def _angdiff(a: float, b: float) -> float:
    """Signed angular difference a - b in (-pi, pi]."""
    d = (a - b) % (2.0 * math.pi)
    return d - 2.0 * math.pi if d > math.pi else d


def initial_guess(spec_or_field, t_p, t_q, eps: float, f: Nonlinearity,
                  profile: LayerProfile, n_modes: int = 512,
                  window: float | None = None) -> BoundaryField:
    """Glue rescaled connection profiles into the two-jump step trace.

    The trace is exactly -1 on the counterclockwise side of p (descending
    through 0 at p), exactly +1 beyond the window around q (ascending at q),
    with the profile argument rescaled by (local arc length)/eps.  Windows
    of angular half-width ``window`` (default 0.35 of the smaller gap) must
    not overlap.
    """
    if isinstance(spec_or_field, BoundaryField):
        fld0 = spec_or_field
    else:
        fld0 = boundary_field(spec_or_field, n_modes)
    tp = float(t_p.t) if isinstance(t_p, BoundaryPoint) else float(t_p)
    tq = float(t_q.t) if isinstance(t_q, BoundaryPoint) else float(t_q)
    thetas = fld0.thetas
    w = fld0.weight
    gap_ccw = (tq - tp) % (2.0 * math.pi)
    gap_cw = 2.0 * math.pi - gap_ccw
    if min(gap_ccw, gap_cw) < 1e-6:
        raise GeometryError("jump points coincide")
    if window is None:
        window = 0.35 * min(gap_ccw, gap_cw)
    if 2 * window > min(gap_ccw, gap_cw):
        raise GeometryError(
            f"transition windows of half-width {window:.3f} overlap for this jump pair")

    wp = float(np.interp(tp % (2 * math.pi), thetas, w, period=2 * math.pi))
    wq = float(np.interp(tq % (2 * math.pi), thetas, w, period=2 * math.pi))

    def ramp(s):
        # C^1 cutoff: 1 for |s| < 1/2, 0 for |s| > 1, cosine in between
        s = np.abs(s)
        out = np.where(s < 0.5, 1.0, np.where(s > 1.0, 0.0,
                       0.5 * (1.0 + np.cos(np.pi * (2.0 * s - 1.0)))))
        return out

    values = np.empty(len(thetas))
    for j, th in enumerate(thetas):
        dp = _angdiff(th, tp)
        dq = _angdiff(th, tq)
        if abs(dp) <= window:
            core = -float(profile.evaluate(wp * dp / eps))  # descending at p
            eta = float(ramp(dp / window))
            sign = -1.0 if dp > 0 else 1.0  # chi value just beyond the window
            values[j] = eta * core + (1.0 - eta) * sign
        elif abs(dq) <= window:
            core = float(profile.evaluate(wq * dq / eps))   # ascending at q
            eta = float(ramp(dq / window))
            sign = 1.0 if dq > 0 else -1.0
            values[j] = eta * core + (1.0 - eta) * sign
        else:
            # chi^{p,q}: -1 on the counterclockwise arc from p to q
            values[j] = -1.0 if (th - tp) % (2.0 * math.pi) < gap_ccw else 1.0
    values = np.clip(values, -1.0, 1.0)
    return BoundaryField(values=values, weight=w, domain=fld0.domain)


# ---------------------------------------------------------------------------
# continuation in eps
# ---------------------------------------------------------------------------

@dataclass
class Branch:
    """Records along an eps schedule plus bracketed stability flips."""

    records: list
    flips: list  # (eps_before, eps_after) pairs where the stable flag changed

    def record_at(self, eps: float) -> SolutionRecord:
        for rec in self.records:
            if abs(rec.eps - eps) <= 1e-12 * max(1.0, eps):
                return rec
        raise KeyError(f"no branch record at eps={eps}")


def continuation(f: Nonlinearity, seed: SolutionRecord, eps_start: float,
                 eps_end: float, n_steps: int, tol: float = 1e-10,
                 max_halvings: int = 6) -> Branch:
    """Warm-started geometric continuation from eps_start to eps_end.

    The seed must be converged at eps_start.  On step failure the eps gap
    is halved (in log space) up to ``max_halvings`` times; intermediate
    solves warm-start the next attempt but are not recorded.
    """
    if eps_start <= 0 or eps_end <= 0:
        raise BVortexError("continuation needs positive eps endpoints")
    if abs(seed.eps - eps_start) > 1e-9 * max(1.0, eps_start):
        raise BVortexError(f"seed is at eps={seed.eps}, not eps_start={eps_start}")
    schedule = np.geomspace(eps_start, eps_end, n_steps)
    records = [seed]
    current = seed
    for eps_next in schedule[1:]:
        rec = _continue_step(f, current, float(eps_next), tol, max_halvings)
        records.append(rec)
        current = rec
    flips = []
    for a, b in zip(records, records[1:]):
        if a.stable != b.stable:
            flips.append((a.eps, b.eps))
    return Branch(records=records, flips=flips)


def _continue_step(f: Nonlinearity, current: SolutionRecord, eps_target: float,
                   tol: float, max_halvings: int, depth: int = 0) -> SolutionRecord:
    try:
        return newton_solve(BoundaryField(values=np.clip(current.trace.values, -1, 1),
                                          weight=current.trace.weight,
                                          domain=current.trace.domain),
                            f, eps_target, tol=tol)
    except ConvergenceError:
        if depth >= max_halvings:
            raise ConvergenceError(
                f"continuation failed to reach eps={eps_target} after "
                f"{max_halvings} halvings")
        eps_mid = math.sqrt(current.eps * eps_target)
        log.info("continuation halving: inserting eps=%.6g", eps_mid)
        mid = _continue_step(f, current, eps_mid, tol, max_halvings, depth + 1)
        return _continue_step(f, mid, eps_target, tol, max_halvings, depth + 1)
