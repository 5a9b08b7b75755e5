"""Immersed hypersurfaces in space forms.

Fundamental forms, shape operator A, mean curvature H (trace convention,
H = sum of principal curvatures), Newton transformation P1 = H I - A, the
cubic polynomial Q(A), and sampled pinching constants (alpha, a, sigma).

Flat ambient (kappa = 0) immersions map a chart into R^{n+1}; positively
curved ambients (kappa > 0) are realized inside the round sphere of radius
1/sqrt(kappa) in R^{n+2}, with the second fundamental form read off from
ambient second derivatives (the normal is tangent to the sphere, so the cone
direction drops out automatically).  kappa < 0 is supported analytically for
umbilic data only and has no chart realization here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from . import geometry as geom
from .errors import ConfigError, DegenerateImmersion, NotConvex


# ---------------------------------------------------------------------------
# immersion charts

@dataclass(frozen=True)
class ImmersionChart:
    """Map u in R^n -> ambient point, with optional analytic jets.

    ``d_immersion(u)`` has shape (n, m) (rows = partial directions);
    ``d2_immersion(u)`` has shape (n, n, m).
    """

    immersion: Callable[[np.ndarray], np.ndarray]
    d_immersion: Optional[Callable[[np.ndarray], np.ndarray]] = None
    d2_immersion: Optional[Callable[[np.ndarray], np.ndarray]] = None
    sample_radius: float = 1.0
    fd_step: float = 1e-6

    def jets(self, u):
        u = np.asarray(u, dtype=float)
        X = np.asarray(self.immersion(u), dtype=float)
        if self.d_immersion is not None:
            J = np.asarray(self.d_immersion(u), dtype=float)
        else:
            J = geom.fd_derivative(self.immersion, u, self.fd_step)
        if self.d2_immersion is not None:
            H2 = np.asarray(self.d2_immersion(u), dtype=float)
        else:
            dfn = self.d_immersion if self.d_immersion is not None else (
                lambda q: geom.fd_derivative(self.immersion, q, self.fd_step))
            H2 = geom.fd_derivative(dfn, u, max(self.fd_step, 1e-5))
        return X, J, H2


@dataclass(frozen=True)
class ImmersedHypersurface:
    n: int
    kappa: float
    charts: Sequence[ImmersionChart]
    orient_signs: Tuple[float, ...]
    flip_normal: bool = False
    name: str = ""

    def sign(self, chart_idx):
        s = self.orient_signs[chart_idx]
        return -s if self.flip_normal else s

    def flipped(self):
        return replace(self, flip_normal=not self.flip_normal)

    def sample_points(self, count, rng):
        """(chart_idx, u) pairs spread over the charts' sample disks."""
        pts = []
        ncharts = len(self.charts)
        for k in range(count):
            ci = k % ncharts
            r = self.charts[ci].sample_radius * math.sqrt(rng.uniform(0.02, 1.0))
            ang = rng.uniform(0.0, 2.0 * np.pi, size=max(1, self.n - 1))
            u = _disk_point(self.n, r, ang, rng)
            pts.append((ci, u))
        return pts


def _disk_point(n, r, ang, rng):
    v = rng.normal(size=n)
    v /= np.linalg.norm(v)
    return r * v


def generalized_cross(vectors):
    """Vector orthogonal to m-1 given vectors in R^m (cofactor expansion)."""
    M = np.asarray(vectors, dtype=float)  # (m-1, m)
    m = M.shape[1]
    out = np.empty(m)
    cols = np.arange(m)
    for i in range(m):
        minor = M[:, cols != i]
        out[i] = (-1.0) ** i * np.linalg.det(minor)
    return out


# ---------------------------------------------------------------------------
# shape data

@dataclass(frozen=True)
class ShapeData:
    A: np.ndarray          # symmetric shape operator in the orthonormal frame
    H: float               # tr A (unnormalized mean curvature)
    P1: np.ndarray         # H I - A
    normA2: float
    S2: float              # sum_{i<j} h_i h_j = (H^2 - |A|^2)/2
    principal: np.ndarray  # ascending principal curvatures
    g: np.ndarray          # induced coordinate metric
    frame: np.ndarray      # orthonormal frame (columns, coordinates)
    h: np.ndarray          # second fundamental form, coordinate components
    normal: np.ndarray     # ambient unit normal
    point: np.ndarray      # ambient position


def _raw_shape(hs, chart_idx, u):
    chart = hs.charts[chart_idx]
    X, J, H2 = chart.jets(u)
    g = J @ J.T
    w = np.linalg.eigvalsh(g)
    if w[0] <= 1e-12 * max(1.0, w[-1]):
        raise DegenerateImmersion("induced metric singular at %r" % (u,))
    if hs.kappa > 0.0:
        span = np.vstack([J, X / np.linalg.norm(X)])
    else:
        span = J
    nu = generalized_cross(span)
    nn = np.linalg.norm(nu)
    if nn == 0.0:
        raise DegenerateImmersion("immersion not regular at %r" % (u,))
    nu = nu / nn
    h = np.einsum("abm,m->ab", H2, nu)
    return X, g, h, nu


def shape_at(hs, u, chart_idx=0):
    """Shape operator data at a chart point."""
    X, g, h, nu = _raw_shape(hs, chart_idx, u)
    s = hs.sign(chart_idx)
    h = s * h
    nu = s * nu
    E = geom.orthonormal_frame(g)
    A = E.T @ h @ E
    A = 0.5 * (A + A.T)
    lam = np.linalg.eigvalsh(A)
    H = float(np.trace(A))
    normA2 = float(np.sum(A * A))
    return ShapeData(A=A, H=H, P1=H * np.eye(hs.n) - A, normA2=normA2,
                     S2=0.5 * (H ** 2 - normA2), principal=lam, g=g,
                     frame=E, h=h, normal=nu, point=X)


def gauss_intrinsic(hs, u, chart_idx=0):
    """Intrinsic curvature bundle from the Gauss equation.

    Frame components: R_ijkl = kappa (d_ik d_jl - d_il d_jk)
    + A_ik A_jl - A_il A_jk (umbilic A = alpha I gives constant curvature
    kappa + alpha^2).
    """
    sd = shape_at(hs, u, chart_idx)
    n = hs.n
    d = np.eye(n)
    A = sd.A
    Rf = (hs.kappa * (np.einsum("ik,jl->ijkl", d, d)
                      - np.einsum("il,jk->ijkl", d, d))
          + np.einsum("ik,jl->ijkl", A, A) - np.einsum("il,jk->ijkl", A, A))
    return geom._bundle_from_frame_riemann(n, sd.g, sd.frame, Rf)


def q_polynomial(sd, kappa):
    """Q(A) = 2A^3 - 3H A^2 + (2H^2 - |A|^2 - kappa(n-2)) A + kappa(2n-3) H I."""
    A = np.asarray(sd.A if isinstance(sd, ShapeData) else sd, dtype=float)
    n = A.shape[0]
    H = float(np.trace(A))
    normA2 = float(np.sum(A * A))
    A2 = A @ A
    return (2.0 * A2 @ A - 3.0 * H * A2
            + (2.0 * H ** 2 - normA2 - kappa * (n - 2.0)) * A
            + kappa * (2.0 * n - 3.0) * H * np.eye(n))


# ---------------------------------------------------------------------------
# induced-metric chart views

def induced_metric_manifold(hs, chart_idx=0, fd_step=1e-5):
    """ChartManifold carrying the pullback metric g(u) = J J^T of a chart."""
    chart = hs.charts[chart_idx]

    def comp(u):
        _, J, _ = chart.jets(u)
        return J @ J.T

    r = chart.sample_radius
    g = geom.SymmetricTensorField(comp=comp, fd_step=fd_step, name="induced")
    c = geom.Chart(lo=np.full(hs.n, -r), hi=np.full(hs.n, r), metric=g)
    return geom.ChartManifold(dim=hs.n, charts=(c,),
                              atlas_kind=geom.ATLAS_MESH_BACKED,
                              name=(hs.name or "surface") + "-induced")


def newton1_field(hs, chart_idx=0, fd_step=1e-5):
    """P1 as a coordinate (0,2) tensor field on a chart: H g_ab - h_ab."""

    def comp(u):
        sd = shape_at(hs, u, chart_idx)
        return sd.H * sd.g - sd.h

    return geom.SymmetricTensorField(comp=comp, fd_step=fd_step, name="newton1")


def mean_curvature_field(hs, chart_idx=0, fd_step=1e-5):
    return geom.ScalarField(eval=lambda u: shape_at(hs, u, chart_idx).H,
                            fd_step=fd_step)


# ---------------------------------------------------------------------------
# pinching constants

@dataclass(frozen=True)
class PinchingConstants:
    alpha: float
    a: float
    sigma: float
    constant_H: bool
    estimated: bool = True


def pinching_constants(hs, plan=geom.SamplePlan(points=400)):
    """Sampled (alpha, a, sigma) for the eigenvalue-bound hypotheses.

    alpha = min sampled principal curvature, a = max/alpha; sigma is the max
    over sampled (p, v) of tr(Hess H | v-perp), which reduces to
    Delta H - min eigenvalue of Hess H.  Constant-H surfaces short-circuit to
    sigma = 0.
    """
    rng = np.random.default_rng(plan.seed)
    pts = hs.sample_points(plan.points, rng)
    lo, hi = np.inf, -np.inf
    Hvals = []
    for ci, u in pts:
        lam = shape_at(hs, u, ci).principal
        if lam[0] <= 0.0:
            raise NotConvex("principal curvature %g <= 0 at %r" % (lam[0], u))
        lo = min(lo, float(lam[0]))
        hi = max(hi, float(lam[-1]))
        Hvals.append(float(np.sum(lam)))
    Hvals = np.asarray(Hvals)
    hscale = max(1.0, float(np.max(np.abs(Hvals))))
    constant_H = float(np.max(Hvals) - np.min(Hvals)) <= 1e-8 * hscale

    if constant_H:
        sigma = 0.0
    else:
        sigma = -np.inf
        nsig = min(len(pts), max(40, plan.points // 4))
        for ci, u in pts[:nsig]:
            man = induced_metric_manifold(hs, ci)
            Hf = mean_curvature_field(hs, ci)
            _, _, hess = geom.scalar_jets(man.chart(), Hf, u, 2)
            w = np.linalg.eigvalsh(0.5 * (hess + hess.T))
            sigma = max(sigma, float(np.sum(w) - w[0]))
        sigma = float(sigma)
    return PinchingConstants(alpha=lo, a=hi / lo, sigma=sigma,
                             constant_H=constant_H)


# ---------------------------------------------------------------------------
# builders

def _unit_sphere_chart_jets(n, pole, u, order=2):
    """Jets of the stereographic parametrization of S^n in R^{n+1}.

    pole = +1 projects from the north pole (u = 0 maps to the south pole),
    pole = -1 from the south pole.
    """
    ud = geom._inv_power_derivs(2.0, 1.0, order=order)
    comps = []
    for a in range(n):
        comps.append(geom._coord_radial_jets(a, ud, u, order))
    vd = geom._inv_power_derivs(-2.0 * pole, 1.0, order=order)
    last = geom._radial_scalar_jets(vd, u, order)
    last = [last[0] + pole] + list(last[1:])
    comps.append(last)
    X = np.array([c[0] for c in comps])
    J = np.stack([np.atleast_1d(c[1]) for c in comps], axis=-1)
    H2 = np.stack([c[2] for c in comps], axis=-1)
    return X, J, H2


def _scaled_sphere_charts(n, scale, ambient_map=None, offset=None):
    """Two stereographic charts composed with a linear ambient map + offset."""
    charts = []
    for pole in (1.0, -1.0):
        def imm(u, pole=pole):
            X, _, _ = _unit_sphere_chart_jets(n, pole, u)
            Y = ambient_map(X) if ambient_map else scale * X
            return Y + offset if offset is not None else Y

        def dimm(u, pole=pole):
            _, J, _ = _unit_sphere_chart_jets(n, pole, u)
            return np.stack([ambient_map(r) if ambient_map else scale * r
                             for r in J])

        def d2imm(u, pole=pole):
            _, _, H2 = _unit_sphere_chart_jets(n, pole, u)
            rows = [[ambient_map(H2[a, b]) if ambient_map else scale * H2[a, b]
                     for b in range(n)] for a in range(n)]
            return np.asarray(rows)

        charts.append(ImmersionChart(immersion=imm, d_immersion=dimm,
                                     d2_immersion=d2imm, sample_radius=1.0))
    return charts


def _orient_for_positive_H(n, kappa, charts, name):
    hs = ImmersedHypersurface(n=n, kappa=kappa, charts=tuple(charts),
                              orient_signs=tuple(1.0 for _ in charts), name=name)
    signs = []
    ref = np.full(n, 0.1)
    for ci in range(len(charts)):
        sd = shape_at(hs, ref, ci)
        signs.append(1.0 if sd.H > 0 else -1.0)
    return replace(hs, orient_signs=tuple(signs))


def sphere_surface(r=1.0, n=2):
    """Round n-sphere of radius r in R^{n+1} (A = I/r with inward normal)."""
    charts = _scaled_sphere_charts(n, float(r))
    return _orient_for_positive_H(n, 0.0, charts, "sphere:r=%g" % r)


def ellipsoid_surface(a1=1.0, a2=1.0, c=1.1):
    """Ellipsoid x^2/a1^2 + y^2/a2^2 + z^2/c^2 = 1 in R^3."""
    D = np.diag([float(a1), float(a2), float(c)])
    charts = _scaled_sphere_charts(2, 1.0, ambient_map=lambda v: D @ v)
    return _orient_for_positive_H(2, 0.0, charts,
                                  "ellipsoid:%g,%g,%g" % (a1, a2, c))


def geodesic_sphere_surface(kappa=1.0, alpha=1.0, n=2):
    """Umbilic geodesic sphere with A = alpha I inside the round sphere
    of curvature kappa > 0 (realized in R^{n+2})."""
    if kappa <= 0.0:
        raise ConfigError("geodesic-sphere charts require kappa > 0")
    rk = math.sqrt(kappa)
    theta = math.atan2(rk, alpha)  # cot(theta) = alpha / sqrt(kappa)
    st, ct = math.sin(theta), math.cos(theta)

    def amb(v):
        return np.concatenate([st * v / rk, [0.0]])

    offset = np.zeros(n + 2)
    offset[-1] = ct / rk
    charts = _scaled_sphere_charts(n, 1.0, ambient_map=amb, offset=offset)
    return _orient_for_positive_H(
        n, kappa, charts, "geodesic-sphere:kappa=%g,alpha=%g" % (kappa, alpha))


def parse_surface(spec):
    """Parse 'sphere:r=1', 'ellipsoid:1,1,1.1', 'geodesic-sphere:kappa=1,alpha=2'."""
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    try:
        if head == "sphere":
            opts = dict(kv.split("=") for kv in rest.split(",") if kv)
            return sphere_surface(r=float(opts.get("r", 1.0)))
        if head == "ellipsoid":
            vals = [float(v) for v in rest.split(",")]
            if len(vals) != 3:
                raise ValueError("need three semiaxes")
            return ellipsoid_surface(*vals)
        if head == "geodesic-sphere":
            opts = dict(kv.split("=") for kv in rest.split(",") if kv)
            return geodesic_sphere_surface(kappa=float(opts.get("kappa", 1.0)),
                                           alpha=float(opts.get("alpha", 1.0)))
    except (ValueError, TypeError) as exc:
        raise ConfigError("bad surface spec %r: %s" % (spec, exc)) from exc
    raise ConfigError("unknown surface spec %r" % spec)


def ellipsoid_shape_operator(point, semiaxes):
    """Closed-form shape operator of an ellipsoid at an ambient point.

    Returns (A3, nu, B): the symmetric 3x3 operator acting on the tangent
    plane (zero on the normal), the outward-pointing unit normal flipped to
    the H > 0 convention, and a 3x2 orthonormal tangent basis.
    """
    p = np.asarray(point, dtype=float)
    d = np.asarray(semiaxes, dtype=float)
    grad = p / d ** 2
    nrm = np.linalg.norm(grad)
    nu = grad / nrm
    P = np.eye(3) - np.outer(nu, nu)
    A3 = P @ np.diag(1.0 / d ** 2) @ P / nrm
    # orthonormal tangent basis, deterministic
    k = int(np.argmin(np.abs(nu)))
    t1 = np.zeros(3)
    t1[k] = 1.0
    t1 = t1 - (t1 @ nu) * nu
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(nu, t1)
    B = np.stack([t1, t2], axis=1)
    return A3, nu, B
