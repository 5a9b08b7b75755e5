"""Chart-based intrinsic Riemannian geometry.

Metric jets, Christoffel symbols, curvature tensors (Riemann, Ricci, scalar,
sectional, Schouten, Weyl) and covariant derivatives of scalar functions and
symmetric 2-tensors, all evaluated pointwise in a deterministic orthonormal
frame.

Index conventions (fixed once, used everywhere):

* Riemann components satisfy ``R_ijkl = K (d_ik d_jl - d_il d_jk)`` on a
  constant-curvature space, so that ``ric_ij = sum_k R_ikjk`` and the round
  sphere has positive sectional curvature ``K(u, v) = R(u, v, u, v) / area^2``.
* Covariant derivatives put the derivative direction LAST:
  ``phi_ijk = (nabla_{e_k} phi)(e_i, e_j)`` and
  ``phi_ijkl = (nabla_{e_l} nabla_{e_k} phi)(e_i, e_j)``; hence the divergence
  of a symmetric tensor is ``sum_j phi_ijj``.
* Orthonormal frames come from Gram-Schmidt on the coordinate basis in fixed
  order, so all indexed quantities are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DegeneratePlane, NonPositiveMetric, SchoutenUndefined

DEFAULT_FD_STEP = 1e-5


# ---------------------------------------------------------------------------
# finite differences

def fd_derivative(fn, p, step):
    """Central-difference derivative of an array-valued function of a point.

    Returns an array of shape (n,) + shape(fn(p)); axis 0 is the partial
    derivative direction.
    """
    p = np.asarray(p, dtype=float)
    n = p.size
    rows = []
    for a in range(n):
        dp = np.zeros(n)
        dp[a] = step
        rows.append((np.asarray(fn(p + dp), dtype=float)
                     - np.asarray(fn(p - dp), dtype=float)) / (2.0 * step))
    return np.stack(rows, axis=0)


def fd_consistency_ratio(fn, p, step):
    """Two-step Richardson check: ratio of FD errors at step and step/2.

    For a smooth function the central difference converges at O(step^2), so
    the returned ratio of |D_h - D_{h/2}| against |D_{h/2} - D_{h/4}| should
    sit near 4.
    """
    d1 = fd_derivative(fn, p, step)
    d2 = fd_derivative(fn, p, step / 2.0)
    d3 = fd_derivative(fn, p, step / 4.0)
    num = np.max(np.abs(d1 - d2))
    den = np.max(np.abs(d2 - d3))
    if den == 0.0:
        return 4.0 if num == 0.0 else np.inf
    return num / den


# ---------------------------------------------------------------------------
# fields

@dataclass(frozen=True)
class ScalarField:
    """Smooth function on a chart with partial-derivative access.

    ``grad``/``hess``/``third`` are plain partial derivatives in chart
    coordinates (not covariant); missing callbacks fall back to central
    differences of the previous level.
    """

    eval: Callable[[np.ndarray], float]
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess: Optional[Callable[[np.ndarray], np.ndarray]] = None
    third: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd_step: float = DEFAULT_FD_STEP

    def partials(self, p, order):
        p = np.asarray(p, dtype=float)
        g = self.grad if self.grad is not None else (
            lambda q: fd_derivative(lambda r: self.eval(r), q, self.fd_step))
        out = [float(self.eval(p)), np.asarray(g(p), dtype=float)]
        if order >= 2:
            h = self.hess if self.hess is not None else (
                lambda q: fd_derivative(g, q, self.fd_step))
            out.append(np.asarray(h(p), dtype=float))
        if order >= 3:
            hfn = self.hess if self.hess is not None else (
                lambda q: fd_derivative(g, q, self.fd_step))
            t = self.third if self.third is not None else (
                lambda q: fd_derivative(hfn, q, max(self.fd_step, 1e-4)))
            out.append(np.asarray(t(p), dtype=float))
        return tuple(out[: order + 1])

    def __add__(self, other):
        return combine_fields([self, other], [1.0, 1.0])

    def __rmul__(self, c):
        return combine_fields([self], [float(c)])


def combine_fields(fields, coeffs):
    """Linear combination of scalar fields, preserving analytic partials."""
    fields = list(fields)
    coeffs = [float(c) for c in coeffs]

    def mix(attr, q):
        return sum(c * np.asarray(getattr(f, attr)(q), dtype=float)
                   for f, c in zip(fields, coeffs))

    has = {a: all(getattr(f, a) is not None for f in fields)
           for a in ("grad", "hess", "third")}
    return ScalarField(
        eval=lambda q: sum(c * f.eval(q) for f, c in zip(fields, coeffs)),
        grad=(lambda q: mix("grad", q)) if has["grad"] else None,
        hess=(lambda q: mix("hess", q)) if has["hess"] else None,
        third=(lambda q: mix("third", q)) if has["third"] else None,
        fd_step=min(f.fd_step for f in fields),
    )


@dataclass(frozen=True)
class SymmetricTensorField:
    """Symmetric (0,2)-tensor field given by coordinate components.

    ``comp(p)`` is the n x n symmetric matrix phi_ab in chart coordinates;
    ``dcomp``/``d2comp`` are its plain partial derivatives with the derivative
    axes FIRST (dcomp[c, a, b] = d_c phi_ab).  Covariant derivatives with the
    paper-facing last-index convention are produced by ``tensor_jets``.
    """

    comp: Callable[[np.ndarray], np.ndarray]
    dcomp: Optional[Callable[[np.ndarray], np.ndarray]] = None
    d2comp: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd_step: float = DEFAULT_FD_STEP
    name: str = "custom"

    def partials(self, p, order):
        p = np.asarray(p, dtype=float)
        m = np.asarray(self.comp(p), dtype=float)
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.T)) > 1e-12 * scale:
            raise ValueError("tensor field components are not symmetric at %r" % (p,))
        out = [m]
        if order >= 1:
            d = self.dcomp if self.dcomp is not None else (
                lambda q: fd_derivative(self.comp, q, self.fd_step))
            out.append(np.asarray(d(p), dtype=float))
        if order >= 2:
            dfn = self.dcomp if self.dcomp is not None else (
                lambda q: fd_derivative(self.comp, q, self.fd_step))
            d2 = self.d2comp if self.d2comp is not None else (
                lambda q: fd_derivative(dfn, q, max(self.fd_step, 1e-4)))
            out.append(np.asarray(d2(p), dtype=float))
        return tuple(out[: order + 1])


# ---------------------------------------------------------------------------
# charts and manifolds

ATLAS_PERIODIC_BOX = "PeriodicBox"
ATLAS_ANALYTIC_SPHERE = "AnalyticSphere"
ATLAS_MESH_BACKED = "MeshBacked"


@dataclass(frozen=True)
class Chart:
    """Rectangular coordinate chart carrying the metric as a tensor field."""

    lo: np.ndarray
    hi: np.ndarray
    metric: SymmetricTensorField

    @property
    def dim(self):
        return len(self.lo)


@dataclass(frozen=True)
class ChartManifold:
    """Compact manifold realized through one or more analytic charts."""

    dim: int
    charts: Sequence[Chart]
    atlas_kind: str
    constant_curvature: Optional[float] = None  # set for AnalyticSphere
    name: str = ""

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("manifold dimension must be >= 2")

    def chart(self, idx=0):
        return self.charts[idx]

    def sample_points(self, count, rng):
        """Draw chart points covering the manifold (chart 0)."""
        c = self.chart()
        if self.atlas_kind == ATLAS_PERIODIC_BOX:
            return rng.uniform(c.lo, c.hi, size=(count, self.dim))
        if self.atlas_kind == ATLAS_ANALYTIC_SPHERE:
            # Uniform ambient directions mapped through stereographic
            # projection; the cap near the missing pole is excluded.
            pts = []
            while len(pts) < count:
                u = rng.normal(size=self.dim + 1)
                u /= np.linalg.norm(u)
                if u[-1] > 0.8:
                    continue
                pts.append(u[:-1] / (1.0 - u[-1]))
            return np.asarray(pts)
        raise ConfigError("no sampling strategy for atlas kind %r" % self.atlas_kind)


@dataclass(frozen=True)
class SamplePlan:
    points: int = 200
    planes_per_point: int = 8
    seed: int = 42


# ---------------------------------------------------------------------------
# pointwise metric machinery

def metric_jets(chart, p, order=2):
    g, *rest = chart.metric.partials(p, order)
    w = np.linalg.eigvalsh(g)
    if w[0] <= 0.0:
        raise NonPositiveMetric("metric not positive definite at %r (min eig %g)"
                                % (p, w[0]))
    return (g, *rest)


def orthonormal_frame(g):
    """Gram-Schmidt of the coordinate basis w.r.t. g, deterministic order.

    Returns E with columns the frame vectors: E.T @ g @ E = I.
    """
    n = g.shape[0]
    E = np.zeros((n, n))
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        for j in range(i):
            v = v - (E[:, j] @ g @ v) * E[:, j]
        nv = np.sqrt(v @ g @ v)
        E[:, i] = v / nv
    return E


def christoffel(g_inv, dg):
    """Gamma[c, a, b] = 0.5 g^{cd} (d_a g_db + d_b g_da - d_d g_ab)."""
    n = g_inv.shape[0]
    low = np.empty((n, n, n))
    for a in range(n):
        for b in range(n):
            for d in range(n):
                low[d, a, b] = 0.5 * (dg[a, d, b] + dg[b, d, a] - dg[d, a, b])
    return np.einsum("cd,dab->cab", g_inv, low)


def christoffel_derivative(g, g_inv, dg, d2g):
    """dGamma[e, c, a, b] = d_e Gamma^c_ab."""
    n = g.shape[0]
    low = np.empty((n, n, n))
    dlow = np.empty((n, n, n, n))
    for a in range(n):
        for b in range(n):
            for d in range(n):
                low[d, a, b] = 0.5 * (dg[a, d, b] + dg[b, d, a] - dg[d, a, b])
                for e in range(n):
                    dlow[e, d, a, b] = 0.5 * (d2g[e, a, d, b] + d2g[e, b, d, a]
                                              - d2g[e, d, a, b])
    dg_inv = -np.einsum("cm,emn,nd->ecd", g_inv, dg, g_inv)
    return (np.einsum("ecd,dab->ecab", dg_inv, low)
            + np.einsum("cd,edab->ecab", g_inv, dlow))


def riemann_lowered(g, Gamma, dGamma):
    """Coordinate Riemann components in the package convention.

    R[a, b, c, d] with constant-curvature model K (g_ac g_bd - g_ad g_bc);
    contraction g^{bd} R[a, b, c, d] ... is handled by callers in frame form.
    """
    # R^e_{cab} of the Levi-Civita connection
    Rup = (np.einsum("aebc->ecab", dGamma)
           - np.einsum("beac->ecab", dGamma)
           + np.einsum("eaf,fbc->ecab", Gamma, Gamma)
           - np.einsum("ebf,fac->ecab", Gamma, Gamma))
    Rstd = np.einsum("de,ecab->abcd", g, Rup)
    # Sign fixed so the round sphere gives R[a,b,c,d] ~ K (g_ac g_bd - g_ad g_bc)
    return -Rstd


def curvature_parts(chart, p):
    """Raw coordinate curvature data at p: (g, g_inv, E, Gamma, dGamma, Riem)."""
    g, dg, d2g = metric_jets(chart, p, 2)
    g_inv = np.linalg.inv(g)
    Gamma = christoffel(g_inv, dg)
    dGamma = christoffel_derivative(g, g_inv, dg, d2g)
    Riem = riemann_lowered(g, Gamma, dGamma)
    E = orthonormal_frame(g)
    return g, g_inv, E, Gamma, dGamma, Riem


# ---------------------------------------------------------------------------
# curvature bundle

@dataclass(frozen=True)
class CurvatureBundle:
    """Pointwise curvature data in the deterministic orthonormal frame."""

    n: int
    g: np.ndarray                  # coordinate metric at the point
    frame: np.ndarray              # columns = frame vectors (coordinates)
    riemann: np.ndarray            # frame R_ijkl
    ricci: np.ndarray              # frame ric_ij
    scalar: float
    schouten: Optional[np.ndarray]  # frame S_ij, None for n == 2
    weyl: Optional[np.ndarray]      # frame W_ijkl, None for n == 2

    def sectional(self, u, v):
        """K(u, v) for coordinate vectors u, v (positive on the round sphere)."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        gu = self.g @ u
        gv = self.g @ v
        area2 = (u @ gu) * (v @ gv) - (u @ gv) ** 2
        if area2 <= 1e-14 * max(1.0, (u @ gu) * (v @ gv)):
            raise DegeneratePlane("sectional curvature of a degenerate plane")
        # convert to frame components once
        Einv = np.linalg.inv(self.frame)
        uf = Einv @ u
        vf = Einv @ v
        num = np.einsum("ijkl,i,j,k,l->", self.riemann, uf, vf, uf, vf)
        den = (uf @ uf) * (vf @ vf) - (uf @ vf) ** 2
        return num / den


def _bundle_from_frame_riemann(n, g, E, Rf):
    ric = np.einsum("ikjk->ij", Rf)
    R = float(np.trace(ric))
    if n >= 3:
        S = ric - R / (2.0 * (n - 1)) * np.eye(n)
        d = np.eye(n)
        W = Rf - (np.einsum("ik,jl->ijkl", S, d) - np.einsum("il,jk->ijkl", S, d)
                  + np.einsum("jl,ik->ijkl", S, d) - np.einsum("jk,il->ijkl", S, d)
                  ) / (n - 2.0)
    else:
        S = None
        W = None
    return CurvatureBundle(n=n, g=g, frame=E, riemann=Rf, ricci=ric,
                           scalar=R, schouten=S, weyl=W)


def curvature_at(m, p):
    """Full curvature bundle at a chart point of m."""
    p = np.asarray(p, dtype=float)
    n = m.dim
    chart = m.chart()
    if m.atlas_kind == ATLAS_ANALYTIC_SPHERE:
        K = m.constant_curvature
        g = chart.metric.comp(p)
        E = orthonormal_frame(g)
        d = np.eye(n)
        Rf = K * (np.einsum("ik,jl->ijkl", d, d) - np.einsum("il,jk->ijkl", d, d))
        return _bundle_from_frame_riemann(n, g, E, Rf)
    g, g_inv, E, Gamma, dGamma, Riem = curvature_parts(chart, p)
    Rf = np.einsum("abcd,ai,bj,ck,dl->ijkl", Riem, E, E, E, E)
    return _bundle_from_frame_riemann(n, g, E, Rf)


# ---------------------------------------------------------------------------
# covariant jets of fields

def scalar_jets(chart, f, p, order=2):
    """Frame covariant derivatives of f at p.

    Returns (value, f_i, f_ij[, f_ijk]); the LAST frame index is the
    outermost covariant-derivative direction.
    """
    p = np.asarray(p, dtype=float)
    parts = f.partials(p, order)
    g, dg, d2g = metric_jets(chart, p, 2)
    g_inv = np.linalg.inv(g)
    Gamma = christoffel(g_inv, dg)
    E = orthonormal_frame(g)
    val, df = parts[0], parts[1]
    out = [val, df @ E]
    if order >= 2:
        d2f = parts[2]
        H = d2f - np.einsum("cab,c->ab", Gamma, df)
        out.append(np.einsum("ab,ai,bj->ij", H, E, E))
    if order >= 3:
        d3f = parts[3]
        dGamma = christoffel_derivative(g, g_inv, dg, d2g)
        H = d2f - np.einsum("cab,c->ab", Gamma, df)
        dH = (d3f - np.einsum("ecab,c->eab", dGamma, df)
              - np.einsum("cab,ec->eab", Gamma, d2f))
        T3 = (dH - np.einsum("cea,cb->eab", Gamma, H)
              - np.einsum("ceb,ac->eab", Gamma, H))
        out.append(np.einsum("cab,ai,bj,ck->ijk", T3, E, E, E))
    return tuple(out)


def tensor_jets(chart, phi, p, order=1):
    """Frame covariant derivatives of a symmetric 2-tensor at p.

    Returns (phi_ij[, phi_ijk[, phi_ijkl]]); derivative indices come last,
    with phi_ijkl = (nabla_l nabla_k phi)(e_i, e_j).
    """
    p = np.asarray(p, dtype=float)
    parts = phi.partials(p, order)
    g, dg, d2g = metric_jets(chart, p, 2)
    g_inv = np.linalg.inv(g)
    Gamma = christoffel(g_inv, dg)
    E = orthonormal_frame(g)
    ph = parts[0]
    out = [np.einsum("ab,ai,bj->ij", ph, E, E)]
    if order >= 1:
        dph = parts[1]
        T1 = (dph - np.einsum("eca,eb->cab", Gamma, ph)
              - np.einsum("ecb,ae->cab", Gamma, ph))
        out.append(np.einsum("cab,ai,bj,ck->ijk", T1, E, E, E))
    if order >= 2:
        d2ph = parts[2]
        dGamma = christoffel_derivative(g, g_inv, dg, d2g)
        dph = parts[1]
        dT1 = (d2ph
               - np.einsum("deca,eb->dcab", dGamma, ph)
               - np.einsum("eca,deb->dcab", Gamma, dph)
               - np.einsum("decb,ae->dcab", dGamma, ph)
               - np.einsum("ecb,dae->dcab", Gamma, dph))
        T2 = (dT1
              - np.einsum("edc,eab->dcab", Gamma, T1)
              - np.einsum("eda,ceb->dcab", Gamma, T1)
              - np.einsum("edb,cae->dcab", Gamma, T1))
        out.append(np.einsum("dcab,ai,bj,ck,dl->ijkl", T2, E, E, E, E))
    return tuple(out)


def tensor_divergence(phi, m, p, chart_idx=0):
    """(div phi)_i = sum_j phi_ijj in the orthonormal frame."""
    _, T1 = tensor_jets(m.chart(chart_idx), phi, p, 1)
    return np.einsum("ijj->i", T1)


def codazzi_defect(phi, m, p, chart_idx=0):
    """max_{i,j,k} |phi_ijk - phi_ikj| (0 iff nabla phi symmetric in last slots)."""
    _, T1 = tensor_jets(m.chart(chart_idx), phi, p, 1)
    return float(np.max(np.abs(T1 - T1.transpose(0, 2, 1))))


def scalar_frame_gradient(chart, f, p):
    """Frame components of nabla f."""
    _, fi = scalar_jets(chart, f, p, 1)[:2]
    return fi


# ---------------------------------------------------------------------------
# curvature extremum sampling

def min_sectional(m, plan=SamplePlan()):
    """Sampled lower bound K0 of the sectional curvature."""
    if m.atlas_kind == ATLAS_ANALYTIC_SPHERE:
        return float(m.constant_curvature)
    rng = np.random.default_rng(plan.seed)
    pts = m.sample_points(plan.points, rng)
    n = m.dim
    best = np.inf
    for p in pts:
        bundle = curvature_at(m, p)
        Rf = bundle.riemann
        # axis-aligned frame pairs
        for i in range(n):
            for j in range(i + 1, n):
                best = min(best, Rf[i, j, i, j])
        for _ in range(plan.planes_per_point):
            q, _ = np.linalg.qr(rng.normal(size=(n, 2)))
            u, v = q[:, 0], q[:, 1]
            best = min(best, float(np.einsum("ijkl,i,j,k,l->", Rf, u, v, u, v)))
    return float(best)


def min_ricci(m, plan=SamplePlan()):
    """Sampled lower bound L0 of the Ricci curvature (least eigenvalue)."""
    if m.atlas_kind == ATLAS_ANALYTIC_SPHERE:
        return float((m.dim - 1) * m.constant_curvature)
    rng = np.random.default_rng(plan.seed)
    pts = m.sample_points(plan.points, rng)
    best = np.inf
    for p in pts:
        ric = curvature_at(m, p).ricci
        best = min(best, float(np.linalg.eigvalsh(ric)[0]))
    return float(best)


# ---------------------------------------------------------------------------
# derived tensor fields

def metric_field(m, chart_idx=0):
    return m.chart(chart_idx).metric


def ricci_tensor_field(m, fd_step=1e-4):
    """Ricci as a coordinate tensor field (partials by FD of the components)."""
    if m.atlas_kind == ATLAS_ANALYTIC_SPHERE:
        return scale_tensor_field(metric_field(m),
                                  (m.dim - 1) * m.constant_curvature, name="ricci")
    chart = m.chart()

    def comp(p):
        b = curvature_at(m, p)
        Einv = np.linalg.inv(b.frame)
        return Einv.T @ b.ricci @ Einv

    return SymmetricTensorField(comp=comp, fd_step=fd_step, name="ricci")


def scalar_curvature_field(m, fd_step=1e-4):
    if m.atlas_kind == ATLAS_ANALYTIC_SPHERE:
        n = m.dim
        Rconst = n * (n - 1) * m.constant_curvature
        return ScalarField(eval=lambda p: Rconst,
                           grad=lambda p: np.zeros(n),
                           hess=lambda p: np.zeros((n, n)))
    return ScalarField(eval=lambda p: curvature_at(m, p).scalar, fd_step=fd_step)


def scale_tensor_field(phi, c, name=None):
    c = float(c)
    return SymmetricTensorField(
        comp=lambda p: c * np.asarray(phi.comp(p), dtype=float),
        dcomp=(lambda p: c * np.asarray(phi.dcomp(p), dtype=float))
        if phi.dcomp is not None else None,
        d2comp=(lambda p: c * np.asarray(phi.d2comp(p), dtype=float))
        if phi.d2comp is not None else None,
        fd_step=phi.fd_step,
        name=name or phi.name,
    )


def add_tensor_fields(a, b, name="sum"):
    both_d = a.dcomp is not None and b.dcomp is not None
    both_d2 = a.d2comp is not None and b.d2comp is not None
    return SymmetricTensorField(
        comp=lambda p: np.asarray(a.comp(p), float) + np.asarray(b.comp(p), float),
        dcomp=(lambda p: np.asarray(a.dcomp(p), float) + np.asarray(b.dcomp(p), float))
        if both_d else None,
        d2comp=(lambda p: np.asarray(a.d2comp(p), float)
                + np.asarray(b.d2comp(p), float)) if both_d2 else None,
        fd_step=min(a.fd_step, b.fd_step),
        name=name,
    )


def schouten_tensor_field(m, fd_step=1e-4, formal=False):
    """S = ric - R/(2(n-1)) g; requires n >= 3 unless formal=True."""
    n = m.dim
    if n < 3 and not formal:
        raise SchoutenUndefined("Schouten tensor needs n >= 3")
    if m.atlas_kind == ATLAS_ANALYTIC_SPHERE:
        c = (n - 2) / 2.0 * m.constant_curvature
        return scale_tensor_field(metric_field(m), c, name="schouten")
    ric = ricci_tensor_field(m, fd_step)
    g = metric_field(m)

    def comp(p):
        b = curvature_at(m, p)
        return ric.comp(p) - b.scalar / (2.0 * (n - 1)) * np.asarray(g.comp(p), float)

    return SymmetricTensorField(comp=comp, fd_step=fd_step, name="schouten")


def einstein_tensor_field(m, fd_step=1e-4):
    """E = (R/2) g - ric (divergence free by contracted Bianchi)."""
    if m.atlas_kind == ATLAS_ANALYTIC_SPHERE:
        n = m.dim
        c = n * (n - 1) * m.constant_curvature / 2.0 - (n - 1) * m.constant_curvature
        return scale_tensor_field(metric_field(m), c, name="einstein")
    g = metric_field(m)

    def comp(p):
        b = curvature_at(m, p)
        return (b.scalar / 2.0 * np.asarray(g.comp(p), float)
                - np.linalg.inv(b.frame).T @ b.ricci @ np.linalg.inv(b.frame))

    return SymmetricTensorField(comp=comp, fd_step=fd_step, name="einstein")


def divergence_identity_suite(m, samples=20, seed=7, fd_step=1e-4):
    """Pointwise defects for the divergence identities of ric-c I, the
    Einstein tensor, div P1 is checked in the hypersurface module, and
    div S = grad(tr S).

    Returns a JSON-friendly dict of max defects with hypothesis flags.
    """
    rng = np.random.default_rng(seed)
    pts = m.sample_points(samples, rng)
    n = m.dim
    chart = m.chart()

    Rs = [curvature_at(m, p).scalar for p in pts]
    r_spread = float(np.max(Rs) - np.min(Rs))
    r_scale = max(1.0, float(np.max(np.abs(Rs))))
    r_constant = r_spread <= 1e-6 * r_scale

    report = {"manifold": m.name or m.atlas_kind, "n": n,
              "R_constant": bool(r_constant), "R_spread": r_spread}

    ric = ricci_tensor_field(m, fd_step)
    if r_constant:
        # item 1: div(ric - c I) = 0 for constant R (any constant c)
        c = 0.5 * float(np.mean(Rs)) / n
        sc = add_tensor_fields(ric, scale_tensor_field(metric_field(m), -c), "S_c")
        report["item1_div_ric_minus_cI"] = float(max(
            np.max(np.abs(tensor_divergence(sc, m, p))) for p in pts))
    else:
        report["item1_div_ric_minus_cI"] = None
        report["item1_flag"] = "R_not_constant"

    # item 2: div((R/2) g - ric) = 0 (contracted Bianchi)
    E = einstein_tensor_field(m, fd_step)
    report["item2_div_einstein"] = float(max(
        np.max(np.abs(tensor_divergence(E, m, p))) for p in pts))

    # item 5: div S = grad(tr S)  (formal Schouten used when n == 2)
    S = schouten_tensor_field(m, fd_step, formal=True)
    Rfield = scalar_curvature_field(m, fd_step)
    coef = (n - 2) / (2.0 * (n - 1))
    defect5 = 0.0
    for p in pts:
        div = tensor_divergence(S, m, p)
        gradR = scalar_frame_gradient(chart, Rfield, p)
        defect5 = max(defect5, float(np.max(np.abs(div - coef * gradR))))
    report["item5_div_schouten"] = defect5
    return report


# ---------------------------------------------------------------------------
# built-in manifolds

def _const_metric_field(n):
    eye = np.eye(n)
    return SymmetricTensorField(
        comp=lambda p: eye,
        dcomp=lambda p: np.zeros((n, n, n)),
        d2comp=lambda p: np.zeros((n, n, n, n)),
        name="flat",
    )


def flat_torus(n=2, lengths=None):
    lengths = np.full(n, 2.0 * np.pi) if lengths is None else np.asarray(lengths, float)
    chart = Chart(lo=np.zeros(n), hi=lengths, metric=_const_metric_field(n))
    return ChartManifold(dim=n, charts=(chart,), atlas_kind=ATLAS_PERIODIC_BOX,
                         name="torus%d" % n)


def perturbed_torus(n=2, eps=0.1, analytic=True, fd_step=1e-4):
    """g = (1 + eps sin x1) * delta on the 2pi-periodic box."""

    def conf(p):
        return 1.0 + eps * np.sin(p[0])

    eye = np.eye(n)

    def comp(p):
        return conf(p) * eye

    def dcomp(p):
        d = np.zeros((n, n, n))
        d[0] = eps * np.cos(p[0]) * eye
        return d

    def d2comp(p):
        d = np.zeros((n, n, n, n))
        d[0, 0] = -eps * np.sin(p[0]) * eye
        return d

    if analytic:
        g = SymmetricTensorField(comp, dcomp, d2comp, name="perturbed")
    else:
        g = SymmetricTensorField(comp, fd_step=fd_step, name="perturbed-fd")
    chart = Chart(lo=np.zeros(n), hi=np.full(n, 2.0 * np.pi), metric=g)
    return ChartManifold(dim=n, charts=(chart,), atlas_kind=ATLAS_PERIODIC_BOX,
                         name="perturbed-torus%d" % n)


def _radial_scalar_jets(wd, x, order):
    """Partial derivatives of F(x) = w(|x|^2) from derivatives wd of w in s."""
    x = np.asarray(x, dtype=float)
    n = x.size
    s = float(x @ x)
    w = [f(s) for f in wd]
    out = [w[0], 2.0 * w[1] * x]
    if order >= 2:
        out.append(4.0 * w[2] * np.outer(x, x) + 2.0 * w[1] * np.eye(n))
    if order >= 3:
        t = 8.0 * w[3] * np.einsum("a,b,c->abc", x, x, x)
        eye = np.eye(n)
        t += 4.0 * w[2] * (np.einsum("ab,c->abc", eye, x)
                           + np.einsum("ac,b->abc", eye, x)
                           + np.einsum("bc,a->abc", eye, x))
        out.append(t)
    return out


def _coord_radial_jets(a, wd, x, order):
    """Partial derivatives of F(x) = x_a * w(|x|^2)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    base = _radial_scalar_jets(wd, x, order)  # jets of w itself
    w, dw = base[0], base[1]
    ea = np.zeros(n)
    ea[a] = 1.0
    out = [x[a] * w, ea * w + x[a] * dw]
    if order >= 2:
        d2w = base[2]
        out.append(np.outer(ea, dw) + np.outer(dw, ea) + x[a] * d2w)
    if order >= 3:
        d2w, d3w = base[2], base[3]
        t = (np.einsum("a,bc->abc", ea, d2w) + np.einsum("b,ac->abc", ea, d2w)
             + np.einsum("c,ab->abc", ea, d2w) + x[a] * d3w)
        out.append(t)
    return out


def _inv_power_derivs(coef, power, shift=1.0, order=3):
    """Derivatives in s of coef / (shift + s)^power, orders 0..order."""
    out = []
    c = coef
    pw = power
    for k in range(order + 1):
        ck = c
        out.append(lambda s, ck=ck, pk=pw + k: ck / (shift + s) ** pk)
        c = c * (-(pw + k))
    return out


def round_sphere(n=4, K=1.0):
    """Round n-sphere of constant curvature K, stereographic chart.

    Metric g = (4/K) / (1 + |x|^2)^2 * delta.  Closed-form curvature is used
    for all curvature queries (the chart never needs finite differences).
    """
    wd = _inv_power_derivs(4.0 / K, 2.0, order=2)
    eye = np.eye(n)

    def comp(p):
        return _radial_scalar_jets(wd, p, 0)[0] * eye

    def dcomp(p):
        return np.einsum("c,ab->cab", _radial_scalar_jets(wd, p, 1)[1], eye)

    def d2comp(p):
        return np.einsum("dc,ab->dcab", _radial_scalar_jets(wd, p, 2)[2], eye)

    g = SymmetricTensorField(comp, dcomp, d2comp, name="sphere-metric")
    chart = Chart(lo=np.full(n, -np.inf), hi=np.full(n, np.inf), metric=g)
    return ChartManifold(dim=n, charts=(chart,), atlas_kind=ATLAS_ANALYTIC_SPHERE,
                         constant_curvature=float(K), name="sphere%d" % n)


def sphere_coordinate_field(m, axis):
    """Restriction of the ambient coordinate X_axis to the sphere chart.

    These are the first nonconstant eigenfunctions: Delta X = -n K X.
    """
    n = m.dim
    if axis < n:
        ud = _inv_power_derivs(2.0, 1.0, order=3)
        return ScalarField(
            eval=lambda p: _coord_radial_jets(axis, ud, p, 0)[0],
            grad=lambda p: _coord_radial_jets(axis, ud, p, 1)[1],
            hess=lambda p: _coord_radial_jets(axis, ud, p, 2)[2],
            third=lambda p: _coord_radial_jets(axis, ud, p, 3)[3],
        )
    # X_{n+1} = (s - 1)/(s + 1) = 1 - 2/(1+s)
    ud = _inv_power_derivs(-2.0, 1.0, order=3)
    return ScalarField(
        eval=lambda p: 1.0 + _radial_scalar_jets(ud, p, 0)[0],
        grad=lambda p: _radial_scalar_jets(ud, p, 1)[1],
        hess=lambda p: _radial_scalar_jets(ud, p, 2)[2],
        third=lambda p: _radial_scalar_jets(ud, p, 3)[3],
    )


def trig_field(wavevec, phase=0.0, amplitude=1.0, kind="cos"):
    """amplitude * cos(k . x + phase) with closed-form partials of all orders."""
    k = np.asarray(wavevec, dtype=float)
    if kind == "sin":
        phase = phase - np.pi / 2.0

    def level(p, order):
        arg = float(k @ p) + phase + order * np.pi / 2.0
        return amplitude * np.cos(arg)

    return ScalarField(
        eval=lambda p: level(p, 0),
        grad=lambda p: level(p, 1) * k,
        hess=lambda p: level(p, 2) * np.outer(k, k),
        third=lambda p: level(p, 3) * np.einsum("a,b,c->abc", k, k, k),
    )


def random_spd_trig_tensor(n, seed=0, base_scale=1.0, wobble=0.2):
    """Random smooth SPD tensor field: constant SPD part plus entrywise waves.

    The constant part dominates the oscillation so positivity holds globally.
    """
    rng = np.random.default_rng(seed)
    L = rng.normal(size=(n, n)) * base_scale
    C = L @ L.T + n * base_scale ** 2 * np.eye(n)
    amp = wobble * base_scale ** 2 * rng.uniform(0.2, 1.0, size=(n, n))
    amp = 0.5 * (amp + amp.T)
    kvec = rng.integers(1, 3, size=(n, n, n)).astype(float)
    kvec = 0.5 * (kvec + kvec.transpose(1, 0, 2))
    ph = rng.uniform(0, 2 * np.pi, size=(n, n))
    ph = 0.5 * (ph + ph.T)

    def wave(p, order):
        arg = np.einsum("abc,c->ab", kvec, np.asarray(p, float)) + ph \
            + order * np.pi / 2.0
        return amp * np.cos(arg)

    def comp(p):
        return C + wave(p, 0)

    def dcomp(p):
        return np.einsum("ab,abc->cab", wave(p, 1), kvec)

    def d2comp(p):
        return np.einsum("ab,abc,abd->dcab", wave(p, 2), kvec, kvec)

    return SymmetricTensorField(comp, dcomp, d2comp, name="random-spd")


# ---------------------------------------------------------------------------
# spec-string parsing

def parse_manifold(spec):
    """Parse strings like 'torus2:L=6.2831853,perturb=sin' or 'sphere:n=4,K=1'."""
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    opts = {}
    if rest:
        for item in rest.split(","):
            if not item:
                continue
            key, _, val = item.partition("=")
            opts[key.strip()] = val.strip()
    try:
        if head.startswith("torus"):
            n = int(head[len("torus"):] or opts.get("n", 2))
            L = float(opts.get("L", 2.0 * np.pi))
            if opts.get("perturb") == "sin":
                eps = float(opts.get("eps", 0.1))
                return perturbed_torus(n=n, eps=eps)
            return flat_torus(n=n, lengths=np.full(n, L))
        if head == "sphere":
            return round_sphere(n=int(opts.get("n", 2)), K=float(opts.get("K", 1.0)))
    except (ValueError, TypeError) as exc:
        raise ConfigError("bad manifold spec %r: %s" % (spec, exc)) from exc
    raise ConfigError("unknown manifold spec %r" % spec)
