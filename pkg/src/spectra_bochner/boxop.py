"""The operator box(f) = sum_ij phi_ij f_ij and its Bochner-type identity.

Named instances: Laplacian (phi = g), Schouten (phi = S, n >= 3), NewtonL1
(phi = P1 of an attached hypersurface) and Custom.  All pointwise evaluations
happen in the deterministic orthonormal frame of the geometry module; the two
divergence-form groups of the identity are expanded by the product rule, so
the evaluation needs third derivatives of f and second covariant derivatives
of phi, nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from . import geometry as geom
from .errors import InsufficientSmoothness, NotPositiveDefinite

NAME_LAPLACIAN = "Laplacian"
NAME_SCHOUTEN = "Schouten"
NAME_NEWTON_L1 = "NewtonL1"
NAME_CUSTOM = "Custom"


@dataclass(frozen=True)
class BoxOperator:
    phi: geom.SymmetricTensorField
    manifold: geom.ChartManifold
    name: str = NAME_CUSTOM
    chart_idx: int = 0

    @property
    def chart(self):
        return self.manifold.chart(self.chart_idx)


def laplacian_box(m):
    return BoxOperator(phi=geom.metric_field(m), manifold=m, name=NAME_LAPLACIAN)


def schouten_box(m, fd_step=1e-4):
    return BoxOperator(phi=geom.schouten_tensor_field(m, fd_step),
                       manifold=m, name=NAME_SCHOUTEN)


@dataclass(frozen=True)
class BochnerResidual:
    """Term-by-term evaluation of the generalized Bochner identity."""

    c: float
    lhs: float
    rhs_terms: Dict[str, float]
    residual: float

    @property
    def rhs(self):
        return sum(self.rhs_terms.values())


def apply(box, f, p):
    """box(f)(p) = tr(phi Hess f) in the orthonormal frame."""
    _, _, fij = geom.scalar_jets(box.chart, f, p, 2)
    phi_ij = geom.tensor_jets(box.chart, box.phi, p, 0)[0]
    return float(np.sum(phi_ij * fij))


def divergence_form_defect(box, f, p, fd_step=1e-5):
    """|box(f) - (div(phi grad f) - <div phi, grad f>)| at p.

    The divergence of the composite vector field phi(grad f) is taken by
    central differences of the composite, so the two routes are independent.
    """
    chart = box.chart
    p = np.asarray(p, dtype=float)

    def vec(q):
        g = chart.metric.comp(q)
        g_inv = np.linalg.inv(g)
        _, df = f.partials(q, 1)
        ph = box.phi.comp(q)
        return g_inv @ ph @ g_inv @ df  # coordinate components of phi(grad f)

    g, dg = geom.metric_jets(chart, p, 1)
    g_inv = np.linalg.inv(g)
    Gamma = geom.christoffel(g_inv, dg)
    dV = geom.fd_derivative(vec, p, fd_step)
    div_composite = float(np.trace(dV) + np.einsum("aab,b->", Gamma, vec(p)))

    _, fi = geom.scalar_jets(chart, f, p, 1)
    divphi = geom.tensor_divergence(box.phi, box.manifold, p, box.chart_idx)
    return abs(apply(box, f, p) - (div_composite - float(divphi @ fi)))


def bochner_residual(box, f, p, c):
    """Evaluate every term of the generalized Bochner identity at p.

    The identity holds for every real c; the residual is |lhs - sum(rhs)|.
    Requires third partials of f and second partials of phi.
    """
    chart = box.chart
    try:
        _, fi, fij, f3 = geom.scalar_jets(chart, f, p, 3)
        ph, p3, p4 = geom.tensor_jets(chart, box.phi, p, 2)
    except (TypeError, ValueError) as exc:
        raise InsufficientSmoothness(str(exc)) from exc
    Rf = geom.curvature_at(box.manifold, p).riemann
    ric = np.einsum("mkjk->mj", Rf)

    # lhs: 0.5 box(|grad f|^2), Hessian of |grad f|^2 expanded by Leibniz
    u_jk = 2.0 * (np.einsum("ij,ik->jk", fij, fij)
                  + np.einsum("i,ijk->jk", fi, f3))
    lhs = 0.5 * float(np.sum(ph * u_jk))

    grad_box = np.einsum("ijk,ij->k", p3, fij) + np.einsum("ij,ijk->k", ph, f3)
    grad_lap = np.einsum("iik->k", f3)

    terms = {
        "grad_f_grad_boxf": float(fi @ grad_box),
        "phi_gradf_grad_lapf": float(np.einsum("kj,j,k->", ph, fi, grad_lap)),
        "hessian_square": 2.0 * float(np.einsum("ij,jk,ki->", ph, fij, fij)),
        "curvature": 2.0 * float(np.einsum("i,j,im,mj->", fi, fi, ph, ric)),
        "c_trace_hessian": c * float(np.einsum("mmij,i,j->", p4, fi, fi)),
        "laplacian_phi": -float(np.einsum("i,j,ijkk->", fi, fi, p4)),
        "divergence_difference": float(
            np.einsum("i,j,ikkj->", fi, fi, p4)
            - c * np.einsum("i,j,kkij->", fi, fi, p4)),
        # div-form group 1: sum_k ( f_i f_j (phi_jik - phi_jki) )_k
        "divform_codazzi": float(
            np.einsum("ik,j,jik->", fij, fi, p3 - p3.transpose(0, 2, 1))
            + np.einsum("i,jk,jik->", fi, fij, p3 - p3.transpose(0, 2, 1))
            + np.einsum("i,j,jikk->", fi, fi, p4)
            - np.einsum("i,j,jkik->", fi, fi, p4)),
        # div-form group 2: -sum_k ( f_j phi_ij f_ik )_k
        "divform_flux": -float(
            np.einsum("jk,ij,ik->", fij, ph, fij)
            + np.einsum("j,ijk,ik->", fi, p3, fij)
            + np.einsum("j,ij,ikk->", fi, ph, f3)),
    }
    rhs = sum(terms.values())
    return BochnerResidual(c=float(c), lhs=lhs, rhs_terms=terms,
                           residual=abs(lhs - rhs))


def hessian_trace_defect(box, f, p):
    """sum phi_ij f_jk f_ki - (box f)^2 / tr(phi); nonnegative when phi > 0."""
    chart = box.chart
    _, _, fij = geom.scalar_jets(chart, f, p, 2)
    ph = geom.tensor_jets(chart, box.phi, p, 0)[0]
    w = np.linalg.eigvalsh(ph)
    if w[0] <= 0.0:
        raise NotPositiveDefinite("phi not positive definite at %r (min eig %g)"
                                  % (p, w[0]))
    quad = float(np.einsum("ij,jk,ki->", ph, fij, fij))
    boxf = float(np.sum(ph * fij))
    return quad - boxf ** 2 / float(np.trace(ph))
