"""First nonzero eigenvalue of K u = mu M u, plus closed-form sphere spectra.

The singular pencil (constants span the kernel of K) is handled by
shift-inverted Lanczos on (K + eps*M)^{-1} M with a tiny regularization eps
and explicit M-orthogonal deflation of the constant mode.  Round spheres have
closed-form spectra for the Laplacian, the Schouten operator, and the
linearized operator L1 of an umbilic geodesic sphere, used as oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (FactorizationFailure, NoConvergence, SchoutenUndefined)


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray   # ascending, smallest NONZERO first
    eigenvectors: np.ndarray  # columns, M-orthonormal
    residuals: np.ndarray     # ||K u - mu M u|| / ||u||
    diagnostics: Dict[str, object]

    @property
    def mu1(self):
        return float(self.eigenvalues[0])


def smallest_nonzero(op, k=1, tol=1e-9, seed=42):
    """k smallest nonzero eigenvalues of K u = mu M u.

    K must be PSD with constants spanning its kernel and M SPD.  Constants
    are deflated by projecting the Lanczos iterates M-orthogonally to 1.
    """
    K, M = op.K.tocsc(), op.M.tocsc()
    N = K.shape[0]
    scale = abs(K).sum() / max(1.0, abs(M).sum())
    eps = 1e-8 * scale

    ones = np.ones(N)
    m1 = M @ ones
    vol = float(ones @ m1)

    def deflate(x):
        return x - (float(m1 @ x) / vol) * ones

    rng = np.random.default_rng(seed)
    v0 = deflate(rng.standard_normal(N))
    want = min(k + 2, N - 2)
    try:
        mu, U = spla.eigsh(K, k=want, M=M, sigma=-eps, which="LM", v0=v0,
                           tol=min(tol, 1e-10), maxiter=5000)
    except spla.ArpackNoConvergence as exc:
        raise NoConvergence("Lanczos did not converge: %s" % exc,
                            eigenvalues=getattr(exc, "eigenvalues", None),
                            residuals=None) from exc
    except RuntimeError as exc:
        raise FactorizationFailure(str(exc)) from exc
    idx = np.argsort(mu)
    mu, U = mu[idx], U[:, idx]
    # drop the constant mode: dominant M-overlap with 1, eigenvalue near 0
    overlap = np.abs(m1 @ U) / (math.sqrt(vol)
                                * np.sqrt(np.einsum("ij,ij->j", U, M @ U)))
    keep = ~((overlap > 0.9) & (np.abs(mu) < 1e-6 * max(scale, 1.0)))
    mu, U = mu[keep], U[:, keep]
    if mu.size < k:
        raise NoConvergence("only %d nonzero eigenvalues found" % mu.size,
                            eigenvalues=mu, residuals=None)
    mu, U = mu[:k], U[:, :k]

    # M-orthonormalize and measure residuals
    for j in range(k):
        u = U[:, j]
        for i in range(j):
            u = u - float(U[:, i] @ (M @ u)) * U[:, i]
        nrm = math.sqrt(float(u @ (M @ u)))
        U[:, j] = u / nrm
    res = np.array([np.linalg.norm(K @ U[:, j] - mu[j] * (M @ U[:, j]))
                    / np.linalg.norm(U[:, j]) for j in range(k)])
    # Rayleigh-quotient refinement of the reported values
    mu = np.array([float(U[:, j] @ (K @ U[:, j])) for j in range(k)])
    idx = np.argsort(mu)
    mu, U, res = mu[idx], U[:, idx], res[idx]
    diag = {"shift": eps, "k": k, "seed": seed, "size": N,
            "record": dict(op.record)}
    return EigenResult(eigenvalues=mu, eigenvectors=U, residuals=res,
                       diagnostics=diag)


OP_LAPLACIAN = "Laplacian"
OP_SCHOUTEN = "Schouten"
OP_NEWTON_L1 = "NewtonL1"


def analytic_sphere_spectrum(n, K, operator=OP_LAPLACIAN, modes=3,
                             alpha=1.0, kappa=0.0):
    """Closed-form eigenvalues (k = 1..modes) on the round sphere.

    Laplacian: k(k+n-1) K.  Schouten (n >= 3): the round-sphere Schouten
    tensor is ((n-2)K/2) g, so eigenvalues scale by that factor.  NewtonL1:
    the umbilic geodesic sphere with principal curvature alpha in the ambient
    space form of curvature kappa has P1 = (n-1) alpha I and intrinsic
    curvature alpha^2 + kappa, giving (n-1) alpha k(k+n-1)(alpha^2 + kappa).
    """
    ks = np.arange(1, modes + 1, dtype=float)
    if operator == OP_LAPLACIAN:
        return ks * (ks + n - 1) * K
    if operator == OP_SCHOUTEN:
        if n < 3:
            raise SchoutenUndefined("Schouten operator undefined for n = 2")
        return ((n - 2.0) * K / 2.0) * ks * (ks + n - 1) * K
    if operator == OP_NEWTON_L1:
        lam = ks * (ks + n - 1) * (alpha ** 2 + kappa)
        return (n - 1.0) * alpha * lam
    raise ValueError("unknown operator %r" % operator)


def eigenpair_pairing_defect(op_phi, result, op_g, mode=0):
    """Normalized defect of the discrete pairing identity.

    For an eigenpair (mu, u) of the phi-pencil, the continuum identity
    int <phi(grad f), grad(Delta f)> = -mu int |grad f|^2 discretizes to
    u^T K_phi M^{-1} K_g u = mu u^T K_g u.
    """
    u = result.eigenvectors[:, mode]
    mu = float(result.eigenvalues[mode])
    Kg, Kp, M = op_g.K, op_phi.K, op_phi.M.tocsc()
    w = spla.spsolve(M, Kg @ u)
    lhs = float((Kp @ u) @ w)
    rhs = mu * float(u @ (Kg @ u))
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)
