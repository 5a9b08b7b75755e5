"""Triangle meshes, periodic grids, and piecewise-linear assembly.

The weak form of box(f) = sum phi_ij f_ij for divergence-free phi is
int <phi(grad psi_a), grad psi_b> dM, so the generalized eigenproblem reads
K u = mu M u with K the phi-weighted stiffness and M the consistent mass.
Coefficients are taken constant per face/cell (barycentric quadrature); for
phi = g the mesh stiffness reproduces the classical cotangent weights, which
serves as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (ConfigError, DegenerateElement, NonSymmetricCoefficient)

MIN_ANGLE_DEG = 1.0
MIN_AREA_FRACTION = 1e-12


# ---------------------------------------------------------------------------
# surface meshes

@dataclass(frozen=True)
class SurfaceMesh:
    """Closed orientable triangle mesh in R^3."""

    vertices: np.ndarray  # (V, 3)
    faces: np.ndarray     # (F, 3) int

    def __post_init__(self):
        object.__setattr__(self, "vertices",
                           np.ascontiguousarray(self.vertices, dtype=float))
        object.__setattr__(self, "faces",
                           np.ascontiguousarray(self.faces, dtype=np.int64))
        self.validate()

    # -- derived quantities ------------------------------------------------
    @property
    def num_vertices(self):
        return self.vertices.shape[0]

    @property
    def num_faces(self):
        return self.faces.shape[0]

    @property
    def num_edges(self):
        return 3 * self.num_faces // 2

    @property
    def euler_characteristic(self):
        return self.num_vertices - self.num_edges + self.num_faces

    @property
    def genus(self):
        return (2 - self.euler_characteristic) // 2

    def face_corners(self):
        return self.vertices[self.faces]  # (F, 3, 3)

    def face_areas(self):
        P = self.face_corners()
        c = np.cross(P[:, 1] - P[:, 0], P[:, 2] - P[:, 0])
        return 0.5 * np.linalg.norm(c, axis=1)

    def face_barycenters(self):
        return self.face_corners().mean(axis=1)

    def total_area(self):
        return float(self.face_areas().sum())

    def mean_edge_length(self):
        P = self.face_corners()
        e = np.concatenate([P[:, 1] - P[:, 0], P[:, 2] - P[:, 1],
                            P[:, 0] - P[:, 2]])
        return float(np.mean(np.linalg.norm(e, axis=1)))

    # -- validation --------------------------------------------------------
    def validate(self):
        F = self.faces
        if F.ndim != 2 or F.shape[1] != 3:
            raise DegenerateElement("faces must be index triples")
        edges: Dict[Tuple[int, int], int] = {}
        directed = set()
        for tri in F:
            for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                a, b = int(a), int(b)
                if (a, b) in directed:
                    raise DegenerateElement(
                        "edge (%d,%d) repeated with same orientation "
                        "(mesh not orientable or faces duplicated)" % (a, b))
                directed.add((a, b))
                key = (min(a, b), max(a, b))
                edges[key] = edges.get(key, 0) + 1
        bad = [e for e, cnt in edges.items() if cnt != 2]
        if bad:
            raise DegenerateElement("mesh not closed: edge %r on %d face(s)"
                                    % (bad[0], edges[bad[0]]))
        areas = self.face_areas()
        mean_area = float(areas.mean())
        if np.min(areas) < MIN_AREA_FRACTION * mean_area:
            raise DegenerateElement("face area %g below %g of mean"
                                    % (np.min(areas), MIN_AREA_FRACTION))
        P = self.face_corners()
        for k in range(3):
            u = P[:, (k + 1) % 3] - P[:, k]
            v = P[:, (k + 2) % 3] - P[:, k]
            cosang = np.einsum("fi,fi->f", u, v) / (
                np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
            ang = np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))
            if np.min(ang) < MIN_ANGLE_DEG:
                raise DegenerateElement("min triangle angle %.3f deg < %g deg"
                                        % (np.min(ang), MIN_ANGLE_DEG))


def icosphere(subdiv=0, radius=1.0):
    """Icosahedron subdivided ``subdiv`` times, projected to the sphere.

    V = 10 * 4^subdiv + 2.
    """
    if subdiv < 0:
        raise ConfigError("subdiv must be >= 0")
    t = (1.0 + math.sqrt(5.0)) / 2.0
    verts = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [v for v in verts]
    for _ in range(subdiv):
        cache: Dict[Tuple[int, int], int] = {}

        def midpoint(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                m /= np.linalg.norm(m)
                verts.append(m)
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    V = radius * np.asarray(verts)
    return SurfaceMesh(vertices=V, faces=np.asarray(faces))


def scaled_mesh(mesh, scale):
    """Apply a per-axis scaling (e.g. sphere -> ellipsoid)."""
    return SurfaceMesh(vertices=mesh.vertices * np.asarray(scale, float),
                       faces=mesh.faces)


# ---------------------------------------------------------------------------
# periodic grids

@dataclass(frozen=True)
class PeriodicGrid:
    """Tensor-product periodic grid on the box prod [0, L_i)."""

    lengths: np.ndarray            # (n,)
    shape: Tuple[int, ...]         # nodes per axis
    metric: Optional[Callable[[np.ndarray], np.ndarray]] = None  # p -> (n,n)

    def __post_init__(self):
        object.__setattr__(self, "lengths",
                           np.asarray(self.lengths, dtype=float))
        if len(self.shape) != self.lengths.size:
            raise ConfigError("grid shape/lengths dimension mismatch")
        if any(s < 3 for s in self.shape):
            raise ConfigError("need >= 3 nodes per axis")

    @property
    def dim(self):
        return self.lengths.size

    @property
    def steps(self):
        return self.lengths / np.asarray(self.shape, dtype=float)

    @property
    def num_nodes(self):
        return int(np.prod(self.shape))

    def node_points(self):
        axes = [np.arange(s) * h for s, h in zip(self.shape, self.steps)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def node_index(self, multi):
        idx = 0
        for k, s in zip(multi, self.shape):
            idx = idx * s + (k % s)
        return idx

    def metric_at(self, p):
        if self.metric is None:
            return np.eye(self.dim)
        return np.asarray(self.metric(p), dtype=float)


# ---------------------------------------------------------------------------
# assembled operators

@dataclass(frozen=True)
class AssembledOperator:
    K: sp.csr_matrix
    M: sp.csr_matrix
    record: Dict[str, object] = field(default_factory=dict)

    @property
    def size(self):
        return self.K.shape[0]


def _check_sym_coeff(phi, where, tol=1e-10):
    phi = np.asarray(phi, dtype=float)
    scale = max(1.0, float(np.max(np.abs(phi))))
    if np.max(np.abs(phi - phi.T)) > tol * scale:
        raise NonSymmetricCoefficient("coefficient not symmetric at %s" % where)
    return 0.5 * (phi + phi.T)


def _triangle_frame(p0, p1, p2):
    e1 = p1 - p0
    e2 = p2 - p0
    nrm = np.cross(e1, e2)
    area = 0.5 * np.linalg.norm(nrm)
    t1 = e1 / np.linalg.norm(e1)
    t2 = e2 - (e2 @ t1) * t1
    t2 /= np.linalg.norm(t2)
    B = np.stack([t1, t2], axis=1)  # (3, 2)
    # local 2D vertex coordinates
    v = np.array([[0.0, 0.0], [e1 @ t1, e1 @ t2], [e2 @ t1, e2 @ t2]])
    return B, v, area


def _hat_gradients(v, area):
    """2D gradients of the three barycentric hat functions."""
    g = np.empty((3, 2))
    for i in range(3):
        a, b = v[(i + 1) % 3], v[(i + 2) % 3]
        edge = b - a
        # rotate the opposite edge by 90 degrees; normalize so grad.(v_i-a)=1
        perp = np.array([-edge[1], edge[0]])
        g[i] = perp / (perp @ (v[i] - a))
    return g


def assemble(domain, phi_provider, quadrature=1):
    """Assemble stiffness and mass for a SurfaceMesh or PeriodicGrid.

    The provider is called once per element:
      mesh:  phi_provider(face_idx, barycenter, B) -> 2x2 symmetric matrix in
             the face's orthonormal tangent basis B (columns in R^3);
      grid:  phi_provider(cell_multi_index, center) -> n x n symmetric
             coordinate components of phi.
    """
    if isinstance(domain, SurfaceMesh):
        return _assemble_mesh(domain, phi_provider, quadrature)
    if isinstance(domain, PeriodicGrid):
        return _assemble_grid(domain, phi_provider)
    raise ConfigError("cannot assemble on %r" % type(domain).__name__)


_MASS_TRI = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0
_TRI_QPTS3 = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])


def _assemble_mesh(mesh, phi_provider, quadrature):
    if quadrature not in (1, 3):
        raise ConfigError("quadrature must be 1 (barycentric) or 3 (midpoints)")
    V, F = mesh.vertices, mesh.faces
    nv = mesh.num_vertices
    rows, cols, kvals, mvals = [], [], [], []
    for fidx, tri in enumerate(F):
        p = V[tri]
        B, v, area = _triangle_frame(p[0], p[1], p[2])
        if area <= 0.0:
            raise DegenerateElement("zero-area face %d" % fidx)
        g = _hat_gradients(v, area)
        if quadrature == 1:
            phi = _check_sym_coeff(phi_provider(fidx, p.mean(axis=0), B),
                                   "face %d" % fidx)
        else:
            acc = np.zeros((2, 2))
            for w in _TRI_QPTS3:
                q = w @ p
                acc += _check_sym_coeff(phi_provider(fidx, q, B),
                                        "face %d" % fidx)
            phi = acc / 3.0
        Ke = area * (g @ phi @ g.T)
        Ke = 0.5 * (Ke + Ke.T)
        Me = area * _MASS_TRI
        for i in range(3):
            for j in range(3):
                rows.append(int(tri[i]))
                cols.append(int(tri[j]))
                kvals.append(Ke[i, j])
                mvals.append(Me[i, j])
    K = sp.coo_matrix((kvals, (rows, cols)), shape=(nv, nv)).tocsr()
    M = sp.coo_matrix((mvals, (rows, cols)), shape=(nv, nv)).tocsr()
    _post_checks(K)
    rec = {"domain": "SurfaceMesh", "vertices": nv, "faces": mesh.num_faces,
           "quadrature": quadrature,
           "phi": getattr(phi_provider, "label", "custom")}
    return AssembledOperator(K=K, M=M, record=rec)


def _grid_element_tensors(h):
    """Per-axis 1D element matrices and their tensor products.

    Returns T with T[a, b] the (2^n, 2^n) element matrix of
    int d_a N_I d_b N_J over one cell (unit coefficient), plus the element
    mass matrix.
    """
    n = len(h)
    M1 = [np.array([[hk / 3.0, hk / 6.0], [hk / 6.0, hk / 3.0]]) for hk in h]
    S1 = [np.array([[1.0, -1.0], [-1.0, 1.0]]) / hk for hk in h]
    D1 = np.array([[-0.5, 0.5], [-0.5, 0.5]])  # int N_i N_j' dt

    def tensor(mats):
        out = np.array([[1.0]])
        for m in mats:
            out = np.kron(out, m)
        return out

    T = np.empty((n, n, 2 ** n, 2 ** n))
    for a in range(n):
        for b in range(n):
            mats = []
            for ax in range(n):
                if ax == a and ax == b:
                    mats.append(S1[ax])
                elif ax == a:
                    mats.append(D1.T)   # derivative on the first index
                elif ax == b:
                    mats.append(D1)     # derivative on the second index
                else:
                    mats.append(M1[ax])
            T[a, b] = tensor(mats)
    Me = tensor(M1)
    return T, Me


def _assemble_grid(grid, phi_provider):
    n = grid.dim
    h = grid.steps
    T, Me_unit = _grid_element_tensors(h)
    shape = grid.shape
    nloc = 2 ** n
    offsets = [tuple((k >> (n - 1 - ax)) & 1 for ax in range(n))
               for k in range(nloc)]
    rows, cols, kvals, mvals = [], [], [], []
    for cell in np.ndindex(*shape):
        center = (np.asarray(cell, dtype=float) + 0.5) * h
        gmat = grid.metric_at(center)
        w = np.linalg.eigvalsh(gmat)
        if w[0] <= 0.0:
            raise DegenerateElement("grid metric not SPD at %r" % (center,))
        phi = _check_sym_coeff(phi_provider(cell, center), "cell %r" % (cell,))
        vol = math.sqrt(float(np.linalg.det(gmat)))
        ginv = np.linalg.inv(gmat)
        W = vol * (ginv @ phi @ ginv)  # raised-index coefficient, weighted
        Ke = np.einsum("ab,abIJ->IJ", W, T)
        Ke = 0.5 * (Ke + Ke.T)
        Me = vol * Me_unit
        nodes = [grid.node_index(tuple(c + o for c, o in zip(cell, off)))
                 for off in offsets]
        for i in range(nloc):
            for j in range(nloc):
                rows.append(nodes[i])
                cols.append(nodes[j])
                kvals.append(Ke[i, j])
                mvals.append(Me[i, j])
    N = grid.num_nodes
    K = sp.coo_matrix((kvals, (rows, cols)), shape=(N, N)).tocsr()
    M = sp.coo_matrix((mvals, (rows, cols)), shape=(N, N)).tocsr()
    _post_checks(K)
    rec = {"domain": "PeriodicGrid", "shape": tuple(shape),
           "phi": getattr(phi_provider, "label", "custom")}
    return AssembledOperator(K=K, M=M, record=rec)


def _post_checks(K):
    asym = (K - K.T).tocoo()
    if asym.nnz and np.max(np.abs(asym.data)) > 0.0:
        raise NonSymmetricCoefficient("assembled stiffness not symmetric")
    ones = np.ones(K.shape[0])
    rs = K @ ones
    row_norm = np.maximum(np.asarray(abs(K).sum(axis=1)).ravel(), 1e-300)
    if np.max(np.abs(rs) / row_norm) > 1e-10:
        raise DegenerateElement("stiffness row sums do not vanish")


# ---------------------------------------------------------------------------
# coefficient providers

def _labelled(fn, label):
    fn.label = label
    return fn


def metric_coefficient(scale=1.0):
    """phi = scale * g: identity in any orthonormal tangent basis."""
    s = float(scale)

    def provider(_idx, _q, *rest):
        dim = 2 if rest else None
        if rest:
            return s * np.eye(2)
        return s * np.eye(len(np.atleast_1d(_q)))

    return _labelled(provider, "metric" if s == 1.0 else "metric*%g" % s)


def grid_metric_coefficient(grid, scale=1.0):
    """phi = scale * g in coordinates for a (possibly curved) grid metric."""
    s = float(scale)

    def provider(_cell, center):
        return s * grid.metric_at(center)

    return _labelled(provider, "metric" if s == 1.0 else "metric*%g" % s)


def ellipsoid_newton1_coefficient(semiaxes):
    """Per-face P1 = H I - A of the ellipsoid, read at projected barycenters.

    Face barycenters are radially mapped onto the ellipsoid by scaling the
    unit-ball direction of (x/a1, y/a2, z/c); the 3x3 tangent-plane shape
    operator is restricted to the face basis B.
    """
    from .hypersurface import ellipsoid_shape_operator
    d = np.asarray(semiaxes, dtype=float)

    def provider(_fidx, q, B):
        w = q / d
        nw = np.linalg.norm(w)
        if nw == 0.0:
            raise DegenerateElement("face barycenter at the origin")
        p = (w / nw) * d
        A3, nu, Bs = ellipsoid_shape_operator(p, d)
        H = float(np.trace(A3))
        P1s = Bs.T @ (H * (np.eye(3) - np.outer(nu, nu)) - A3) @ Bs
        # exact in-plane rotation aligning the face basis with the surface
        # tangent basis (umbilic surfaces then restrict to alpha*I exactly)
        U, _, Vt = np.linalg.svd(Bs.T @ B)
        R = U @ Vt
        return R.T @ P1s @ R

    return _labelled(provider, "newton1:ellipsoid:%g,%g,%g" % tuple(d))


def mesh_newton1_coefficient(mesh):
    """Discrete P1 from angle-weighted vertex normals (OFF input path).

    Per face, the shape operator is the least-squares fit of the normal
    differences along two edges; first-order accurate, intended for meshes
    with no analytic parent surface.
    """
    vn = vertex_normals(mesh)

    def provider(fidx, _q, B):
        tri = mesh.faces[fidx]
        p = mesh.vertices[tri]
        n = vn[tri]
        E = np.stack([p[1] - p[0], p[2] - p[0]])    # (2, 3)
        dN = np.stack([n[1] - n[0], n[2] - n[0]])   # (2, 3)
        Et = E @ B      # (2, 2) edge coords
        Nt = dN @ B     # (2, 2)
        A = np.linalg.solve(Et, Nt)
        A = 0.5 * (A + A.T)
        return float(np.trace(A)) * np.eye(2) - A

    return _labelled(provider, "newton1:discrete")


def vertex_normals(mesh):
    """Angle-weighted average of face normals, oriented outward by majority."""
    V, F = mesh.vertices, mesh.faces
    out = np.zeros_like(V)
    for tri in F:
        p = V[tri]
        nrm = np.cross(p[1] - p[0], p[2] - p[0])
        ln = np.linalg.norm(nrm)
        if ln == 0.0:
            continue
        nrm = nrm / ln
        for k in range(3):
            u = p[(k + 1) % 3] - p[k]
            v = p[(k + 2) % 3] - p[k]
            ang = math.atan2(np.linalg.norm(np.cross(u, v)), float(u @ v))
            out[tri[k]] += ang * nrm
    out /= np.maximum(np.linalg.norm(out, axis=1, keepdims=True), 1e-300)
    ctr = V - V.mean(axis=0)
    if np.sum(np.einsum("vi,vi->v", out, ctr) < 0.0) > mesh.num_vertices // 2:
        out = -out
    return out


def nondivergence_free_coefficient(amplitude=1.0):
    """Smooth SPD phi with nonzero divergence (negative control)."""
    a = float(amplitude)

    def provider(_idx, q, *rest):
        q = np.atleast_1d(np.asarray(q, dtype=float))
        dim = 2 if rest else q.size
        phi = np.eye(dim)
        phi[0, 0] += 0.5 * a * (1.0 + math.sin(q[0]))
        if dim > 1:
            phi[0, 1] = phi[1, 0] = 0.25 * a * math.cos(q[0] + q[-1])
        return phi

    return _labelled(provider, "nondivfree")


# ---------------------------------------------------------------------------
# cotangent oracle

def cotangent_stiffness(mesh):
    """Classical cotangent-weight stiffness matrix (independent route)."""
    V, F = mesh.vertices, mesh.faces
    nv = mesh.num_vertices
    rows, cols, vals = [], [], []
    for tri in F:
        p = V[tri]
        for k in range(3):
            i, j, o = tri[(k + 1) % 3], tri[(k + 2) % 3], tri[k]
            u = p[(k + 1) % 3] - p[k]
            v = p[(k + 2) % 3] - p[k]
            cot = float(u @ v) / np.linalg.norm(np.cross(u, v))
            w = 0.5 * cot
            rows += [i, j, i, j]
            cols += [j, i, i, j]
            vals += [-w, -w, w, w]
    return sp.coo_matrix((vals, (rows, cols)), shape=(nv, nv)).tocsr()


# ---------------------------------------------------------------------------
# pointwise vs weak consistency

def domain_points(domain):
    if isinstance(domain, SurfaceMesh):
        return domain.vertices
    if isinstance(domain, PeriodicGrid):
        return domain.node_points()
    raise ConfigError("unknown domain %r" % type(domain).__name__)


def domain_resolution(domain):
    """Representative mesh size h."""
    if isinstance(domain, SurfaceMesh):
        return domain.mean_edge_length()
    return float(np.max(domain.steps))


def pointwise_vs_weak_consistency(domain, phi_provider, f_at, boxf_at):
    """Compare M^{-1} K f against -box(f) at the nodes.

    For divergence-free phi the weak operator is the negative of box;
    returns {'h', 'max_error', 'rel_error'}.
    """
    op = assemble(domain, phi_provider)
    pts = domain_points(domain)
    f = np.array([f_at(p) for p in pts])
    b = np.array([boxf_at(p) for p in pts])
    w = spla.spsolve(op.M.tocsc(), op.K @ f)
    e = w + b
    err = float(np.max(np.abs(e)))
    vol = float(np.ones_like(e) @ (op.M @ np.ones_like(e)))
    rms = math.sqrt(max(float(e @ (op.M @ e)), 0.0) / vol)
    scale = max(1.0, float(np.max(np.abs(b))))
    return {"h": domain_resolution(domain), "max_error": err,
            "rms_error": rms, "median_error": float(np.median(np.abs(e))),
            "rel_error": err / scale, "size": op.size}


def observed_order(reports, key="max_error"):
    """Least-squares slope of log(error) vs log(h) over refinement levels."""
    hs = np.log([r["h"] for r in reports])
    es = np.log([max(r[key], 1e-300) for r in reports])
    A = np.stack([hs, np.ones_like(hs)], axis=1)
    slope, _ = np.linalg.lstsq(A, es, rcond=None)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# I/O

def read_off(path):
    with open(path, "r") as fh:
        tokens = []
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                tokens.extend(line.split())
    if not tokens or tokens[0] != "OFF":
        raise ConfigError("%s: missing OFF header" % path)
    it = iter(tokens[1:])
    try:
        nv, nf, _ne = int(next(it)), int(next(it)), int(next(it))
        verts = np.array([[float(next(it)) for _ in range(3)]
                          for _ in range(nv)])
        faces = []
        for _ in range(nf):
            cnt = int(next(it))
            if cnt != 3:
                raise ConfigError("%s: only triangle faces supported" % path)
            faces.append([int(next(it)) for _ in range(3)])
    except StopIteration:
        raise ConfigError("%s: truncated OFF file" % path)
    return SurfaceMesh(vertices=verts, faces=np.asarray(faces))


def write_off(mesh, path):
    with open(path, "w") as fh:
        fh.write("OFF\n%d %d %d\n" % (mesh.num_vertices, mesh.num_faces,
                                      mesh.num_edges))
        for v in mesh.vertices:
            fh.write("%.17g %.17g %.17g\n" % tuple(v))
        for f in mesh.faces:
            fh.write("3 %d %d %d\n" % tuple(f))


def export_matrix(mat, path):
    """Coordinate text format: `i j value`, 1-based indices, sorted."""
    coo = sp.coo_matrix(mat)
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        for k in order:
            fh.write("%d %d %.17g\n" % (coo.row[k] + 1, coo.col[k] + 1,
                                        coo.data[k]))
