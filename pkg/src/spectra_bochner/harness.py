"""Property-test oracles and the named verification suites.

Trial streams are driven by numpy's default_rng (PCG64), fully determined by
the seed recorded in every report.  The two pointwise inequalities exercised:

* trace inequality: tr(A^2 B) >= (tr AB)^2 / tr B for symmetric A and SPD B,
  equality iff A is a multiple of the identity;
* the cubic-polynomial bound: if 0 < alpha I <= A <= a alpha I then every
  diagonal entry of Q(A) (see hypersurface.q_polynomial) is at least
  2(n-1) alpha^3 (n - a^2) + 2 kappa (n-1)^2 alpha   (kappa > 0)
  or the a-weighted variant 2 kappa (n-1)^2 a alpha  (kappa <= 0).
"""

from __future__ import annotations

import configparser
import json
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import bounds as bd
from . import boxop
from . import discretize as dz
from . import geometry as geom
from . import hypersurface as hyp
from . import spectral as spec
from .errors import ConfigError, SpectraError, SuiteFailure

GENERATOR_NAME = "numpy.default_rng (PCG64)"

EXIT_PASS = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


@dataclass(frozen=True)
class TrialConfig:
    trials: int = 100_000
    dim_lo: int = 2
    dim_hi: int = 8
    seed: int = 42
    eig_lo: float = 0.1
    eig_hi: float = 10.0


# ---------------------------------------------------------------------------
# trace inequality trials

def newton_inequality_trials(cfg=TrialConfig()):
    """tr(A^2 B) - (tr AB)^2 / tr B over random (A, B) pairs.

    Defects are normalized by tr B; violations counted below -1e-10.  The
    equality detector asserts A ~ (tr AB / tr B) I whenever the normalized
    defect drops below 1e-10; false positives are counted (must stay zero).
    """
    rng = np.random.default_rng(cfg.seed)
    dims = rng.integers(cfg.dim_lo, cfg.dim_hi + 1, size=cfg.trials)
    violations = 0
    worst = np.inf
    equality_hits = 0
    false_positives = 0
    for n in dims:
        n = int(n)
        A = rng.uniform(-1.0, 1.0, size=(n, n))
        A = 0.5 * (A + A.T)
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        lam = rng.uniform(cfg.eig_lo, cfg.eig_hi, size=n)
        B = (Q * lam) @ Q.T
        trB = float(np.trace(B))
        trAB = float(np.sum(A * B))
        defect = (float(np.sum((A @ A) * B)) - trAB ** 2 / trB) / trB
        worst = min(worst, defect)
        if defect < -1e-10:
            violations += 1
        if defect < 1e-10:
            equality_hits += 1
            alpha = trAB / trB
            if np.max(np.abs(A - alpha * np.eye(n))) > 1e-6:
                false_positives += 1
    return {"trials": cfg.trials, "violations": violations,
            "worst_defect": float(worst), "equality_hits": equality_hits,
            "equality_false_positives": false_positives,
            "seed": cfg.seed, "generator": GENERATOR_NAME}


def trace_inequality_defect(A, B):
    """Normalized defect for a single (A, B) pair (oracle for spot checks)."""
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    trB = float(np.trace(B))
    trAB = float(np.sum(A * B))
    return (float(np.sum((A @ A) * B)) - trAB ** 2 / trB) / trB


# ---------------------------------------------------------------------------
# Q(A) bound trials

def qa_lower_bound(n, alpha, a, kappa):
    if kappa > 0.0:
        ck = 2.0 * kappa * (n - 1.0) ** 2 * alpha
    else:
        ck = 2.0 * kappa * (n - 1.0) ** 2 * a * alpha
    return 2.0 * (n - 1.0) * alpha ** 3 * (n - a ** 2) + ck


def qa_bound_trials(cfg=TrialConfig(), kappa_sign="positive", planted=False):
    """Diagonal-A trials of the Q(A) lower bound.

    Q(A) is a polynomial in A, so it diagonalizes simultaneously with A and
    diagonal A covers the general case.  ``planted=True`` draws the
    eigenvalues outside the claimed [alpha, a*alpha] band (negative control;
    the suite must then report violations).
    """
    if kappa_sign not in ("positive", "negative"):
        raise ConfigError("kappa_sign must be 'positive' or 'negative'")
    rng = np.random.default_rng(cfg.seed + (0 if kappa_sign == "positive"
                                            else 1))
    violations = 0
    worst = np.inf
    for _ in range(cfg.trials):
        n = int(rng.integers(max(cfg.dim_lo, 2), cfg.dim_hi + 1))
        alpha = rng.uniform(0.2, 2.0)
        a = rng.uniform(1.0, 2.0)
        if kappa_sign == "positive":
            kappa = rng.uniform(1e-6, 2.0)
        else:
            kappa = rng.uniform(-2.0, 0.0)
        if planted:
            h = rng.uniform(0.5 * alpha, 2.0 * a * alpha, size=n)
        else:
            h = rng.uniform(alpha, a * alpha, size=n)
        Q = hyp.q_polynomial(np.diag(h), kappa)
        defect = (float(np.min(np.diag(Q)))
                  - qa_lower_bound(n, alpha, a, kappa)) / alpha ** 3
        worst = min(worst, defect)
        if defect < -1e-10:
            violations += 1
    return {"trials": cfg.trials, "kappa_sign": kappa_sign,
            "planted": planted, "violations": violations,
            "worst_defect": float(worst), "seed": cfg.seed,
            "generator": GENERATOR_NAME}


# ---------------------------------------------------------------------------
# identity suites

def _suite_manifolds():
    return [("flat-torus2", geom.flat_torus(2)),
            ("perturbed-torus2", geom.perturbed_torus(2)),
            ("sphere4", geom.round_sphere(4, 1.0))]


def _suite_phi(m, kind, seed=0):
    n = m.dim
    if kind == "metric":
        return geom.metric_field(m)
    if kind == "schouten":
        if n == 2:
            # dimension 2: ric = (R/2) g identically, so the formal Schouten
            # tensor vanishes; represent it exactly.
            return geom.scale_tensor_field(geom.metric_field(m), 0.0,
                                           name="schouten-formal")
        return geom.schouten_tensor_field(m)
    if kind == "random-spd":
        return geom.random_spd_trig_tensor(n, seed=seed)
    raise ConfigError("unknown phi kind %r" % kind)


def _suite_test_function(m, seed=0):
    rng = np.random.default_rng(seed)
    if m.atlas_kind == geom.ATLAS_ANALYTIC_SPHERE:
        axis = int(rng.integers(0, m.dim + 1))
        return geom.sphere_coordinate_field(m, axis)
    wave = rng.integers(1, 3, size=m.dim).astype(float)
    return geom.trig_field(wave, phase=float(rng.uniform(0, 2 * np.pi)))


def bochner_suite(samples=200, cvals=(0.0, 1.0, 7.3), seed=42):
    """Residuals of the generalized Bochner identity over the standard grid
    of (manifold, phi, c) cases; the identity is c-independent, so the
    per-point spread across c is reported alongside the raw residuals."""
    rng = np.random.default_rng(seed)
    cases = []
    for mname, m in _suite_manifolds():
        pts = m.sample_points(samples, rng)
        for kind in ("metric", "schouten", "random-spd"):
            phi = _suite_phi(m, kind, seed=seed)
            box = boxop.BoxOperator(phi=phi, manifold=m, name=kind)
            f = _suite_test_function(m, seed=seed + 1)
            max_res = 0.0
            max_spread = 0.0
            for p in pts:
                rs = [boxop.bochner_residual(box, f, p, c).residual
                      for c in cvals]
                max_res = max(max_res, max(rs))
                max_spread = max(max_spread, max(rs) - min(rs))
            cases.append({"manifold": mname, "phi": kind,
                          "max_residual": max_res,
                          "max_c_spread": max_spread,
                          "points": len(pts)})
    return {"cases": cases, "cvals": list(cvals), "seed": seed,
            "max_residual": max(c["max_residual"] for c in cases),
            "max_c_spread": max(c["max_c_spread"] for c in cases)}


def divergence_suite(samples=20, seed=7):
    """Divergence identities on the analytic manifolds plus div P1 = 0 on
    umbilic hypersurfaces in space forms."""
    out = {"manifolds": {}, "div_p1": {}}
    for mname, m in _suite_manifolds():
        out["manifolds"][mname] = geom.divergence_identity_suite(
            m, samples=samples, seed=seed)
    rng = np.random.default_rng(seed)
    for sname in ("sphere:r=1", "geodesic-sphere:kappa=1,alpha=2"):
        hs = hyp.parse_surface(sname)
        man = hyp.induced_metric_manifold(hs, 0)
        P1 = hyp.newton1_field(hs, 0)
        worst = 0.0
        for ci, u in hs.sample_points(samples, rng):
            if ci != 0:
                continue
            d = geom.tensor_divergence(P1, man, u)
            worst = max(worst, float(np.max(np.abs(d))))
        out["div_p1"][sname] = worst
    defects = []
    for rep in out["manifolds"].values():
        defects.extend(v for k, v in rep.items()
                       if k.startswith("item") and isinstance(v, float))
    defects.extend(out["div_p1"].values())
    out["max_defect"] = max(defects)
    return out


def fd_order_study(fd_steps=(2e-3, 1e-3), samples=10, seed=7):
    """Divergence-identity defects at two FD step sizes on the perturbed
    3-torus (in 2 dimensions the Einstein tensor vanishes identically, so
    3 dimensions are needed for a nontrivial truncation error); central
    differences halve the step -> defect ratio ~ 4."""
    reports = []
    for h in fd_steps:
        m = geom.perturbed_torus(3)
        rep = geom.divergence_identity_suite(m, samples=samples, seed=seed,
                                             fd_step=h)
        reports.append({"fd_step": h, "report": rep})
    key = "item2_div_einstein"
    r0, r1 = reports[0]["report"][key], reports[1]["report"][key]
    ratio = r0 / max(r1, 1e-300)
    order = float(np.log(ratio) / np.log(fd_steps[0] / fd_steps[1]))
    return {"levels": reports, "order_key": key, "observed_order": order}


def sphere_equality_suite():
    """Analytic equality cases of both bounds."""
    results = []
    for n in (4, 5, 6):
        mu = spec.analytic_sphere_spectrum(n, 1.0, spec.OP_SCHOUTEN, 1)[0]
        inp = bd.SchoutenBoundInput(n=n, R=float(n * (n - 1)), K0=1.0,
                                    L0=float(n - 1))
        rep = bd.compare(inp, mu)
        results.append({"case": "schouten-S%d" % n, "mu1": mu,
                        "bound": rep.bound_value, "verdict": rep.verdict})
    for (n, kappa, alpha) in [(2, 0.0, 1.0), (2, 0.0, 2.0), (3, 1.0, 1.0),
                              (2, -1.0, 2.0)]:
        mu = spec.analytic_sphere_spectrum(n, 1.0, spec.OP_NEWTON_L1, 1,
                                           alpha=alpha, kappa=kappa)[0]
        inp = bd.NewtonBoundInput(n=n, kappa=kappa, alpha=alpha, a=1.0,
                                  sigma=0.0)
        rep = bd.compare(inp, mu)
        results.append({"case": "newton-n%d-k%g-a%g" % (n, kappa, alpha),
                        "mu1": mu, "bound": rep.bound_value,
                        "verdict": rep.verdict})
    ok = all(r["verdict"] == bd.VERDICT_EQUALITY for r in results)
    return {"results": results, "all_equality": ok}


def ellipsoid_compare(semiaxes=(1.0, 1.0, 1.1), subdivs=(4, 5), seed=42,
                      sample_points=400):
    """FEM mu1(L1) on the ellipsoid against the bound from sampled
    pinching constants; refinement across the given subdivision levels."""
    ax = [float(v) for v in semiaxes]
    surf = hyp.ellipsoid_surface(*ax)
    pc = hyp.pinching_constants(surf, geom.SamplePlan(points=sample_points,
                                                      seed=seed))
    inp = bd.NewtonBoundInput(n=2, kappa=0.0, alpha=pc.alpha, a=pc.a,
                              sigma=pc.sigma)
    levels = []
    mus = []
    for sub in subdivs:
        mesh = dz.scaled_mesh(dz.icosphere(sub), ax)
        op = dz.assemble(mesh, dz.ellipsoid_newton1_coefficient(ax))
        r = spec.smallest_nonzero(op, k=1, seed=seed)
        mus.append(r.mu1)
        levels.append({"subdiv": sub, "h": mesh.mean_edge_length(),
                       "mu1": r.mu1, "residual": float(r.residuals[0])})
    # O(h^2) scheme: successive difference over (4^1 - 1) estimates the
    # finest-level discretization error
    err_est = (abs(mus[-1] - mus[-2]) / 3.0) if len(mus) > 1 else abs(mus[-1])
    rep = bd.compare(inp, mus[-1], error_estimate=err_est, analytic=False)
    for lv in levels:
        lv["bound"] = rep.bound_value
        lv["margin"] = lv["mu1"] - rep.bound_value
        lv["verdict"] = bd.compare(inp, lv["mu1"], error_estimate=err_est,
                                   analytic=False).verdict
    return {"semiaxes": ax, "pinching": {"alpha": pc.alpha, "a": pc.a,
                                         "sigma": pc.sigma,
                                         "constant_H": pc.constant_H},
            "levels": levels, "error_estimate": err_est,
            "bound": rep.bound_value, "mu1": mus[-1],
            "margin": rep.margin, "verdict": rep.verdict}


# ---------------------------------------------------------------------------
# suite runner

SUITE_NAMES = ("bochner", "divergence", "newton", "qa", "sphere-equality",
               "ellipsoid-compare")


def load_config(path=None):
    """Flat key = value config with [manifold], [solver], [suites] sections."""
    cp = configparser.ConfigParser()
    cp["manifold"] = {}
    cp["solver"] = {"seed": "42", "tol": "1e-9"}
    cp["suites"] = {"names": "", "trials": "100000", "samples": "200",
                    "subdivs": "4,5"}
    if path is not None:
        read = cp.read(path)
        if not read:
            raise ConfigError("cannot read config file %r" % path)
        extra = set(cp.sections()) - {"manifold", "solver", "suites"}
        if extra:
            raise ConfigError("unknown config sections: %s" % sorted(extra))
    return cp


def run_suite(names, config=None):
    """Execute named suites; returns (exit_code, summary dict)."""
    try:
        cp = config if isinstance(config, configparser.ConfigParser) \
            else load_config(config)
        seed = cp.getint("solver", "seed")
        trials = cp.getint("suites", "trials")
        samples = cp.getint("suites", "samples")
        subdivs = tuple(int(s) for s in
                        cp.get("suites", "subdivs").split(",") if s.strip())
        names = list(names)
        bad = [n for n in names if n not in SUITE_NAMES]
        if bad:
            raise ConfigError("unknown suite(s): %s" % bad)
    except (ConfigError, ValueError) as exc:
        return EXIT_CONFIG, {"error": str(exc)}

    summary = {"suites": {}, "seed": seed}
    failures: List[str] = []
    code = EXIT_PASS
    for name in names:
        t0 = time.time()
        try:
            if name == "bochner":
                rep = bochner_suite(samples=samples, seed=seed)
                if rep["max_residual"] > 1e-8:
                    failures.append("bochner: max residual %g > 1e-8"
                                    % rep["max_residual"])
                if rep["max_c_spread"] > 1e-10:
                    failures.append("bochner: c spread %g > 1e-10"
                                    % rep["max_c_spread"])
            elif name == "divergence":
                rep = divergence_suite(seed=seed)
                if rep["max_defect"] > 1e-8:
                    failures.append("divergence: defect %g > 1e-8"
                                    % rep["max_defect"])
            elif name == "newton":
                rep = newton_inequality_trials(
                    TrialConfig(trials=trials, seed=seed))
                if rep["violations"]:
                    failures.append("newton: %d violations"
                                    % rep["violations"])
                if rep["equality_false_positives"]:
                    failures.append("newton: equality detector false "
                                    "positives")
            elif name == "qa":
                rep = {}
                for sign in ("positive", "negative"):
                    rep[sign] = qa_bound_trials(
                        TrialConfig(trials=trials, seed=seed),
                        kappa_sign=sign)
                    if rep[sign]["violations"]:
                        failures.append("qa[%s]: %d violations"
                                        % (sign, rep[sign]["violations"]))
                ctl = qa_bound_trials(TrialConfig(trials=min(trials, 2000),
                                                  seed=seed),
                                      kappa_sign="negative", planted=True)
                rep["planted_control"] = ctl
                if ctl["violations"] == 0:
                    failures.append("qa: planted violation NOT detected")
            elif name == "sphere-equality":
                rep = sphere_equality_suite()
                if not rep["all_equality"]:
                    failures.append("sphere-equality: non-equality verdict")
            elif name == "ellipsoid-compare":
                rep = ellipsoid_compare(subdivs=subdivs, seed=seed)
                if rep["verdict"] != bd.VERDICT_INEQUALITY:
                    failures.append("ellipsoid-compare: verdict %s"
                                    % rep["verdict"])
        except SpectraError as exc:
            failures.append("%s: %s: %s" % (name, type(exc).__name__, exc))
            rep = {"error": str(exc), "error_type": type(exc).__name__}
            code = max(code, EXIT_NUMERICAL)
        rep = _jsonable(rep)
        rep["elapsed_s"] = round(time.time() - t0, 3)
        summary["suites"][name] = rep
    summary["failures"] = failures
    summary["pass"] = not failures
    if failures and code == EXIT_PASS:
        code = EXIT_ASSERTION
    return code, summary


def _jsonable(obj):
    return json.loads(json.dumps(obj, default=_json_default))


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.bool_,)):
        return bool(o)
    raise TypeError("not JSON serializable: %r" % type(o))
