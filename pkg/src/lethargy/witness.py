"""Constructive witnesses: elements with machine-checkable lower bounds on
their best-approximation errors, plus the greedy slow-decay constructor.

Each witness records claimed bounds and how they are checked: "solver" when
the approximating family is a scheme with an exact solver, "attempts" when
the family is nonlinear (ridge exponentials, deep dictionaries) and the
evidence is an attempted-falsification log of seeded optimization starts,
none of which may beat the claimed bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import solve
from .scheme import Scheme, build_scheme
from .seq import NullSequence
from .space import Grid, Space, norm
from .solve import best_approx, l1_fit_lp

GRID_WITNESS_TOL = 1e-3
COORD_WITNESS_TOL = 1e-9


class WitnessError(ValueError):
    """A witness construction cannot proceed on the given discretization."""


@dataclass(frozen=True)
class ClaimedBound:
    level: int
    lower: float
    provenance: str
    upper: Optional[float] = None

    def to_json(self) -> dict:
        d = {"level": self.level, "lower": self.lower, "provenance": self.provenance}
        if self.upper is not None:
            d["upper"] = self.upper
        return d


@dataclass(frozen=True)
class Attempt:
    label: str
    seed: int
    value: float

    def to_json(self) -> dict:
        return {"label": self.label, "seed": self.seed, "value": self.value}


@dataclass(frozen=True)
class Verification:
    level: int
    observed: float
    mode: str  # "solver" | "attempts"
    status: str
    passed: bool
    tol: float
    note: str = ""

    def to_json(self) -> dict:
        return {"level": self.level, "observed": self.observed, "mode": self.mode,
                "status": self.status, "passed": self.passed, "tol": self.tol,
                "note": self.note}


@dataclass
class Witness:
    element: np.ndarray
    space: Space
    claims: list
    element_norm: float
    label: str
    scheme: Optional[Scheme] = None
    family: str = ""
    tol: float = COORD_WITNESS_TOL
    attempts: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    verifications: list = field(default_factory=list)
    seed: int = 0

    @property
    def verified(self) -> bool:
        return bool(self.verifications) and all(v.passed for v in self.verifications)

    def to_json(self) -> dict:
        elem = np.asarray(self.element)
        payload = {
            "label": self.label,
            "element": [float(v) for v in np.real(elem).ravel()],
            "element_shape": list(elem.shape),
            "element_norm": self.element_norm,
            "space": self.space.to_json(),
            "claims": [c.to_json() for c in self.claims],
            "family": self.family,
            "tol": self.tol,
            "seed": self.seed,
            "meta": _jsonable(self.meta),
            "attempts": [a.to_json() for a in self.attempts],
            "verifications": [v.to_json() for v in self.verifications],
        }
        if np.iscomplexobj(elem):
            payload["element_imag"] = [float(v) for v in np.imag(elem).ravel()]
        if self.scheme is not None:
            payload["scheme"] = self.scheme.to_json()
        return payload


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def verify_witness(w: Witness, seed: int = 0) -> bool:
    """Check every claimed bound with the solver or the attempts log."""
    records = []
    for claim in w.claims:
        scale = max(w.element_norm, 1.0)
        if w.scheme is not None:
            res = best_approx(w.space, w.element, w.scheme, claim.level, seed=seed)
            observed, mode, status = res.value, "solver", res.status
            ok_lower = observed >= claim.lower - w.tol * scale
            if status != "exact":
                # an achieved distance can overshoot the infimum, so it cannot
                # certify a lower bound on its own
                ok_lower = ok_lower and False
            ok_upper = True
            if claim.upper is not None:
                ok_upper = observed <= claim.upper + w.tol * scale
            records.append(Verification(claim.level, observed, mode, status,
                                        ok_lower and ok_upper, w.tol))
        else:
            pool = [a.value for a in w.attempts if not math.isnan(a.value)]
            if not pool:
                records.append(Verification(claim.level, math.nan, "attempts", "empty",
                                            False, w.tol, "no attempts recorded"))
                continue
            observed = min(pool)
            passed = observed >= claim.lower - w.tol * scale
            records.append(Verification(claim.level, observed, "attempts",
                                        f"{len(pool)} attempts", passed, w.tol))
    w.verifications = records
    return w.verified


# -- interleaved-c0 exact-equality witness ------------------------------------


def witness_c0(eps: NullSequence, cap: Optional[int] = None) -> Witness:
    """Sequence witness whose odd-level errors reproduce eps exactly."""
    vals = eps.values
    if cap is None:
        cap = max(len(vals), 2)
    if len(vals) > cap:
        raise WitnessError(f"eps window {len(vals)} exceeds the dimension cap {cap}")
    s = build_scheme({"kind": "interleaved-c0", "cap": cap, "n_max": 2 * cap - 2,
                      "label": "interleaved-c0"})
    x = np.zeros(cap)
    x[: len(vals)] = vals
    claims = [ClaimedBound(0, float(vals[0]), "sup of the full tail", float(vals[0]))]
    for n in range(1, len(vals)):
        if 2 * n - 1 > s.n_max:
            break
        claims.append(ClaimedBound(2 * n - 1, float(vals[n]),
                                   "coordinate tail sup at an odd level", float(vals[n])))
    return Witness(x, s.space, claims, float(vals[0]) if vals.size else 0.0,
                   "c0-tail-witness", scheme=s, tol=1e-12)


# -- quantizer ramp witness -----------------------------------------------------


def witness_quantizer(m: int, grid: Optional[Grid] = None) -> Witness:
    """The odd ramp 2t-1: its m-value quantization error is pinched at 1/m."""
    if m < 1:
        raise WitnessError("value budget m must be >= 1")
    if grid is None:
        grid = Grid.interval(0.0, 1.0, 2049)
    s = build_scheme({"kind": "quantizer", "m": [m],
                      "space": {"carrier": "grid", "domain": "interval",
                                "a": grid.a, "b": grid.b, "nodes": grid.size, "norm": "sup"},
                      "label": f"quantizer-m{m}"})
    x = 2.0 * (grid.nodes - grid.a) / (grid.b - grid.a) - 1.0
    gap = 2.0 / (grid.size - 1)
    claims = [ClaimedBound(0, 1.0 / m - gap, "sorted-partition pinch on the ramp", 1.0 / m)]
    mid = solve.midpoint_quantizer(x, m, radius=1.0)
    w = Witness(x, s.space, claims, 1.0, f"quantizer-ramp-m{m}", scheme=s, tol=1e-12)
    w.meta = {
        "budget": m,
        "continuum_bound": 1.0 / m,
        "grid_gap": gap,
        "midpoint_error": float(np.max(np.abs(x - mid))),
    }
    return w


# -- alternating-bump witness for sign-change-limited families -------------------


@dataclass(frozen=True)
class HaarLikeFamily:
    """A family whose level-n members have a bounded number of sign changes."""

    name: str  # "poly" | "trig"

    def zero_bound(self, n: int) -> int:
        if self.name == "poly":
            return n  # degree < n: at most n-1 zeros
        if self.name == "trig":
            return 2 * n + 1  # dimension 2n+1: at most 2n zeros
        raise WitnessError(f"unknown family {self.name!r}")

    def columns(self, grid: Grid, n: int) -> np.ndarray:
        from .scheme import _chebyshev_columns, _trig_columns

        if self.name == "poly":
            return _chebyshev_columns(grid, n)  # span of degrees < n
        cols = _trig_columns(grid, n)
        return cols

    def default_grid(self) -> Grid:
        return Grid.interval(0.0, 1.0, 2049) if self.name == "poly" else Grid.torus(4096)


def _bump_profile(grid: Grid, lo: float, hi: float, ramp_frac: float = 0.1) -> np.ndarray:
    """Continuous trapezoid in [0,1], supported on (lo, hi), plateau 1."""
    t = grid.nodes
    width = hi - lo
    ramp = ramp_frac * width
    up = np.clip((t - lo) / ramp, 0.0, 1.0)
    down = np.clip((hi - t) / ramp, 0.0, 1.0)
    prof = np.minimum(up, down)
    prof[(t <= lo) | (t >= hi)] = 0.0
    return prof


def witness_haar_bumps(n: int, p: float, family: str = "poly",
                       grid: Optional[Grid] = None, n_attempts: int = 100,
                       seed: int = 0) -> Witness:
    """Alternating bumps that no sign-change-limited member can track.

    The claimed bound is on the normalized p-power error: for every family
    member g at level n, int |h-g|^p dmu > 1/5 with mu the normalized grid
    measure.  Verified by the exact projection (p = 2) / exact L1 LP (p = 1)
    plus seeded perturbation attempts.
    """
    fam = HaarLikeFamily(family)
    if grid is None:
        grid = fam.default_grid()
    big_n = fam.zero_bound(n) + 1
    cells = 4 * big_n
    nodes_per_cell = grid.size / cells
    if nodes_per_cell < 8:
        raise WitnessError(
            f"grid too coarse: {grid.size} nodes cannot host {cells} bump cells")
    mu = grid.weights / float(np.sum(grid.weights))
    edges = grid.a + (grid.b - grid.a) * np.arange(cells + 1) / cells
    h = np.zeros(grid.size)
    min_mass = math.inf
    for j in range(cells):
        prof = _bump_profile(grid, edges[j], edges[j + 1])
        mass = float(np.sum(mu * prof))
        min_mass = min(min_mass, mass)
        h += ((-1.0) ** (j + 1)) * prof ** (1.0 / p)
    if min_mass <= 1.0 / (5.0 * big_n):
        raise WitnessError(
            f"grid too coarse: bump mass {min_mass:.3e} short of 1/(5N) = {1.0 / (5 * big_n):.3e}")

    cols = fam.columns(grid, n) if n > 0 else np.zeros((grid.size, 0))
    rng = np.random.default_rng(seed)
    attempts = []

    def record(label, seed_val, g):
        err = float(np.sum(mu * np.abs(h - g) ** p))
        attempts.append(Attempt(label, seed_val, err))
        return err

    record("zero-member", 0, np.zeros(grid.size))
    coef0 = np.zeros(cols.shape[1])
    if cols.shape[1]:
        # exact best approximations in the weighted L2 / L1 senses
        u = np.sqrt(mu)
        coef2, *_ = np.linalg.lstsq(cols * u[:, None], h * u, rcond=None)
        record("exact-l2-projection", 0, cols @ coef2)
        coef0 = coef2
        if p == 1.0:
            _, coef1, approx1 = l1_fit_lp(cols, h, mu)
            record("exact-l1-lp", 0, approx1)
            coef0 = coef1
        elif p != 2.0:
            sub = Space.lp_grid(grid, p)
            value, coefp, approxp, info = solve._irls_fit(sub, cols, h, p)
            record("irls-local-minimum", 0, approxp)
            coef0 = coefp
        scale = max(float(np.max(np.abs(coef0))), 1.0)
        for k in range(n_attempts):
            coef = coef0 + rng.standard_normal(cols.shape[1]) * scale * 10.0 ** rng.uniform(-3, 0.5)
            record("perturbed-coefficients", k, cols @ coef)
    else:
        for k in range(n_attempts):
            record("zero-family", k, np.zeros(grid.size))

    bound = 1.0 / 5.0
    h_norm = float(np.sum(mu * np.abs(h) ** p) ** (1.0 / p))
    w = Witness(h, Space.lp_grid(grid, p), [ClaimedBound(n, bound, "alternating-bump mass count")],
                h_norm, f"haar-bump-{family}-n{n}-p{p}", scheme=None,
                family=f"{family} members at level {n} (sign-change bound {fam.zero_bound(n) - 1})",
                tol=0.0, attempts=attempts, seed=seed)
    w.meta = {
        "p": p, "cells": cells, "min_bump_mass": min_mass,
        "bound_is_p_power": True,
        "scaled_variant": {"norm_cap": 1.0,
                           "error_bound": (0.2 / max(h_norm, 1e-300) ** p) ** (1.0 / p)},
    }
    return w


# -- bounded-variation witness ----------------------------------------------------


def witness_bv(n: int, grid: Optional[Grid] = None, dict_degree: int = 6,
               n_attempts: int = 100, seed: int = 0) -> Witness:
    """Oscillation profile with unit total variation that n-term smooth
    combinations cannot track in the variation norm."""
    psi = max(n, 1)
    big_n = 6 * psi
    if grid is None:
        grid = Grid.torus(2048)
    if grid.domain != "torus":
        raise WitnessError("the variation witness lives on the torus")
    dt = grid.spacing
    if big_n**2 * dt**2 / 8.0 > 5e-4:
        raise WitnessError(f"grid under-resolves frequency {big_n}")
    t = grid.nodes
    f = (1.0 - np.cos(big_n * t)) / (4.0 * big_n)
    f_var = grid.total_variation(np.append(f, f[0]))  # periodic closure

    # dictionary atoms vanishing at t = 0, unit variation
    atoms = np.column_stack([(t / (2 * math.pi)) ** k for k in range(1, dict_degree + 1)])
    atom_var = np.array([grid.total_variation(atoms[:, j]) for j in range(atoms.shape[1])])
    atoms = atoms / atom_var

    rng = np.random.default_rng(seed)
    attempts = []
    df = np.diff(np.append(f, f[0]))
    datoms = np.diff(np.vstack([atoms, atoms[:1]]), axis=0)

    def record(label, seed_val, coef, cols_idx):
        g_diff = datoms[:, cols_idx] @ coef if len(cols_idx) else np.zeros_like(df)
        attempts.append(Attempt(label, seed_val, float(np.sum(np.abs(df - g_diff)))))

    record("zero-member", 0, np.zeros(0), [])
    from itertools import combinations

    subset_pool = list(combinations(range(atoms.shape[1]), min(n, atoms.shape[1]))) if n else []
    for idx, subset in enumerate(subset_pool):
        cols_idx = list(subset)
        _, coef, _ = l1_fit_lp(datoms[:, cols_idx], df, np.ones(df.size))
        record("exact-variation-lp", idx, coef, cols_idx)
        for k in range(max(1, n_attempts // max(len(subset_pool), 1))):
            pert = coef + rng.standard_normal(len(cols_idx)) * 10.0 ** rng.uniform(-3, 1)
            record("perturbed-coefficients", k, pert, cols_idx)

    w = Witness(f, Space.sup_grid(grid), [ClaimedBound(n, 1.0 / 3.0, "sign-change interval count")],
                f_var, f"bv-oscillation-n{n}", scheme=None,
                family=f"{n}-term combinations of smooth unit-variation atoms",
                tol=0.0, attempts=attempts, seed=seed)
    w.meta = {"frequency": big_n, "variation": f_var, "variation_defect": abs(f_var - 1.0)}
    if abs(f_var - 1.0) > 1e-3:
        raise WitnessError(f"grid variation {f_var!r} misses 1 by more than 1e-3")
    return w


# -- ridge (imaginary exponential) witness ----------------------------------------


def _l1_torus(mu: np.ndarray, values: np.ndarray) -> float:
    return float(np.sum(mu * np.abs(values)))


def _exp_cols(t: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    return np.exp(1j * np.outer(t, freqs))


def _complex_l1_fit(mu: np.ndarray, cols: np.ndarray, x: np.ndarray, iters: int = 40):
    """L2 seed plus complex IRLS toward the weighted L1 minimum."""
    u = np.sqrt(mu)
    coef, *_ = np.linalg.lstsq(cols * u[:, None], x * u, rcond=None)
    resid = x - cols @ coef
    best = _l1_torus(mu, resid)
    for _ in range(iters):
        r = np.maximum(np.abs(resid), 1e-12)
        uu = np.sqrt(mu / r)
        coef, *_ = np.linalg.lstsq(cols * uu[:, None], x * uu, rcond=None)
        resid = x - cols @ coef
        val = _l1_torus(mu, resid)
        if abs(val - best) < 1e-12 * max(best, 1e-300):
            best = min(best, val)
            break
        best = min(best, val)
    return best, coef


def witness_ridge(n: int, grid: Optional[Grid] = None, n_starts: int = 100,
                  seed: int = 0) -> Witness:
    """Alternating exponential sum that fewer than n exponentials cannot
    approximate below 1/n^2 in L1 of the normalized torus measure."""
    if n < 1:
        raise WitnessError("level n must be >= 1")
    if grid is None:
        grid = Grid.torus(1024)
    if grid.size < 8 * n * n:
        raise WitnessError(f"grid under-resolves frequency {n * n}")
    t = grid.nodes
    mu = grid.weights / float(np.sum(grid.weights))
    ks = np.arange(1, n * n + 1)
    x = (((-1.0) ** ks)[None, :] * np.exp(1j * np.outer(t, ks))).sum(axis=1) / (n * n)

    coeffs = np.array([float(np.sum(mu * x * np.exp(-1j * k * t)).real) for k in ks])
    bound = 1.0 / (n * n)
    rng = np.random.default_rng(seed)
    attempts = [Attempt("zero-member", 0, _l1_torus(mu, x))]
    m = n - 1
    if m > 0:
        from scipy.optimize import minimize

        def objective(freqs):
            val, _ = _complex_l1_fit(mu, _exp_cols(t, np.asarray(freqs)), x)
            return val

        for start in range(n_starts):
            freqs0 = rng.uniform(0.25, n * n + 2.0, size=m)
            val0 = objective(freqs0)
            res = minimize(objective, freqs0, method="Nelder-Mead",
                           options={"maxfev": 80, "xatol": 1e-3, "fatol": 1e-9})
            attempts.append(Attempt("multi-start-frequency-search", start,
                                    float(min(val0, res.fun))))
    space = Space.lp_grid(grid, 1.0, complex_ok=True)
    w = Witness(x, space, [ClaimedBound(m, bound, "alternating coefficient pinning")],
                _l1_torus(mu, x), f"ridge-exponential-n{n}", scheme=None,
                family=f"sums of {m} exponentials with arbitrary real frequencies",
                tol=0.0, attempts=attempts, seed=seed)
    w.meta = {"coefficients": coeffs, "coefficient_magnitude": bound,
              "normalized_measure": True}
    return w


# -- orthonormal n-term witness ----------------------------------------------------


def witness_orthonormal_nterm(n: int, dim: int) -> Witness:
    """Flat n-vector: dropping any coordinate leaves error exactly 1/n."""
    if dim < n:
        raise WitnessError(f"dimension {dim} below level {n}")
    if n < 1:
        raise WitnessError("level n must be >= 1")
    s = build_scheme({"kind": "nterm", "n_max": max(n, 1),
                      "dictionary": {"family": "orthonormal"},
                      "space": {"carrier": "coords", "dim": dim, "norm": "lp", "p": 2.0},
                      "label": f"orthonormal-nterm-{dim}"})
    y = np.zeros(dim)
    y[:n] = 1.0 / n
    value = 1.0 / n
    claims = [ClaimedBound(n - 1, value, "coordinate drop count", value)]
    w = Witness(y, s.space, claims, float(np.sqrt(n) / n), f"orthonormal-flat-n{n}",
                scheme=s, tol=1e-12)
    w.meta = {"coarse_bound": 1.0 / (2.0 * n)}
    return w


# -- Haar-wavelet witness ------------------------------------------------------------


def _haar_wavelet_vector(cells: int, k: int) -> np.ndarray:
    """Unit Haar wavelet at scale k, position 0, on a 2^J cell grid."""
    out = np.zeros(cells)
    width = cells >> k
    half = width // 2
    out[:half] = 2.0 ** (k / 2.0)
    out[half:width] = -(2.0 ** (k / 2.0))
    return out


def _dyadic_inner(x: np.ndarray, prefix: np.ndarray, cells: int, k: int, j: int) -> float:
    """<x, scaling atom (k, j)> on the unit interval with cell measure."""
    width = cells >> k
    seg = prefix[(j + 1) * width] - prefix[j * width]
    return float(2.0 ** (k / 2.0) * seg / cells)


def _scaling_gram(k1: int, j1: int, k2: int, j2: int) -> float:
    if k1 > k2:
        k1, j1, k2, j2 = k2, j2, k1, j1
    # nested iff the finer support sits inside the coarser one
    if (j2 >> (k2 - k1)) == j1:
        return 2.0 ** (-(k2 - k1) / 2.0)
    return 0.0


def pick_separation_level(n: int, target: float, probes: int = 200, seed: int = 0,
                          max_level: int = 24) -> tuple:
    """Smallest scale offset N with measured coarse-projection leakage <= target.

    The leakage of an n-term combination of scaling atoms at scales >= N
    through the level-0 averaging projection is measured on aligned worst-case
    stacks and random samples; sqrt(n 2^-N) is the analytic envelope.
    """
    rng = np.random.default_rng(seed)
    for big_n in range(1, max_level + 1):
        worst = math.sqrt(n) * 2.0 ** (-big_n / 2.0)  # aligned same-sign stack
        measured = worst
        for _ in range(probes):
            ks = rng.integers(big_n, big_n + 3, size=n)
            # disjoint or nested positions inside the unit cell
            coefs = rng.standard_normal(n)
            total = 0.0
            sq = 0.0
            for kk, cc in zip(ks, coefs):
                total += cc * 2.0 ** (-kk / 2.0)
                sq += cc * cc
            measured = max(measured, abs(total) / math.sqrt(max(sq, 1e-300)))
        if measured <= target:
            return big_n, measured
    raise WitnessError("no separation level reaches the target leakage")


def witness_wavelet(n: int, seed: int = 0, n_attempts: int = 100,
                    dict_budget: int = 1024) -> Witness:
    """Stacked Haar wavelets at well-separated scales; no n scaling atoms
    capture more than a 1 - c^2 share of the energy."""
    if n < 0:
        raise WitnessError("level n must be >= 0")
    c = 1.0 / (8.0 * math.sqrt(n + 1))
    big_n, measured = pick_separation_level(max(n, 1), c, seed=seed)
    depth = n * big_n + 1
    if depth > 20:
        raise WitnessError(f"dyadic depth {depth} overflows the 2^20 cell budget")
    cells = 2**depth
    x = np.zeros(cells)
    for s_idx in range(n + 1):
        x += _haar_wavelet_vector(cells, s_idx * big_n)
    x /= math.sqrt(n + 1)

    grid = Grid.interval_cells(0.0, 1.0, cells)
    space = Space.lp_grid(grid, 2.0)
    x_norm = norm(space, x)

    prefix = np.concatenate([[0.0], np.cumsum(x)])
    max_level = depth
    atom_idx = []
    for k in range(0, max_level + 1):
        for j in range(2**k):
            atom_idx.append((k, j))
            if len(atom_idx) >= dict_budget:
                break
        if len(atom_idx) >= dict_budget:
            break
    inner = np.array([_dyadic_inner(x, prefix, cells, k, j) for k, j in atom_idx])

    attempts = [Attempt("zero-member", 0, x_norm)]
    if n >= 1:
        best_sq = float(np.max(inner**2))
        attempts.append(Attempt("exhaustive-1-term", 0,
                                math.sqrt(max(x_norm**2 - best_sq, 0.0))))
    if n >= 2:
        order = np.argsort(-np.abs(inner))
        top = order[:64]
        rng = np.random.default_rng(seed)
        pairs = [(int(a), int(b)) for ai, a in enumerate(top) for b in top[ai + 1:]]
        for _ in range(n_attempts):
            a, b = rng.choice(len(atom_idx), size=2, replace=False)
            pairs.append((int(a), int(b)))
        best_pair = 0.0
        for a, b in pairs:
            g12 = _scaling_gram(*atom_idx[a], *atom_idx[b])
            gram = np.array([[1.0, g12], [g12, 1.0]])
            rhs = np.array([inner[a], inner[b]])
            if abs(np.linalg.det(gram)) < 1e-14:
                cap = float(max(np.abs(rhs))) ** 2
            else:
                cap = float(rhs @ np.linalg.solve(gram, rhs))
            best_pair = max(best_pair, cap)
        attempts.append(Attempt("pair-search", 0,
                                math.sqrt(max(x_norm**2 - best_pair, 0.0))))
        # greedy extension for n > 2 would only lower the captured share bound
    w = Witness(x, space, [ClaimedBound(n, c, "separated-scale leakage bound")],
                x_norm, f"haar-stack-n{n}", scheme=None,
                family=f"{n}-term combinations of dyadic scaling atoms",
                tol=0.0, attempts=attempts, seed=seed)
    w.meta = {"separation": big_n, "measured_leakage": measured, "depth": depth,
              "target": c, "dict_atoms": len(atom_idx)}
    return w


# -- compactly supported translates witness ---------------------------------------


def witness_translates(n: int, m: int, p: float, cells_per_unit: int = 64,
                       n_trials: int = 1000, seed: int = 0) -> Witness:
    """Spread unit blocks; n translates of a short atom must miss m - n of them."""
    if m <= n:
        raise WitnessError("block count m must exceed the level n")
    support = 1.0  # mother atom chi_[0, 1]
    a = support + 2.0
    length = a * m + 2.0
    cells = int(round(length * cells_per_unit))
    grid = Grid.interval_cells(0.0, length, cells)
    space = Space.lp_grid(grid, p)
    t = grid.nodes
    f = np.zeros(cells)
    starts = [a * (i + 1) for i in range(m)]
    for s0 in starts:
        f += ((t >= s0) & (t < s0 + 1.0)).astype(float)
    f *= m ** (-1.0 / p)
    bound = ((m - n) / m) ** (1.0 / p)

    rng = np.random.default_rng(seed)
    attempts = [Attempt("zero-member", 0, norm(space, f))]
    min_untouched = m
    for trial in range(n_trials):
        if n == 0:
            attempts.append(Attempt("random-translates", trial, norm(space, f)))
            continue
        shifts = rng.uniform(0.0, length - support, size=n)
        cols = np.column_stack([((t >= c0) & (t < c0 + support)).astype(float)
                                for c0 in shifts])
        untouched = sum(
            1 for s0 in starts
            if all(c0 + support <= s0 or c0 >= s0 + 1.0 for c0 in shifts)
        )
        min_untouched = min(min_untouched, untouched)
        # an L2 coefficient fit is an attempt for every p; translate supports
        # barely overlap, so it is near-optimal there as well
        u = np.sqrt(grid.weights)
        coef, *_ = np.linalg.lstsq(cols * u[:, None], f * u, rcond=None)
        g = cols @ coef
        attempts.append(Attempt("random-translates", trial, norm(space, f - g)))

    w = Witness(f, space, [ClaimedBound(n, bound, "untouched block mass")],
                norm(space, f), f"translate-blocks-m{m}-n{n}", scheme=None,
                family=f"{n} translates of a support-1 atom", tol=1e-9,
                attempts=attempts, seed=seed)
    w.meta = {"blocks": m, "spacing": a, "min_untouched_blocks": min_untouched,
              "untouched_floor": m - n}
    return w


# -- tensor / rank witness ----------------------------------------------------------


def witness_tensor(n: int, norm_kind: str = "hs") -> Witness:
    """Normalized identity matrix: rank-k truncation errors are exact."""
    if n < 1:
        raise WitnessError("dimension n must be >= 1")
    s = build_scheme({"kind": "rank", "n_max": n,
                      "space": {"carrier": "matrix", "side": n, "norm": norm_kind},
                      "label": f"rank-{n}-{norm_kind}"})
    z = np.eye(n) / n
    claims = []
    for k in range(n):
        if norm_kind == "hs":
            exact = math.sqrt(n - k) / n
        else:
            exact = 1.0 / n
        claims.append(ClaimedBound(k, exact, "singular-value tail", exact))
    w = Witness(z, s.space, claims, norm(s.space, z), f"identity-over-n-{norm_kind}",
                scheme=s, tol=1e-12)
    w.meta = {"coarse_bound": 1.0 / (n * n),
              "hs_values": [math.sqrt(n - k) / n for k in range(n)],
              "operator_values": [1.0 / n] * n}
    return w


# -- slow-decay constructor ------------------------------------------------------------


@dataclass
class LadderStep:
    j: int
    level: int
    delta: float
    direction_quality: float
    source_level: int

    def to_json(self) -> dict:
        return {"j": self.j, "level": self.level, "delta": self.delta,
                "direction_quality": self.direction_quality,
                "source_level": self.source_level}


def _ladder_direction(s: Scheme, level: int, rng: np.random.Generator):
    """Unit element of some finite A_s with a certified exact distance to A_level."""
    from .scheme import gap_candidates

    best = None
    for source in range(level + 1, s.n_max + 1):
        for cand in gap_candidates(s, source - 1, rng, count=2):
            res = best_approx(s.space, cand, s, level)
            if res.status != "exact":
                continue
            if best is None or res.value > best[2]:
                best = (cand, source, res.value)
        if best is not None and best[2] > 0.2:
            break
    return best


def construct_slow_decay(s: Scheme, eps: NullSequence, i_max: int, rng_seed: int = 0,
                         direction_provider: Optional[Callable] = None) -> Witness:
    """Greedy fast-decay construction: an element whose errors stay positive
    but below the prescribed envelope on the verified range.

    The ladder record carries every level, step size, and direction quality;
    verification re-solves every level up to i_max.
    """
    rng = np.random.default_rng(rng_seed)
    provider = direction_provider or (lambda level: _ladder_direction(s, level, rng))
    ladder: list = []
    halted = ""

    levels = [0]
    deltas = [0.0]
    qualities = [1.0]
    x = s.space.zero().astype(float)

    j = 0
    while True:
        # positivity at level l needs a later rung whose base is >= l, so the
        # ladder runs until a rung is built on a base at or beyond i_max
        if len(levels) >= 2 and levels[-2] >= i_max:
            break
        j += 1
        prev = levels[-1]
        k_prev = s.K(prev)
        if k_prev is None or k_prev > s.n_max:
            halted = f"gap map leaves the window at level {prev}"
            break
        found = provider(k_prev)
        if found is None:
            halted = f"no certified direction for level {k_prev}"
            break
        y, source, quality = found
        if quality <= 0.0:
            halted = f"direction quality zero at level {k_prev}"
            break
        new_level = s.K(source)
        if new_level is None or new_level <= prev:
            halted = f"ladder cannot advance past level {prev}"
            break
        if new_level >= len(eps):
            halted = f"eps window ends before level {new_level}"
            break
        delta = eps[new_level] / 2.0
        if j >= 2:
            delta = min(delta, deltas[-1] * qualities[-2] / 4.0)
        if delta <= 0.0:
            halted = f"step size vanished at rung {j}"
            break
        x = x + delta * y
        ladder.append(LadderStep(j, new_level, delta, quality, source))
        levels.append(new_level)
        deltas.append(delta)
        qualities.append(quality)

    claims = []
    for ell in range(min(i_max, (levels[-1] - 1) if len(levels) > 1 else -1) + 1):
        later = [step for step, lvl in enumerate(levels[:-1]) if lvl >= ell]
        lower = 0.0
        if later:
            jj = later[0] + 1  # first rung whose base level is >= ell
            if jj <= len(ladder):
                lower = deltas[jj] * qualities[jj] / 3.0
        claims.append(ClaimedBound(ell, lower, "ladder remainder bound",
                                   eps.extended(ell)))

    w = Witness(x, s.space, claims, norm(s.space, x), "slow-decay-ladder",
                scheme=s, tol=1e-9, seed=rng_seed)
    w.meta = {"ladder": [step.to_json() for step in ladder],
              "halted": halted, "target_range": i_max,
              "positivity_required": True}
    return w


def verify_slow_decay(w: Witness, seed: int = 0) -> bool:
    """Solver check of 0 < E(x, A_i) <= eps_i over the claimed range."""
    records = []
    for claim in w.claims:
        res = best_approx(w.space, w.element, w.scheme, claim.level, seed=seed)
        ok = res.status == "exact"
        positive = res.value > max(claim.lower - w.tol, 1e-13)
        below = res.value <= claim.upper + w.tol
        records.append(Verification(claim.level, res.value, "solver", res.status,
                                    ok and positive and below, w.tol,
                                    f"envelope {claim.upper!r}"))
    w.verifications = records
    return w.verified


# -- jump-element search ---------------------------------------------------------------


@dataclass
class JumpSearch:
    element: Optional[np.ndarray]
    ratio: float
    level: int
    accepted: bool
    note: str = ""


def find_jump_element(s: Scheme, n: int, c: float, pool: Iterable[np.ndarray],
                      seed: int = 0) -> JumpSearch:
    """Search a candidate pool for x outside closure(A_n) with
    E(x, A_n) <= c E(x, A_K(n))."""
    if c <= 0:
        raise WitnessError("constant c must be positive")
    kn = s.K(n)
    if kn is None:
        raise WitnessError("gap map leaves the window at this level")
    best_ratio = math.inf
    best_x = None
    for x in pool:
        e_n = best_approx(s.space, x, s, n, seed=seed)
        scale = max(norm(s.space, x), 1e-300)
        if e_n.value <= 1e-9 * scale:
            continue  # inside the closure of A_n
        e_k = best_approx(s.space, x, s, kn, seed=seed)
        if e_k.value <= 0.0:
            continue
        ratio = e_n.value / e_k.value
        if ratio < best_ratio:
            best_ratio = ratio
            best_x = x
        if ratio <= c:
            return JumpSearch(x, ratio, n, True)
    return JumpSearch(best_x, best_ratio, n, False,
                      "no candidate met the ratio; best ratio recorded")
