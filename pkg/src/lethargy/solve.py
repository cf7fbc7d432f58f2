"""Best-approximation error computation E(x, A_n) per scheme kind.

Every solver reports an exactness status.  "exact" means exact on the grid
up to the documented solver tolerance (LP/exchange 1e-10, SVD machine
precision, closed forms); "upper-bound" means the value is an achieved
distance that may exceed the infimum (IRLS, greedy n-term selection).
A value is always achievable, so it is never below the true error by more
than the solver tolerance.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .scheme import Scheme, SchemeError
from .space import Space, SpaceError, norm

LP_TOL = 1e-10
IRLS_MAX_ITER = 500
IRLS_REL_TOL = 1e-10
IRLS_WEIGHT_FLOOR = 1e-12
EXHAUSTIVE_SUBSET_LIMIT = 100_000
GREEDY_RESTARTS = 8


class NoSolverError(NotImplementedError):
    """No solver is registered for this (kind, norm) pair."""


class SolverError(RuntimeError):
    """A solver failed to produce a usable answer."""


@dataclass(frozen=True)
class BestApprox:
    value: float
    minimizer: Optional[np.ndarray]
    status: str  # "exact" | "upper-bound"
    info: dict = field(default_factory=dict, compare=False)


# -- linear fits over an explicit column basis --------------------------------


def _weighted_l2_fit(space: Space, cols: np.ndarray, x: np.ndarray):
    """Exact least-squares fit in the space's L2 (or ell_2) inner product."""
    if cols.shape[1] == 0:
        return norm(space, x), np.zeros(0), np.zeros_like(x, dtype=float)
    if space.carrier == "grid":
        w = np.sqrt(space.grid.weights)
        a = cols * w[:, None]
        b = x * w
    else:
        a = cols
        b = x
    coef, *_ = np.linalg.lstsq(a, b, rcond=None)
    approx = cols @ coef
    return norm(space, x - approx), coef, approx


def _sup_fit_lp(cols: np.ndarray, x: np.ndarray):
    """Chebyshev fit by linear programming; exact to LP tolerance."""
    n, d = cols.shape
    if d == 0:
        return float(np.max(np.abs(x))), np.zeros(0), np.zeros_like(x, dtype=float)
    a_ub = np.block([[cols, -np.ones((n, 1))], [-cols, -np.ones((n, 1))]])
    b_ub = np.concatenate([x, -x])
    c = np.zeros(d + 1)
    c[-1] = 1.0
    bounds = [(None, None)] * d + [(0.0, None)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise SolverError(f"minimax LP failed: {res.message}")
    coef = res.x[:d]
    approx = cols @ coef
    return float(np.max(np.abs(x - approx))), coef, approx


def _sup_fit_exchange(t: np.ndarray, x: np.ndarray, degree: int, max_iter: int = 80):
    """Discrete minimax polynomial fit by single-point exchange.

    Cheap enough to run inside the spline dynamic program; falls back to the
    LP fit if the alternation stalls.
    """
    npts = t.size
    if npts <= degree + 1:
        coef = np.polyfit(t, x, max(min(degree, npts - 1), 0)) if npts else np.zeros(1)
        return 0.0, np.polyval(coef, t)
    ref = np.unique(np.linspace(0, npts - 1, degree + 2).round().astype(int))
    while ref.size < degree + 2:
        extra = next(i for i in range(npts) if i not in set(ref))
        ref = np.sort(np.append(ref, extra))
    t0, scale = t.mean(), max(float(np.ptp(t)), 1e-300)
    u = (t - t0) / scale
    vand_all = np.vander(u, degree + 1, increasing=True)
    for _ in range(max_iter):
        signs = (-1.0) ** np.arange(ref.size)
        sys_a = np.column_stack([vand_all[ref], signs])
        try:
            sol = np.linalg.solve(sys_a, x[ref])
        except np.linalg.LinAlgError:
            break
        coef = sol[:-1]
        resid = x - vand_all @ coef
        worst = int(np.argmax(np.abs(resid)))
        if np.abs(resid[worst]) <= abs(sol[-1]) * (1.0 + 1e-12) + 1e-15 or worst in ref:
            return float(np.max(np.abs(resid))), x - resid
        # single-point exchange preserving residual-sign alternation
        sgn = np.sign(resid[worst])
        pos = int(np.searchsorted(ref, worst))
        if pos == 0:
            if np.sign(resid[ref[0]]) == sgn:
                ref[0] = worst
            else:
                ref = np.sort(np.concatenate([[worst], ref[:-1]]))
        elif pos == ref.size:
            if np.sign(resid[ref[-1]]) == sgn:
                ref[-1] = worst
            else:
                ref = np.sort(np.concatenate([ref[1:], [worst]]))
        else:
            if np.sign(resid[ref[pos - 1]]) == sgn:
                ref[pos - 1] = worst
            else:
                ref[pos] = worst
        ref = np.sort(ref)
    value, _, approx = _sup_fit_lp(vand_all, x)
    return value, approx


def l1_fit_lp(cols: np.ndarray, x: np.ndarray, weights: np.ndarray):
    """Exact weighted-L1 fit min sum_i w_i |x_i - (cols c)_i| via a sparse LP."""
    from scipy import sparse

    n, d = cols.shape
    if d == 0:
        return float(np.sum(weights * np.abs(x))), np.zeros(0), np.zeros_like(x, dtype=float)
    eye = sparse.eye(n, format="csr")
    block = sparse.csr_matrix(cols)
    a_ub = sparse.vstack([sparse.hstack([block, -eye]), sparse.hstack([-block, -eye])], format="csr")
    b_ub = np.concatenate([x, -x])
    c = np.concatenate([np.zeros(d), weights])
    bounds = [(None, None)] * d + [(0.0, None)] * n
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise SolverError(f"L1 LP failed: {res.message}")
    coef = res.x[:d]
    approx = cols @ coef
    return float(np.sum(weights * np.abs(x - approx))), coef, approx


def _lp_power_error(space: Space, resid: np.ndarray, p: float) -> float:
    if space.carrier == "grid":
        return float(np.sum(space.grid.weights * np.abs(resid) ** p))
    return float(np.sum(np.abs(resid) ** p))


def _irls_fit(space: Space, cols: np.ndarray, x: np.ndarray, p: float):
    """Iteratively reweighted least squares for 1 <= p < infinity.

    Returns an achieved (upper-bound) value with a convergence certificate.
    """
    if cols.shape[1] == 0:
        return norm(space, x), np.zeros(0), np.zeros_like(x, dtype=float), {"converged": True, "iterations": 0}
    quad = space.grid.weights if space.carrier == "grid" else np.ones(x.size)
    _, coef, approx = _weighted_l2_fit(space, cols, x)
    resid = x - approx
    value = _lp_power_error(space, resid, p) ** (1.0 / p)
    info = {"converged": False, "iterations": 0, "last_rel_change": math.inf}
    scale = max(float(np.max(np.abs(x))), 1.0)
    for it in range(1, IRLS_MAX_ITER + 1):
        r = np.maximum(np.abs(resid), IRLS_WEIGHT_FLOOR * scale)
        u = np.sqrt(quad * r ** (p - 2.0))
        coef, *_ = np.linalg.lstsq(cols * u[:, None], x * u, rcond=None)
        approx = cols @ coef
        resid = x - approx
        new_value = _lp_power_error(space, resid, p) ** (1.0 / p)
        change = abs(new_value - value) / max(new_value, 1e-300)
        best = min(new_value, value)
        info.update(iterations=it, last_rel_change=change)
        value = new_value
        if change < IRLS_REL_TOL:
            info["converged"] = True
            break
    return value, coef, approx, info


def _fit_in_span(space: Space, cols: np.ndarray, x: np.ndarray):
    """Dispatch a linear best-approximation by the space's norm."""
    if space.norm_kind == "sup":
        value, _, approx = _sup_fit_lp(cols, x)
        return value, approx, "exact", {"solver": "lp", "tol": LP_TOL}
    if space.norm_kind == "lp":
        if space.p == 2.0:
            value, _, approx = _weighted_l2_fit(space, cols, x)
            return value, approx, "exact", {"solver": "projection"}
        if space.p < 1.0:
            raise NoSolverError(
                "best approximation from a linear span with p < 1 is non-convex; "
                "only quantizer, rank, and interleaved-c0 kinds support p < 1"
            )
        value, _, approx, info = _irls_fit(space, cols, x, space.p)
        info["solver"] = "irls"
        status = "upper-bound"
        return value, approx, status, info
    raise NoSolverError(f"no linear-span solver for norm kind {space.norm_kind!r}")


# -- quantizer ----------------------------------------------------------------


@dataclass(frozen=True)
class QuantizerResult:
    value: float
    minimizer: np.ndarray
    labels: np.ndarray


def _partition_feasible(v: np.ndarray, m: int, t: float):
    groups = 1
    start = v[0]
    bounds = [0]
    for i in range(1, v.size):
        if v[i] - start > 2.0 * t:
            groups += 1
            start = v[i]
            bounds.append(i)
            if groups > m:
                return False, bounds
    return True, bounds


def best_m_value_sup(values: np.ndarray, m: int):
    """Optimal sup-distance of a sample vector to vectors with <= m distinct values.

    Greedy feasibility plus bisection on the half-range; the final greedy
    partition is re-measured so the returned value is exactly achievable.
    """
    if m < 1:
        raise SolverError("value budget m must be >= 1")
    order = np.argsort(values, kind="stable")
    v = values[order]
    if v.size == 0:
        return 0.0, np.zeros(0), np.zeros(0, dtype=int)
    lo, hi = 0.0, float(v[-1] - v[0]) / 2.0
    feasible, _ = _partition_feasible(v, m, lo)
    if not feasible:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            ok, _ = _partition_feasible(v, m, mid)
            if ok:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-18 * max(1.0, hi):
                break
    _, bounds = _partition_feasible(v, m, hi)
    bounds.append(v.size)
    value = 0.0
    levels = np.empty(len(bounds) - 1)
    labels_sorted = np.empty(v.size, dtype=int)
    for g, (i, j) in enumerate(zip(bounds[:-1], bounds[1:])):
        half = float(v[j - 1] - v[i]) / 2.0
        value = max(value, half)
        levels[g] = float(v[i]) + half
        labels_sorted[i:j] = g
    minimizer = np.empty_like(values, dtype=float)
    labels = np.empty_like(labels_sorted)
    minimizer[order] = levels[labels_sorted]
    labels[order] = labels_sorted
    return value, minimizer, labels


def quantizer_error(space: Space, x: np.ndarray, m: int) -> QuantizerResult:
    """Best sup-norm approximation by functions taking at most m values."""
    if space.norm_kind != "sup":
        raise NoSolverError("the quantizer solver is defined for sup-norm carriers")
    if m < 1:
        raise SolverError("value budget m must be >= 1")
    x = space.check(x)
    value, minimizer, labels = best_m_value_sup(np.asarray(x, dtype=float), m)
    return QuantizerResult(value, minimizer, labels)


def midpoint_quantizer(x: np.ndarray, m: int, radius: Optional[float] = None) -> np.ndarray:
    """m-level midpoint quantization of [-radius, radius]; error <= radius/m."""
    if radius is None:
        radius = float(np.max(np.abs(x)))
    if radius == 0.0:
        return np.zeros_like(x)
    cell = 2.0 * radius / m
    idx = np.clip(np.floor((x + radius) / cell), 0, m - 1)
    return -radius + (idx + 0.5) * cell


# -- interleaved c0 -----------------------------------------------------------


def _interleaved_error(cap: int, x: np.ndarray, level: int):
    ax = np.abs(x)
    if level <= 0:
        return float(np.max(ax)), np.zeros(cap)
    if level >= 2 * cap - 1:
        return 0.0, x.copy()
    if level % 2 == 1:  # span of the first k coordinates
        k = (level + 1) // 2
        value = float(np.max(ax[k:])) if k < cap else 0.0
        y = x.copy()
        y[k:] = 0.0
        return value, y
    # constrained set on m = k+1 coordinates, last coordinate bounded by
    # max of the leading ones over m
    m = level // 2 + 1
    tail = float(np.max(ax[m:])) if m < cap else 0.0
    lead = float(np.max(ax[: m - 1])) if m >= 2 else 0.0
    value = max(tail, (m * float(ax[m - 1]) - lead) / (m + 1.0), 0.0)
    y = np.zeros(cap)
    y[: m - 1] = x[: m - 1]
    if m >= 2 and lead + value > 0:
        j = int(np.argmax(ax[: m - 1]))
        y[j] = math.copysign(lead + value, x[j] if x[j] != 0 else 1.0)
    allowance = (lead + value) / m
    y[m - 1] = float(np.clip(x[m - 1], -allowance, allowance))
    return value, y


# -- n-term -------------------------------------------------------------------


def _inner_products(space: Space, cols: np.ndarray, x: np.ndarray) -> np.ndarray:
    if space.carrier == "grid":
        return cols.T @ (space.grid.weights * x)
    return cols.T @ x


def _dictionary_is_orthonormal(space: Space, atoms: np.ndarray) -> bool:
    if atoms.shape[1] > 256 or space.norm_kind != "lp" or space.p != 2.0:
        return False
    if space.carrier == "grid":
        g = atoms.T @ (atoms * space.grid.weights[:, None])
    else:
        g = atoms.T @ atoms
    return bool(np.allclose(g, np.eye(atoms.shape[1]), atol=1e-10))


def _nterm_exhaustive(space: Space, atoms: np.ndarray, x: np.ndarray, n: int):
    best = (math.inf, None, "exact", {})
    statuses = set()
    for subset in combinations(range(atoms.shape[1]), n):
        value, approx, status, _ = _fit_in_span(space, atoms[:, list(subset)], x)
        statuses.add(status)
        if value < best[0]:
            best = (value, approx, status, {"subset": list(subset)})
    value, approx, status, info = best
    status = "exact" if statuses == {"exact"} else "upper-bound"
    info.update(solver="exhaustive-subsets")
    return value, approx, status, info


def _nterm_greedy(space: Space, atoms: np.ndarray, x: np.ndarray, n: int, seed: int):
    rng = np.random.default_rng(seed)
    n_atoms = atoms.shape[1]
    col_scale = np.sqrt(np.maximum(_diag_gram(space, atoms), 1e-300))
    best = (math.inf, None, {})
    for restart in range(GREEDY_RESTARTS):
        chosen: list = []
        resid = x.astype(float)
        for step in range(n):
            corr = np.abs(_inner_products(space, atoms, resid)) / col_scale
            corr[chosen] = -math.inf
            if restart > 0 and step == 0:
                top = np.argsort(corr)[-min(16, n_atoms):]
                pick = int(rng.choice(top))
            else:
                pick = int(np.argmax(corr))
            chosen.append(pick)
            _, _, approx = _weighted_l2_fit(space, atoms[:, chosen], x)
            resid = x - approx
        value, approx, status, _ = _fit_in_span(space, atoms[:, chosen], x)
        if value < best[0]:
            best = (value, approx, {"subset": sorted(chosen)})
    value, approx, info = best
    info.update(solver="greedy-omp", restarts=GREEDY_RESTARTS)
    return value, approx, "upper-bound", info


def _diag_gram(space: Space, atoms: np.ndarray) -> np.ndarray:
    if space.carrier == "grid":
        return np.sum(space.grid.weights[:, None] * atoms * atoms, axis=0)
    return np.sum(atoms * atoms, axis=0)


def _nterm_error(space: Space, atoms: np.ndarray, x: np.ndarray, n: int, seed: int):
    if n <= 0:
        return norm(space, x), np.zeros_like(x, dtype=float), "exact", {"solver": "zero-level"}
    n_atoms = atoms.shape[1]
    n = min(n, n_atoms)
    if _dictionary_is_orthonormal(space, atoms):
        b = _inner_products(space, atoms, x)
        top = np.argsort(-np.abs(b))[:n]
        approx = atoms[:, top] @ b[top]
        value = norm(space, x - approx)
        return value, approx, "exact", {"solver": "orthonormal-top-coefficients",
                                        "subset": sorted(int(i) for i in top)}
    if math.comb(n_atoms, n) <= EXHAUSTIVE_SUBSET_LIMIT:
        return _nterm_exhaustive(space, atoms, x, n)
    return _nterm_greedy(space, atoms, x, n, seed)


# -- free-knot splines ----------------------------------------------------------


def _spline_cost_table_l2(space: Space, x: np.ndarray, degree: int) -> np.ndarray:
    """cost[i, j] = squared L2 error of the best degree-<degree> fit on nodes [i, j).

    Cells with at most `degree` nodes are interpolated exactly (cost 0); the
    rest are solved in one batched normal-equation pass per row, using moment
    cumsums in powers of (t - t_i).
    """
    g = space.grid
    t, w = g.nodes, g.weights
    npts = t.size
    d = degree  # number of coefficients
    hankel_idx = np.add.outer(np.arange(d), np.arange(d))
    cost = np.full((npts + 1, npts + 1), math.inf)
    for i in range(npts):
        span = npts - i
        dt = (t[i:] - t[i]) / max(float(t[-1] - t[i]), 1e-300)
        pows = np.vander(dt, 2 * d - 1, increasing=True)  # powers 0 .. 2d-2
        ws = w[i:]
        mom = np.cumsum(ws[:, None] * pows, axis=0)          # sum w * dt^a
        rhs_all = np.cumsum(ws[:, None] * pows[:, :d] * x[i:, None], axis=0)
        xx = np.cumsum(ws * x[i:] ** 2)
        small = min(d, span)
        cost[i, i + 1:i + small + 1] = 0.0  # interpolating fits
        if span > d:
            lens = np.arange(d + 1, span + 1)
            a_stack = mom[lens - 1][:, hankel_idx]           # (L, d, d)
            b_stack = rhs_all[lens - 1]                      # (L, d)
            coef = np.linalg.solve(a_stack, b_stack[..., None])[..., 0]
            sq = xx[lens - 1] - np.einsum("ld,ld->l", coef, b_stack)
            cost[i, i + d + 1:npts + 1] = np.maximum(sq, 0.0)
    return cost


def _spline_cost_entry(space: Space, x: np.ndarray, degree: int, i: int, j: int):
    g = space.grid
    t = g.nodes[i:j]
    if space.norm_kind == "sup":
        value, approx = _sup_fit_exchange(t, x[i:j], degree - 1)
        return value, approx, "exact"
    cols = np.vander((t - t.mean()) / max(float(np.ptp(t)), 1e-300), degree, increasing=True)
    quad = g.weights[i:j]
    if space.p == 2.0:
        u = np.sqrt(quad)
        coef, *_ = np.linalg.lstsq(cols * u[:, None], x[i:j] * u, rcond=None)
        approx = cols @ coef
        return float(np.sum(quad * (x[i:j] - approx) ** 2)), approx, "exact"
    value_p, coef, approx, info = _irls_on_slice(cols, x[i:j], quad, space.p)
    return value_p, approx, "upper-bound"


def _irls_on_slice(cols: np.ndarray, y: np.ndarray, quad: np.ndarray, p: float):
    u = np.sqrt(quad)
    coef, *_ = np.linalg.lstsq(cols * u[:, None], y * u, rcond=None)
    approx = cols @ coef
    scale = max(float(np.max(np.abs(y))), 1.0)
    value = float(np.sum(quad * np.abs(y - approx) ** p))
    info = {}
    for it in range(60):
        r = np.maximum(np.abs(y - approx), IRLS_WEIGHT_FLOOR * scale)
        uu = np.sqrt(quad * r ** (p - 2.0))
        coef, *_ = np.linalg.lstsq(cols * uu[:, None], y * uu, rcond=None)
        approx = cols @ coef
        new_value = float(np.sum(quad * np.abs(y - approx) ** p))
        if abs(new_value - value) < IRLS_REL_TOL * max(new_value, 1e-300):
            value = new_value
            break
        value = new_value
    return value, coef, approx, info


def _spline_error(space: Space, x: np.ndarray, degree: int, knots: int):
    """Dynamic program over grid-node breakpoints with per-cell fits."""
    g = space.grid
    npts = g.size
    if npts > 2049:
        raise NoSolverError("free-knot spline solver is limited to grids of <= 2049 nodes")
    pieces = knots + 1
    if space.norm_kind == "lp" and space.p == 2.0:
        cost = _spline_cost_table_l2(space, x, degree)
        combine = "sum"
        status = "exact"
    else:
        if space.norm_kind == "lp" and space.p < 1.0:
            raise NoSolverError("spline solver does not support p < 1 (non-convex regime)")
        cost = np.full((npts + 1, npts + 1), math.inf)
        status = "exact" if space.norm_kind == "sup" else "upper-bound"
        for i in range(npts):
            for j in range(i + 1, npts + 1):
                cost[i, j] = _spline_cost_entry(space, x, degree, i, j)[0]
        combine = "max" if space.norm_kind == "sup" else "sum"

    dp = np.full((pieces + 1, npts + 1), math.inf)
    arg = np.zeros((pieces + 1, npts + 1), dtype=int)
    dp[0, 0] = 0.0 if combine == "sum" else 0.0
    for k in range(1, pieces + 1):
        prev = dp[k - 1][:, None]
        if combine == "sum":
            total = prev + cost
        else:
            total = np.maximum(prev, cost)
        dp[k] = np.min(total, axis=0)
        arg[k] = np.argmin(total, axis=0)
    raw = float(dp[pieces, npts])
    # reconstruct the minimizer
    cuts = [npts]
    k = pieces
    while k > 0:
        cuts.append(int(arg[k, cuts[-1]]))
        k -= 1
    cuts = cuts[::-1]
    approx = np.empty(npts)
    for i, j in zip(cuts[:-1], cuts[1:]):
        if j <= i:
            continue
        approx[i:j] = _spline_cost_entry(space, x, degree, i, j)[1]
    value = norm(space, x - approx)
    return value, approx, status, {"solver": "breakpoint-dp", "knot_nodes": cuts[1:-1]}


# -- rank -----------------------------------------------------------------------


def _rank_error(space: Space, x: np.ndarray, n: int):
    u, sv, vt = np.linalg.svd(x)
    n = max(n, 0)
    if n >= sv.size:
        return 0.0, x.copy(), "exact", {"solver": "svd-truncation"}
    trunc = (u[:, :n] * sv[:n]) @ vt[:n] if n > 0 else np.zeros_like(x)
    if space.norm_kind == "hs":
        value = float(np.sqrt(np.sum(sv[n:] ** 2)))
    else:
        value = float(sv[n])
    return value, trunc, "exact", {"solver": "svd-truncation"}


# -- public dispatch --------------------------------------------------------------


def best_approx(space: Space, x: np.ndarray, s: Scheme, n: int, seed: int = 0) -> BestApprox:
    """E(x, A_n) with minimizer and exactness status."""
    x = space.check(x)
    if n < 0:
        raise SolverError("level n must be >= 0")
    if s.kind == "chain":
        level = min(n, s.n_max)
        cols = s.basis[:, : s.chain_dim(level)]
        value, approx, status, info = _fit_in_span(space, cols, x)
        return BestApprox(value, approx, status, info)
    if s.kind == "quantizer":
        if n > s.n_max:
            raise SolverError("quantizer level beyond the window has no declared budget")
        res = quantizer_error(space, x, s.m_of(n))
        return BestApprox(res.value, res.minimizer, "exact", {"solver": "sorted-partition"})
    if s.kind == "interleaved-c0":
        if space.norm_kind != "sup":
            raise NoSolverError("interleaved-c0 solver is defined for the sup norm")
        value, y = _interleaved_error(s.cap, np.asarray(x, dtype=float), n)
        return BestApprox(value, y, "exact", {"solver": "coordinate-closed-form"})
    if s.kind == "rank":
        value, approx, status, info = _rank_error(space, x, n)
        return BestApprox(value, approx, status, info)
    if s.kind in ("nterm", "wavelet-haar"):
        value, approx, status, info = _nterm_error(space, s.dictionary.atoms, x, n, seed)
        return BestApprox(value, approx, status, info)
    if s.kind == "spline":
        value, approx, status, info = _spline_error(space, x, s.degree, n)
        return BestApprox(value, approx, status, info)
    raise NoSolverError(f"no solver for scheme kind {s.kind!r}")


# -- profiles -----------------------------------------------------------------


@dataclass(frozen=True)
class ProfileEntry:
    n: int
    value: float
    status: str  # "exact" | "upper-bound" | "error"
    note: str = ""


@dataclass
class ErrorProfile:
    entries: list
    scheme_label: str
    element_norm: float

    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries if e.status != "error"])

    def value_at(self, n: int) -> float:
        for e in self.entries:
            if e.n == n:
                return e.value
        raise KeyError(n)

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme_label,
            "element_norm": self.element_norm,
            "entries": [
                {"n": e.n, "value": e.value, "status": e.status, "note": e.note}
                for e in self.entries
            ],
        }

    def dump_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "value", "status"])
            for e in self.entries:
                w.writerow([e.n, repr(e.value), e.status])

    def dump_plot_data(self, path) -> None:
        with open(path, "w") as fh:
            for e in self.entries:
                if e.status != "error":
                    fh.write(f"{e.n} {e.value!r}\n")


def thread_budget() -> int:
    raw = os.environ.get("LETHARGY_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def error_profile(space: Space, x: np.ndarray, s: Scheme, n_max: int, seed: int = 0) -> ErrorProfile:
    """Tabulate E(x, A_n), n = 0..n_max; solver errors become entries, not raises."""
    x = space.check(x)
    if n_max > s.n_max:
        raise SolverError(f"n_max {n_max} beyond the scheme window {s.n_max}")

    def one(n: int) -> ProfileEntry:
        try:
            r = best_approx(space, x, s, n, seed=seed)
            return ProfileEntry(n, r.value, r.status)
        except (NoSolverError, SolverError, SpaceError, SchemeError) as exc:
            return ProfileEntry(n, math.nan, "error", str(exc))

    levels = list(range(n_max + 1))
    workers = min(thread_budget(), len(levels))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(one, levels))
    else:
        entries = [one(n) for n in levels]

    # nesting makes any achieved value at level n feasible at n+1, so an
    # upper-bound entry may be tightened by its predecessors
    best_so_far = math.inf
    out = []
    for e in entries:
        if e.status == "error":
            out.append(e)
            continue
        if e.status == "upper-bound" and e.value > best_so_far:
            e = ProfileEntry(e.n, best_so_far, e.status, "tightened by level monotonicity")
        best_so_far = min(best_so_far, e.value)
        out.append(e)
    return ErrorProfile(out, s.label, norm(space, x))
