"""Brute-force / global-search maximizer of the secrecy rate.

Ground truth for the closed-form optimizers: a coarse scan over the feasible
box followed by multi-start cyclic coordinate ascent with golden-section
refinement. The search runs in normalized coordinates u in [0,1]^(L*N),
where each node's scaling is u times its cascaded upper bound, so every
iterate is feasible by construction (projection is implicit).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .network import LayeredNetwork, RateReport, ScalingVector, cascade, rates

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_GRID_BUDGET = 20_000
_RANDOM_SCAN = 4_096
# line-search abscissae: linear coverage plus a logarithmic tail toward 0,
# because an optimum can sit at a tiny fraction of the feasible bound when
# the eavesdropper dominates (the secrecy-positive region is then a thin
# sliver next to zero)
_LINE_SCAN = np.unique(np.concatenate((
    [0.0], np.logspace(-6.0, -1.0, 6), np.linspace(1.0 / 12.0, 1.0, 12))))
_LOG_FAMILY = np.concatenate(([0.0], np.logspace(-7.0, 0.0, 22)))


@dataclass(frozen=True)
class SearchConfig:
    """Search knobs. Deterministic for a fixed seed."""

    grid_step: float = 1e-2
    restarts: int = 64
    refine_tol: float = 1e-10
    max_iters: int = 60
    seed: int = 0

    def __post_init__(self):
        if not self.grid_step > 0:
            raise ValueError("grid_step must be > 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True)
class OracleDiagnostics:
    n_evals: int
    n_starts: int
    converged: bool
    starts_agree: bool
    multimodal: bool
    best_objective: float
    start_objectives: tuple[float, ...]

    def as_dict(self) -> dict:
        return {
            "n_evals": self.n_evals,
            "n_starts": self.n_starts,
            "converged": self.converged,
            "starts_agree": self.starts_agree,
            "multimodal": self.multimodal,
            "best_objective": self.best_objective,
            "start_objectives": list(self.start_objectives),
        }


class OracleResult(NamedTuple):
    beta: ScalingVector
    rate: RateReport
    diagnostics: OracleDiagnostics


@dataclass(frozen=True)
class VerificationReport:
    kind: str
    rate_closed: float
    rate_oracle: float
    rate_deviation: float
    max_coord_deviation: float
    passed: bool


def _scalar_objective(net: LayeredNetwork, snoop: tuple[int, ...]):
    """Fast pure-float evaluator of r_t - r_e (unclamped) over u in [0,1]^dim."""
    L = net.L
    m = net.M - 1
    s2 = net.sigma2
    ps_hs2 = net.P_s * net.h_s ** 2
    widths = list(net.nodes_per_layer)
    powers = [list(map(float, net.layer_power(l))) for l in range(L)]
    gains2 = [net.gain_out(l) ** 2 for l in range(L)]
    he = list(map(float, net.he_array()))
    log2 = math.log2

    def objective(u) -> float:
        b_m: list[float] = []
        sig, fwd = ps_hs2, 0.0
        sig_m = fwd_m = 0.0
        idx = 0
        for l in range(L):
            rx = sig + fwd + s2
            s_sum = 0.0
            q_sum = 0.0
            at_m = l == m
            if at_m:
                sig_m, fwd_m = sig, fwd
            p_l = powers[l]
            for n in range(widths[l]):
                b = u[idx] * math.sqrt(p_l[n] / rx)
                idx += 1
                s_sum += b
                q_sum += b * b
                if at_m:
                    b_m.append(b)
            g = gains2[l]
            s_sum *= s_sum
            sig, fwd = sig * s_sum * g, (fwd * s_sum + s2 * q_sum) * g
        snr_t = sig / (fwd + s2)
        if snoop:
            w = 0.0
            own = 0.0
            for i in snoop:
                w += b_m[i] * he[i]
                own += (b_m[i] * he[i]) ** 2
            w *= w
            snr_e = sig_m * w / (fwd_m * w + s2 * own + s2)
        else:
            snr_e = 0.0
        return 0.5 * (log2(1.0 + snr_t) - log2(1.0 + snr_e))

    return objective


def _batch_objective(net: LayeredNetwork, snoop: tuple[int, ...], U: np.ndarray) -> np.ndarray:
    """Vectorized r_t - r_e over a (B, dim) matrix of normalized coordinates."""
    B = U.shape[0]
    s2 = net.sigma2
    sig = np.full(B, net.P_s * net.h_s ** 2)
    fwd = np.zeros(B)
    m = net.M - 1
    sig_m = fwd_m = None
    b_m = None
    col = 0
    for l in range(net.L):
        rx = sig + fwd + s2
        n_l = net.nodes_per_layer[l]
        u_l = U[:, col:col + n_l]
        col += n_l
        bmax = np.sqrt(net.layer_power(l)[None, :] / rx[:, None])
        b = u_l * bmax
        if l == m:
            sig_m, fwd_m, b_m = sig.copy(), fwd.copy(), b
        g = net.gain_out(l) ** 2
        s_sum = b.sum(axis=1) ** 2
        q_sum = (b ** 2).sum(axis=1)
        sig, fwd = sig * s_sum * g, (fwd * s_sum + s2 * q_sum) * g
    snr_t = sig / (fwd + s2)
    if snoop:
        he = net.he_array()
        idx = list(snoop)
        w = (b_m[:, idx] * he[idx]).sum(axis=1) ** 2
        own = ((b_m[:, idx] * he[idx]) ** 2).sum(axis=1)
        snr_e = sig_m * w / (fwd_m * w + s2 * own + s2)
    else:
        snr_e = np.zeros(B)
    return 0.5 * (np.log2(1.0 + snr_t) - np.log2(1.0 + snr_e))


def _golden_max(f, lo: float, hi: float, iters: int = 30) -> tuple[float, float]:
    a, b = lo, hi
    c = b - (b - a) * _INVPHI
    d = a + (b - a) * _INVPHI
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * _INVPHI
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * _INVPHI
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _line_max(f, scan, evals_box):
    """Best point along a 1-D slice: coarse scan plus golden refinement of
    the bracketing interval."""
    vals = [f(x) for x in scan]
    j = int(np.argmax(vals))
    x_best, v_best = scan[j], vals[j]
    lo = scan[max(j - 1, 0)]
    hi = scan[min(j + 1, len(scan) - 1)]
    x_g, v_g = _golden_max(f, lo, hi, iters=28)
    evals_box[0] += len(scan) + 30
    if v_g > v_best:
        return x_g, v_g
    return x_best, v_best


def _refine(objective, u0: np.ndarray, blocks: list[tuple[int, int]],
            max_cycles: int, tol: float) -> tuple[np.ndarray, float, bool, int]:
    """Cyclic coordinate ascent with golden-section line searches.

    Each cycle sweeps the single coordinates and then each layer as a block
    (all of a layer's coordinates moved to a common value); block moves
    escape the diagonal traps where every single-coordinate move from a
    coordinate-wise maximum loses.
    """
    u = u0.astype(float).copy()
    dim = u.size
    best = objective(u)
    evals = [1]
    scan = _LINE_SCAN
    converged = False
    for _ in range(max_cycles):
        before = best
        for i in range(dim):
            xi = u[i]

            def f(x, i=i):
                u[i] = x
                return objective(u)

            x_best, v_best = _line_max(f, scan, evals)
            if v_best > best:
                best = v_best
                u[i] = x_best
            else:
                u[i] = xi
        for lo_i, hi_i in blocks:
            saved = u[lo_i:hi_i].copy()

            def f_block(x, lo_i=lo_i, hi_i=hi_i):
                u[lo_i:hi_i] = x
                return objective(u)

            x_best, v_best = _line_max(f_block, scan, evals)
            if v_best > best:
                best = v_best
                u[lo_i:hi_i] = x_best
            else:
                u[lo_i:hi_i] = saved
        if best - before < tol:
            converged = True
            break
    return u, best, converged, evals[0]


def maximize_secrecy(net: LayeredNetwork, snooped: Iterable[int] | None = None,
                     cfg: SearchConfig | None = None) -> OracleResult:
    """Search the feasible box for the scaling vector maximizing R_t - R_e.

    Coarse phase: exhaustive grid when the total dimension is at most 8
    (resolution limited by an evaluation budget), otherwise a seeded random
    scan. The best candidates seed cyclic coordinate ascent with
    golden-section line refinement. Deterministic for a fixed config.
    """
    cfg = cfg or SearchConfig()
    dim = int(sum(net.nodes_per_layer))
    if dim > 16:
        raise ValueError("search dimension above 16 is unsupported")
    m = net.M - 1
    n_m = net.nodes_per_layer[m]
    if snooped is None:
        snoop = tuple(range(n_m))
    else:
        snoop = tuple(sorted(set(int(i) for i in snooped)))
        if any(i < 0 or i >= n_m for i in snoop):
            raise ValueError("snooped node index out of range")

    rng = np.random.default_rng(cfg.seed)
    cands = [np.ones((1, dim))]
    if dim <= 8:
        per_dim = int(round(1.0 / cfg.grid_step)) + 1
        while per_dim > 2 and per_dim ** dim > _GRID_BUDGET:
            per_dim -= 1
        axes = [np.linspace(0.0, 1.0, per_dim)] * dim
        mesh = np.meshgrid(*axes, indexing="ij")
        cands.append(np.stack([g.ravel() for g in mesh], axis=1))
    # per-layer symmetric product grid: all nodes of a layer share one value
    per_layer = int(round(3000 ** (1.0 / net.L)))
    per_layer = max(3, min(per_layer, 41))
    sym_axes = np.meshgrid(*([np.linspace(0.0, 1.0, per_layer)] * net.L),
                           indexing="ij")
    sym = np.stack([g.ravel() for g in sym_axes], axis=1)
    cands.append(np.repeat(sym, net.nodes_per_layer, axis=1))
    # one layer backed off onto a log scale, everything else at the bound
    offs = np.cumsum([0] + list(net.nodes_per_layer))
    for l in range(net.L):
        fam = np.ones((_LOG_FAMILY.size, dim))
        fam[:, offs[l]:offs[l + 1]] = _LOG_FAMILY[:, None]
        cands.append(fam)
    cands.append(rng.random((_RANDOM_SCAN, dim)))
    U = np.vstack(cands)
    vals = _batch_objective(net, snoop, U)
    order = np.argsort(-vals, kind="stable")
    n_starts = min(cfg.restarts, len(order))
    starts = U[order[:n_starts]]
    initial_best = float(vals[order[0]])

    objective = _scalar_objective(net, snoop)
    blocks = [(int(offs[l]), int(offs[l + 1])) for l in range(net.L)
              if net.nodes_per_layer[l] > 1]
    total_evals = int(U.shape[0])
    finals: list[tuple[float, np.ndarray, bool]] = []
    for s in starts:
        u, val, conv, ev = _refine(objective, s, blocks, cfg.max_iters,
                                   cfg.refine_tol)
        total_evals += ev
        finals.append((val, u, conv))

    best_val = max(v for v, _, _ in finals)
    # deterministic tie-break: among near-best finals, lexicographically
    # smallest beta vector
    tied = [(v, u, c) for v, u, c in finals if best_val - v <= cfg.refine_tol]

    def beta_of(u):
        return cascade(net, lambda l, bmax: u[offs[l]:offs[l + 1]] * bmax)

    keyed = []
    for v, u, c in tied:
        betas, bounds = beta_of(u)
        key = tuple(float(x) for b in betas for x in b)
        keyed.append((key, betas, bounds))
    keyed.sort(key=lambda t: t[0])
    _, betas, bounds = keyed[0]

    sv = ScalingVector(beta=tuple(tuple(map(float, b)) for b in betas),
                       beta_max=tuple(tuple(map(float, b)) for b in bounds))
    report = rates(net, sv, snooped=snoop)
    spread = max(v for v, _, _ in finals) - min(v for v, _, _ in finals)
    agree = spread <= max(cfg.refine_tol, 1e-9)
    diag = OracleDiagnostics(
        n_evals=total_evals,
        n_starts=n_starts,
        converged=all(c for _, _, c in finals),
        starts_agree=agree,
        multimodal=not agree,
        best_objective=max(best_val, initial_best),
        start_objectives=tuple(float(v) for v, _, _ in finals),
    )
    return OracleResult(beta=sv, rate=report, diagnostics=diag)


def verify_against_closed_form(net: LayeredNetwork,
                               cfg: SearchConfig | None = None) -> VerificationReport:
    """Run the closed-form optimizer and the search on the same network.

    PASS iff the secrecy rates agree within max(1e-4 absolute, 1e-4 relative).
    """
    from .diamond import diamond_opt
    from .layered import optimal_scaling

    if net.L == 1 and net.common_h_e is not None:
        sol = diamond_opt(net)
        kind = "diamond"
        rate_closed = sol.rate.r_s
        beta_closed = np.full(net.nodes_per_layer[0], sol.beta_opt)
    else:
        sol = optimal_scaling(net)
        kind = "layered"
        rate_closed = sol.rate.r_s
        beta_closed = sol.beta.flat()

    res = maximize_secrecy(net, cfg=cfg)
    rate_oracle = res.rate.r_s
    dev = abs(rate_closed - rate_oracle)
    tol = max(1e-4, 1e-4 * max(abs(rate_closed), abs(rate_oracle)))
    coord_dev = float(np.max(np.abs(beta_closed - res.beta.flat())))
    return VerificationReport(kind=kind, rate_closed=rate_closed,
                              rate_oracle=rate_oracle, rate_deviation=dev,
                              max_coord_deviation=coord_dev, passed=dev <= tol)
