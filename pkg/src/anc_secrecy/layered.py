"""Globally optimal scaling for uniform-N layered networks with equal
per-hop gains: upstream layers at maximum power, the snooped layer from a
closed-form stationary point, downstream layers at maximum power.

With layers M+1..L transmitting at full power (their bounds adapt to
whatever layer M sends), the destination SNR is exactly a ratio linear in
S = (sum beta_M)^2 and Q = sum beta_M^2:

    SNR_t = rho * A * S * h_M^2 / (B * S * h_M^2 + C * Q * h_M^2 + D)
    SNR_e = rho * E * S * h_e^2 / (F * S * h_e^2 + Q * h_e^2 + 1)

A = alpha*E is known in closed form, so (B, C, D) follow from exact SNR_t
evaluations at three probe configurations with independent (S, Q): no
recursion is needed and the extraction validates itself against direct
propagation. The common optimal beta_M then solves a quadratic in beta_M^2
whose coefficients generalize the printed two-node form to any N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import (
    DegenerateNetworkError,
    LayeredNetwork,
    RateReport,
    ScalingVector,
    cascade,
    rates,
)


@dataclass(frozen=True)
class CoefficientSet:
    """Reduced-form constants of the layer-M subproblem.

    E, F describe the source side at the given upstream scaling; alpha, lam,
    mu, nu the downstream compounds; A = alpha*E, B = lam*E + mu*F, C = mu,
    D = nu the destination-SNR coefficients; cal_A, cal_B, cal_C the
    stationary-point quadratic coefficients (in beta_M^2) for the actual
    layer width N.
    """

    E: float
    F: float
    alpha: float
    lam: float
    mu: float
    nu: float
    A: float
    B: float
    C: float
    D: float
    cal_A: float
    cal_B: float
    cal_C: float


@dataclass(frozen=True)
class LayerMSolution:
    beta_opt: float
    beta_glb: float
    clipped: bool
    sign_positive: bool
    needs_oracle: bool = False
    diagnostics: tuple[str, ...] = ()


@dataclass(frozen=True)
class LayeredSolution:
    beta: ScalingVector
    rate: RateReport
    layer_m: LayerMSolution | None
    diagnostics: tuple[str, ...] = ()


def _require_lemma_network(net: LayeredNetwork) -> tuple[int, float]:
    n = net.uniform_N
    if n is None:
        raise ValueError("closed-form layered optimizer requires a uniform layer width")
    he = net.common_h_e
    if he is None:
        raise ValueError("closed-form layered optimizer requires a common eavesdropper gain")
    p_m = net.layer_power(net.M - 1)
    if len(set(p_m.tolist())) != 1:
        raise ValueError("layer M must have a uniform power cap")
    return n, he


def _upstream_state(net: LayeredNetwork, beta_upstream) -> tuple[list, float, float, float, float]:
    """Propagate layers 1..M-1 and return (betas, sig, fwd, E, F)."""
    s2 = net.sigma2
    sig = net.P_s * net.h_s ** 2
    fwd = 0.0
    e_val = net.h_s ** 2
    f_val = 0.0
    betas = []
    for l in range(net.M - 1):
        rx = sig + fwd + s2
        if beta_upstream is None:
            b = np.sqrt(net.layer_power(l) / rx)
        else:
            b = np.asarray(beta_upstream[l], dtype=float)
        betas.append(b)
        g = net.h[l] ** 2
        s_sum = float(b.sum()) ** 2
        q_sum = float((b ** 2).sum())
        e_val *= s_sum * g
        f_val = (f_val * s_sum + q_sum) * g
        sig, fwd = sig * s_sum * g, (fwd * s_sum + s2 * q_sum) * g
    return betas, sig, fwd, e_val, f_val


def _snr_t_downstream_max(net: LayeredNetwork, sig_m: float, fwd_m: float,
                          beta_m_vec) -> float:
    """Exact SNR_t with the given layer-M vector and layers M+1..L at the
    full-power bound implied by the actual upstream transmissions."""
    s2 = net.sigma2
    m = net.M - 1
    g = net.gain_out(m) ** 2
    s_sum = float(np.sum(beta_m_vec)) ** 2
    q_sum = float(np.sum(np.square(beta_m_vec)))
    sig, fwd = sig_m * s_sum * g, (fwd_m * s_sum + s2 * q_sum) * g
    for l in range(net.M, net.L):
        rx = sig + fwd + s2
        b = np.sqrt(net.layer_power(l) / rx)
        g = net.gain_out(l) ** 2
        s_sum = float(b.sum()) ** 2
        q_sum = float((b ** 2).sum())
        sig, fwd = sig * s_sum * g, (fwd * s_sum + s2 * q_sum) * g
    return sig / (fwd + s2)


def extract_coefficients(net: LayeredNetwork, beta_upstream=None) -> CoefficientSet:
    """Recover the layer-M subproblem coefficients by probe evaluation.

    Layers 1..M-1 use beta_upstream (their maxima when omitted). Three exact
    SNR_t evaluations at probe vectors with linearly independent (S, Q) pin
    (B, C, D) through a linear solve, with A = alpha*E fixed by the
    numerator. A single-node layer M cannot separate S from Q, so probing
    then widens layer M to two virtual nodes; the downstream response
    depends only on (S, Q), not on the layer's width, so the recovered
    coefficients are those of the real network.
    """
    n, he = _require_lemma_network(net)
    rho = net.P_s / net.sigma2
    _, sig_m, fwd_m, e_val, f_val = _upstream_state(net, beta_upstream)

    h_m2 = net.gain_out(net.M - 1) ** 2
    alpha = 1.0
    for l in range(net.M, net.L):
        sqrt_p = float(np.sqrt(net.layer_power(l)).sum())
        alpha *= sqrt_p ** 2 * net.gain_out(l) ** 2
    a_val = alpha * e_val

    rx_m = sig_m + fwd_m + net.sigma2
    c = math.sqrt(float(net.layer_power(net.M - 1)[0]) / rx_m)
    width = max(n, 2)
    probes = [np.full(width, c), np.full(width, c / 2),
              np.concatenate(([c], np.zeros(width - 1)))]

    rows, rhs = [], []
    for vec in probes:
        s_val = float(vec.sum()) ** 2
        q_val = float((vec ** 2).sum())
        snr = _snr_t_downstream_max(net, sig_m, fwd_m, vec)
        rows.append([snr * s_val * h_m2, snr * q_val * h_m2, snr])
        rhs.append(rho * a_val * s_val * h_m2)
    mat = np.asarray(rows)
    try:
        sol = np.linalg.solve(mat, np.asarray(rhs))
    except np.linalg.LinAlgError:
        raise DegenerateNetworkError("singular probe system (dead gain out of layer M)")
    if not np.all(np.isfinite(sol)) or np.linalg.cond(mat) > 1e13:
        raise DegenerateNetworkError("singular probe system (dead gain out of layer M)")
    b_val, c_val, d_val = (float(x) for x in sol)

    if e_val <= 0:
        raise DegenerateNetworkError("dead source path into layer M")
    mu = c_val
    nu = d_val
    lam = (b_val - mu * f_val) / e_val

    cal_a, cal_b, cal_c = _stationary_coefficients(
        n=n, rho=rho, h_m2=h_m2, he2=he ** 2,
        E=e_val, F=f_val, alpha=alpha, lam=lam, mu=mu, nu=nu)
    return CoefficientSet(E=e_val, F=f_val, alpha=alpha, lam=lam, mu=mu, nu=nu,
                          A=a_val, B=b_val, C=c_val, D=d_val,
                          cal_A=cal_a, cal_B=cal_b, cal_C=cal_c)


def _stationary_coefficients(n, rho, h_m2, he2, E, F, alpha, lam, mu, nu):
    """Quadratic (in beta_M^2) whose positive root is the interior optimum.

    Written for general layer width n; at n = 2 the (n F + 1) factors
    collapse to the two-node (2F+1) form.
    """
    t = n * F + 1.0
    cal_c = nu * (h_m2 * alpha - he2 * nu)
    cal_b = 2.0 * n * nu * h_m2 * he2 * ((alpha - mu) * t - n * lam * E)
    cal_a = n ** 2 * h_m2 * he2 * (
        he2 * alpha * nu * t * (t + n * rho * E)
        - h_m2 * (n * lam * E + t * mu) * (t * mu + n * (lam + rho * alpha) * E)
    )
    return cal_a, cal_b, cal_c


def reduced_snrs(coeffs: CoefficientSet, h_m: float, h_e: float, rho: float,
                 s_val: float, q_val: float) -> tuple[float, float]:
    """SNR_t and SNR_e rebuilt from the extracted coefficients at given
    S = (sum beta_M)^2 and Q = sum beta_M^2."""
    h_m2, he2 = h_m ** 2, h_e ** 2
    snr_t = (rho * coeffs.A * s_val * h_m2
             / (coeffs.B * s_val * h_m2 + coeffs.C * q_val * h_m2 + coeffs.D))
    snr_e = (rho * coeffs.E * s_val * he2
             / (coeffs.F * s_val * he2 + q_val * he2 + 1.0))
    return snr_t, snr_e


def lemma_beta_M(coeffs: CoefficientSet, h_M: float, h_e: float,
                 beta_M_max: float) -> LayerMSolution:
    """Common optimal scaling for the snooped layer's nodes.

    When h_M^2 alpha - h_e^2 nu > 0 the interior stationary point is
    beta_glb^2 = (|B|/2|A|)(sqrt(1 + 4|A|C/B^2) - 1) in the quadratic's
    coefficients, clipped at beta_M_max; otherwise zero is optimal. The
    rationalized form 2C / (|B| + sqrt(B^2 + 4|A|C)) is used, which is the
    same root and covers the B = 0 and A = 0 degeneracies without branching.
    """
    sign = h_M ** 2 * coeffs.alpha - h_e ** 2 * coeffs.nu
    if sign <= 0:
        return LayerMSolution(beta_opt=0.0, beta_glb=0.0, clipped=False,
                              sign_positive=False)
    cal_a, cal_b, cal_c = coeffs.cal_A, coeffs.cal_B, coeffs.cal_C
    diagnostics: list[str] = []
    if cal_a > 0 or cal_c <= 0:
        # the sign condition is supposed to force cal_A < 0 < cal_C
        diagnostics.append(
            f"unexpected stationary-coefficient signs: cal_A={cal_a:.3e}, cal_C={cal_c:.3e}")
        if cal_a >= 0 and cal_b == 0:
            return LayerMSolution(beta_opt=beta_M_max, beta_glb=math.nan,
                                  clipped=True, sign_positive=True,
                                  needs_oracle=True, diagnostics=tuple(diagnostics))
    if cal_a == 0 and cal_b == 0:
        return LayerMSolution(beta_opt=beta_M_max, beta_glb=math.nan, clipped=True,
                              sign_positive=True, needs_oracle=True,
                              diagnostics=("degenerate stationarity: cal_A = cal_B = 0",))
    disc = math.sqrt(max(cal_b ** 2 + 4.0 * abs(cal_a) * cal_c, 0.0))
    x = 2.0 * cal_c / (abs(cal_b) + disc)
    beta_glb = math.sqrt(max(x, 0.0))
    clipped = beta_glb >= beta_M_max * (1 - 1e-12)
    beta_opt = min(beta_M_max, beta_glb)
    return LayerMSolution(beta_opt=beta_opt, beta_glb=beta_glb, clipped=clipped,
                          sign_positive=True, diagnostics=tuple(diagnostics))


def optimal_scaling(net: LayeredNetwork) -> LayeredSolution:
    """Network-wide optimal scaling vector and its rates.

    Layers 1..M-1 and M+1..L transmit at maximum power; layer M uses the
    closed-form common optimum. All bounds cascade front-to-back from the
    actual upstream values, so downstream layers still reach full power when
    layer M backs off. h_e = 0 means no eavesdropper: everything at max.
    """
    n, he = _require_lemma_network(net)
    diagnostics: list[str] = []

    if he == 0.0:
        betas, bounds = cascade(net, lambda l, bmax: bmax)
        sv = _to_scaling(betas, bounds)
        return LayeredSolution(beta=sv, rate=rates(net, sv), layer_m=None,
                               diagnostics=("no eavesdropper: all layers at max",))

    coeffs = extract_coefficients(net)
    _, sig_m, fwd_m, _, _ = _upstream_state(net, None)
    rx_m = sig_m + fwd_m + net.sigma2
    beta_m_max = math.sqrt(float(net.layer_power(net.M - 1)[0]) / rx_m)
    h_m = net.gain_out(net.M - 1)
    sol_m = lemma_beta_M(coeffs, h_m, he, beta_m_max)
    diagnostics.extend(sol_m.diagnostics)

    beta_m = sol_m.beta_opt
    if sol_m.needs_oracle:
        from .oracle import SearchConfig, maximize_secrecy
        res = maximize_secrecy(net, cfg=SearchConfig(restarts=8))
        diagnostics.append("layer-M optimum from search fallback")
        return LayeredSolution(beta=res.beta, rate=res.rate, layer_m=sol_m,
                               diagnostics=tuple(diagnostics))

    m = net.M - 1
    betas, bounds = cascade(
        net, lambda l, bmax: np.full_like(bmax, beta_m) if l == m else bmax)
    sv = _to_scaling(betas, bounds)
    return LayeredSolution(beta=sv, rate=rates(net, sv), layer_m=sol_m,
                           diagnostics=tuple(diagnostics))


def _to_scaling(betas, bounds) -> ScalingVector:
    return ScalingVector(beta=tuple(tuple(map(float, b)) for b in betas),
                         beta_max=tuple(tuple(map(float, b)) for b in bounds))
