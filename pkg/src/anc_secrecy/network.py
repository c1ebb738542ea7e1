"""Layered amplify-and-forward relay network model and exact rate evaluation.

A source feeds L relay layers in series; every relay scales its noisy
received sum by a per-node factor beta and retransmits, and the last layer
reaches the destination. An eavesdropper overhears the transmissions of one
relay layer M. All channel gains between two adjacent layers are equal, so
every node of a layer sees identical input statistics: a coherent source
component, a forwarded-noise component common to the whole layer, and its
own thermal noise. Received powers therefore propagate front-to-back with
two scalars per layer, which is what `propagate` computes exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class DegenerateNetworkError(ValueError):
    """Raised when a quantity is undefined for the given network (zero
    received power, dead source-destination path in a closed-form solver)."""


class RegimeViolationError(ValueError):
    """A relay layer's input SNR is below 1/delta, so the delta-scaled
    amplification is not feasible."""

    def __init__(self, layer: int, snr: float, delta: float):
        self.layer = layer
        self.snr = snr
        self.delta = delta
        super().__init__(
            f"layer {layer} input SNR {snr:.6g} is below 1/delta = {1.0 / delta:.6g}"
        )


def _as_float_tuple(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class LayeredNetwork:
    """Network description.

    L relay layers with nodes_per_layer[l] nodes each. h_s is the
    source-to-layer-1 gain, h[i] the gain from layer i+1 to layer i+2
    (len L-1), h_t the last-layer-to-destination gain, and h_e the gain from
    the snooped layer M (1-based) to the eavesdropper, either a scalar or
    one value per node of layer M. P is the per-relay transmit power cap,
    either a scalar or a nested per-layer/per-node structure.
    """

    L: int
    nodes_per_layer: tuple[int, ...]
    h_s: float
    h: tuple[float, ...]
    h_t: float
    h_e: float | tuple[float, ...]
    M: int
    P_s: float
    P: float | tuple[tuple[float, ...], ...]
    sigma2: float

    def __post_init__(self):
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "nodes_per_layer", tuple(int(n) for n in self.nodes_per_layer))
        object.__setattr__(self, "h_s", float(self.h_s))
        object.__setattr__(self, "h", _as_float_tuple(self.h))
        object.__setattr__(self, "h_t", float(self.h_t))
        object.__setattr__(self, "P_s", float(self.P_s))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        if isinstance(self.h_e, (tuple, list, np.ndarray)):
            object.__setattr__(self, "h_e", _as_float_tuple(self.h_e))
        else:
            object.__setattr__(self, "h_e", float(self.h_e))
        if isinstance(self.P, (tuple, list, np.ndarray)):
            object.__setattr__(self, "P", tuple(_as_float_tuple(row) for row in self.P))
        else:
            object.__setattr__(self, "P", float(self.P))

        if self.L < 1:
            raise ValueError("L must be >= 1")
        if len(self.nodes_per_layer) != self.L:
            raise ValueError("nodes_per_layer must have L entries")
        if any(n < 1 for n in self.nodes_per_layer):
            raise ValueError("every layer needs at least one node")
        if not 1 <= self.M <= self.L:
            raise ValueError("M must be in 1..L")
        if len(self.h) != self.L - 1:
            raise ValueError("h must have L-1 inter-layer gains")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be > 0")
        if self.P_s < 0:
            raise ValueError("P_s must be >= 0")
        if isinstance(self.h_e, tuple) and len(self.h_e) != self.nodes_per_layer[self.M - 1]:
            raise ValueError("per-node h_e must have one entry per node of layer M")
        if isinstance(self.P, tuple):
            if len(self.P) != self.L:
                raise ValueError("per-node P must have one row per layer")
            for l, row in enumerate(self.P):
                if len(row) != self.nodes_per_layer[l]:
                    raise ValueError(f"P row {l + 1} does not match layer width")
        for row in self.P if isinstance(self.P, tuple) else ((self.P,),):
            if any(p < 0 for p in row):
                raise ValueError("relay powers must be >= 0")

    @classmethod
    def diamond(cls, N, h_s, h_t, h_e, P_s, P, sigma2) -> "LayeredNetwork":
        """Single relay layer between source and destination."""
        return cls(L=1, nodes_per_layer=(N,), h_s=h_s, h=(), h_t=h_t, h_e=h_e,
                   M=1, P_s=P_s, P=P, sigma2=sigma2)

    # -- structural helpers -------------------------------------------------
    def layer_power(self, l: int) -> np.ndarray:
        """Per-node transmit power caps of layer l (0-based)."""
        if isinstance(self.P, tuple):
            return np.asarray(self.P[l], dtype=float)
        return np.full(self.nodes_per_layer[l], self.P, dtype=float)

    def gain_out(self, l: int) -> float:
        """Gain out of relay layer l (0-based); h_t for the last layer."""
        return self.h[l] if l < self.L - 1 else self.h_t

    def he_array(self) -> np.ndarray:
        n_m = self.nodes_per_layer[self.M - 1]
        if isinstance(self.h_e, tuple):
            return np.asarray(self.h_e, dtype=float)
        return np.full(n_m, self.h_e, dtype=float)

    @property
    def uniform_N(self) -> int | None:
        ns = set(self.nodes_per_layer)
        return self.nodes_per_layer[0] if len(ns) == 1 else None

    @property
    def uniform_P(self) -> float | None:
        if isinstance(self.P, float):
            return self.P
        vals = {p for row in self.P for p in row}
        return next(iter(vals)) if len(vals) == 1 else None

    @property
    def common_h_e(self) -> float | None:
        """Scalar eavesdropper gain if all snooped-layer gains agree."""
        if isinstance(self.h_e, float):
            return self.h_e
        return self.h_e[0] if len(set(self.h_e)) == 1 else None


@dataclass(frozen=True)
class ScalingVector:
    """Per-node amplification factors with optional per-node upper bounds."""

    beta: tuple[tuple[float, ...], ...]
    beta_max: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(_as_float_tuple(row) for row in self.beta))
        if self.beta_max is not None:
            object.__setattr__(self, "beta_max",
                               tuple(_as_float_tuple(row) for row in self.beta_max))
        for row in self.beta:
            if any(not math.isfinite(b) or b < 0 for b in row):
                raise ValueError("scaling factors must be finite and >= 0")
        if self.beta_max is not None:
            if tuple(len(r) for r in self.beta_max) != tuple(len(r) for r in self.beta):
                raise ValueError("beta and beta_max shapes differ")
            for brow, mrow in zip(self.beta, self.beta_max):
                for b, m in zip(brow, mrow):
                    if b > m * (1 + 1e-9) + 1e-15:
                        raise ValueError(f"beta {b} exceeds its bound {m}")

    def layer(self, l: int) -> np.ndarray:
        return np.asarray(self.beta[l], dtype=float)

    def flat(self) -> np.ndarray:
        return np.concatenate([np.asarray(row, dtype=float) for row in self.beta])


@dataclass(frozen=True)
class PowerFlow:
    """Received powers at each relay layer's input and at the destination.

    signal_power / noise_power are the coherent source power and the
    accumulated forwarded-noise power at a node's input (own thermal noise
    excluded); rx_power adds sigma2. All nodes of one layer share the same
    entries.
    """

    signal_power: tuple[float, ...]
    noise_power: tuple[float, ...]
    rx_power: tuple[float, ...]
    dest_signal: float
    dest_noise: float


@dataclass(frozen=True)
class RateReport:
    """SNRs and rates (bits/s/Hz, base-2 logs) for one scaling configuration."""

    snr_t: float
    snr_e: float
    r_t: float
    r_e: float
    r_s: float

    @classmethod
    def from_snrs(cls, snr_t: float, snr_e: float) -> "RateReport":
        r_t = 0.5 * math.log2(1.0 + snr_t)
        r_e = 0.5 * math.log2(1.0 + snr_e)
        return cls(snr_t=snr_t, snr_e=snr_e, r_t=r_t, r_e=r_e, r_s=max(r_t - r_e, 0.0))


def cascade(net: LayeredNetwork, policy) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Front-to-back propagation computing each layer's scaling bound.

    policy(l, bmax) -> betas actually used at layer l; the received power of
    layer l+1 is then computed from those betas, so bounds always reflect the
    actual upstream transmissions. Returns (betas, bounds) as per-layer arrays.
    """
    s2 = net.sigma2
    sig = net.P_s * net.h_s ** 2
    fwd = 0.0
    betas: list[np.ndarray] = []
    bounds: list[np.ndarray] = []
    for l in range(net.L):
        rx = sig + fwd + s2
        if not rx > 0:
            raise DegenerateNetworkError(f"zero received power at layer {l + 1}")
        bmax = np.sqrt(net.layer_power(l) / rx)
        b = np.asarray(policy(l, bmax), dtype=float)
        betas.append(b)
        bounds.append(bmax)
        g = net.gain_out(l) ** 2
        s_sum = float(b.sum()) ** 2
        q_sum = float((b ** 2).sum())
        sig, fwd = sig * s_sum * g, (fwd * s_sum + s2 * q_sum) * g
    return betas, bounds


def beta_max_vector(net: LayeredNetwork) -> ScalingVector:
    """Per-node maximum scaling factors, beta_max^2 = P / P_Rx.

    Bounds are computed front-to-back with every upstream layer at its own
    maximum, starting from P_Rx,1 = P_s h_s^2 + sigma2.
    """
    if not net.sigma2 > 0:
        raise DegenerateNetworkError("sigma2 must be > 0")
    _, bounds = cascade(net, lambda l, bmax: bmax)
    rows = tuple(tuple(float(x) for x in row) for row in bounds)
    return ScalingVector(beta=rows, beta_max=rows)


def propagate(net: LayeredNetwork, scaling: ScalingVector) -> PowerFlow:
    """Exact signal/noise power propagation for a given scaling vector."""
    s2 = net.sigma2
    sig = net.P_s * net.h_s ** 2
    fwd = 0.0
    sig_in, fwd_in, rx_in = [], [], []
    for l in range(net.L):
        sig_in.append(sig)
        fwd_in.append(fwd)
        rx_in.append(sig + fwd + s2)
        b = scaling.layer(l)
        g = net.gain_out(l) ** 2
        s_sum = float(b.sum()) ** 2
        q_sum = float((b ** 2).sum())
        sig, fwd = sig * s_sum * g, (fwd * s_sum + s2 * q_sum) * g
    return PowerFlow(signal_power=tuple(sig_in), noise_power=tuple(fwd_in),
                     rx_power=tuple(rx_in), dest_signal=sig, dest_noise=fwd)


def rates(net: LayeredNetwork, scaling: ScalingVector,
          snooped: Iterable[int] | None = None) -> RateReport:
    """Destination and eavesdropper SNRs and rates for a scaling vector.

    snooped selects which layer-M nodes (0-based) the eavesdropper hears;
    default is the whole layer. Only the snooped nodes' transmissions reach
    the eavesdropper: the coherent source component and the noise forwarded
    from layers 1..M-1 arrive through them, plus their own thermal noise.
    """
    flow = propagate(net, scaling)
    snr_t = flow.dest_signal / (flow.dest_noise + net.sigma2)

    m = net.M - 1
    n_m = net.nodes_per_layer[m]
    if snooped is None:
        snoop = tuple(range(n_m))
    else:
        snoop = tuple(sorted(set(int(i) for i in snooped)))
        if any(i < 0 or i >= n_m for i in snoop):
            raise ValueError("snooped node index out of range for layer M")
    if not snoop:
        return RateReport.from_snrs(snr_t, 0.0)

    b_m = scaling.layer(m)
    he = net.he_array()
    w = float(sum(b_m[i] * he[i] for i in snoop)) ** 2
    own = float(sum((b_m[i] * he[i]) ** 2 for i in snoop))
    s2 = net.sigma2
    snr_e = flow.signal_power[m] * w / (flow.noise_power[m] * w + s2 * own + s2)
    return RateReport.from_snrs(snr_t, snr_e)


def max_scaling_with_layer(net: LayeredNetwork, layer: int,
                           beta_layer: Sequence[float] | float) -> ScalingVector:
    """All layers at max except `layer` (0-based), which uses beta_layer.

    Downstream bounds are computed from the actual upstream values, so layers
    after `layer` still transmit at full power even when beta_layer is below
    its own bound.
    """
    def policy(l, bmax):
        if l != layer:
            return bmax
        if np.isscalar(beta_layer):
            return np.full_like(bmax, float(beta_layer))
        return np.asarray(beta_layer, dtype=float)

    betas, bounds = cascade(net, policy)
    return ScalingVector(beta=tuple(tuple(map(float, b)) for b in betas),
                         beta_max=tuple(tuple(map(float, b)) for b in bounds))
