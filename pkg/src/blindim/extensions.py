# blindim/extensions.py
"""Scenario extensions: harvesting ICI-free samples created by propagation
delay (L_D > L_I case with delayed interference arrival), and treating
late-arriving residual ICI taps as noise (L_D <= L_I case).

Both scenarios share a two-stage receiver: a 0/1 folding matrix W1 restores a
cyclic structure on every (considered) interfering link by adding the leading
interference-free samples onto their positions one period later, and the IDFT
row projector W2 then nulls the interference exactly as in the base scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import TransmissionPlan, require_valid
from .spectral import idft_basis
from .transceiver import DecodeResult, detect_zf


@dataclass(frozen=True)
class DelayProfile:
    """Tap bookkeeping for delayed / partially-cancelled interference.

    L_I_d leading ICI taps are zero due to propagation delay; taps up to
    L_I_prime are cancelled by the combiner; any taps in [L_I_prime, L_I) are
    treated as residual noise.
    """

    L_I_d: int        # ICI delay-offset taps (leading zeros of every cross link)
    L_I_prime: int    # considered ICI length (cyclic prefix is L_I_prime - 1)
    L_I: int          # true maximum ICI length

    def __post_init__(self):
        if not 0 <= self.L_I_d <= self.L_I_prime <= self.L_I:
            raise ValueError("require 0 <= L_I_d <= L_I_prime <= L_I")

    @property
    def L_I_eff(self) -> int:
        return self.L_I - self.L_I_d


@dataclass
class TwoStageCombiner:
    W1: np.ndarray    # N x (cp + N) 0/1 folding matrix
    W2: np.ndarray    # (N - M_D) x N IDFT-row projector


def build_two_stage_combiner(N, L_D, L_I_prime, L_I_d, M_D=1) -> TwoStageCombiner:
    """First-stage fold plus second-stage projection.

    W1 selects the N core samples after the cyclic prefix of length
    cp = L_I_prime - 1 and additionally adds each of the L_I_d
    interference-free leading samples onto the sample one core period later.
    """
    cp = L_I_prime - 1
    if L_I_d < 1:
        # no ICI-free samples to harvest: plain cyclic-prefix removal
        W1 = np.zeros((N, cp + N))
        W1[np.arange(N), cp + np.arange(N)] = 1.0
        return TwoStageCombiner(W1=W1, W2=idft_basis(N)[:, M_D:].conj().T)
    if L_I_d > cp:
        raise ValueError("no valid fold: L_I_d exceeds the cyclic prefix length")
    W1 = np.zeros((N, cp + N))
    W1[np.arange(N), cp + np.arange(N)] = 1.0
    for j in range(L_I_d):
        row = j + N - cp
        if not 0 <= row < N:
            raise ValueError("no valid fold: harvested sample lands outside the core")
        W1[row, j] += 1.0
    if (W1.sum(axis=0) > 1).any():
        raise ValueError("no valid fold: overlapping assignments")
    return TwoStageCombiner(W1=W1, W2=idft_basis(N)[:, M_D:].conj().T)


def make_delayed_plan(cfg, dp: DelayProfile) -> TransmissionPlan:
    """Transmission plan for the two-stage receiver.

    The cyclic prefix shrinks to L_I_prime - 1 and every active user sends a
    single symbol on the common precoder f_1; harvesting the L_I_d
    interference-free samples lets (L_kk - L_I_prime)^+ + L_I_d users per cell
    be active.
    """
    require_valid(cfg)
    L_D = max(cfg.cir_len[k][k] for k in range(cfg.K))
    N = max(L_D - dp.L_I_prime + 1, dp.L_I_prime)
    U_active = []
    M = []
    for k in range(cfg.K):
        budget = max(cfg.cir_len[k][k] - dp.L_I_prime, 0) + dp.L_I_d
        U_active.append(min(cfg.users_per_cell[k], budget))
        M.append(1 if U_active[-1] > 0 else 0)
    N_bar = N + dp.L_I_prime - 1
    T = cfg.subblocks * N_bar + max(L_D, dp.L_I) - 1
    return TransmissionPlan(
        K=cfg.K, B=cfg.subblocks, U_active=tuple(U_active), M=tuple(M),
        M_D=max(M), L_D=L_D, L_I=dp.L_I_prime, N=N, N_bar=N_bar,
        cp_len=dp.L_I_prime - 1, T=T,
    )


# ---------------------------------------------------------------------------
# Composite per-link channels seen through the two-stage receiver
# ---------------------------------------------------------------------------

def cp_expand(N, cp) -> np.ndarray:
    """(cp + N) x N framing matrix: prepend the last cp samples of the core."""
    S = np.zeros((cp + N, N))
    if cp > 0:
        S[:cp] = np.eye(N)[N - cp :]
    S[cp:] = np.eye(N)
    return S


def conv_window(h, width) -> np.ndarray:
    """width x width lower-triangular Toeplitz convolution matrix of the taps h."""
    out = np.zeros((width, width), dtype=complex)
    for ell in range(min(len(h), width)):
        if h[ell] == 0:
            continue
        idx = np.arange(width - ell)
        out[idx + ell, idx] = h[ell]
    return out


def composite_channel(h, N, cp, W1) -> np.ndarray:
    """N x N map from one user's subblock core to the folded receiver output."""
    return W1 @ conv_window(h, cp + N) @ cp_expand(N, cp)


def delayed_effective_channels(cfg, dplan, dp: DelayProfile, ch, comb=None):
    """Per-cell enlarged effective channel and residual-interference columns.

    Returns (comb, H, H_int) where H[k] has one column per active desired user
    (W2 @ composite @ f_1) and H_int[k] stacks the same construction for every
    active interfering user using only the residual taps ell >= L_I_prime.
    """
    if comb is None:
        comb = build_two_stage_combiner(dplan.N, dplan.L_D, dp.L_I_prime, dp.L_I_d)
    f1 = idft_basis(dplan.N)[:, 0]
    W21 = comb.W2 @ comb.W1
    H = {}
    H_int = {}
    for k in range(cfg.K):
        cols = []
        for u in range(dplan.U_active[k]):
            C = composite_channel(ch.h(k, k, u), dplan.N, dplan.cp_len, comb.W1)
            cols.append(comb.W2 @ C @ f1)
        H[k] = np.array(cols).T if cols else np.zeros((dplan.N - dplan.M_D, 0), dtype=complex)
        icols = []
        for i in range(cfg.K):
            if i == k:
                continue
            L_ki = cfg.cir_len[k][i]
            for v in range(dplan.U_active[i]):
                h = np.array(ch.h(k, i, v))
                h[: min(dp.L_I_prime, L_ki)] = 0.0   # considered taps are nulled exactly
                if not np.any(h):
                    continue
                C = composite_channel(h, dplan.N, dplan.cp_len, comb.W1)
                icols.append(comb.W2 @ C @ f1)
        H_int[k] = (
            np.array(icols).T if icols else np.zeros((dplan.N - dplan.M_D, 0), dtype=complex)
        )
    return comb, H, H_int


def decode_delayed_ici(cfg, dplan, ch, dp: DelayProfile, symbols,
                       noise_rng=None, noise_var=0.0) -> DecodeResult:
    """Two-stage receive and zero-forcing detection (single-subblock frames).

    symbols is a dict k -> length-U'_k vector of (power-scaled) payload
    symbols, one per active user.
    """
    if dplan.B != 1:
        raise ValueError("delayed-ICI decoding is implemented for single-subblock frames")
    comb, H, _ = delayed_effective_channels(cfg, dplan, dp, ch)
    f1 = idft_basis(dplan.N)[:, 0]
    S = cp_expand(dplan.N, dplan.cp_len)
    # transmit
    tx = {}
    for i in range(cfg.K):
        blocks = np.zeros((dplan.U_active[i], dplan.T), dtype=complex)
        for u in range(dplan.U_active[i]):
            frame = S @ (f1 * symbols[i][u])
            blocks[u, : frame.size] = frame
        tx[i] = blocks
    # receive
    s_hat = {}
    for k in range(cfg.K):
        y = np.zeros(dplan.T, dtype=complex)
        for i in range(cfg.K):
            for u in range(dplan.U_active[i]):
                y += np.convolve(ch.h(k, i, u), tx[i][u])[: dplan.T]
        if noise_var > 0:
            y += (noise_rng.standard_normal(dplan.T)
                  + 1j * noise_rng.standard_normal(dplan.T)) * np.sqrt(noise_var / 2.0)
        y_tilde = comb.W2 @ (comb.W1 @ y[: dplan.cp_len + dplan.N])
        if dplan.U_active[k] > 0:
            s_hat[k] = detect_zf(H[k], y_tilde)[None, :]
        else:
            s_hat[k] = np.zeros((1, 0), dtype=complex)
    return DecodeResult(s_hat=s_hat)


def rate_with_residual_ici(cfg, dplan, dp: DelayProfile, ch, tx_power, noise_var,
                           cells=None) -> np.ndarray:
    """Per-cell achievable rate treating uncancelled late ICI taps as noise.

    Symbols carry variance N * P; the noise term keeps the coloring introduced
    by the folding stage (rows that sum two samples have doubled variance).
    """
    comb, H, H_int = delayed_effective_channels(cfg, dplan, dp, ch)
    W21 = comb.W2 @ comb.W1
    p_sym = dplan.N * tx_power
    prefactor = dplan.B / dplan.T
    if cells is None:
        cells = range(cfg.K)
    out = np.zeros(cfg.K)
    for k in cells:
        cov = noise_var * (W21 @ W21.conj().T)
        if H_int[k].shape[1] > 0:
            cov = cov + p_sym * (H_int[k] @ H_int[k].conj().T)
        sig = p_sym * (H[k] @ H[k].conj().T)
        sign, ld_all = np.linalg.slogdet(cov + sig)
        if sign.real <= 0:
            raise np.linalg.LinAlgError("covariance is not positive definite")
        _, ld_cov = np.linalg.slogdet(cov)
        out[k] = prefactor * (ld_all - ld_cov) / np.log(2.0)
    return out
