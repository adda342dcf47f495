# blindim/model.py
"""Configuration, derived transmission-plan parameters, and channel sampling.

Conventions used throughout the package:
  - Cells and users are 0-indexed internally.
  - cir_len[k][i] is the tap count L_{k,i} of the link from any user in cell i
    to base station k (desired link when i == k, interfering link otherwise).
  - All CIR taps h[0..L-1] are complex baseband coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ConfigError(ValueError):
    """Raised when a configuration violates its invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class SystemConfig:
    """Static system parameters for a K-cell uplink with frequency-selective links."""

    K: int                          # number of cells / base stations
    users_per_cell: tuple           # U_k, one entry per cell
    cir_len: tuple                  # K x K tap counts L_{k,i}
    snr_db: float = 10.0            # rho = P / sigma^2 in dB
    subblocks: int = 1              # B, subblock transmissions per block
    seed: int = 0                   # base seed for reproducible sampling
    symbol_model: str = "gaussian"  # "gaussian" or "qpsk"

    def __post_init__(self):
        # normalize to tuples so configs are hashable/immutable
        object.__setattr__(self, "users_per_cell", tuple(int(u) for u in self.users_per_cell))
        object.__setattr__(
            self, "cir_len", tuple(tuple(int(x) for x in row) for row in self.cir_len)
        )

    @classmethod
    def symmetric(cls, K, L_D, L_I, U, **kwargs):
        """Symmetric network: every desired link has L_D taps, every cross link L_I."""
        cir = [[L_D if k == i else L_I for i in range(K)] for k in range(K)]
        return cls(K=K, users_per_cell=[U] * K, cir_len=cir, **kwargs)

    @property
    def snr_linear(self) -> float:
        return float(10.0 ** (self.snr_db / 10.0))


def validate_config(cfg: SystemConfig):
    """Return the list of invariant violations (empty when cfg is valid)."""
    violations = []
    if cfg.K < 1:
        violations.append("K >= 1 violated (K=%d)" % cfg.K)
    if len(cfg.users_per_cell) != cfg.K:
        violations.append(
            "users_per_cell must have K entries (got %d, K=%d)"
            % (len(cfg.users_per_cell), cfg.K)
        )
    for k, u in enumerate(cfg.users_per_cell):
        if u < 1:
            violations.append("U_k >= 1 violated at cell %d (U=%d)" % (k, u))
    if len(cfg.cir_len) != cfg.K or any(len(row) != cfg.K for row in cfg.cir_len):
        violations.append("cir_len must be a K x K matrix")
    else:
        for k in range(cfg.K):
            for i in range(cfg.K):
                if cfg.cir_len[k][i] < 1:
                    violations.append(
                        "L >= 1 violated at (k=%d, i=%d): L=%d" % (k, i, cfg.cir_len[k][i])
                    )
    if cfg.subblocks < 1:
        violations.append("B >= 1 violated (B=%d)" % cfg.subblocks)
    if cfg.symbol_model not in ("gaussian", "qpsk"):
        violations.append("symbol_model must be 'gaussian' or 'qpsk'")
    return violations


def require_valid(cfg: SystemConfig) -> SystemConfig:
    violations = validate_config(cfg)
    if violations:
        raise ConfigError(violations)
    return cfg


@dataclass(frozen=True)
class TransmissionPlan:
    """Derived scheme parameters, a pure function of SystemConfig."""

    K: int
    B: int
    U_active: tuple   # U'_k: active users per cell
    M: tuple          # M_k: symbols per active user per subblock
    M_D: int          # max_k M_k
    L_D: int          # max_k L_{k,k}
    L_I: int          # max_k max_{i != k} L_{k,i}
    N: int            # subblock core length
    N_bar: int        # N + L_I - 1 (core + cyclic prefix)
    cp_len: int       # L_I - 1
    T: int            # total block length B*N_bar + max(L_D, L_I) - 1


def make_plan(cfg: SystemConfig) -> TransmissionPlan:
    """Compute active-user counts, per-user symbol loads, and frame geometry."""
    require_valid(cfg)
    L_D = max(cfg.cir_len[k][k] for k in range(cfg.K))
    if cfg.K > 1:
        L_I = max(cfg.cir_len[k][i] for k in range(cfg.K) for i in range(cfg.K) if i != k)
    else:
        # single cell: no interfering links, so a one-tap cyclic prefix budget
        L_I = 1

    U_active = []
    M = []
    for k in range(cfg.K):
        U_k = cfg.users_per_cell[k]
        spare = cfg.cir_len[k][k] - L_I   # (L_kk - L_I): symbol budget of cell k
        if spare <= 0:
            U_active.append(0)
            M.append(0)
        elif U_k <= spare:
            U_active.append(U_k)
            M.append(spare // U_k)
        else:
            U_active.append(spare)
            M.append(1)

    M_D = max(M)
    N = max(L_D - L_I + M_D, L_I)
    N_bar = N + L_I - 1
    T = cfg.subblocks * N_bar + max(L_D, L_I) - 1
    return TransmissionPlan(
        K=cfg.K, B=cfg.subblocks, U_active=tuple(U_active), M=tuple(M), M_D=M_D,
        L_D=L_D, L_I=L_I, N=N, N_bar=N_bar, cp_len=L_I - 1, T=T,
    )


@dataclass
class ChannelRealization:
    """All CIR taps for one fading block.

    taps[(k, i)] is a complex array of shape (U_i, L_{k,i}); row u holds the
    impulse response from user (i, u) to base station k.
    """

    taps: dict

    def h(self, k, i, u) -> np.ndarray:
        return self.taps[(k, i)][u]


def trial_rng(seed, trial) -> np.random.Generator:
    """Independent, reproducible stream for (seed, trial)."""
    return np.random.default_rng([int(seed), int(trial)])


def sample_channel_iid(cfg: SystemConfig, rng) -> ChannelRealization:
    """Draw every tap IID circularly-symmetric complex Gaussian CN(0, 1)."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    taps = {}
    for k in range(cfg.K):
        for i in range(cfg.K):
            shape = (cfg.users_per_cell[i], cfg.cir_len[k][i])
            taps[(k, i)] = (
                rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            ) / np.sqrt(2.0)
    return ChannelRealization(taps=taps)


# ---------------------------------------------------------------------------
# Geometric channel model (path loss + exponentially-decaying power-delay profile)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Deployment:
    """Large-scale propagation parameters for the geometric channel model."""

    site_spacing_m: float = 300.0       # D_site, BS-to-BS spacing
    user_distance_m: float = 100.0      # D_user, user-to-own-BS distance
    pathloss_exponent: float = 3.5      # alpha
    ref_loss_db: float = -80.0          # P_0, reference path loss at 1 m (dB)
    pdp_decay: object = 0.5             # beta: scalar, or K x K per-link matrix
    ici_delay_taps: int = 0             # L_{I,d}: leading ICI taps nulled by delay
    tx_power_dbm: float = 23.0
    noise_density_dbm_hz: float = -174.0
    bandwidth_hz: float = 10e6

    @property
    def tx_power_w(self) -> float:
        return float(10.0 ** ((self.tx_power_dbm - 30.0) / 10.0))

    @property
    def noise_power_w(self) -> float:
        """sigma^2 = N_0 * bandwidth (Watts)."""
        return float(10.0 ** ((self.noise_density_dbm_hz - 30.0) / 10.0) * self.bandwidth_hz)


def pdp_variance(dep: Deployment, k, i, ell, L_D, L_I) -> float:
    """Normalized per-tap variance gamma_{k,i,ell} of the exponential delay profile.

    Desired links (k == i) spread unit power over taps [0, L_D-1]; interfering
    links over taps [L_{I,d}, L_I-1]; everything else is zero.
    """
    beta = dep.pdp_decay
    if not np.isscalar(beta):
        beta = beta[k][i]
    if k == i:
        if 0 <= ell <= L_D - 1:
            num = np.exp(-beta * ell)
            den = np.sum(np.exp(-beta * np.arange(L_D)))
            return float(num / den)
        return 0.0
    lo = dep.ici_delay_taps
    if lo <= ell <= L_I - 1:
        num = np.exp(-beta * ell)
        den = np.sum(np.exp(-beta * np.arange(lo, L_I)))
        return float(num / den)
    return 0.0


@dataclass(frozen=True)
class Positions:
    """Node geometry: BS coordinates plus user-to-BS distances.

    dist[k, i, u] is the distance (m) from user (i, u) to base station k.
    """

    bs_xy: np.ndarray     # (K, 2)
    user_xy: np.ndarray   # (K, U_max, 2)
    dist: np.ndarray      # (K, K, U_max)


def hex_deployment(D_site, D_user, users_per_cell) -> Positions:
    """7-cell hexagonal layout: center cell plus 6 neighbors at spacing D_site.

    Users sit at distance D_user from their own BS, at evenly-spread angles
    starting from 0 degrees.
    """
    if not (0 <= D_user < D_site):
        raise ValueError("require 0 <= D_user < D_site")
    users_per_cell = list(users_per_cell)
    K = 7
    if len(users_per_cell) == 1:
        users_per_cell = users_per_cell * K
    if len(users_per_cell) != K:
        raise ValueError("users_per_cell must have 1 or 7 entries")
    bs = np.zeros((K, 2))
    for c in range(6):
        ang = np.pi / 3.0 * c
        bs[c + 1] = [D_site * np.cos(ang), D_site * np.sin(ang)]
    U_max = max(users_per_cell)
    user = np.full((K, U_max, 2), np.nan)
    for i in range(K):
        U = users_per_cell[i]
        for u in range(U):
            ang = 2.0 * np.pi * u / U
            user[i, u] = bs[i] + D_user * np.array([np.cos(ang), np.sin(ang)])
    dist = np.full((K, K, U_max), np.nan)
    for k in range(K):
        for i in range(K):
            for u in range(users_per_cell[i]):
                dist[k, i, u] = np.hypot(*(user[i, u] - bs[k]))
    return Positions(bs_xy=bs, user_xy=user, dist=dist)


def sample_channel_geometric(cfg: SystemConfig, dep: Deployment, positions: Positions,
                             rng) -> ChannelRealization:
    """Draw taps h = sqrt(P_0) * d^(-alpha/2) * h_small with h_small ~ CN(0, gamma)."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    p0 = 10.0 ** (dep.ref_loss_db / 10.0)
    L_D = max(cfg.cir_len[k][k] for k in range(cfg.K))
    if cfg.K > 1:
        L_I = max(cfg.cir_len[k][i] for k in range(cfg.K) for i in range(cfg.K) if i != k)
    else:
        L_I = 1
    taps = {}
    for k in range(cfg.K):
        for i in range(cfg.K):
            L = cfg.cir_len[k][i]
            U = cfg.users_per_cell[i]
            gamma = np.array([pdp_variance(dep, k, i, ell, L_D, L_I) for ell in range(L)])
            out = np.zeros((U, L), dtype=complex)
            for u in range(U):
                d = positions.dist[k, i, u]
                if not d > 0:
                    raise ValueError("nonpositive distance for link (k=%d, i=%d, u=%d)" % (k, i, u))
                small = (rng.standard_normal(L) + 1j * rng.standard_normal(L)) / np.sqrt(2.0)
                out[u] = np.sqrt(p0) * d ** (-dep.pathloss_exponent / 2.0) * np.sqrt(gamma) * small
            taps[(k, i)] = out
    return ChannelRealization(taps=taps)
