"""Blind interference management for K-cell uplinks with inter-symbol
interference: DFT precoding with cyclic prefixes sized to the interfering
links, channel-independent ICI-nulling projection, successive inter-subblock
cancellation, closed-form DoF/rate analysis, and executable rank checks."""

from .model import (
    ChannelRealization,
    ConfigError,
    Deployment,
    SystemConfig,
    TransmissionPlan,
    hex_deployment,
    make_plan,
    sample_channel_geometric,
    sample_channel_iid,
    trial_rng,
    validate_config,
)
from .spectral import build_structured, circulant, diagonalize_circulant, idft_basis
from .transceiver import (
    EffectiveChannel,
    combine,
    combiner,
    decode_block,
    detect_ml,
    detect_zf,
    effective_channels,
    precode_and_frame,
    remove_cp_and_stack,
    simulate_link,
    simulate_reception,
)
from .analysis import (
    RateReport,
    baseline_tdma_ofdma,
    dof_interference_channel,
    dof_symmetric,
    dof_theorem1,
    ergodic_rate,
    highsnr_slope,
    sum_rate_qr,
)
from .extensions import (
    DelayProfile,
    TwoStageCombiner,
    build_two_stage_combiner,
    decode_delayed_ici,
    make_delayed_plan,
    rate_with_residual_ici,
)

__version__ = "0.1.0"
