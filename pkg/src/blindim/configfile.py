# blindim/configfile.py
"""Plain-text key=value configuration files.

Format: one `key = value` pair per line, `#` starts a comment.  Lists are
comma-separated; matrices separate rows with `;` (e.g. `cir_len = 4,2; 2,4`).
Units: distances in meters, powers in dBm, SNR in dB, angles in degrees.
"""

from __future__ import annotations

from .model import Deployment, SystemConfig


class ConfigParseError(ValueError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__("line %d: %s" % (line_no, message))


SYSTEM_KEYS = {"K", "users_per_cell", "cir_len", "snr_db", "subblocks", "seed", "symbol_model"}
DEPLOY_KEYS = {
    "site_spacing_m", "user_distance_m", "pathloss_exponent", "ref_loss_db", "pdp_decay",
    "ici_delay_taps", "tx_power_dbm", "noise_density_dbm_hz", "bandwidth_hz",
}


def parse_config_text(text) -> dict:
    """Parse raw text into a flat {key: string-value} dict with line tracking."""
    out = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(line_no, "expected 'key = value', got %r" % raw.strip())
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigParseError(line_no, "empty key")
        if key not in SYSTEM_KEYS | DEPLOY_KEYS:
            raise ConfigParseError(line_no, "unknown key %r" % key)
        if key in out:
            raise ConfigParseError(line_no, "duplicate key %r" % key)
        out[key] = (line_no, value)
    return out


def _int(pairs, key, default=None):
    if key not in pairs:
        return default
    line_no, value = pairs[key]
    try:
        return int(value)
    except ValueError:
        raise ConfigParseError(line_no, "%s must be an integer, got %r" % (key, value))


def _float(pairs, key, default=None):
    if key not in pairs:
        return default
    line_no, value = pairs[key]
    try:
        return float(value)
    except ValueError:
        raise ConfigParseError(line_no, "%s must be a number, got %r" % (key, value))


def _int_list(pairs, key, default=None):
    if key not in pairs:
        return default
    line_no, value = pairs[key]
    try:
        return [int(x) for x in value.split(",")]
    except ValueError:
        raise ConfigParseError(line_no, "%s must be a comma-separated integer list" % key)


def _int_matrix(pairs, key, default=None):
    if key not in pairs:
        return default
    line_no, value = pairs[key]
    try:
        return [[int(x) for x in row.split(",")] for row in value.split(";")]
    except ValueError:
        raise ConfigParseError(line_no, "%s must be ';'-separated rows of integers" % key)


def load_system_config(text) -> SystemConfig:
    pairs = parse_config_text(text)
    K = _int(pairs, "K", 2)
    users = _int_list(pairs, "users_per_cell", [2] * K)
    if len(users) == 1:
        users = users * K
    cir = _int_matrix(pairs, "cir_len")
    if cir is None:
        cir = [[4 if k == i else 2 for i in range(K)] for k in range(K)]
    symbol_model = pairs["symbol_model"][1] if "symbol_model" in pairs else "gaussian"
    return SystemConfig(
        K=K,
        users_per_cell=users,
        cir_len=cir,
        snr_db=_float(pairs, "snr_db", 10.0),
        subblocks=_int(pairs, "subblocks", 1),
        seed=_int(pairs, "seed", 0),
        symbol_model=symbol_model,
    )


def load_deployment(text) -> Deployment:
    pairs = parse_config_text(text)
    defaults = Deployment()
    return Deployment(
        site_spacing_m=_float(pairs, "site_spacing_m", defaults.site_spacing_m),
        user_distance_m=_float(pairs, "user_distance_m", defaults.user_distance_m),
        pathloss_exponent=_float(pairs, "pathloss_exponent", defaults.pathloss_exponent),
        ref_loss_db=_float(pairs, "ref_loss_db", defaults.ref_loss_db),
        pdp_decay=_float(pairs, "pdp_decay", defaults.pdp_decay),
        ici_delay_taps=_int(pairs, "ici_delay_taps", defaults.ici_delay_taps),
        tx_power_dbm=_float(pairs, "tx_power_dbm", defaults.tx_power_dbm),
        noise_density_dbm_hz=_float(pairs, "noise_density_dbm_hz", defaults.noise_density_dbm_hz),
        bandwidth_hz=_float(pairs, "bandwidth_hz", defaults.bandwidth_hz),
    )
