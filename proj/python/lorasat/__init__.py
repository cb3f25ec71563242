"""LoRa direct-to-satellite link simulator: python bindings."""

from ._lorasat import (
    BasebandSignal,
    DemodResult,
    DopplerProfile,
    MidambleAdvice,
    ModemConfig,
    OrbitGeometry,
    apply_doppler,
    awgn_ser_oracle,
    demod_chirp,
    downchirp_envelope,
    payload_symbol_count,
    recommended_midamble_interval,
    run_scenario_json,
    snr_from_esn0,
    symbol_envelope,
    visibility_half_window_s,
    __version__,
)

__all__ = [
    "BasebandSignal",
    "DemodResult",
    "DopplerProfile",
    "MidambleAdvice",
    "ModemConfig",
    "OrbitGeometry",
    "apply_doppler",
    "awgn_ser_oracle",
    "demod_chirp",
    "downchirp_envelope",
    "payload_symbol_count",
    "recommended_midamble_interval",
    "run_scenario_json",
    "snr_from_esn0",
    "symbol_envelope",
    "visibility_half_window_s",
    "__version__",
]
