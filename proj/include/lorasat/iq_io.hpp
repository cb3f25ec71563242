#pragma once

#include <string>

#include <lorasat/modem.hpp>

namespace lorasat {

// Debug waveform export: interleaved little-endian float64 I/Q at <path>
// plus a JSON sidecar <path>.json holding sample_rate_hz and t0_s.
void write_iq(const std::string& path, const BasebandSignal& signal);
BasebandSignal read_iq(const std::string& path);

} // namespace lorasat
