#pragma once

#include <cstddef>
#include <vector>

namespace lorasat {

// Circular-orbit zenith-pass geometry over a non-rotating Earth: the ground
// device sits exactly on the ground track and t = 0 is the overhead instant.
// Constants are fixed, not configurable per run.
struct OrbitGeometry {
    double altitude_m = 550e3; // h
    double carrier_hz = 868e6; // F_C

    static constexpr double earth_radius_m = 6371000.0;       // R_E
    static constexpr double mu_m3s2 = 3.986004418e14;         // GM
    static constexpr double speed_of_light_ms = 299792458.0;  // c

    double orbit_radius_m() const { return earth_radius_m + altitude_m; }
    double orbital_speed_ms() const;  // sqrt(mu / (R_E + h))
    double angular_rate_rad_s() const; // v_sat / (R_E + h)

    // Slant range to the device at pass time t.
    double slant_range_m(double t_s) const;
};

// Time from zenith to 0 degrees elevation: acos(R_E / (R_E + h)) / w_orb.
double visibility_half_window_s(const OrbitGeometry& geom);

// Time -> carrier frequency offset. Zero and Static are self-explanatory;
// LinearRamp is f0 + slope * (t - t_ref); LeoPass evaluates
// F_D(t) = -(F_C / c) * d'(t) on the geometry above and is odd in t
// (approaching satellite, t < 0, gives a positive shift). LeoPass rejects
// times outside the visibility window instead of extrapolating.
class DopplerProfile {
public:
    enum class Kind { Zero, Static, LinearRamp, LeoPass };

    DopplerProfile() = default; // Zero

    static DopplerProfile zero();
    static DopplerProfile static_offset(double f0_hz);
    static DopplerProfile linear_ramp(double f0_hz, double slope_hz_per_s,
                                      double t_ref_s = 0.0);
    static DopplerProfile leo_pass(const OrbitGeometry& geom);

    Kind kind() const { return kind_; }
    const OrbitGeometry& geometry() const; // LeoPass only, throws otherwise
    double f0_hz() const { return f0_hz_; }
    double slope_hz_per_s() const { return slope_hz_per_s_; }

    // Doppler shift in Hz. Throws std::domain_error for LeoPass outside the
    // visibility window.
    double shift_hz(double t_s) const;

    // Analytic time derivative of shift_hz.
    double rate_hz_per_s(double t_s) const;

    // Closed-form integral of shift_hz over [t0, t1] in Hz*s. For LeoPass the
    // antiderivative of -(F_C/c) d'(t) is -(F_C/c) d(t), i.e. the Doppler
    // phase is the carrier-scaled path-length change.
    double shift_integral(double t0_s, double t1_s) const;

private:
    Kind kind_ = Kind::Zero;
    double f0_hz_ = 0.0;
    double slope_hz_per_s_ = 0.0;
    double t_ref_s_ = 0.0;
    OrbitGeometry geom_{};

    void check_visible(double t_s) const;
};

// Doppler-induced phase at each sample instant: phase[k] =
// 2*pi * integral of F_D over [t_start, t_start + k / f_s], phase[0] = 0.
std::vector<double> phase_from_profile(const DopplerProfile& profile,
                                       double t_start_s, std::size_t n_samples,
                                       double sample_rate_hz);

} // namespace lorasat
