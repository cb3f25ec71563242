#include <lorasat/orbit.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lorasat {

double OrbitGeometry::orbital_speed_ms() const {
    if (!(altitude_m > 0.0)) throw std::invalid_argument("OrbitGeometry: altitude must be positive");
    return std::sqrt(mu_m3s2 / orbit_radius_m());
}

double OrbitGeometry::angular_rate_rad_s() const {
    return orbital_speed_ms() / orbit_radius_m();
}

double OrbitGeometry::slant_range_m(double t_s) const {
    const double r = earth_radius_m;
    const double a = orbit_radius_m();
    const double psi = angular_rate_rad_s() * t_s;
    return std::sqrt(r * r + a * a - 2.0 * r * a * std::cos(psi));
}

double visibility_half_window_s(const OrbitGeometry& geom) {
    const double central_angle = std::acos(geom.earth_radius_m / geom.orbit_radius_m());
    return central_angle / geom.angular_rate_rad_s();
}

DopplerProfile DopplerProfile::zero() { return DopplerProfile{}; }

DopplerProfile DopplerProfile::static_offset(double f0_hz) {
    DopplerProfile p;
    p.kind_ = Kind::Static;
    p.f0_hz_ = f0_hz;
    return p;
}

DopplerProfile DopplerProfile::linear_ramp(double f0_hz, double slope_hz_per_s, double t_ref_s) {
    DopplerProfile p;
    p.kind_ = Kind::LinearRamp;
    p.f0_hz_ = f0_hz;
    p.slope_hz_per_s_ = slope_hz_per_s;
    p.t_ref_s_ = t_ref_s;
    return p;
}

DopplerProfile DopplerProfile::leo_pass(const OrbitGeometry& geom) {
    if (!(geom.altitude_m > 0.0))
        throw std::invalid_argument("DopplerProfile: altitude must be positive");
    DopplerProfile p;
    p.kind_ = Kind::LeoPass;
    p.geom_ = geom;
    return p;
}

const OrbitGeometry& DopplerProfile::geometry() const {
    if (kind_ != Kind::LeoPass)
        throw std::logic_error("DopplerProfile: geometry only defined for LeoPass");
    return geom_;
}

void DopplerProfile::check_visible(double t_s) const {
    if (kind_ != Kind::LeoPass) return;
    if (std::abs(t_s) > visibility_half_window_s(geom_))
        throw std::domain_error("DopplerProfile: time outside satellite visibility window");
}

double DopplerProfile::shift_hz(double t_s) const {
    switch (kind_) {
    case Kind::Zero:
        return 0.0;
    case Kind::Static:
        return f0_hz_;
    case Kind::LinearRamp:
        return f0_hz_ + slope_hz_per_s_ * (t_s - t_ref_s_);
    case Kind::LeoPass: {
        check_visible(t_s);
        // Range rate of the zenith pass: d'(t) = R a w sin(w t) / d(t).
        // Approaching satellite (t < 0) gives v < 0 and a positive shift.
        const double r = geom_.earth_radius_m;
        const double a = geom_.orbit_radius_m();
        const double w = geom_.angular_rate_rad_s();
        const double v = r * a * w * std::sin(w * t_s) / geom_.slant_range_m(t_s);
        return 0.0 + -v / OrbitGeometry::speed_of_light_ms * geom_.carrier_hz;
    }
    }
    return 0.0;
}

double DopplerProfile::rate_hz_per_s(double t_s) const {
    switch (kind_) {
    case Kind::Zero:
    case Kind::Static:
        return 0.0;
    case Kind::LinearRamp:
        return slope_hz_per_s_;
    case Kind::LeoPass: {
        check_visible(t_s);
        // v'(t) = (R a w^2 cos(w t) - v(t)^2) / d(t); both terms approach
        // R^2 w^2 at the horizon, where the range rate peaks.
        const double r = geom_.earth_radius_m;
        const double a = geom_.orbit_radius_m();
        const double w = geom_.angular_rate_rad_s();
        const double d = geom_.slant_range_m(t_s);
        const double v = r * a * w * std::sin(w * t_s) / d;
        const double dv = (r * a * w * w * std::cos(w * t_s) - v * v) / d;
        return -dv / OrbitGeometry::speed_of_light_ms * geom_.carrier_hz;
    }
    }
    return 0.0;
}

double DopplerProfile::shift_integral(double t0_s, double t1_s) const {
    switch (kind_) {
    case Kind::Zero:
        return 0.0;
    case Kind::Static:
        return f0_hz_ * (t1_s - t0_s);
    case Kind::LinearRamp: {
        const double u0 = t0_s - t_ref_s_;
        const double u1 = t1_s - t_ref_s_;
        return f0_hz_ * (t1_s - t0_s) + 0.5 * slope_hz_per_s_ * (u1 * u1 - u0 * u0);
    }
    case Kind::LeoPass: {
        check_visible(t0_s);
        check_visible(t1_s);
        // The antiderivative of -(F_C/c) d'(t) is -(F_C/c) d(t): the Doppler
        // phase is the carrier-scaled change in path length.
        const double scale = geom_.carrier_hz / OrbitGeometry::speed_of_light_ms;
        return -scale * (geom_.slant_range_m(t1_s) - geom_.slant_range_m(t0_s));
    }
    }
    return 0.0;
}

std::vector<double> phase_from_profile(const DopplerProfile& profile, double t_start_s,
                                       std::size_t n_samples, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("phase_from_profile: sample rate must be positive");
    std::vector<double> phase(n_samples, 0.0);
    if (n_samples == 0) return phase;

    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (profile.kind()) {
    case DopplerProfile::Kind::Zero:
        break;
    case DopplerProfile::Kind::Static: {
        const double step = two_pi * profile.f0_hz() / sample_rate_hz;
        for (std::size_t k = 1; k < n_samples; ++k)
            phase[k] = step * static_cast<double>(k);
        break;
    }
    case DopplerProfile::Kind::LinearRamp:
        for (std::size_t k = 1; k < n_samples; ++k) {
            const double t = t_start_s + static_cast<double>(k) / sample_rate_hz;
            phase[k] = two_pi * profile.shift_integral(t_start_s, t);
        }
        break;
    case DopplerProfile::Kind::LeoPass: {
        // Same closed form as shift_integral, with the start range hoisted
        // out of the loop and cos(w t) advanced by an angle-addition
        // recurrence (drift ~ N*eps, far below any bin width).
        const OrbitGeometry& geom = profile.geometry();
        const double t_end =
            t_start_s + static_cast<double>(n_samples - 1) / sample_rate_hz;
        const double vis = visibility_half_window_s(geom);
        if (std::abs(t_start_s) > vis || std::abs(t_end) > vis)
            throw std::domain_error("phase_from_profile: span leaves the visibility window");
        const double scale = two_pi * geom.carrier_hz / OrbitGeometry::speed_of_light_ms;
        const double r = OrbitGeometry::earth_radius_m;
        const double a = geom.orbit_radius_m();
        const double w = geom.angular_rate_rad_s();
        const double r2a2 = r * r + a * a;
        const double two_ra = 2.0 * r * a;
        const double range0 = geom.slant_range_m(t_start_s);

        const double dpsi = w / sample_rate_hz;
        const double cos_step = std::cos(dpsi), sin_step = std::sin(dpsi);
        double c = std::cos(w * t_start_s), s = std::sin(w * t_start_s);
        for (std::size_t k = 1; k < n_samples; ++k) {
            if (k % 1024 == 0) { // resync: the carrier scale amplifies drift
                const double psi = w * (t_start_s + static_cast<double>(k) / sample_rate_hz);
                c = std::cos(psi);
                s = std::sin(psi);
            } else {
                const double cn = c * cos_step - s * sin_step;
                s = s * cos_step + c * sin_step;
                c = cn;
            }
            phase[k] = -scale * (std::sqrt(r2a2 - two_ra * c) - range0);
        }
        break;
    }
    }
    return phase;
}

} // namespace lorasat
