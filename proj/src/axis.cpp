#include "epr/axis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epr {

namespace {

double wrap_two_pi(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(x, two_pi);
    if (r < 0.0) r += two_pi;
    // fmod of a value just below a multiple of 2pi can round back up to 2pi
    if (r >= two_pi) r = 0.0;
    return r;
}

}  // namespace

UnitAxis::UnitAxis(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("UnitAxis: angles must be finite");
    }
    double t = wrap_two_pi(theta);
    double p = phi;
    if (t > std::numbers::pi) {
        t = 2.0 * std::numbers::pi - t;
        p += std::numbers::pi;
    }
    theta_ = t;
    phi_ = wrap_two_pi(p);
    // Equator and south pole are kept exact: cos(pi/2) and sin(pi) are not
    // zero in floating point.
    const double st = theta_ == std::numbers::pi ? 0.0 : std::sin(theta_);
    const double ct = theta_ == kHalfPi ? 0.0 : std::cos(theta_);
    vec_ = Vec3(st * std::cos(phi_), st * std::sin(phi_), ct);
}

UnitAxis UnitAxis::from_vector(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("UnitAxis::from_vector: vector must be finite and non-zero");
    }
    const Vec3 u = v / n;
    return UnitAxis(std::atan2(std::hypot(u.x(), u.y()), u.z()), std::atan2(u.y(), u.x()));
}

double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }

}  // namespace epr
