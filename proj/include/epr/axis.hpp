#pragma once

#include <Eigen/Core>

namespace epr {

using Vec3 = Eigen::Vector3d;

/// A direction on the unit sphere given by polar angle theta in [0, pi] and
/// azimuth phi in [0, 2pi). Used both for quantization axes and analyzer
/// orientations.
///
/// Out-of-range angles are folded on construction: theta is reduced modulo
/// 2pi and reflected into [0, pi] (shifting phi by pi when it reflects), then
/// phi is reduced into [0, 2pi). The Cartesian vector is computed once.
class UnitAxis {
public:
    UnitAxis() : UnitAxis(0.0, 0.0) {}
    UnitAxis(double theta, double phi);

    /// Direction of an arbitrary non-zero vector.
    static UnitAxis from_vector(const Vec3& v);
    /// Axis in the x-y plane at azimuth `phi` (theta = pi/2).
    static UnitAxis in_plane(double phi) { return UnitAxis(kHalfPi, phi); }
    static UnitAxis z() { return UnitAxis(0.0, 0.0); }
    static UnitAxis x() { return UnitAxis(kHalfPi, 0.0); }

    double theta() const { return theta_; }
    double phi() const { return phi_; }
    const Vec3& vec() const { return vec_; }

    double dot(const UnitAxis& other) const { return vec_.dot(other.vec_); }

private:
    static constexpr double kHalfPi = 1.57079632679489661923;

    double theta_;
    double phi_;
    Vec3 vec_;
};

/// Cosine of the separation angle between two directions; with `doubled` set
/// returns cos(2*angle) = 2(a.b)^2 - 1, the photon polarization convention.
inline double separation_cosine(const Vec3& a, const Vec3& b, bool doubled) {
    const double c = a.dot(b);
    return doubled ? 2.0 * c * c - 1.0 : c;
}

inline double separation_cosine(const UnitAxis& a, const UnitAxis& b, bool doubled) {
    return separation_cosine(a.vec(), b.vec(), doubled);
}

double deg_to_rad(double deg);

}  // namespace epr
