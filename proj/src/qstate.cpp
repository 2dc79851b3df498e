#include "epr/qstate.hpp"

#include <cmath>
#include <stdexcept>

namespace epr {

namespace {

constexpr double kNormTol = 1e-12;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

Spinor::Spinor(cplx up, cplx down) : amp_(up, down) {
    if (std::abs(amp_.squaredNorm() - 1.0) > kNormTol) {
        throw std::invalid_argument("Spinor: amplitudes are not normalized");
    }
}

TwoSpinState::TwoSpinState(const Eigen::Vector4cd& amp) : amp_(amp) {
    if (std::abs(amp_.norm() - 1.0) > kNormTol) {
        throw std::invalid_argument("TwoSpinState: amplitudes are not normalized");
    }
}

Spinor make_spinor(const UnitAxis& axis, Sign sign) {
    const double c = std::cos(axis.theta() / 2.0);
    const double s = std::sin(axis.theta() / 2.0);
    if (sign == Sign::Plus) {
        return Spinor(c, s * std::polar(1.0, axis.phi()));
    }
    return Spinor(-s * std::polar(1.0, -axis.phi()), c);
}

const Mat2& pauli_x() {
    static const Mat2 m = (Mat2() << 0.0, 1.0, 1.0, 0.0).finished();
    return m;
}

const Mat2& pauli_y() {
    static const Mat2 m = (Mat2() << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0).finished();
    return m;
}

const Mat2& pauli_z() {
    static const Mat2 m = (Mat2() << 1.0, 0.0, 0.0, -1.0).finished();
    return m;
}

Mat2 pauli_axis_matrix(const UnitAxis& axis) {
    const Vec3& n = axis.vec();
    return n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z();
}

TwoSpinState entangled_pair_state(double theta, double phi1, double phi2) {
    if (!std::isfinite(theta) || !std::isfinite(phi1) || !std::isfinite(phi2)) {
        throw std::invalid_argument("entangled_pair_state: angles must be finite");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const double dphi = phi1 - phi2;
    Eigen::Vector4cd v;
    v(0) = c * s * (std::polar(1.0, -phi1) - std::polar(1.0, -phi2));
    v(1) = c * c + s * s * std::polar(1.0, -dphi);
    v(2) = -c * c - s * s * std::polar(1.0, dphi);
    v(3) = c * s * (std::polar(1.0, phi1) - std::polar(1.0, phi2));
    return TwoSpinState(v * kInvSqrt2);
}

TwoSpinState bell_state(BellKind kind) {
    Eigen::Vector4cd v;
    switch (kind) {
        case BellKind::SingletMinus: v << 0.0, 1.0, -1.0, 0.0; break;
        case BellKind::TripletPlus: v << 0.0, 1.0, 1.0, 0.0; break;
        case BellKind::PhiPlus: v << 1.0, 0.0, 0.0, 1.0; break;
        case BellKind::PhiMinus: v << 1.0, 0.0, 0.0, -1.0; break;
    }
    return TwoSpinState(v * kInvSqrt2);
}

double singlet_fidelity(const TwoSpinState& state) {
    const cplx overlap = bell_state(BellKind::SingletMinus).vector().dot(state.vector());
    return std::norm(overlap);
}

Eigen::Vector4cd tensor(const Spinor& a, const Spinor& b) {
    Eigen::Vector4cd v;
    v << a.up() * b.up(), a.up() * b.down(), a.down() * b.up(), a.down() * b.down();
    return v;
}

}  // namespace epr
