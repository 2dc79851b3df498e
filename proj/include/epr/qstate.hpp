#pragma once

#include <complex>

#include <Eigen/Core>

#include "epr/axis.hpp"

namespace epr {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

enum class Sign : int { Plus = 1, Minus = -1 };

constexpr Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
constexpr double value(Sign s) { return static_cast<double>(static_cast<int>(s)); }
constexpr char symbol(Sign s) { return s == Sign::Plus ? '+' : '-'; }

/// Normalized spin-1/2 state in the z reference basis.
class Spinor {
public:
    /// Throws std::invalid_argument unless |up|^2 + |down|^2 = 1 within 1e-12.
    Spinor(cplx up, cplx down);

    cplx up() const { return amp_(0); }
    cplx down() const { return amp_(1); }
    const Eigen::Vector2cd& vector() const { return amp_; }

private:
    Eigen::Vector2cd amp_;
};

/// Normalized two-spin state; amplitudes ordered (++, +-, -+, --), particle 1
/// on the slow index.
class TwoSpinState {
public:
    /// Throws std::invalid_argument unless the Euclidean norm is 1 within 1e-12.
    explicit TwoSpinState(const Eigen::Vector4cd& amp);

    cplx operator[](int i) const { return amp_(i); }
    const Eigen::Vector4cd& vector() const { return amp_; }

private:
    Eigen::Vector4cd amp_;
};

enum class BellKind { SingletMinus, TripletPlus, PhiPlus, PhiMinus };

/// Eigenstate of the spin component along `axis` with eigenvalue `sign`:
///   |+> = (cos(t/2), sin(t/2) e^{i phi}),  |-> = (-sin(t/2) e^{-i phi}, cos(t/2)).
/// No extra phase is attached to |->.
Spinor make_spinor(const UnitAxis& axis, Sign sign);

/// sin(t)cos(p) sx + sin(t)sin(p) sy + cos(t) sz.
Mat2 pauli_axis_matrix(const UnitAxis& axis);

/// Pauli matrices x, y, z.
const Mat2& pauli_x();
const Mat2& pauli_y();
const Mat2& pauli_z();

/// Antisymmetric pair (|+>|-> - |->|+>)/sqrt(2) with both spins quantized at
/// the same polar angle `theta` and azimuths `phi1`, `phi2`. Reduces to the
/// singlet whenever phi1 == phi2.
TwoSpinState entangled_pair_state(double theta, double phi1, double phi2);

TwoSpinState bell_state(BellKind kind);

/// |<singlet|state>|^2.
double singlet_fidelity(const TwoSpinState& state);

/// a (x) b in the (++, +-, -+, --) ordering.
Eigen::Vector4cd tensor(const Spinor& a, const Spinor& b);

}  // namespace epr
