#pragma once

#include <Eigen/Core>

#include "epr/axis.hpp"
#include "epr/qstate.hpp"

namespace epr {

/// Whether a density matrix is a full probability state (trace 1) or a
/// conditional state that still carries the probability of its condition.
enum class Normalization { Normalized, SubNormalized };

/// Hermitian positive-semidefinite 2x2 or 4x4 matrix. Construction validates
/// shape, hermiticity (1e-12), positivity (eigenvalues >= -1e-10) and, for
/// Normalized matrices, unit trace.
class DensityMatrix {
public:
    DensityMatrix(Eigen::MatrixXcd entries, Normalization norm);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }
    double trace() const { return m_.trace().real(); }
    Normalization normalization() const { return norm_; }

    /// Tr(rho * op).
    cplx expectation(const Eigen::MatrixXcd& op) const;

private:
    Eigen::MatrixXcd m_;
    Normalization norm_;
};

/// Rank-one projector |s><s| along `axis`.
Mat2 projector(const UnitAxis& axis, Sign sign);

Mat4 kron(const Mat2& a, const Mat2& b);

/// Tr over particle 2 (the fast index) and over particle 1.
Mat2 partial_trace_second(const Mat4& m);
Mat2 partial_trace_first(const Mat4& m);

/// Singlet density built as the outer product |singlet><singlet|.
DensityMatrix epr_density();

/// Same state built as (I(x)I - sx(x)sx - sy(x)sy - sz(x)sz)/4.
DensityMatrix epr_density_pauli_form();

/// Projects particle `projected_particle` (1 or 2) of `rho12` onto `sign`
/// along `axis` and traces it out. The result keeps the probability of the
/// projection as its trace; for the singlet that is 1/2 and the remaining
/// particle is left in the opposite sign along the same axis.
DensityMatrix conditional_collapse(const DensityMatrix& rho12, const UnitAxis& axis,
                                   Sign projected_sign, int projected_particle);

/// Rescales a sub-normalized state to unit trace.
DensityMatrix renormalized(const DensityMatrix& rho);

/// Equal-weight mixture of (+ at axis1, - at axis2) and (- at axis1, + at axis2)
/// product states: the pair density after interference terms are lost.
DensityMatrix disentangled_pair_density(const UnitAxis& axis1, const UnitAxis& axis2);

/// Pure product state with both particles quantized along `axis`.
DensityMatrix product_density(const UnitAxis& axis, Sign sign1, Sign sign2);

}  // namespace epr
