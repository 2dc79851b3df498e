#include "epr/density.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace epr {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kPsdTol = -1e-10;
constexpr double kTraceTol = 1e-12;

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, Normalization norm)
    : m_(std::move(entries)), norm_(norm) {
    if (m_.rows() != m_.cols() || (m_.rows() != 2 && m_.rows() != 4)) {
        throw std::invalid_argument("DensityMatrix: dimension must be 2x2 or 4x4");
    }
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
        throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kPsdTol) {
        throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite (min eigenvalue " +
                                    std::to_string(es.eigenvalues().minCoeff()) + ")");
    }
    if (norm_ == Normalization::Normalized && std::abs(trace() - 1.0) > kTraceTol) {
        throw std::invalid_argument("DensityMatrix: normalized matrix must have unit trace");
    }
}

cplx DensityMatrix::expectation(const Eigen::MatrixXcd& op) const {
    if (op.rows() != m_.rows() || op.cols() != m_.cols()) {
        throw std::invalid_argument("DensityMatrix::expectation: operator dimension mismatch");
    }
    return (m_ * op).trace();
}

Mat2 projector(const UnitAxis& axis, Sign sign) {
    const Eigen::Vector2cd v = make_spinor(axis, sign).vector();
    return v * v.adjoint();
}

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

Mat2 partial_trace_second(const Mat4& m) {
    Mat2 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
        }
    }
    return out;
}

Mat2 partial_trace_first(const Mat4& m) {
    Mat2 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out(i, j) = m(i, j) + m(2 + i, 2 + j);
        }
    }
    return out;
}

DensityMatrix epr_density() {
    const Eigen::Vector4cd psi = bell_state(BellKind::SingletMinus).vector();
    return DensityMatrix(psi * psi.adjoint(), Normalization::Normalized);
}

DensityMatrix epr_density_pauli_form() {
    const Mat4 dot = kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()) + kron(pauli_z(), pauli_z());
    return DensityMatrix(0.25 * (Mat4::Identity() - dot), Normalization::Normalized);
}

DensityMatrix conditional_collapse(const DensityMatrix& rho12, const UnitAxis& axis, Sign projected_sign,
                                   int projected_particle) {
    if (projected_particle != 1 && projected_particle != 2) {
        throw std::invalid_argument("conditional_collapse: projected_particle must be 1 or 2, got " +
                                    std::to_string(projected_particle));
    }
    if (rho12.dim() != 4) {
        throw std::invalid_argument("conditional_collapse: expected a two-particle (4x4) density");
    }
    if (std::abs(rho12.trace() - 1.0) > kTraceTol) {
        throw std::invalid_argument("conditional_collapse: input density must have unit trace");
    }
    const Mat2 p = projector(axis, projected_sign);
    const Mat4 rho = rho12.matrix();
    Mat2 reduced;
    if (projected_particle == 1) {
        const Mat4 proj = kron(p, Mat2::Identity());
        reduced = partial_trace_first(proj * rho * proj);
    } else {
        const Mat4 proj = kron(Mat2::Identity(), p);
        reduced = partial_trace_second(proj * rho * proj);
    }
    // Round-off can leave a ~1e-17 anti-Hermitian residue.
    const Mat2 herm = 0.5 * (reduced + reduced.adjoint());
    return DensityMatrix(herm, Normalization::SubNormalized);
}

DensityMatrix renormalized(const DensityMatrix& rho) {
    const double t = rho.trace();
    if (!(t > 0.0)) {
        throw std::invalid_argument("renormalized: trace must be positive");
    }
    return DensityMatrix(rho.matrix() / t, Normalization::Normalized);
}

DensityMatrix disentangled_pair_density(const UnitAxis& axis1, const UnitAxis& axis2) {
    const Mat4 m = 0.5 * (kron(projector(axis1, Sign::Plus), projector(axis2, Sign::Minus)) +
                          kron(projector(axis1, Sign::Minus), projector(axis2, Sign::Plus)));
    return DensityMatrix(m, Normalization::Normalized);
}

DensityMatrix product_density(const UnitAxis& axis, Sign sign1, Sign sign2) {
    return DensityMatrix(kron(projector(axis, sign1), projector(axis, sign2)), Normalization::Normalized);
}

}  // namespace epr
