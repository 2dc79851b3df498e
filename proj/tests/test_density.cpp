#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "epr/density.hpp"

using namespace epr;
using std::numbers::pi;

namespace {

constexpr double kTol = 1e-12;

double maxdiff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Contract the singlet amplitudes directly with <s| on one particle; the
// remaining (unnormalized) ket gives the conditional state as |k><k|.
Mat2 contracted_conditional(const UnitAxis& axis, Sign s, int particle) {
    const Eigen::Vector4cd psi = bell_state(BellKind::SingletMinus).vector();
    const Eigen::Vector2cd bra = make_spinor(axis, s).vector().conjugate();
    Eigen::Vector2cd k = Eigen::Vector2cd::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (particle == 1) {
                k(j) += bra(i) * psi(2 * i + j);
            } else {
                k(i) += bra(j) * psi(2 * i + j);
            }
        }
    }
    return k * k.adjoint();
}

std::vector<UnitAxis> random_axes(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(0.0, pi), up(0.0, 2.0 * pi);
    std::vector<UnitAxis> out;
    for (int i = 0; i < n; ++i) out.emplace_back(ut(rng), up(rng));
    return out;
}

}  // namespace

TEST_CASE("epr_density: both constructions agree and the state is pure") {
    const DensityMatrix rho = epr_density();
    const DensityMatrix alt = epr_density_pauli_form();
    CHECK(maxdiff(rho.matrix(), alt.matrix()) < kTol);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(kTol));
    CHECK(maxdiff(rho.matrix() * rho.matrix(), rho.matrix()) < kTol);
    CHECK(std::abs(rho(1, 1) - 0.5) < kTol);
    CHECK(std::abs(rho(1, 2) + 0.5) < kTol);
}

TEST_CASE("epr_density is isotropic: both reduced states are I/2") {
    const Mat4 m = epr_density().matrix();
    CHECK(maxdiff(partial_trace_first(m), 0.5 * Mat2::Identity()) < kTol);
    CHECK(maxdiff(partial_trace_second(m), 0.5 * Mat2::Identity()) < kTol);
}

TEST_CASE("conditional_collapse reference cases") {
    const DensityMatrix rho = epr_density();
    const DensityMatrix r = conditional_collapse(rho, UnitAxis::z(), Sign::Minus, 2);
    CHECK(r.dim() == 2);
    CHECK(r.normalization() == Normalization::SubNormalized);
    CHECK(r.trace() == doctest::Approx(0.5).epsilon(kTol));
    CHECK(maxdiff(r.matrix(), 0.5 * projector(UnitAxis::z(), Sign::Plus)) < kTol);

    const UnitAxis ax(pi / 2, pi / 3);
    const DensityMatrix r2 = conditional_collapse(rho, ax, Sign::Plus, 1);
    CHECK(maxdiff(r2.matrix(), contracted_conditional(ax, Sign::Plus, 1)) < kTol);
    CHECK(maxdiff(r2.matrix(), 0.5 * projector(ax, Sign::Minus)) < kTol);
}

TEST_CASE("conditional_collapse over random axes") {
    const DensityMatrix rho = epr_density();
    for (const auto& ax : random_axes(100, 5)) {
        for (int particle : {1, 2}) {
            Mat2 sum = Mat2::Zero();
            for (Sign s : {Sign::Plus, Sign::Minus}) {
                const DensityMatrix r = conditional_collapse(rho, ax, s, particle);
                CHECK(std::abs(r.trace() - 0.5) < kTol);
                CHECK(maxdiff(r.matrix(), 0.5 * projector(ax, flip(s))) < kTol);
                CHECK(maxdiff(r.matrix(), contracted_conditional(ax, s, particle)) < kTol);
                sum += r.matrix();
            }
            CHECK(maxdiff(sum, 0.5 * Mat2::Identity()) < kTol);
        }
    }
}

TEST_CASE("conditional_collapse rejects a bad particle index") {
    CHECK_THROWS_AS(conditional_collapse(epr_density(), UnitAxis::z(), Sign::Plus, 0), std::invalid_argument);
    CHECK_THROWS_AS(conditional_collapse(epr_density(), UnitAxis::z(), Sign::Plus, 3), std::invalid_argument);
}

TEST_CASE("renormalized conditional state is the pure projector") {
    const UnitAxis ax(0.8, 2.0);
    const DensityMatrix r = renormalized(conditional_collapse(epr_density(), ax, Sign::Plus, 2));
    CHECK(r.normalization() == Normalization::Normalized);
    CHECK(maxdiff(r.matrix(), projector(ax, Sign::Minus)) < kTol);
}

TEST_CASE("disentangled_pair_density") {
    const DensityMatrix d = disentangled_pair_density(UnitAxis::z(), UnitAxis::z());
    Eigen::Vector4cd diag(0.0, 0.5, 0.5, 0.0);
    CHECK(maxdiff(d.matrix(), Mat4(diag.asDiagonal())) < kTol);
    CHECK(std::abs(d(1, 2)) < kTol);
    CHECK(d.trace() == doctest::Approx(1.0));

    for (const auto& ax : random_axes(50, 9)) {
        const DensityMatrix dd = disentangled_pair_density(ax, ax);
        CHECK(std::abs(dd.trace() - 1.0) < kTol);
        for (Sign s1 : {Sign::Plus, Sign::Minus}) {
            for (Sign s2 : {Sign::Plus, Sign::Minus}) {
                const Mat4 p = kron(projector(ax, s1), projector(ax, s2));
                CHECK(maxdiff(p * dd.matrix(), dd.matrix() * p) < kTol);
            }
        }
        // No interference: the disentangled state is not the singlet.
        CHECK(maxdiff(dd.matrix(), epr_density().matrix()) > 0.1);
    }
}

TEST_CASE("product_density") {
    const DensityMatrix p = product_density(UnitAxis::z(), Sign::Plus, Sign::Minus);
    Eigen::Vector4cd diag(0.0, 1.0, 0.0, 0.0);
    CHECK(maxdiff(p.matrix(), Mat4(diag.asDiagonal())) < kTol);

    const DensityMatrix px = product_density(UnitAxis::x(), Sign::Plus, Sign::Minus);
    CHECK(std::abs(px.expectation(kron(pauli_z(), Mat2::Identity()))) < kTol);
    CHECK(std::abs(px.expectation(kron(pauli_x(), Mat2::Identity())) - 1.0) < kTol);
    for (const auto& ax : random_axes(20, 4)) {
        CHECK(std::abs(product_density(ax, Sign::Minus, Sign::Minus).trace() - 1.0) < kTol);
    }
}

TEST_CASE("DensityMatrix validation") {
    Eigen::MatrixXcd bad_dim = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
    CHECK_THROWS_AS(DensityMatrix(bad_dim, Normalization::Normalized), std::invalid_argument);

    Eigen::MatrixXcd non_herm(2, 2);
    non_herm << 0.5, 0.1, 0.0, 0.5;
    CHECK_THROWS_AS(DensityMatrix(non_herm, Normalization::Normalized), std::invalid_argument);

    Eigen::MatrixXcd non_psd(2, 2);
    non_psd << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix(non_psd, Normalization::Normalized), std::invalid_argument);

    Eigen::MatrixXcd half = 0.25 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix(half, Normalization::Normalized), std::invalid_argument);
    CHECK_NOTHROW(DensityMatrix(half, Normalization::SubNormalized));
}
