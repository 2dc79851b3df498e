#include "epr/correlate.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

#include "epr/density.hpp"

namespace epr {

namespace {

constexpr double kPlaneTol = 1e-9;

double average_coefficient(const UnitAxis& a, const UnitAxis& b, Geometry geometry, bool doubled) {
    if (geometry == Geometry::PlanePhoton) {
        if (std::abs(a.vec().z()) > kPlaneTol || std::abs(b.vec().z()) > kPlaneTol) {
            throw std::invalid_argument("PlanePhoton average requires analyzers in the x-y plane");
        }
        return 0.5;
    }
    if (doubled) {
        // The doubled sub-ensemble product does not average to cos(2 theta_ab)/3
        // over the sphere.
        throw std::invalid_argument("Sphere3D average is undefined with doubled analyzer angles");
    }
    return 1.0 / 3.0;
}

OutcomeProbs symmetric_probs(double c) {
    const double same = 0.25 * (1.0 - c);
    const double opposite = 0.25 * (1.0 + c);
    return {same, opposite, opposite, same};
}

}  // namespace

Model Model::mixture(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("Model::mixture: lambda must be in [0, 1]");
    }
    return Model(Kind::Mixture, lambda);
}

OutcomeProbs mix(const OutcomeProbs& a, const OutcomeProbs& b, double weight_b) {
    const double wa = 1.0 - weight_b;
    return {wa * a.pp + weight_b * b.pp, wa * a.pm + weight_b * b.pm, wa * a.mp + weight_b * b.mp,
            wa * a.mm + weight_b * b.mm};
}

std::pair<double, double> single_detection_probs(const UnitAxis& p_hat, Sign source_sign,
                                                 const UnitAxis& analyzer) {
    // cos^2(x/2) = (1 + cos x)/2
    const double c = analyzer.dot(p_hat);
    const double aligned = 0.25 * (1.0 + c);
    const double opposed = 0.25 * (1.0 - c);
    if (source_sign == Sign::Plus) return {aligned, opposed};
    return {opposed, aligned};
}

OutcomeProbs entangled_joint_probs(const UnitAxis& a, const UnitAxis& b, bool doubled) {
    return symmetric_probs(separation_cosine(a, b, doubled));
}

double entangled_correlation(const UnitAxis& a, const UnitAxis& b, bool doubled) {
    return entangled_joint_probs(a, b, doubled).correlation();
}

double entangled_correlation_trace(const UnitAxis& a, const UnitAxis& b) {
    const Mat4 op = kron(pauli_axis_matrix(a), pauli_axis_matrix(b));
    return epr_density().expectation(op).real();
}

OutcomeProbs subensemble_joint_probs(const UnitAxis& p_hat, const UnitAxis& a, const UnitAxis& b, bool doubled) {
    const double ca = separation_cosine(a, p_hat, doubled);
    const double cb = separation_cosine(p_hat, b, doubled);
    return symmetric_probs(ca * cb);
}

double subensemble_correlation(const UnitAxis& p_hat, const UnitAxis& a, const UnitAxis& b, bool doubled) {
    return -separation_cosine(a, p_hat, doubled) * separation_cosine(p_hat, b, doubled);
}

double averaged_correlation(const UnitAxis& a, const UnitAxis& b, Geometry geometry, bool doubled) {
    return -average_coefficient(a, b, geometry, doubled) * separation_cosine(a, b, doubled);
}

OutcomeProbs averaged_joint_probs(const UnitAxis& a, const UnitAxis& b, Geometry geometry, bool doubled) {
    return symmetric_probs(average_coefficient(a, b, geometry, doubled) * separation_cosine(a, b, doubled));
}

double disentangled_from_entangled(double p_e) {
    if (!(p_e >= 0.0 && p_e <= 0.5)) {
        throw std::invalid_argument("disentangled_from_entangled: p_e must be in [0, 1/2]");
    }
    return 0.125 + 0.5 * p_e;
}

double angle_identity_residual(const UnitAxis& a, const UnitAxis& b, const UnitAxis& p_hat) {
    // Orthonormal frame with p_hat as its pole.
    const Vec3& pole = p_hat.vec();
    const Vec3 seed = std::abs(pole.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = (seed - seed.dot(pole) * pole).normalized();
    const Vec3 e2 = pole.cross(e1);

    auto polar = [&](const Vec3& v) {
        const double x = v.dot(e1);
        const double y = v.dot(e2);
        const double z = v.dot(pole);
        return std::pair{std::atan2(std::hypot(x, y), z), std::atan2(y, x)};
    };
    const auto [ta, pa] = polar(a.vec());
    const auto [tb, pb] = polar(b.vec());
    const double decomposed = std::cos(ta) * std::cos(tb) + std::sin(ta) * std::sin(tb) * std::cos(pa - pb);
    return a.dot(b) - decomposed;
}

OutcomeProbs model_joint_probs(const Model& model, Geometry geometry, const UnitAxis& a, const UnitAxis& b,
                               bool doubled) {
    switch (model.kind()) {
        case Model::Kind::Entangled: return entangled_joint_probs(a, b, doubled);
        case Model::Kind::Disentangled: return averaged_joint_probs(a, b, geometry, doubled);
        case Model::Kind::Mixture:
            return mix(entangled_joint_probs(a, b, doubled), averaged_joint_probs(a, b, geometry, doubled),
                       model.lambda());
    }
    throw std::logic_error("unreachable Model::Kind");
}

double model_correlation(const Model& model, Geometry geometry, const UnitAxis& a, const UnitAxis& b,
                         bool doubled) {
    switch (model.kind()) {
        case Model::Kind::Entangled: return entangled_correlation(a, b, doubled);
        case Model::Kind::Disentangled: return averaged_correlation(a, b, geometry, doubled);
        case Model::Kind::Mixture:
            return (1.0 - model.lambda()) * entangled_correlation(a, b, doubled) +
                   model.lambda() * averaged_correlation(a, b, geometry, doubled);
    }
    throw std::logic_error("unreachable Model::Kind");
}

double chsh(const Model& model, Geometry geometry, const UnitAxis& a, const UnitAxis& a_prime, const UnitAxis& b,
            const UnitAxis& b_prime, bool doubled) {
    auto e = [&](const UnitAxis& x, const UnitAxis& y) { return model_correlation(model, geometry, x, y, doubled); };
    return std::abs(e(a, b) - e(a, b_prime) + e(a_prime, b) + e(a_prime, b_prime));
}

}  // namespace epr
