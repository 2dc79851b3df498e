#pragma once

#include <utility>

#include "epr/axis.hpp"
#include "epr/qstate.hpp"

namespace epr {

/// Distribution of hidden quantization axes: uniform on the sphere (spins) or
/// uniform on the circle transverse to propagation (photon polarization).
enum class Geometry { Sphere3D, PlanePhoton };

/// Entangled pairs, disentangled pairs, or a population mixture with a
/// fraction `lambda` of disentangled pairs. Mixtures combine probabilities
/// linearly: P = (1 - lambda) P_E + lambda P_D.
class Model {
public:
    enum class Kind { Entangled, Disentangled, Mixture };

    static Model entangled() { return Model(Kind::Entangled, 0.0); }
    static Model disentangled() { return Model(Kind::Disentangled, 1.0); }
    /// Throws std::invalid_argument unless lambda is in [0, 1].
    static Model mixture(double lambda);

    Kind kind() const { return kind_; }
    /// Disentangled fraction: 0 for Entangled, 1 for Disentangled.
    double lambda() const { return lambda_; }

private:
    Model(Kind k, double lambda) : kind_(k), lambda_(lambda) {}
    Kind kind_;
    double lambda_;
};

/// Coincidence probabilities for the outcome pairs (++, +-, -+, --).
struct OutcomeProbs {
    double pp = 0.0;
    double pm = 0.0;
    double mp = 0.0;
    double mm = 0.0;

    double sum() const { return pp + pm + mp + mm; }
    /// P++ - P+- - P-+ + P--.
    double correlation() const { return pp - pm - mp + mm; }
};

OutcomeProbs mix(const OutcomeProbs& a, const OutcomeProbs& b, double weight_b);

/// Detection probabilities (+, -) at `analyzer` for a single spin prepared in
/// `source_sign` along `p_hat`. Normalized so that both stations together sum
/// to one: each pair returned here sums to 1/2.
std::pair<double, double> single_detection_probs(const UnitAxis& p_hat, Sign source_sign, const UnitAxis& analyzer);

OutcomeProbs entangled_joint_probs(const UnitAxis& a, const UnitAxis& b, bool doubled);

/// -cos(theta_ab), from the coincidence probabilities.
double entangled_correlation(const UnitAxis& a, const UnitAxis& b, bool doubled);

/// Tr(rho_singlet (a.sigma)(x)(b.sigma)), evaluated with the 4x4 density.
double entangled_correlation_trace(const UnitAxis& a, const UnitAxis& b);

/// Disentangled pairs sharing the axis `p_hat`, before any ensemble average.
OutcomeProbs subensemble_joint_probs(const UnitAxis& p_hat, const UnitAxis& a, const UnitAxis& b,
                                     bool doubled = false);

/// -(a.p)(p.b).
double subensemble_correlation(const UnitAxis& p_hat, const UnitAxis& a, const UnitAxis& b, bool doubled = false);

/// Average over the hidden axis of `subensemble_correlation`: -cos(theta_ab)/3
/// on the sphere, -cos(theta_ab)/2 in the plane.
///
/// PlanePhoton requires both analyzers in the x-y plane (|z| <= 1e-9);
/// Sphere3D cannot be combined with `doubled`. Both are rejected with
/// std::invalid_argument.
double averaged_correlation(const UnitAxis& a, const UnitAxis& b, Geometry geometry, bool doubled);

/// P++ = P-- = (1 - k cos)/4, P+- = P-+ = (1 + k cos)/4 with k = 1/3 (sphere)
/// or 1/2 (plane). Same preconditions as averaged_correlation.
OutcomeProbs averaged_joint_probs(const UnitAxis& a, const UnitAxis& b, Geometry geometry, bool doubled);

/// Disentangled coincidence probability from the entangled one:
/// 1/8 + p_e/2. Throws unless p_e is in [0, 1/2].
double disentangled_from_entangled(double p_e);

/// cos(theta_ab) minus its decomposition in the polar frame of `p_hat`.
double angle_identity_residual(const UnitAxis& a, const UnitAxis& b, const UnitAxis& p_hat);

/// Correlation E(a, b) for any model.
double model_correlation(const Model& model, Geometry geometry, const UnitAxis& a, const UnitAxis& b, bool doubled);

/// Coincidence probabilities for any model.
OutcomeProbs model_joint_probs(const Model& model, Geometry geometry, const UnitAxis& a, const UnitAxis& b,
                               bool doubled);

/// |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
double chsh(const Model& model, Geometry geometry, const UnitAxis& a, const UnitAxis& a_prime, const UnitAxis& b,
            const UnitAxis& b_prime, bool doubled);

}  // namespace epr
