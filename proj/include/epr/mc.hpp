#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "epr/axis.hpp"
#include "epr/correlate.hpp"
#include "epr/qstate.hpp"

namespace epr {

/// Uniform stream keyed by (seed, stream, block). Any key always yields the
/// same sequence; different keys are decorrelated through std::seed_seq.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block);

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Trials drawn from one Rng stream. Shards partition whole blocks, so counts
/// do not depend on the shard count.
inline constexpr std::uint64_t kTrialsPerBlock = std::uint64_t{1} << 16;

struct AnalyzerPair {
    UnitAxis a;
    UnitAxis b;
};

struct ExperimentSpec {
    Model model = Model::entangled();
    Geometry geometry = Geometry::Sphere3D;
    bool doubled = false;
    std::vector<AnalyzerPair> analyzer_pairs;
    std::uint64_t trials_per_pair = 0;
    std::uint64_t seed = 0;
    /// When set, every disentangled pair shares this axis instead of a fresh
    /// uniformly drawn one.
    std::optional<UnitAxis> fixed_axis;
    /// When set, disentangled sources always emit (+, -) along the hidden
    /// axis instead of (+, -) or (-, +) with equal probability.
    bool fixed_sign = false;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct PairCounts {
    std::uint64_t n_pp = 0;
    std::uint64_t n_pm = 0;
    std::uint64_t n_mp = 0;
    std::uint64_t n_mm = 0;

    std::uint64_t total() const { return n_pp + n_pm + n_mp + n_mm; }
    void add(Sign s1, Sign s2);
    PairCounts& operator+=(const PairCounts& o);
    bool operator==(const PairCounts&) const = default;
};

/// One entry per analyzer pair, in the order of ExperimentSpec::analyzer_pairs.
using CoincidenceCounts = std::vector<PairCounts>;

struct CorrelationEstimate {
    double e_hat = 0.0;
    double std_err = 0.0;
    std::uint64_t n = 0;
};

/// Hidden-axis draw: uniform on the sphere, or uniform on the x-y circle with
/// z exactly 0.
UnitAxis sample_axis(Geometry geometry, Rng& rng);
Vec3 sample_direction(Geometry geometry, Rng& rng);

/// Inverse-CDF draw over (++, +-, -+, --) in that order.
std::pair<Sign, Sign> sample_outcome(const OutcomeProbs& probs, Rng& rng);

/// One coincidence trial. Entangled pairs ignore `p_hat`; disentangled pairs
/// use the sub-ensemble probabilities at `p_hat`; a mixture first picks the
/// disentangled branch with probability lambda.
std::pair<Sign, Sign> sample_outcome_pair(const Model& model, const UnitAxis& p_hat, const UnitAxis& a,
                                          const UnitAxis& b, bool doubled, Rng& rng);

/// Runs every analyzer pair. `shards` worker threads split the trial blocks;
/// the result is identical for any shard count.
CoincidenceCounts run_experiment(const ExperimentSpec& spec, unsigned shards = 1);

/// e = (n++ - n+- - n-+ + n--)/N, std_err = sqrt((1 - e^2)/N). Throws for N < 2.
CorrelationEstimate estimate_correlation(const PairCounts& counts);

}  // namespace epr
