#include "epr/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace epr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Disentangled pair probabilities at a fixed hidden axis. With a random
// source sign these are the symmetric sub-ensemble probabilities; with a
// fixed (+, -) source they factorize into independent single-spin outcomes.
OutcomeProbs disentangled_probs(const Vec3& p_hat, const Vec3& a, const Vec3& b, bool doubled, bool fixed_sign) {
    const double ca = separation_cosine(a, p_hat, doubled);
    const double cb = separation_cosine(p_hat, b, doubled);
    if (!fixed_sign) {
        const double same = 0.25 * (1.0 - ca * cb);
        const double opposite = 0.25 * (1.0 + ca * cb);
        return {same, opposite, opposite, same};
    }
    // particle 1 is + along p_hat, particle 2 is -
    const double p1_plus = 0.5 * (1.0 + ca);
    const double p2_plus = 0.5 * (1.0 - cb);
    return {p1_plus * p2_plus, p1_plus * (1.0 - p2_plus), (1.0 - p1_plus) * p2_plus,
            (1.0 - p1_plus) * (1.0 - p2_plus)};
}

struct TrialContext {
    const ExperimentSpec& spec;
    OutcomeProbs entangled;
    Vec3 a;
    Vec3 b;
};

std::pair<Sign, Sign> run_trial(const TrialContext& ctx, Rng& rng) {
    const ExperimentSpec& spec = ctx.spec;
    bool disentangled = false;
    switch (spec.model.kind()) {
        case Model::Kind::Entangled: break;
        case Model::Kind::Disentangled: disentangled = true; break;
        case Model::Kind::Mixture: disentangled = rng.uniform() < spec.model.lambda(); break;
    }
    if (!disentangled) return sample_outcome(ctx.entangled, rng);
    const Vec3 p_hat = spec.fixed_axis ? spec.fixed_axis->vec() : sample_direction(spec.geometry, rng);
    return sample_outcome(disentangled_probs(p_hat, ctx.a, ctx.b, spec.doubled, spec.fixed_sign), rng);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    engine_.seed(seq);
}

void ExperimentSpec::validate() const {
    if (trials_per_pair < 1) {
        throw std::invalid_argument("trials_per_pair must be at least 1");
    }
    if (analyzer_pairs.empty()) {
        throw std::invalid_argument("analyzer_pairs must not be empty");
    }
}

void PairCounts::add(Sign s1, Sign s2) {
    if (s1 == Sign::Plus) {
        (s2 == Sign::Plus ? n_pp : n_pm) += 1;
    } else {
        (s2 == Sign::Plus ? n_mp : n_mm) += 1;
    }
}

PairCounts& PairCounts::operator+=(const PairCounts& o) {
    n_pp += o.n_pp;
    n_pm += o.n_pm;
    n_mp += o.n_mp;
    n_mm += o.n_mm;
    return *this;
}

Vec3 sample_direction(Geometry geometry, Rng& rng) {
    if (geometry == Geometry::PlanePhoton) {
        const double phi = kTwoPi * rng.uniform();
        return Vec3(std::cos(phi), std::sin(phi), 0.0);
    }
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = kTwoPi * rng.uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3(r * std::cos(phi), r * std::sin(phi), z);
}

UnitAxis sample_axis(Geometry geometry, Rng& rng) {
    if (geometry == Geometry::PlanePhoton) {
        return UnitAxis::in_plane(kTwoPi * rng.uniform());
    }
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = kTwoPi * rng.uniform();
    return UnitAxis(std::acos(z), phi);
}

std::pair<Sign, Sign> sample_outcome(const OutcomeProbs& probs, Rng& rng) {
    const double u = rng.uniform();
    double acc = probs.pp;
    if (u < acc) return {Sign::Plus, Sign::Plus};
    acc += probs.pm;
    if (u < acc) return {Sign::Plus, Sign::Minus};
    acc += probs.mp;
    if (u < acc) return {Sign::Minus, Sign::Plus};
    return {Sign::Minus, Sign::Minus};
}

std::pair<Sign, Sign> sample_outcome_pair(const Model& model, const UnitAxis& p_hat, const UnitAxis& a,
                                          const UnitAxis& b, bool doubled, Rng& rng) {
    bool disentangled = false;
    switch (model.kind()) {
        case Model::Kind::Entangled: break;
        case Model::Kind::Disentangled: disentangled = true; break;
        case Model::Kind::Mixture: disentangled = rng.uniform() < model.lambda(); break;
    }
    if (disentangled) return sample_outcome(subensemble_joint_probs(p_hat, a, b, doubled), rng);
    return sample_outcome(entangled_joint_probs(a, b, doubled), rng);
}

CoincidenceCounts run_experiment(const ExperimentSpec& spec, unsigned shards) {
    spec.validate();
    shards = std::max(1u, shards);

    const std::uint64_t blocks_per_pair = (spec.trials_per_pair + kTrialsPerBlock - 1) / kTrialsPerBlock;
    const std::uint64_t n_items = blocks_per_pair * spec.analyzer_pairs.size();

    std::vector<TrialContext> contexts;
    contexts.reserve(spec.analyzer_pairs.size());
    for (const auto& [a, b] : spec.analyzer_pairs) {
        contexts.push_back({spec, entangled_joint_probs(a, b, spec.doubled), a.vec(), b.vec()});
    }

    // Each shard owns a private count table; blocks go round-robin by index.
    std::vector<CoincidenceCounts> partial(shards, CoincidenceCounts(spec.analyzer_pairs.size()));
    auto worker = [&](unsigned shard) {
        for (std::uint64_t item = shard; item < n_items; item += shards) {
            const std::uint64_t pair = item / blocks_per_pair;
            const std::uint64_t block = item % blocks_per_pair;
            const std::uint64_t begin = block * kTrialsPerBlock;
            const std::uint64_t end = std::min(spec.trials_per_pair, begin + kTrialsPerBlock);
            Rng rng(spec.seed, pair, block);
            PairCounts& counts = partial[shard][pair];
            for (std::uint64_t t = begin; t < end; ++t) {
                const auto [s1, s2] = run_trial(contexts[pair], rng);
                counts.add(s1, s2);
            }
        }
    };

    if (shards == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(shards);
        for (unsigned s = 0; s < shards; ++s) threads.emplace_back(worker, s);
    }

    CoincidenceCounts total(spec.analyzer_pairs.size());
    for (const auto& p : partial) {
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += p[i];
    }
    return total;
}

CorrelationEstimate estimate_correlation(const PairCounts& counts) {
    const std::uint64_t n = counts.total();
    if (n < 2) {
        throw std::invalid_argument("estimate_correlation: need at least 2 trials");
    }
    const double signed_sum = static_cast<double>(counts.n_pp) + static_cast<double>(counts.n_mm) -
                              static_cast<double>(counts.n_pm) - static_cast<double>(counts.n_mp);
    const double e = signed_sum / static_cast<double>(n);
    return {e, std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(n)), n};
}

}  // namespace epr
