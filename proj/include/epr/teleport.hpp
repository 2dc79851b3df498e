#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "epr/correlate.hpp"
#include "epr/qstate.hpp"

namespace epr {

/// Three-photon teleportation-style experiments.
///   GisinPhase   - coincidence rate versus the phase beta of photon 3.
///   InnsbruckDip - two levels, matched (x = 0) and mismatched (x = pi)
///                  polarizers; x is classified by the sign of cos(x).
///   KimAnalyzer  - coincidence rate versus analyzer angle, with a +/- branch.
enum class ExperimentKind { GisinPhase, InnsbruckDip, KimAnalyzer };

/// Coincidence probability of `kind` at `x` under `model`. `branch` is used
/// only by KimAnalyzer. Every value lies in [0, 1/4].
double predict(ExperimentKind kind, double x, Sign branch, const Model& model);

struct DataPoint {
    double x = 0.0;
    double rate = 0.0;
    double std_err = 0.0;
    Sign branch = Sign::Plus;
};

using Dataset = std::vector<DataPoint>;

/// Binomial samples of `counts_per_point` trials around predict() at each x,
/// with std_err = sqrt(r(1-r)/n). Deterministic in `seed`.
Dataset synth_dataset(ExperimentKind kind, const Model& model, std::span<const double> x_grid,
                      std::uint64_t counts_per_point, std::uint64_t seed, Sign branch = Sign::Plus);

struct FitResult {
    double lambda_hat = 0.0;
    double amplitude_hat = 0.0;
    double background_hat = 0.0;
    double sse = 0.0;
    double lambda_err = 0.0;
    double amplitude_err = 0.0;
    /// Zero when the background is not fitted.
    double background_err = 0.0;
};

/// The fit could not produce a meaningful optimum.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The weighted sse profile over lambda is flat: the data cannot separate the
/// entangled and disentangled fractions.
class NonIdentifiableFit : public FitError {
public:
    using FitError::FitError;
};

/// Weighted least-squares fit of A [(1 - lambda) P_E(x) + lambda P_D(x)] + c.
/// lambda is scanned on a 0.01 grid then refined by golden section; A and c
/// (c >= 0, fixed to 0 unless `fit_background`) are solved in closed form at
/// each lambda. Points with std_err <= 0 carry no weight.
///
/// Throws std::invalid_argument for fewer than 3 weighted points or a
/// degenerate grid, NonIdentifiableFit for a flat profile, and FitError for a
/// non-positive amplitude.
FitResult fit_mixture(ExperimentKind kind, std::span<const DataPoint> data, bool fit_background);

/// CSV with header `x_rad,rate,std_err` plus a `branch` column of +/- when
/// `with_branch` is set.
void write_dataset_csv(std::ostream& out, std::span<const DataPoint> data, bool with_branch);
/// Reads the format written by write_dataset_csv; columns are matched by
/// header name. Throws std::invalid_argument on malformed input.
Dataset read_dataset_csv(std::istream& in);

}  // namespace epr
