#include "epr/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "epr/format.hpp"
#include "epr/mc.hpp"

namespace epr {

namespace {

double entangled_curve(ExperimentKind kind, double x, Sign branch) {
    switch (kind) {
        case ExperimentKind::GisinPhase: return 0.125 * (1.0 - std::cos(x));
        case ExperimentKind::InnsbruckDip: return std::cos(x) >= 0.0 ? 0.25 : 0.0;
        case ExperimentKind::KimAnalyzer: return 0.125 * (1.0 + value(branch) * 2.0 * std::cos(x) * std::sin(x));
    }
    throw std::logic_error("unreachable ExperimentKind");
}

// Averaged levels for the dip are taken as 3/16 and 1/16.
double disentangled_curve(ExperimentKind kind, double x, Sign branch) {
    switch (kind) {
        case ExperimentKind::GisinPhase: return 0.125 * (1.0 - 0.5 * std::cos(x));
        case ExperimentKind::InnsbruckDip: return std::cos(x) >= 0.0 ? 3.0 / 16.0 : 1.0 / 16.0;
        case ExperimentKind::KimAnalyzer: return 0.125 * (1.0 + value(branch) * std::cos(x) * std::sin(x));
    }
    throw std::logic_error("unreachable ExperimentKind");
}

struct WeightedPoint {
    double pe;
    double pd;
    double y;
    double w;
};

struct ProfilePoint {
    double sse;
    double amplitude;
    double background;
};

class MixtureProfile {
public:
    MixtureProfile(std::vector<WeightedPoint> pts, bool fit_background)
        : pts_(std::move(pts)), fit_background_(fit_background) {}

    /// Closed-form (A, c) at fixed lambda; `clamp` enforces c >= 0.
    std::optional<ProfilePoint> at(double lambda, bool clamp) const {
        double smm = 0.0, sm = 0.0, sw = 0.0, smy = 0.0, sy = 0.0;
        for (const auto& p : pts_) {
            const double m = model(p, lambda);
            smm += p.w * m * m;
            sm += p.w * m;
            sw += p.w;
            smy += p.w * m * p.y;
            sy += p.w * p.y;
        }
        double a = 0.0;
        double c = 0.0;
        bool solved = false;
        if (fit_background_) {
            const double det = smm * sw - sm * sm;
            if (det > 1e-12 * smm * sw) {
                a = (smy * sw - sm * sy) / det;
                c = (smm * sy - sm * smy) / det;
                solved = true;
            } else {
                return std::nullopt;
            }
            if (clamp && c < 0.0) solved = false;
        }
        if (!solved) {
            if (!(smm > 0.0)) return std::nullopt;
            a = smy / smm;
            c = 0.0;
        }
        return ProfilePoint{sse(lambda, a, c), a, c};
    }

    double sse(double lambda, double a, double c) const {
        double s = 0.0;
        for (const auto& p : pts_) {
            const double r = p.y - a * model(p, lambda) - c;
            s += p.w * r * r;
        }
        return s;
    }

    double weighted_square_sum() const {
        double s = 0.0;
        for (const auto& p : pts_) s += p.w * p.y * p.y;
        return s;
    }

    const std::vector<WeightedPoint>& points() const { return pts_; }

    static double model(const WeightedPoint& p, double lambda) { return p.pe + lambda * (p.pd - p.pe); }

private:
    std::vector<WeightedPoint> pts_;
    bool fit_background_;
};

constexpr int kGridSteps = 100;
constexpr double kGridStep = 1.0 / kGridSteps;
constexpr double kFlatTol = 1e-9;

double golden_section(const MixtureProfile& profile, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double l) { return profile.at(l, true)->sse; };
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > 1e-12) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double predict(ExperimentKind kind, double x, Sign branch, const Model& model) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("predict: x must be finite");
    }
    switch (model.kind()) {
        case Model::Kind::Entangled: return entangled_curve(kind, x, branch);
        case Model::Kind::Disentangled: return disentangled_curve(kind, x, branch);
        case Model::Kind::Mixture:
            return (1.0 - model.lambda()) * entangled_curve(kind, x, branch) +
                   model.lambda() * disentangled_curve(kind, x, branch);
    }
    throw std::logic_error("unreachable Model::Kind");
}

Dataset synth_dataset(ExperimentKind kind, const Model& model, std::span<const double> x_grid,
                      std::uint64_t counts_per_point, std::uint64_t seed, Sign branch) {
    if (x_grid.empty()) {
        throw std::invalid_argument("synth_dataset: x grid must not be empty");
    }
    if (counts_per_point < 100) {
        throw std::invalid_argument("synth_dataset: counts_per_point must be at least 100");
    }
    Dataset out;
    out.reserve(x_grid.size());
    const double n = static_cast<double>(counts_per_point);
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double p = predict(kind, x_grid[i], branch, model);
        Rng rng(seed, i, 0);
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < counts_per_point; ++t) {
            if (rng.uniform() < p) ++hits;
        }
        const double rate = static_cast<double>(hits) / n;
        out.push_back({x_grid[i], rate, std::sqrt(rate * (1.0 - rate) / n), branch});
    }
    return out;
}

FitResult fit_mixture(ExperimentKind kind, std::span<const DataPoint> data, bool fit_background) {
    std::vector<WeightedPoint> pts;
    bool any_x_differs = false;
    for (const auto& d : data) {
        if (!std::isfinite(d.x) || !std::isfinite(d.rate) || !std::isfinite(d.std_err)) {
            throw std::invalid_argument("fit_mixture: dataset contains non-finite values");
        }
        if (d.x != data.front().x) any_x_differs = true;
        if (d.std_err <= 0.0) continue;
        pts.push_back({predict(kind, d.x, d.branch, Model::entangled()),
                       predict(kind, d.x, d.branch, Model::disentangled()), d.rate,
                       1.0 / (d.std_err * d.std_err)});
    }
    if (data.size() < 3) {
        throw std::invalid_argument("fit_mixture: dataset needs at least 3 points");
    }
    if (!any_x_differs) {
        throw std::invalid_argument("fit_mixture: all x values are equal");
    }
    if (pts.empty()) {
        throw std::invalid_argument("fit_mixture: all std_err values are zero");
    }
    if (pts.size() < 3) {
        throw std::invalid_argument("fit_mixture: fewer than 3 points with positive std_err");
    }

    const MixtureProfile profile(std::move(pts), fit_background);

    // Identifiability is judged on the unconstrained profile: clamping the
    // background can tilt an otherwise flat profile.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k <= kGridSteps; ++k) {
        const auto p = profile.at(k * kGridStep, false);
        if (!p) throw NonIdentifiableFit("fit_mixture: model columns are linearly dependent");
        lo = std::min(lo, p->sse);
        hi = std::max(hi, p->sse);
    }
    if (hi - lo <= kFlatTol * std::max(hi, profile.weighted_square_sum())) {
        throw NonIdentifiableFit("fit_mixture: sse profile over lambda is flat");
    }

    int best_k = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kGridSteps; ++k) {
        const double s = profile.at(k * kGridStep, true)->sse;
        if (s < best_sse) {
            best_sse = s;
            best_k = k;
        }
    }
    double lambda = best_k * kGridStep;
    const double refined = golden_section(profile, std::max(0.0, lambda - kGridStep),
                                          std::min(1.0, lambda + kGridStep));
    // Round-off level gains do not move the estimate off a grid point.
    const double min_gain = 1e-14 * profile.weighted_square_sum();
    if (profile.at(refined, true)->sse < best_sse - min_gain) lambda = refined;

    const ProfilePoint opt = *profile.at(lambda, true);
    if (!(opt.amplitude > 0.0)) {
        throw FitError("fit_mixture: fitted amplitude is not positive");
    }

    FitResult r;
    r.lambda_hat = std::clamp(lambda, 0.0, 1.0);
    r.amplitude_hat = opt.amplitude;
    r.background_hat = opt.background;
    r.sse = opt.sse;

    // Linearized covariance: inverse of J^T W J over (lambda, A[, c]).
    const int np = fit_background ? 3 : 2;
    Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(np, np);
    for (const auto& p : profile.points()) {
        Eigen::VectorXd j(np);
        j(0) = opt.amplitude * (p.pd - p.pe);
        j(1) = MixtureProfile::model(p, lambda);
        if (fit_background) j(2) = 1.0;
        normal += p.w * j * j.transpose();
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
    if (lu.isInvertible()) {
        const Eigen::VectorXd var = lu.inverse().diagonal();
        r.lambda_err = std::sqrt(std::max(0.0, var(0)));
        r.amplitude_err = std::sqrt(std::max(0.0, var(1)));
        if (fit_background) r.background_err = std::sqrt(std::max(0.0, var(2)));
    } else {
        const double inf = std::numeric_limits<double>::infinity();
        r.lambda_err = inf;
        r.amplitude_err = inf;
        r.background_err = fit_background ? inf : 0.0;
    }
    return r;
}

void write_dataset_csv(std::ostream& out, std::span<const DataPoint> data, bool with_branch) {
    out << "x_rad,rate,std_err" << (with_branch ? ",branch" : "") << '\n';
    for (const auto& d : data) {
        out << fmt9(d.x) << ',' << fmt9(d.rate) << ',' << fmt9(d.std_err);
        if (with_branch) out << ',' << symbol(d.branch);
        out << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& s, std::size_t line_no, const char* column) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw std::invalid_argument("dataset line " + std::to_string(line_no) + ": column '" + column +
                                    "' is not a number: '" + s + "'");
    }
    return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("dataset: missing header row");
    }
    const auto header = split_csv_line(line);
    auto column = [&](const char* name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto cx = column("x_rad");
    const auto cr = column("rate");
    const auto cs = column("std_err");
    const auto cb = column("branch");
    if (!cx || !cr || !cs) {
        throw std::invalid_argument("dataset: header must contain x_rad, rate and std_err");
    }

    Dataset out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) {
            throw std::invalid_argument("dataset line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " fields");
        }
        DataPoint d;
        d.x = parse_number(f[*cx], line_no, "x_rad");
        d.rate = parse_number(f[*cr], line_no, "rate");
        d.std_err = parse_number(f[*cs], line_no, "std_err");
        if (d.std_err < 0.0) {
            throw std::invalid_argument("dataset line " + std::to_string(line_no) + ": std_err is negative");
        }
        if (cb) {
            const std::string& b = f[*cb];
            if (b == "+") {
                d.branch = Sign::Plus;
            } else if (b == "-") {
                d.branch = Sign::Minus;
            } else {
                throw std::invalid_argument("dataset line " + std::to_string(line_no) + ": branch must be + or -");
            }
        }
        out.push_back(d);
    }
    return out;
}

}  // namespace epr
