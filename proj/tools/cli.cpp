#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "epr/correlate.hpp"
#include "epr/format.hpp"
#include "epr/mc.hpp"
#include "epr/teleport.hpp"

namespace epr::cli {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Invalid configuration; the message starts with the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what) : std::runtime_error(field + ": " + what) {}
};

const std::set<std::string> kTopLevelKeys = {"command", "model", "geometry", "doubled", "angles_deg",
                                             "trials",  "seed",  "output",   "format"};

const std::map<std::string, std::set<std::string>> kCommandKeys = {
    {"correlate", {}},
    {"chsh", {"lambda"}},
    {"simulate", {"lambda", "shards", "fixed_axis_deg", "fixed_sign"}},
    {"predict", {"experiment", "lambda", "branch"}},
    {"synth", {"experiment", "lambda", "branch", "counts"}},
    {"fit", {"experiment", "input", "fit_background"}},
};

// ---------------------------------------------------------------------------
// Typed access to the merged configuration.

class Config {
public:
    Config(std::string command, json values) : command_(std::move(command)), v_(std::move(values)) {
        const auto& allowed = kCommandKeys.at(command_);
        for (const auto& [key, _] : v_.items()) {
            if (!kTopLevelKeys.contains(key) && !allowed.contains(key)) {
                throw ConfigError(key, "unknown key for command '" + command_ + "'");
            }
        }
    }

    const std::string& command() const { return command_; }
    bool has(const std::string& key) const { return v_.contains(key) && !v_.at(key).is_null(); }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const auto& j = v_.at(key);
        if (!j.is_boolean()) throw ConfigError(key, "must be true or false");
        return j.get<bool>();
    }

    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const auto& j = v_.at(key);
        if (j.is_number_unsigned()) return j.get<std::uint64_t>();
        if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
        throw ConfigError(key, "must be a non-negative integer");
    }

    std::optional<double> get_double(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        const auto& j = v_.at(key);
        if (!j.is_number() || !std::isfinite(j.get<double>())) throw ConfigError(key, "must be a finite number");
        return j.get<double>();
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const auto& j = v_.at(key);
        if (!j.is_string()) throw ConfigError(key, "must be a string");
        return j.get<std::string>();
    }

    std::vector<double> get_numbers(const std::string& key, std::vector<double> fallback) const {
        if (!has(key)) return fallback;
        const auto& j = v_.at(key);
        if (!j.is_array()) throw ConfigError(key, "must be a list of numbers");
        std::vector<double> out;
        for (const auto& e : j) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) {
                throw ConfigError(key, "must contain only finite numbers");
            }
            out.push_back(e.get<double>());
        }
        if (out.empty()) throw ConfigError(key, "must not be empty");
        return out;
    }

private:
    std::string command_;
    json v_;
};

Geometry parse_geometry(const Config& cfg, Geometry fallback) {
    if (!cfg.has("geometry")) return fallback;
    const std::string g = cfg.get_string("geometry", "");
    if (g == "sphere") return Geometry::Sphere3D;
    if (g == "plane") return Geometry::PlanePhoton;
    throw ConfigError("geometry", "expected 'sphere' or 'plane', got '" + g + "'");
}

std::optional<double> parse_lambda(const Config& cfg) {
    const auto l = cfg.get_double("lambda");
    if (l && !(*l >= 0.0 && *l <= 1.0)) throw ConfigError("lambda", "must be in [0, 1]");
    return l;
}

Model parse_model(const Config& cfg, const std::string& fallback) {
    const std::string m = cfg.get_string("model", fallback);
    const auto lambda = parse_lambda(cfg);
    if (m == "entangled") return Model::entangled();
    if (m == "disentangled") return Model::disentangled();
    if (m == "mixture") {
        if (!lambda) throw ConfigError("lambda", "required when model is 'mixture'");
        return Model::mixture(*lambda);
    }
    throw ConfigError("model", "expected 'entangled', 'disentangled' or 'mixture', got '" + m + "'");
}

ExperimentKind parse_experiment(const Config& cfg) {
    if (!cfg.has("experiment")) throw ConfigError("experiment", "required ('gisin', 'innsbruck' or 'kim')");
    const std::string e = cfg.get_string("experiment", "");
    if (e == "gisin") return ExperimentKind::GisinPhase;
    if (e == "innsbruck") return ExperimentKind::InnsbruckDip;
    if (e == "kim") return ExperimentKind::KimAnalyzer;
    throw ConfigError("experiment", "expected 'gisin', 'innsbruck' or 'kim', got '" + e + "'");
}

Sign parse_branch(const Config& cfg) {
    const std::string b = cfg.get_string("branch", "+");
    if (b == "+") return Sign::Plus;
    if (b == "-") return Sign::Minus;
    throw ConfigError("branch", "expected '+' or '-', got '" + b + "'");
}

std::string model_name(const Model& m) {
    switch (m.kind()) {
        case Model::Kind::Entangled: return "entangled";
        case Model::Kind::Disentangled: return "disentangled";
        case Model::Kind::Mixture: return "mixture";
    }
    return "";
}

std::vector<double> degree_grid(double from, double to, double step) {
    std::vector<double> g;
    for (int i = 0; from + i * step <= to + 1e-9; ++i) g.push_back(from + i * step);
    return g;
}

// ---------------------------------------------------------------------------
// Output tables.

using Cell = std::variant<double, std::uint64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        os << fmt9(v);
                    } else {
                        os << v;
                    }
                },
                row[i]);
        }
        os << '\n';
    }
    return os.str();
}

std::string to_json(const Table& t) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit([&](const auto& v) { obj[t.columns[i]] = v; }, row[i]);
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::string render(const Config& cfg, const Table& t) {
    const std::string format = cfg.get_string("format", "csv");
    if (format == "csv") return to_csv(t);
    if (format == "json") return to_json(t);
    throw ConfigError("format", "expected 'csv' or 'json', got '" + format + "'");
}

// ---------------------------------------------------------------------------
// Subcommands.

Table cmd_correlate(const Config& cfg) {
    const Geometry geometry = parse_geometry(cfg, Geometry::PlanePhoton);
    const bool doubled = cfg.get_bool("doubled", false);
    const auto angles = cfg.get_numbers("angles_deg", degree_grid(0.0, 180.0, 15.0));
    if (geometry == Geometry::Sphere3D && doubled) {
        throw ConfigError("doubled", "cannot be combined with geometry 'sphere'");
    }
    Table t{{"theta_ab_deg", "E_entangled", "E_disentangled", "P_pp_E", "P_pm_E", "P_pp_D", "P_pm_D"}, {}};
    const UnitAxis a = UnitAxis::in_plane(0.0);
    for (double deg : angles) {
        const UnitAxis b = UnitAxis::in_plane(deg_to_rad(deg));
        const OutcomeProbs pe = entangled_joint_probs(a, b, doubled);
        const OutcomeProbs pd = averaged_joint_probs(a, b, geometry, doubled);
        t.rows.push_back({deg, entangled_correlation(a, b, doubled), averaged_correlation(a, b, geometry, doubled),
                          pe.pp, pe.pm, pd.pp, pd.pm});
    }
    return t;
}

Table cmd_chsh(const Config& cfg) {
    const Geometry geometry = parse_geometry(cfg, Geometry::PlanePhoton);
    const bool doubled = cfg.get_bool("doubled", false);
    const auto angles = cfg.get_numbers("angles_deg", {0.0, 90.0, 45.0, 135.0});
    if (angles.size() != 4) throw ConfigError("angles_deg", "chsh needs exactly 4 angles (a, a', b, b')");
    if (geometry == Geometry::Sphere3D && doubled) {
        throw ConfigError("doubled", "cannot be combined with geometry 'sphere'");
    }

    std::vector<Model> models;
    if (cfg.has("model")) {
        models.push_back(parse_model(cfg, ""));
    } else {
        models = {Model::entangled(), Model::disentangled()};
        if (const auto l = parse_lambda(cfg)) models.push_back(Model::mixture(*l));
    }

    const UnitAxis a = UnitAxis::in_plane(deg_to_rad(angles[0]));
    const UnitAxis ap = UnitAxis::in_plane(deg_to_rad(angles[1]));
    const UnitAxis b = UnitAxis::in_plane(deg_to_rad(angles[2]));
    const UnitAxis bp = UnitAxis::in_plane(deg_to_rad(angles[3]));
    Table t{{"model", "lambda", "a_deg", "a_prime_deg", "b_deg", "b_prime_deg", "S"}, {}};
    for (const auto& m : models) {
        t.rows.push_back({model_name(m), m.lambda(), angles[0], angles[1], angles[2], angles[3],
                          chsh(m, geometry, a, ap, b, bp, doubled)});
    }
    return t;
}

Table cmd_simulate(const Config& cfg) {
    ExperimentSpec spec;
    spec.model = parse_model(cfg, "entangled");
    spec.geometry = parse_geometry(cfg, Geometry::Sphere3D);
    spec.doubled = cfg.get_bool("doubled", false);
    spec.trials_per_pair = cfg.get_uint("trials", 100000);
    spec.seed = cfg.get_uint("seed", 1);
    spec.fixed_sign = cfg.get_bool("fixed_sign", false);
    const auto shards = cfg.get_uint("shards", 1);
    const auto angles = cfg.get_numbers("angles_deg", degree_grid(0.0, 180.0, 15.0));
    if (spec.trials_per_pair < 2) throw ConfigError("trials", "must be at least 2");
    if (shards < 1 || shards > 1024) throw ConfigError("shards", "must be between 1 and 1024");
    if (cfg.has("fixed_axis_deg")) {
        const auto ax = cfg.get_numbers("fixed_axis_deg", {});
        if (ax.size() != 2) throw ConfigError("fixed_axis_deg", "expected [theta_deg, phi_deg]");
        spec.fixed_axis = UnitAxis(deg_to_rad(ax[0]), deg_to_rad(ax[1]));
    }
    const bool has_disentangled = spec.model.kind() != Model::Kind::Entangled;
    if (has_disentangled && !spec.fixed_axis && spec.geometry == Geometry::Sphere3D && spec.doubled) {
        throw ConfigError("doubled", "cannot be combined with geometry 'sphere' for disentangled pairs");
    }

    const UnitAxis a = UnitAxis::in_plane(0.0);
    for (double deg : angles) spec.analyzer_pairs.push_back({a, UnitAxis::in_plane(deg_to_rad(deg))});

    const CoincidenceCounts counts = run_experiment(spec, static_cast<unsigned>(shards));

    Table t{{"theta_ab_deg", "n_pp", "n_pm", "n_mp", "n_mm", "e_hat", "std_err", "e_analytic"}, {}};
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto& [pa, pb] = spec.analyzer_pairs[i];
        const CorrelationEstimate est = estimate_correlation(counts[i]);
        double analytic = 0.0;
        if (spec.fixed_axis) {
            const double ed = subensemble_correlation(*spec.fixed_axis, pa, pb, spec.doubled);
            analytic = (1.0 - spec.model.lambda()) * entangled_correlation(pa, pb, spec.doubled) +
                       spec.model.lambda() * ed;
        } else {
            analytic = model_correlation(spec.model, spec.geometry, pa, pb, spec.doubled);
        }
        const auto& c = counts[i];
        t.rows.push_back({angles[i], c.n_pp, c.n_pm, c.n_mp, c.n_mm, est.e_hat, est.std_err, analytic});
    }
    return t;
}

Table cmd_predict(const Config& cfg) {
    const ExperimentKind kind = parse_experiment(cfg);
    const Sign branch = parse_branch(cfg);
    const auto lambda = parse_lambda(cfg);
    const auto angles = cfg.get_numbers("angles_deg", degree_grid(0.0, 360.0, 30.0));
    Table t{{"x_deg", "x_rad", "branch", "P_entangled", "P_disentangled"}, {}};
    if (lambda) t.columns.push_back("P_mixture");
    for (double deg : angles) {
        const double x = deg_to_rad(deg);
        std::vector<Cell> row{deg, x, std::string(1, symbol(branch)), predict(kind, x, branch, Model::entangled()),
                              predict(kind, x, branch, Model::disentangled())};
        if (lambda) row.emplace_back(predict(kind, x, branch, Model::mixture(*lambda)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string cmd_synth(const Config& cfg) {
    const ExperimentKind kind = parse_experiment(cfg);
    const Model model = parse_model(cfg, "entangled");
    const Sign branch = parse_branch(cfg);
    const auto counts = cfg.get_uint("counts", 100000);
    const auto seed = cfg.get_uint("seed", 1);
    const auto angles = cfg.get_numbers("angles_deg", degree_grid(0.0, 360.0, 30.0));
    if (counts < 100) throw ConfigError("counts", "must be at least 100");
    const std::string format = cfg.get_string("format", "csv");
    if (format != "csv") throw ConfigError("format", "synth writes the csv dataset format only");

    std::vector<double> x;
    for (double deg : angles) x.push_back(deg_to_rad(deg));
    const Dataset data = synth_dataset(kind, model, x, counts, seed, branch);
    std::ostringstream os;
    write_dataset_csv(os, data, kind == ExperimentKind::KimAnalyzer);
    return os.str();
}

std::string cmd_fit(const Config& cfg) {
    const ExperimentKind kind = parse_experiment(cfg);
    const bool fit_background = cfg.get_bool("fit_background", false);
    if (!cfg.has("input")) throw ConfigError("input", "required (dataset CSV path)");
    const std::string path = cfg.get_string("input", "");
    std::ifstream in(path);
    if (!in) throw ConfigError("input", "cannot open '" + path + "'");
    Dataset data;
    try {
        data = read_dataset_csv(in);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("input", e.what());
    }
    if (data.size() < 3) throw ConfigError("input", "dataset needs at least 3 points, got " + std::to_string(data.size()));
    FitResult r;
    try {
        r = fit_mixture(kind, data, fit_background);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("input", e.what());
    }

    const std::string format = cfg.get_string("format", "json");
    if (format == "csv") {
        Table t{{"lambda_hat", "background_hat", "amplitude_hat", "sse", "lambda_err", "background_err",
                 "amplitude_err"},
                {{r.lambda_hat, r.background_hat, r.amplitude_hat, r.sse, r.lambda_err, r.background_err,
                  r.amplitude_err}}};
        return to_csv(t);
    }
    if (format != "json") throw ConfigError("format", "expected 'csv' or 'json', got '" + format + "'");
    ordered_json j;
    j["lambda_hat"] = r.lambda_hat;
    j["background_hat"] = r.background_hat;
    j["amplitude_hat"] = r.amplitude_hat;
    j["sse"] = r.sse;
    j["uncertainties"] = {{"lambda", r.lambda_err}, {"background", r.background_err}, {"amplitude", r.amplitude_err}};
    return j.dump(2) + "\n";
}

std::string dispatch(const Config& cfg) {
    const std::string& c = cfg.command();
    if (c == "correlate") return render(cfg, cmd_correlate(cfg));
    if (c == "chsh") return render(cfg, cmd_chsh(cfg));
    if (c == "simulate") return render(cfg, cmd_simulate(cfg));
    if (c == "predict") return render(cfg, cmd_predict(cfg));
    if (c == "synth") return cmd_synth(cfg);
    return cmd_fit(cfg);
}

// ---------------------------------------------------------------------------
// Flag registration: every flag maps onto one configuration key and only
// overrides the config file when given explicitly.

struct FlagStore {
    std::string geometry, model, experiment, branch, input, output, format;
    double lambda = 0.0;
    std::uint64_t trials = 0, seed = 0, shards = 0, counts = 0;
    std::vector<double> angles, fixed_axis;
    bool doubled = false, fixed_sign = false, fit_background = false;
};

struct Binding {
    CLI::Option* opt;
    std::string key;
    std::function<json()> value;
};

class FlagSet {
public:
    explicit FlagSet(CLI::App* sub) : sub_(sub) {}

    FlagSet& string(const std::string& name, const std::string& key, std::string& dst, const std::string& help) {
        bind(sub_->add_option(name, dst, help), key, [&dst] { return json(dst); });
        return *this;
    }
    FlagSet& number(const std::string& name, const std::string& key, double& dst, const std::string& help) {
        bind(sub_->add_option(name, dst, help), key, [&dst] { return json(dst); });
        return *this;
    }
    FlagSet& uint(const std::string& name, const std::string& key, std::uint64_t& dst, const std::string& help) {
        bind(sub_->add_option(name, dst, help), key, [&dst] { return json(dst); });
        return *this;
    }
    FlagSet& list(const std::string& name, const std::string& key, std::vector<double>& dst, const std::string& help) {
        bind(sub_->add_option(name, dst, help)->delimiter(','), key, [&dst] { return json(dst); });
        return *this;
    }
    FlagSet& flag(const std::string& name, const std::string& key, bool& dst, const std::string& help) {
        bind(sub_->add_flag(name, dst, help), key, [&dst] { return json(dst); });
        return *this;
    }

    void apply(json& cfg) const {
        for (const auto& b : bindings_) {
            if (b.opt->count() > 0) cfg[b.key] = b.value();
        }
    }

private:
    void bind(CLI::Option* opt, const std::string& key, std::function<json()> value) {
        bindings_.push_back({opt, key, std::move(value)});
    }

    CLI::App* sub_;
    std::vector<Binding> bindings_;
};

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config", "top level must be an object");
    return j;
}

void write_output(const Config& cfg, const std::string& text, std::ostream& out) {
    if (!cfg.has("output")) {
        out << text;
        return;
    }
    const std::string path = cfg.get_string("output", "");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("output", "cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw ConfigError("output", "write to '" + path + "' failed");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entangled and disentangled EPR pair simulator and estimator"};
    app.name("eprsim");
    app.require_subcommand(0, 1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "JSON configuration file; flags override its values");

    FlagStore fs;
    std::map<std::string, FlagSet> flagsets;
    auto add = [&](const std::string& name, const std::string& help) -> FlagSet& {
        CLI::App* sub = app.add_subcommand(name, help);
        auto& set = flagsets.emplace(name, FlagSet(sub)).first->second;
        set.string("-o,--output", "output", fs.output, "Output file (default: stdout)")
            .string("--format", "format", fs.format, "csv or json");
        return set;
    };

    add("correlate", "Analytic correlation and probability sweep over analyzer separations")
        .string("--geometry", "geometry", fs.geometry, "sphere or plane (default plane)")
        .flag("--doubled,!--no-doubled", "doubled", fs.doubled, "Double analyzer angles (photons)")
        .list("--angles-deg", "angles_deg", fs.angles, "Analyzer separations in degrees");
    add("chsh", "CHSH value per model")
        .string("--model", "model", fs.model, "entangled, disentangled or mixture")
        .number("--lambda", "lambda", fs.lambda, "Disentangled fraction for mixture")
        .string("--geometry", "geometry", fs.geometry, "sphere or plane (default plane)")
        .flag("--doubled,!--no-doubled", "doubled", fs.doubled, "Double analyzer angles (photons)")
        .list("--angles-deg", "angles_deg", fs.angles, "a, a', b, b' in degrees");
    add("simulate", "Monte Carlo coincidence experiment")
        .string("--model", "model", fs.model, "entangled, disentangled or mixture")
        .number("--lambda", "lambda", fs.lambda, "Disentangled fraction for mixture")
        .string("--geometry", "geometry", fs.geometry, "sphere or plane (default sphere)")
        .flag("--doubled,!--no-doubled", "doubled", fs.doubled, "Double analyzer angles (photons)")
        .list("--angles-deg", "angles_deg", fs.angles, "Analyzer separations in degrees")
        .uint("--trials", "trials", fs.trials, "Trials per analyzer pair")
        .uint("--seed", "seed", fs.seed, "RNG seed")
        .uint("--shards", "shards", fs.shards, "Worker threads")
        .list("--fixed-axis-deg", "fixed_axis_deg", fs.fixed_axis, "Fixed hidden axis theta,phi in degrees")
        .flag("--fixed-sign", "fixed_sign", fs.fixed_sign, "Source always emits (+,-) along the hidden axis");
    add("predict", "Teleportation-experiment predictions")
        .string("--experiment", "experiment", fs.experiment, "gisin, innsbruck or kim")
        .number("--lambda", "lambda", fs.lambda, "Also emit the mixture prediction")
        .string("--branch", "branch", fs.branch, "+ or - (kim)")
        .list("--angles-deg", "angles_deg", fs.angles, "x grid in degrees");
    add("synth", "Synthetic binomial dataset")
        .string("--experiment", "experiment", fs.experiment, "gisin, innsbruck or kim")
        .string("--model", "model", fs.model, "entangled, disentangled or mixture")
        .number("--lambda", "lambda", fs.lambda, "Disentangled fraction for mixture")
        .string("--branch", "branch", fs.branch, "+ or - (kim)")
        .list("--angles-deg", "angles_deg", fs.angles, "x grid in degrees")
        .uint("--counts", "counts", fs.counts, "Trials per point")
        .uint("--seed", "seed", fs.seed, "RNG seed");
    add("fit", "Fit the disentangled fraction to a dataset")
        .string("--experiment", "experiment", fs.experiment, "gisin, innsbruck or kim")
        .string("--input", "input", fs.input, "Dataset CSV")
        .flag("--fit-background,!--no-fit-background", "fit_background", fs.fit_background,
              "Fit an additive background");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        json values = config_path.empty() ? json::object() : load_config_file(config_path);
        std::string command;
        if (const auto subs = app.get_subcommands(); !subs.empty()) command = subs.front()->get_name();
        if (values.contains("command")) {
            if (!values["command"].is_string()) throw ConfigError("command", "must be a string");
            const std::string from_file = values["command"].get<std::string>();
            if (!kCommandKeys.contains(from_file)) throw ConfigError("command", "unknown command '" + from_file + "'");
            if (!command.empty() && command != from_file) {
                throw ConfigError("command", "config file says '" + from_file + "' but '" + command + "' was requested");
            }
            command = from_file;
        }
        if (command.empty()) throw ConfigError("command", "no subcommand given");
        flagsets.at(command).apply(values);

        const Config cfg(command, std::move(values));
        write_output(cfg, dispatch(cfg), out);
        return kOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const FitError& e) {
        err << "error: " << e.what() << '\n';
        return kComputeError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kComputeError;
    }
}

}  // namespace epr::cli
