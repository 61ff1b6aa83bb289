#include "hawkesnet/bounds.hpp"
#include "hawkesnet/experiment.hpp"
#include "hawkesnet/features.hpp"
#include "hawkesnet/io.hpp"
#include "hawkesnet/metrics.hpp"
#include "hawkesnet/penalty.hpp"
#include "hawkesnet/rng.hpp"
#include "hawkesnet/simulate.hpp"
#include "hawkesnet/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

using namespace hawkesnet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// --config handling: keys of a flat JSON object become long flags unless the
// same flag already appears on the command line.

std::string flag_for_key(std::string key) {
    for (char& c : key) {
        if (c == '_') c = '-';
    }
    return "--" + key;
}

bool flag_present(const std::vector<std::string>& args, const std::string& flag) {
    for (const auto& a : args) {
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
}

std::string scalar_text(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number() || value.is_boolean()) return value.dump();
    throw std::invalid_argument("config: unsupported value " + value.dump());
}

std::vector<std::string> merge_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path) return args;

    const json doc = json::parse(io::read_text(*config_path));
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
    std::vector<std::string> extra;
    for (const auto& [key, value] : doc.items()) {
        const std::string flag = flag_for_key(key);
        if (flag == "--config" || flag_present(args, flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) extra.push_back(flag);
        } else if (value.is_array()) {
            extra.push_back(flag);
            for (const auto& item : value) extra.push_back(scalar_text(item));
        } else if (!value.is_null()) {
            extra.push_back(flag);
            extra.push_back(scalar_text(value));
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

void print_json(const json& doc) {
    std::cout << doc.dump(2) << '\n';
}

json to_json(const VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

json to_json(const Tuning& t) {
    return {{"c1", t.c1}, {"c2", t.c2}, {"tau", t.tau}};
}

// ---------------------------------------------------------------------------
// Shared option groups

struct ModelOptions {
    std::string scenario = "custom";
    std::size_t d = 1;
    double mu = 0.1;
    double a = 0.0;
    double alpha = 1.0;
    double target_opnorm = 0.8;
    std::string params_dir;
    bool allow_unstable = false;
};

void add_model_options(CLI::App* sub, ModelOptions& o) {
    sub->add_option("--scenario", o.scenario, "custom, communities (d = 100) or scaled (community blocks resized to --d)")
        ->check(CLI::IsMember({"custom", "communities", "scaled"}))
        ->capture_default_str();
    sub->add_option("--d", o.d, "Number of nodes")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--mu", o.mu, "Custom scenario: baseline of every node")->capture_default_str();
    sub->add_option("--a", o.a, "Custom scenario: every entry of A")->capture_default_str();
    sub->add_option("--alpha", o.alpha, "Decay rate of every pair")->capture_default_str();
    sub->add_option("--target-opnorm", o.target_opnorm, "Operator norm of A in the block scenarios")
        ->capture_default_str();
    sub->add_option("--params-dir", o.params_dir, "Custom scenario: directory with mu.csv, A.csv and optional alpha.csv");
    sub->add_flag("--allow-unstable", o.allow_unstable, "Accept a branching matrix with spectral radius >= 1");
}

struct BuiltModel {
    ModelParams params;
    std::optional<SupportMatrix> support;
};

BuiltModel build_model(const ModelOptions& o, std::uint64_t seed) {
    BuiltModel built;
    if (o.scenario == "custom") {
        const auto n = static_cast<Eigen::Index>(o.d);
        if (!o.params_dir.empty()) {
            const fs::path dir(o.params_dir);
            const VectorXd mu = io::read_vector_csv(dir / "mu.csv");
            const MatrixXd A = io::read_matrix_csv(dir / "A.csv");
            const MatrixXd alpha = fs::exists(dir / "alpha.csv")
                                       ? io::read_matrix_csv(dir / "alpha.csv")
                                       : MatrixXd::Constant(mu.size(), mu.size(), o.alpha);
            built.params = ModelParams(mu, A, alpha);
        } else {
            built.params = ModelParams::with_uniform_decay(VectorXd::Constant(n, o.mu), MatrixXd::Constant(n, n, o.a),
                                                           o.alpha);
        }
    } else {
        ScenarioConfig config = o.scenario == "communities" ? ScenarioConfig::communities(stream_seed(seed, 0))
                                                      : ScenarioConfig::scaled_communities(o.d, stream_seed(seed, 0));
        config.target_opnorm = o.target_opnorm;
        config.alpha = o.alpha;
        Scenario scenario = generate_scenario(config);
        built.params = std::move(scenario.params);
        built.support = std::move(scenario.support);
    }
    const double rho = spectral_radius(branching_matrix(built.params));
    if (rho >= 1.0 && !o.allow_unstable) {
        throw std::invalid_argument("non-stationary parameters (spectral radius " + io::format_double(rho) +
                                    "); pass --allow-unstable to simulate anyway");
    }
    return built;
}

struct DataOptions {
    std::string events;
    std::size_t csv_d = 0;
    double csv_T = 0.0;
    double alpha = 1.0;
    std::string alpha_file;
};

void add_data_options(CLI::App* sub, DataOptions& o) {
    sub->add_option("--events", o.events, "Event file (.json, or .csv with node,time rows)")->required();
    sub->add_option("--csv-d", o.csv_d, "Node count for CSV event files");
    sub->add_option("--csv-T", o.csv_T, "Horizon for CSV event files");
    sub->add_option("--alpha", o.alpha, "Decay rate of every pair")->capture_default_str();
    sub->add_option("--alpha-file", o.alpha_file, "CSV matrix of decay rates (overrides --alpha)");
}

struct LoadedData {
    EventData data;
    MatrixXd alpha;
};

LoadedData load_data(const DataOptions& o) {
    LoadedData loaded{io::read_events(o.events, o.csv_d, o.csv_T), {}};
    const auto n = static_cast<Eigen::Index>(loaded.data.dim());
    loaded.alpha = o.alpha_file.empty() ? MatrixXd::Constant(n, n, o.alpha) : io::read_matrix_csv(o.alpha_file);
    if (loaded.alpha.rows() != n || loaded.alpha.cols() != n) {
        throw std::invalid_argument("alpha must be a d x d matrix");
    }
    return loaded;
}

struct SolverOptions {
    std::string loss = "log-likelihood";
    int max_iter = 100;
    double tol = 1e-7;
};

void add_solver_options(CLI::App* sub, SolverOptions& o) {
    sub->add_option("--loss", o.loss, "least-squares or log-likelihood")->capture_default_str();
    sub->add_option("--max-iter", o.max_iter, "Iteration cap of the solvers")->capture_default_str();
    sub->add_option("--tol", o.tol, "Relative objective change that stops the solvers")->capture_default_str();
}

FitConfig make_fit_config(const SolverOptions& o) {
    FitConfig config;
    config.loss_kind = parse_loss_kind(o.loss);
    config.max_iter = o.max_iter;
    config.tol = o.tol;
    config.validate();
    return config;
}

struct GridOptions {
    std::vector<double> c1{0.5, 1.0, 2.0};
    std::vector<double> c2{0.5, 1.0, 2.0};
    std::vector<double> tau{0.0};
};

void add_grid_options(CLI::App* sub, GridOptions& o) {
    sub->add_option("--c1-grid", o.c1, "Candidates for c1 (comma separated)")->delimiter(',')->capture_default_str();
    sub->add_option("--c2-grid", o.c2, "Candidates for c2 (comma separated)")->delimiter(',')->capture_default_str();
    sub->add_option("--tau-grid", o.tau, "Candidates for tau (comma separated)")->delimiter(',')->capture_default_str();
}

CvGrid make_grid(const GridOptions& o) {
    return CvGrid{o.c1, o.c2, o.tau};
}

// ---------------------------------------------------------------------------
// Commands

struct SimulateOptions {
    ModelOptions model;
    double T = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t max_events = 0;
};

void cmd_simulate(const SimulateOptions& o) {
    const BuiltModel built = build_model(o.model, o.seed);
    SimConfig sim{built.params, o.T, stream_seed(o.seed, 1), std::nullopt, !o.model.allow_unstable};
    if (o.max_events > 0) {
        sim.max_events = o.max_events;
    } else if (o.model.allow_unstable) {
        sim.max_events = 10'000'000;
    }
    const EventData data = simulate(sim);

    const fs::path out(o.out);
    io::write_events_json(out / "events.json", data);
    io::write_vector_csv(out / "mu.csv", built.params.mu);
    io::write_matrix_csv(out / "A.csv", built.params.A);
    io::write_matrix_csv(out / "alpha.csv", built.params.alpha);
    if (built.support) io::write_support_csv(out / "support.csv", *built.support);

    std::vector<std::size_t> counts;
    for (std::size_t k = 0; k < data.dim(); ++k) counts.push_back(data.count(k));
    print_json({{"d", data.dim()},
                {"T", data.horizon()},
                {"seed", o.seed},
                {"total_events", data.total_count()},
                {"spectral_radius", spectral_radius(branching_matrix(built.params))},
                {"counts", counts}});
}

struct FitOptions {
    DataOptions data;
    SolverOptions solver;
    std::string procedure = "wL1";
    double c1 = 1.0;
    double c2 = 1.0;
    double tau = 0.0;
    std::string out;
};

void cmd_fit(const FitOptions& o) {
    const LoadedData loaded = load_data(o.data);
    const Procedure procedure = parse_procedure(o.procedure);
    const Tuning tuning{o.c1, o.c2, o.tau};
    const FitConfig config = make_fit_config(o.solver);
    const FitResult r = fit_procedure(loaded.data, loaded.alpha, procedure, tuning, config);

    const fs::path out(o.out);
    io::write_vector_csv(out / "mu_hat.csv", r.mu_hat);
    io::write_matrix_csv(out / "A_hat.csv", r.A_hat);
    if (procedure != Procedure::NoPen) {
        const PenaltySpec spec = make_penalty(procedure, compute_stats(loaded.data, loaded.alpha), tuning);
        io::write_vector_csv(out / "weights_w.csv", spec.weights.w);
        io::write_matrix_csv(out / "weights_W.csv", spec.weights.W);
    }
    const json diagnostics = {{"procedure", to_string(procedure)},
                              {"loss", to_string(config.loss_kind)},
                              {"solver", to_string(r.solver)},
                              {"tuning", to_json(tuning)},
                              {"converged", r.converged},
                              {"iterations", r.iterations_used},
                              {"restarts", r.restarts},
                              {"final_objective", r.final_objective},
                              {"final_step", r.final_step},
                              {"nonzero_A", (r.A_hat.array() != 0.0).count()},
                              {"objective_trace", r.objective_trace}};
    io::write_text(out / "diagnostics.json", diagnostics.dump(2) + "\n");
    json summary = diagnostics;
    summary.erase("objective_trace");
    print_json(summary);
}

struct EvalOptions {
    std::string mu_hat, A_hat, mu, A, support, out;
    double threshold = 0.0;
};

void cmd_eval(const EvalOptions& o) {
    const VectorXd mu_hat = io::read_vector_csv(o.mu_hat);
    const MatrixXd A_hat = io::read_matrix_csv(o.A_hat);
    const VectorXd mu = io::read_vector_csv(o.mu);
    const MatrixXd A = io::read_matrix_csv(o.A);
    if (A_hat.rows() != A.rows() || A_hat.cols() != A.cols() || mu_hat.size() != mu.size() || A.rows() != mu.size()) {
        throw std::invalid_argument("eval: estimate and ground truth shapes differ");
    }
    const SupportMatrix support = o.support.empty() ? SupportMatrix(A.array() > 0.0) : io::read_support_csv(o.support);
    const EvalReport r = evaluate(mu_hat, A_hat, mu, A, support, o.threshold);
    const json report = {{"rel_l2_error", r.rel_l2_error},
                         {"auc", r.auc},
                         {"support_size_true", r.support_size_true},
                         {"support_size_est", r.support_size_est_at_threshold},
                         {"threshold", o.threshold}};
    if (!o.out.empty()) io::write_text(o.out, report.dump(2) + "\n");
    print_json(report);
}

struct XvalOptions {
    DataOptions data;
    SolverOptions solver;
    GridOptions grid;
    std::string procedure = "wL1";
    std::string out;
};

void cmd_xval(const XvalOptions& o) {
    const LoadedData loaded = load_data(o.data);
    const Procedure procedure = parse_procedure(o.procedure);
    const CvResult r = cross_validate(loaded.data, loaded.alpha, procedure, make_grid(o.grid), make_fit_config(o.solver));
    json scores = json::array();
    for (const auto& s : r.scores) {
        json row = to_json(s.tuning);
        row["score"] = s.score;
        scores.push_back(row);
    }
    const json report = {{"procedure", to_string(procedure)},
                         {"best", to_json(r.best)},
                         {"best_score", r.best_score},
                         {"scores", scores}};
    if (!o.out.empty()) io::write_text(o.out, report.dump(2) + "\n");
    print_json(report);
}

struct ExperimentOptions {
    std::string scenario = "scaled";
    std::size_t d = 30;
    double alpha = 1.0;
    std::vector<double> horizons{1000, 2000, 3000, 4000, 5000};
    std::size_t reps = 10;
    std::vector<std::string> procedures{"NoPen", "L1", "wL1", "L1Nuclear", "wL1Nuclear"};
    GridOptions grid;
    SolverOptions solver;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t threads = 1;
    bool timings = false;
};

void cmd_experiment(const ExperimentOptions& o) {
    ExperimentConfig config;
    config.scenario = o.scenario == "communities" ? ScenarioConfig::communities(0) : ScenarioConfig::scaled_communities(o.d, 0);
    config.scenario.alpha = o.alpha;
    config.horizons = o.horizons;
    config.n_replications = o.reps;
    config.procedures.clear();
    for (const auto& name : o.procedures) config.procedures.push_back(parse_procedure(name));
    config.grid = make_grid(o.grid);
    config.fit = make_fit_config(o.solver);
    config.seed = o.seed;
    config.output_dir = o.out;
    config.threads = o.threads;
    config.record_runtime = o.timings;

    const auto rows = run_experiment(config);
    const auto agg = aggregate(rows);
    const fs::path out(o.out);
    io::write_text(out / "results.csv", rows_to_csv(rows, o.timings));
    io::write_text(out / "aggregate.csv", aggregate_to_csv(agg));

    json summary = json::array();
    for (const auto& a : agg) {
        summary.push_back({{"procedure", to_string(a.procedure)},
                           {"T", a.horizon},
                           {"n", a.n},
                           {"mean_error", a.mean_error},
                           {"mean_auc", a.mean_auc}});
    }
    print_json({{"rows", rows.size()}, {"aggregate", summary}});
}

struct BoundsOptions {
    ModelOptions model;
    std::string bound = "both";
    double T = 200.0;
    double x = 8.0;
    std::size_t reps = 2000;
    std::uint64_t seed = 0;
    std::string out;
};

json report_json(const BoundReport& r) {
    return {{"bound", to_string(r.kind)},
            {"x", r.x},
            {"n_reps", r.n_reps},
            {"violation_count", r.violation_count},
            {"violation_count_negative", r.violation_count_neg},
            {"stated_bound", r.stated_bound},
            {"empirical_rate", r.empirical_rate},
            {"wilson_99", {r.wilson_ci.first, r.wilson_ci.second}},
            {"consistent", r.consistent()},
            {"mean_ratio", r.mean_ratio},
            {"norm_domination", r.norm_domination},
            {"mean_M_T", to_json(r.mean_M_T)},
            {"se_M_T", to_json(r.se_M_T)}};
}

void cmd_check_bounds(const BoundsOptions& o) {
    const BuiltModel built = build_model(o.model, o.seed);
    const BoundScenario scenario{built.params, o.T};
    json reports = json::array();
    if (o.bound == "pointwise" || o.bound == "both") {
        reports.push_back(report_json(check_pointwise_bound(scenario, o.x, o.reps, stream_seed(o.seed, 1))));
    }
    if (o.bound == "opnorm" || o.bound == "both") {
        reports.push_back(report_json(check_opnorm_bound(scenario, o.x, o.reps, stream_seed(o.seed, 2))));
    }
    if (!o.out.empty()) io::write_text(o.out, reports.dump(2) + "\n");
    print_json(reports);
}

struct WeightsOptions {
    DataOptions data;
    std::string mode = "theoretical";
    std::optional<double> x;
    double c1 = 1.0;
    double c2 = 1.0;
    std::string out;
};

void cmd_weights(const WeightsOptions& o) {
    const LoadedData loaded = load_data(o.data);
    const std::size_t d = loaded.data.dim();
    const double T = loaded.data.horizon();
    const FeatureStats stats = compute_stats(loaded.data, loaded.alpha);
    PenaltyWeights w;
    if (o.mode == "theoretical") {
        const double x = o.x.value_or(std::log(static_cast<double>(d)));
        if (!(x > 0.0)) throw std::invalid_argument("weights: x must be positive (log d is 0 for d = 1; pass --x)");
        w = theoretical_weights(stats, x, d, T);
    } else {
        w = practical_weights(stats, o.c1, o.c2, d, T);
    }
    const fs::path out(o.out);
    io::write_vector_csv(out / "w.csv", w.w);
    io::write_matrix_csv(out / "W.csv", w.W);
    const json doc = {{"mode", to_string(w.mode)}, {"x", w.x}, {"tau", w.tau}, {"w", to_json(w.w)}};
    io::write_text(out / "weights.json", doc.dump(2) + "\n");
    print_json(doc);
}

int fail(const std::string& message, int code) {
    std::cerr << json{{"error", message}}.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse and low-rank Hawkes network inference"};
    app.require_subcommand(1);
    std::string unused_config;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", unused_config, "JSON object of flag values; explicit flags take precedence");
    };

    SimulateOptions sim;
    auto* s_sim = app.add_subcommand("simulate", "Simulate events and write them with the generating parameters");
    add_config(s_sim);
    add_model_options(s_sim, sim.model);
    s_sim->add_option("--T", sim.T, "Observation horizon")->required()->check(CLI::PositiveNumber);
    s_sim->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    s_sim->add_option("--out", sim.out, "Output directory")->required();
    s_sim->add_option("--max-events", sim.max_events, "Abort after this many events (0 = no cap)");

    FitOptions fit;
    auto* s_fit = app.add_subcommand("fit", "Estimate mu and A with one procedure");
    add_config(s_fit);
    add_data_options(s_fit, fit.data);
    add_solver_options(s_fit, fit.solver);
    s_fit->add_option("--procedure", fit.procedure, "NoPen, L1, wL1, L1Nuclear or wL1Nuclear")->capture_default_str();
    s_fit->add_option("--c1", fit.c1, "Scale of the weights on mu")->capture_default_str();
    s_fit->add_option("--c2", fit.c2, "Scale of the weights on A")->capture_default_str();
    s_fit->add_option("--tau", fit.tau, "Trace-norm level")->capture_default_str();
    s_fit->add_option("--out", fit.out, "Output directory")->required();

    EvalOptions ev;
    auto* s_eval = app.add_subcommand("eval", "Relative error and AUC of an estimate");
    add_config(s_eval);
    s_eval->add_option("--mu-hat", ev.mu_hat, "Estimated mu (CSV)")->required();
    s_eval->add_option("--A-hat", ev.A_hat, "Estimated A (CSV)")->required();
    s_eval->add_option("--mu", ev.mu, "True mu (CSV)")->required();
    s_eval->add_option("--A", ev.A, "True A (CSV)")->required();
    s_eval->add_option("--support", ev.support, "True support (0/1 CSV); defaults to A > 0");
    s_eval->add_option("--threshold", ev.threshold, "Entries above this count as estimated edges")->capture_default_str();
    s_eval->add_option("--out", ev.out, "Also write the report to this file");

    XvalOptions xv;
    auto* s_xval = app.add_subcommand("xval", "Cross-validate the tuning constants of one procedure");
    add_config(s_xval);
    add_data_options(s_xval, xv.data);
    add_solver_options(s_xval, xv.solver);
    add_grid_options(s_xval, xv.grid);
    s_xval->add_option("--procedure", xv.procedure, "Procedure name")->capture_default_str();
    s_xval->add_option("--out", xv.out, "Also write the report to this file");

    ExperimentOptions ex;
    auto* s_exp = app.add_subcommand("experiment", "Full simulation study over procedures and horizons");
    add_config(s_exp);
    s_exp->add_option("--scenario", ex.scenario, "communities (d = 100) or scaled")
        ->check(CLI::IsMember({"communities", "scaled"}))
        ->capture_default_str();
    s_exp->add_option("--d", ex.d, "Node count of the scaled scenario")->capture_default_str();
    s_exp->add_option("--alpha", ex.alpha, "Decay rate of every pair")->capture_default_str();
    s_exp->add_option("--horizons", ex.horizons, "Increasing horizons (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    s_exp->add_option("--reps", ex.reps, "Number of replications")->capture_default_str();
    s_exp->add_option("--procedures", ex.procedures, "Procedures (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    add_grid_options(s_exp, ex.grid);
    add_solver_options(s_exp, ex.solver);
    s_exp->add_option("--seed", ex.seed, "Random seed")->capture_default_str();
    s_exp->add_option("--out", ex.out, "Output directory")->required();
    s_exp->add_option("--threads", ex.threads, "Replications run concurrently")->capture_default_str();
    s_exp->add_flag("--timings", ex.timings, "Add a wall-clock runtime column (output no longer reproducible)");

    BoundsOptions bo;
    bo.model.d = 3;
    bo.model.mu = 0.5;
    bo.model.a = 0.1;
    auto* s_bounds = app.add_subcommand("check-bounds", "Monte Carlo check of the deviation bounds");
    add_config(s_bounds);
    add_model_options(s_bounds, bo.model);
    s_bounds->add_option("--bound", bo.bound, "pointwise, opnorm or both")
        ->check(CLI::IsMember({"pointwise", "opnorm", "both"}))
        ->capture_default_str();
    s_bounds->add_option("--T", bo.T, "Observation horizon")->check(CLI::PositiveNumber)->capture_default_str();
    s_bounds->add_option("--x", bo.x, "Confidence level x")->capture_default_str();
    s_bounds->add_option("--reps", bo.reps, "Replications")->capture_default_str();
    s_bounds->add_option("--seed", bo.seed, "Random seed")->capture_default_str();
    s_bounds->add_option("--out", bo.out, "Also write the reports to this file");

    WeightsOptions wo;
    auto* s_weights = app.add_subcommand("weights", "Data-driven penalty weights");
    add_config(s_weights);
    add_data_options(s_weights, wo.data);
    s_weights->add_option("--mode", wo.mode, "theoretical or practical")
        ->check(CLI::IsMember({"theoretical", "practical"}))
        ->capture_default_str();
    s_weights->add_option("--x", wo.x, "Confidence level (theoretical mode; default log d)");
    s_weights->add_option("--c1", wo.c1, "Practical mode scale on mu")->capture_default_str();
    s_weights->add_option("--c2", wo.c2, "Practical mode scale on A")->capture_default_str();
    s_weights->add_option("--out", wo.out, "Output directory")->required();

    try {
        std::vector<std::string> args = merge_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(e.what(), e.get_exit_code() == 0 ? 2 : e.get_exit_code());
    } catch (const std::exception& e) {
        return fail(e.what(), 2);
    }

    try {
        if (s_sim->parsed()) cmd_simulate(sim);
        if (s_fit->parsed()) cmd_fit(fit);
        if (s_eval->parsed()) cmd_eval(ev);
        if (s_xval->parsed()) cmd_xval(xv);
        if (s_exp->parsed()) cmd_experiment(ex);
        if (s_bounds->parsed()) cmd_check_bounds(bo);
        if (s_weights->parsed()) cmd_weights(wo);
    } catch (const std::exception& e) {
        return fail(e.what(), 1);
    }
    return 0;
}
