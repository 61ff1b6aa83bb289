#include "hawkesnet/experiment.hpp"

#include "hawkesnet/io.hpp"
#include "hawkesnet/metrics.hpp"
#include "hawkesnet/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hawkesnet {

void ExperimentConfig::validate() const {
    if (horizons.empty()) throw std::invalid_argument("experiment: no horizons");
    if (!std::is_sorted(horizons.begin(), horizons.end()) ||
        std::adjacent_find(horizons.begin(), horizons.end()) != horizons.end()) {
        throw std::invalid_argument("experiment: horizons must be strictly increasing");
    }
    if (!(horizons.front() > 0.0)) throw std::invalid_argument("experiment: horizons must be positive");
    if (procedures.empty()) throw std::invalid_argument("experiment: no procedures");
    if (n_replications == 0) throw std::invalid_argument("experiment: n_replications must be positive");
    fit.validate();
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& task) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
}

namespace {

std::vector<ExperimentRow> run_replication(const ExperimentConfig& config, std::size_t rep) {
    using clock = std::chrono::steady_clock;
    ScenarioConfig scenario_config = config.scenario;
    scenario_config.seed = stream_seed(config.seed, 2 * rep);
    const Scenario scenario = generate_scenario(scenario_config);
    const MatrixXd& alpha = scenario.params.alpha;

    SimConfig sim{scenario.params, config.horizons.back(), stream_seed(config.seed, 2 * rep + 1), std::nullopt, true};
    const EventData full = simulate(sim);

    std::vector<ExperimentRow> rows;
    for (const double horizon : config.horizons) {
        const EventData data = full.truncate(horizon);
        for (const Procedure procedure : config.procedures) {
            const auto start = clock::now();
            Tuning tuning;
            if (procedure != Procedure::NoPen) {
                tuning = cross_validate(data, alpha, procedure, config.grid, config.fit).best;
            }
            const FitResult fitted = fit_procedure(data, alpha, procedure, tuning, config.fit);
            const EvalReport report =
                evaluate(fitted.mu_hat, fitted.A_hat, scenario.params.mu, scenario.params.A, scenario.support);

            ExperimentRow row;
            row.procedure = procedure;
            row.horizon = horizon;
            row.replication = rep;
            row.error = report.rel_l2_error;
            row.auc = report.auc;
            row.tuning = tuning;
            row.iterations = fitted.iterations_used;
            row.runtime_seconds =
                config.record_runtime ? std::chrono::duration<double>(clock::now() - start).count() : 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<std::vector<ExperimentRow>> per_rep(config.n_replications);
    parallel_for(config.n_replications, config.threads, [&](std::size_t rep) {
        per_rep[rep] = run_replication(config, rep);
        if (!config.output_dir.empty()) {
            char name[32];
            std::snprintf(name, sizeof(name), "rep_%04zu.csv", rep);
            io::write_text(config.output_dir / "replications" / name,
                           rows_to_csv(per_rep[rep], config.record_runtime));
        }
    });
    std::vector<ExperimentRow> rows;
    for (auto& r : per_rep) rows.insert(rows.end(), r.begin(), r.end());
    return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<ExperimentRow>& rows) {
    // Keyed by (horizon, first-appearance index of the procedure) to keep a stable order.
    std::vector<Procedure> order;
    std::map<std::pair<double, std::size_t>, AggregateRow> groups;
    for (const auto& row : rows) {
        auto it = std::find(order.begin(), order.end(), row.procedure);
        if (it == order.end()) it = order.insert(order.end(), row.procedure);
        const auto key = std::make_pair(row.horizon, static_cast<std::size_t>(it - order.begin()));
        auto& agg = groups[key];
        agg.procedure = row.procedure;
        agg.horizon = row.horizon;
        agg.n += 1;
        agg.mean_error += row.error;
        agg.mean_auc += row.auc;
    }
    std::vector<AggregateRow> out;
    for (auto& [key, agg] : groups) {
        agg.mean_error /= static_cast<double>(agg.n);
        agg.mean_auc /= static_cast<double>(agg.n);
        out.push_back(agg);
    }
    return out;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows, bool with_runtime) {
    std::string out = "procedure,T,rep,error,auc,c1,c2,tau,iterations";
    out += with_runtime ? ",runtime\n" : "\n";
    for (const auto& row : rows) {
        out += to_string(row.procedure) + ',' + io::format_double(row.horizon) + ',' + std::to_string(row.replication) +
               ',' + io::format_double(row.error) + ',' + io::format_double(row.auc) + ',' +
               io::format_double(row.tuning.c1) + ',' + io::format_double(row.tuning.c2) + ',' +
               io::format_double(row.tuning.tau) + ',' + std::to_string(row.iterations);
        if (with_runtime) out += ',' + io::format_double(row.runtime_seconds);
        out += '\n';
    }
    return out;
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
    std::string out = "procedure,T,n,mean_error,mean_auc\n";
    for (const auto& row : rows) {
        out += to_string(row.procedure) + ',' + io::format_double(row.horizon) + ',' + std::to_string(row.n) + ',' +
               io::format_double(row.mean_error) + ',' + io::format_double(row.mean_auc) + '\n';
    }
    return out;
}

}  // namespace hawkesnet
