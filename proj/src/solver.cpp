#include "hawkesnet/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace hawkesnet {

Theta Theta::zeros(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return Theta{VectorXd::Zero(n), MatrixXd::Zero(n, n)};
}

std::string to_string(LossKind kind) {
    return kind == LossKind::least_squares ? "least-squares" : "log-likelihood";
}

std::string to_string(SolverKind kind) {
    return kind == SolverKind::fista ? "fista" : "prisma";
}

LossKind parse_loss_kind(const std::string& name) {
    if (name == "least-squares" || name == "ls") return LossKind::least_squares;
    if (name == "log-likelihood" || name == "loglik") return LossKind::log_likelihood;
    throw std::invalid_argument("unknown loss: " + name);
}

void FitConfig::validate() const {
    if (max_iter < 1) throw std::invalid_argument("FitConfig: max_iter must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("FitConfig: tol must be positive");
    if (!(linesearch.initial_step > 0.0)) throw std::invalid_argument("FitConfig: initial step must be positive");
    if (!(linesearch.shrink > 0.0 && linesearch.shrink < 1.0)) {
        throw std::invalid_argument("FitConfig: shrink factor must lie in (0, 1)");
    }
    if (!(linesearch.growth >= 1.0)) throw std::invalid_argument("FitConfig: growth factor must be >= 1");
    if (linesearch.max_backtracks < 1) throw std::invalid_argument("FitConfig: max_backtracks must be >= 1");
    if (!(prisma.beta0 > 0.0) || !(prisma.decay_exponent > 0.0)) {
        throw std::invalid_argument("FitConfig: PRISMA schedule parameters must be positive");
    }
}

ModelParams FitResult::theta_hat(const MatrixXd& alpha) const {
    return ModelParams(mu_hat, A_hat.cwiseMax(0.0), alpha);
}

double penalized_objective(const LossOracle& loss, const PenaltySpec& penalty, const Theta& theta) {
    const auto value = loss(theta.mu, theta.A);
    if (!value.feasible) return std::numeric_limits<double>::infinity();
    return value.value + pen_value(theta.mu, theta.A, penalty);
}

namespace {

struct SmoothValue {
    LossValueGrad eval;
    /// Value of the loss alone, without any smoothing term.
    double loss_value = 0.0;
};

// Smooth part of the composite objective at a given iteration.
using SmoothPart = std::function<SmoothValue(const Theta&)>;
// Exact prox of the remaining nonsmooth part.
using ProxPart = std::function<Theta(const Theta&, double)>;

struct Problem {
    const LossOracle& loss;
    const PenaltySpec& penalty;
    std::function<SmoothPart(int)> smooth_at;
    ProxPart prox;
};

double inner(const Theta& a, const VectorXd& g_mu, const MatrixXd& g_A) {
    return a.mu.dot(g_mu) + a.A.cwiseProduct(g_A).sum();
}

double squared_norm(const Theta& a) {
    return a.mu.squaredNorm() + a.A.squaredNorm();
}

Theta difference(const Theta& a, const Theta& b) {
    return Theta{a.mu - b.mu, a.A - b.A};
}

FitResult accelerated_prox_gradient(const FitConfig& config, const Problem& problem, const Theta& init,
                                    SolverKind kind) {
    config.validate();
    const auto& ls = config.linesearch;

    FitResult result;
    result.solver = kind;

    Theta x = init;
    double obj_x = penalized_objective(problem.loss, problem.penalty, x);
    if (!std::isfinite(obj_x)) {
        throw InfeasiblePoint("solver: objective is not finite at the starting point");
    }
    Theta best = x;
    double best_obj = obj_x;
    Theta y = x;
    bool momentum = false;
    double t = 1.0;
    double step = ls.initial_step;

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        result.iterations_used = iter;
        const SmoothPart smooth = problem.smooth_at(iter);
        SmoothValue sy = smooth(y);
        if (!sy.eval.feasible) {
            y = x;
            momentum = false;
            t = 1.0;
            sy = smooth(y);
        }
        if (!sy.eval.feasible || !std::isfinite(sy.eval.value)) {
            throw std::runtime_error("solver: smooth part is not finite at the current iterate");
        }
        if (iter > 1) step *= ls.growth;

        bool accepted = false;
        Theta z;
        SmoothValue sz;
        double margin = 0.0;
        for (int bt = 0; bt < ls.max_backtracks; ++bt) {
            z = problem.prox(Theta{y.mu - step * sy.eval.grad_mu, y.A - step * sy.eval.grad_A}, step);
            sz = smooth(z);
            if (sz.eval.feasible && std::isfinite(sz.eval.value)) {
                const Theta dz = difference(z, y);
                const double model =
                    sy.eval.value + inner(dz, sy.eval.grad_mu, sy.eval.grad_A) + squared_norm(dz) / (2.0 * step);
                margin = model - sz.eval.value;
                if (margin >= -1e-12 * (1.0 + std::abs(sy.eval.value))) {
                    accepted = true;
                    break;
                }
            }
            step *= ls.shrink;
        }
        if (!accepted) {
            // No step satisfies the sufficient-decrease test; x is kept.
            result.objective_trace.push_back(obj_x);
            break;
        }
        result.decrease_margins.push_back(margin);

        const double obj_z = sz.loss_value + pen_value(z.mu, z.A, problem.penalty);
        if (!std::isfinite(obj_z)) throw std::runtime_error("solver: objective diverged");
        if (obj_z > obj_x && momentum) {
            ++result.restarts;
            y = x;
            momentum = false;
            t = 1.0;
            result.objective_trace.push_back(obj_x);
            continue;
        }

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        y = Theta{z.mu + beta * (z.mu - x.mu), z.A + beta * (z.A - x.A)};
        momentum = beta > 0.0;
        t = t_next;

        const double change = std::abs(obj_z - obj_x) / std::max(1.0, std::abs(obj_z));
        x = std::move(z);
        obj_x = obj_z;
        result.objective_trace.push_back(obj_x);
        if (obj_x < best_obj) {
            best = x;
            best_obj = obj_x;
        }
        if (change < config.tol) {
            result.converged = true;
            break;
        }
    }

    result.mu_hat = std::move(best.mu);
    result.A_hat = std::move(best.A);
    result.final_objective = best_obj;
    result.final_step = step;
    return result;
}

SmoothPart plain_loss(const LossOracle& loss) {
    return [&loss](const Theta& theta) {
        SmoothValue out{loss(theta.mu, theta.A), 0.0};
        out.loss_value = out.eval.value;
        return out;
    };
}

VectorXd mu_weights(const PenaltySpec& spec, Eigen::Index d) {
    return spec.use_l1_mu ? spec.weights.w : VectorXd::Zero(d);
}

MatrixXd A_weights(const PenaltySpec& spec, Eigen::Index d) {
    return spec.use_l1_A ? spec.weights.W : MatrixXd::Zero(d, d);
}

void check_penalty_shape(const PenaltySpec& spec, const Theta& init) {
    const auto d = init.mu.size();
    if (init.A.rows() != d || init.A.cols() != d) throw std::invalid_argument("solver: init has inconsistent shape");
    if (spec.use_l1_mu && spec.weights.w.size() != d) throw std::invalid_argument("solver: w has wrong size");
    if (spec.use_l1_A && (spec.weights.W.rows() != d || spec.weights.W.cols() != d)) {
        throw std::invalid_argument("solver: W has wrong shape");
    }
    if (spec.use_trace && spec.weights.tau < 0.0) throw std::invalid_argument("solver: tau must be nonnegative");
}

}  // namespace

FitResult fit_fista(const FitConfig& config, const LossOracle& loss, const Theta& init) {
    const PenaltySpec& spec = config.penalty;
    check_penalty_shape(spec, init);
    if (spec.use_l1_A && spec.use_trace) {
        throw std::invalid_argument("fit_fista: l1 and trace-norm penalties on A together need fit_prisma");
    }
    const auto d = init.mu.size();
    const VectorXd w = mu_weights(spec, d);
    const MatrixXd W = A_weights(spec, d);
    const bool trace_only = spec.use_trace;
    const double tau = spec.weights.tau;

    Problem problem{loss, spec, [&loss](int) { return plain_loss(loss); },
                    [&](const Theta& v, double step) {
                        Theta out;
                        out.mu = prox_l1_nonneg(v.mu, w, step);
                        out.A = trace_only ? prox_trace(v.A, tau * step) : prox_l1_nonneg(v.A, W, step);
                        return out;
                    }};
    return accelerated_prox_gradient(config, problem, init, SolverKind::fista);
}

FitResult fit_prisma(const FitConfig& config, const LossOracle& loss, const Theta& init) {
    const PenaltySpec& spec = config.penalty;
    check_penalty_shape(spec, init);
    const auto d = init.mu.size();
    const VectorXd w = mu_weights(spec, d);
    const MatrixXd W = A_weights(spec, d);
    const double tau = spec.use_trace ? spec.weights.tau : 0.0;
    const PrismaSchedule schedule = config.prisma;

    // Moreau envelope of tau ||.||_* with parameter beta:
    //   value tau ||P||_* + ||A - P||^2 / (2 beta), gradient (A - P) / beta, P = prox_trace(A, beta tau).
    auto smooth_at = [&loss, tau, schedule](int iter) -> SmoothPart {
        const double beta = schedule.beta0 / std::pow(static_cast<double>(iter), schedule.decay_exponent);
        return [&loss, tau, beta](const Theta& theta) {
            SmoothValue out{loss(theta.mu, theta.A), 0.0};
            out.loss_value = out.eval.value;
            if (!out.eval.feasible || tau == 0.0) return out;
            const MatrixXd P = prox_trace(theta.A, beta * tau);
            const MatrixXd residual = theta.A - P;
            out.eval.value += tau * trace_norm(P) + residual.squaredNorm() / (2.0 * beta);
            out.eval.grad_A += residual / beta;
            return out;
        };
    };
    Problem problem{loss, spec, smooth_at, [&](const Theta& v, double step) {
                        return Theta{prox_l1_nonneg(v.mu, w, step), prox_l1_nonneg(v.A, W, step)};
                    }};
    FitResult result = accelerated_prox_gradient(config, problem, init, SolverKind::prisma);
    result.A_hat = result.A_hat.cwiseMax(0.0);
    return result;
}

FitResult fit(const FitConfig& config, const LossOracle& loss, const Theta& init) {
    if (config.penalty.use_l1_A && config.penalty.use_trace) return fit_prisma(config, loss, init);
    return fit_fista(config, loss, init);
}

}  // namespace hawkesnet
