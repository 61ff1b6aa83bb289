#pragma once

#include "hawkesnet/features.hpp"
#include "hawkesnet/loss.hpp"
#include "hawkesnet/model.hpp"
#include "hawkesnet/penalty.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hawkesnet {

/// Free parameter (mu, A) of the optimisation problems.
struct Theta {
    VectorXd mu;
    MatrixXd A;

    static Theta zeros(std::size_t d);
};

enum class LossKind { least_squares, log_likelihood };
enum class SolverKind { fista, prisma };

std::string to_string(LossKind kind);
std::string to_string(SolverKind kind);
LossKind parse_loss_kind(const std::string& name);

struct LineSearchConfig {
    double initial_step = 1.0;
    /// Step multiplier after a failed sufficient-decrease test, in (0, 1).
    double shrink = 0.5;
    /// Step multiplier applied at the start of every iteration, >= 1.
    double growth = 1.25;
    int max_backtracks = 80;
};

/// Smoothing parameter of the trace norm at iteration k: beta0 / k^decay_exponent.
struct PrismaSchedule {
    double beta0 = 1.0;
    double decay_exponent = 1.0;
};

struct FitConfig {
    LossKind loss_kind = LossKind::log_likelihood;
    PenaltySpec penalty;
    int max_iter = 100;
    /// Stop when |F_k - F_{k-1}| / max(1, |F_k|) < tol.
    double tol = 1e-7;
    LineSearchConfig linesearch;
    std::optional<Theta> init;
    PrismaSchedule prisma;

    void validate() const;
};

struct FitResult {
    VectorXd mu_hat;
    MatrixXd A_hat;
    /// Penalized objective of the current iterate after each iteration.
    std::vector<double> objective_trace;
    int iterations_used = 0;
    bool converged = false;
    double final_step = 0.0;
    double final_objective = 0.0;
    SolverKind solver = SolverKind::fista;
    int restarts = 0;
    /// Slack of the sufficient-decrease inequality at each accepted step,
    ///   f(y) + <grad f(y), z - y> + ||z - y||^2 / (2 step) - f(z),
    /// nonnegative up to rounding.
    std::vector<double> decrease_margins;

    ModelParams theta_hat(const MatrixXd& alpha) const;
};

/// Accelerated proximal gradient with backtracking and restart on objective
/// increase. The penalty may hold l1 terms (with nonnegativity) on mu and A,
/// or l1 on mu with the trace norm alone on A; not both l1 and trace on A.
/// `init` must be a point where the loss is finite.
FitResult fit_fista(const FitConfig& config, const LossOracle& loss, const Theta& init);

/// Three-term splitting for l1 + trace norm on A: the trace norm is replaced by
/// its Moreau envelope with parameter beta_k, and accelerated proximal steps are
/// taken on loss + envelope with the exact l1 + nonnegativity prox. Returns the
/// best iterate under the true, unsmoothed objective.
FitResult fit_prisma(const FitConfig& config, const LossOracle& loss, const Theta& init);

/// fit_prisma when both l1 on A and the trace norm are active, else fit_fista.
FitResult fit(const FitConfig& config, const LossOracle& loss, const Theta& init);

/// Penalized objective loss(theta) + pen(theta).
double penalized_objective(const LossOracle& loss, const PenaltySpec& penalty, const Theta& theta);

// ---------------------------------------------------------------------------
// Estimation procedures and cross-validation

enum class Procedure { NoPen, L1, wL1, L1Nuclear, wL1Nuclear };

std::string to_string(Procedure procedure);
Procedure parse_procedure(const std::string& name);
bool uses_trace(Procedure procedure);

struct Tuning {
    double c1 = 0.0;
    double c2 = 0.0;
    double tau = 0.0;
};

/// Penalty of a procedure. Weighted variants use the practical weights scaled
/// by c1, c2; unweighted ones use a constant equal to the mean practical weight,
/// so a given (c1, c2) gives both families the same overall strength.
PenaltySpec make_penalty(Procedure procedure, const FeatureStats& stats, const Tuning& tuning);

/// Default starting point: zero for least squares; mu = N_j / T, A = 0 for the
/// log-likelihood (inside its domain).
Theta default_init(LossKind kind, const VectorXd& counts, double horizon);

/// Builds the loss for `data`, the procedure penalty and runs the matching solver.
/// The penalty and loss fields of `base` are overwritten.
FitResult fit_procedure(const EventData& data, const MatrixXd& alpha, Procedure procedure, const Tuning& tuning,
                        FitConfig base);

struct CvGrid {
    std::vector<double> c1{1.0};
    std::vector<double> c2{1.0};
    std::vector<double> tau{0.0};
};

struct CvScore {
    Tuning tuning;
    /// Held-out log-likelihood per unit time, with the intensity at each test
    /// event floored at 1e-8.
    double score = 0.0;
};

struct CvResult {
    Tuning best;
    double best_score = 0.0;
    std::vector<CvScore> scores;
};

/// Fits on [0, T/2] and scores by the log-likelihood of (T/2, T], rebased to
/// start at 0 with no carried-over excitation. Test-event intensities are
/// floored at 1e-8 so a fit that silences an active node scores low but finite. Grid dimensions a procedure
/// does not use are collapsed to a single zero. Ties go to the first grid
/// point in (c1, c2, tau) lexicographic enumeration order.
CvResult cross_validate(const EventData& data, const MatrixXd& alpha, Procedure procedure, const CvGrid& grid,
                        const FitConfig& base);

}  // namespace hawkesnet
