#ifndef CIRCLEWAVE_CLASSIFY_HPP
#define CIRCLEWAVE_CLASSIFY_HPP

#include "circlewave/expr.hpp"
#include "circlewave/field.hpp"
#include "circlewave/solver.hpp"
#include "circlewave/symmetry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace circlewave {

enum class Verdict {
    homogeneous_equilibrium,
    inhomogeneous_equilibrium,
    rotating_wave,
    periodic_point,
    torus_rotating_wave,
    undecided,
};

std::string to_string(Verdict v);

struct ClassifyOptions {
    double eps_fix = 1e-6;   // fixed-point residual (C1 norm)
    double eps_var = 1e-10;  // spatial variance of a homogeneous state
    double eps_orb = 1e-4;   // orbit-distance consistency over the late window
    double eps_c = 1e-4;     // speed / rotation below this is an equilibrium
    double fit_residual_max = 1e-3; // wave-speed fit quality gate
    double late_fraction = 0.25;    // tail share of the run used as evidence window
    double zero_lag = 1.0;          // T_lag for the zero-constancy evidence
    int zero_shifts = 16;
};

struct ZeroConstancyReport {
    bool constant = false;
    int count = -1; // the single N when constant
    std::vector<int> observed_counts;
    int pairs_checked = 0;
    int pairs_trivial = 0;
    bool degenerate_lag = false; // every sampled difference was trivial
};

struct RecurrenceStats {
    double t_return = 0.0;
    double gap = 0.0;
};

struct ClassificationReport {
    Verdict verdict = Verdict::undecided;
    double wave_speed = 0.0;      // autonomous case c
    double rotation = 0.0;        // periodic case r (phase per period)
    double fixed_point_residual = 0.0;
    double orbit_residual = 0.0;
    double speed_fit_residual = 0.0;
    double spatial_variance_value = 0.0;
    double amplitude = 0.0;       // max-norm of the classified reference state
    int poincare_iterations = 0;  // periodic case
    std::optional<ZeroConstancyReport> zero_constancy;
    std::optional<RecurrenceStats> recurrence;
    ClassifyOptions options;
};

/// Late-window snapshots deduplicated by orbit distance: snapshots within
/// 1e-6 of an already-kept representative are merged.
std::vector<GridField> omega_limit(const GridField& u0, const ExpressionAst& f,
                                   const SolverConfig& cfg, double t_transient);

/// gap = min over recorded t > t_min of distance(u(t,.), u0) (direct
/// distance, not orbit distance); a small gap is evidence that u0 is
/// non-wandering.
RecurrenceStats recurrence_diagnostic(const GridField& u0, const ExpressionAst& f,
                                      const SolverConfig& cfg, double t_min);

/// Classification of the long-run behavior from u0 under autonomous f.
/// The decision tree runs on the post-transient reference
/// state (the classifier targets omega-limit representatives): equilibrium
/// when the late window stays within eps_fix of the reference, otherwise a
/// wave-speed fit over the orbit-consistent window separates rotating waves
/// from inhomogeneous equilibria.
ClassificationReport classify_autonomous(const GridField& u0, const ExpressionAst& f,
                                         const SolverConfig& cfg,
                                         const ClassifyOptions& opts = {});

/// Poincare-map classification for T-periodic f: iterate P until
/// consecutive orbit distances stabilize, then decide periodic point
/// (direct residual <= eps_fix) versus torus rotating wave (stable rotation
/// r with |r| > eps_c).
ClassificationReport classify_periodic(const GridField& u0, const ExpressionAst& f,
                                       double T, const SolverConfig& cfg,
                                       const ClassifyOptions& opts = {});

/// Z(u(t+T_lag) - sigma_a u(t)) over n_shifts values of a and all late t;
/// reports whether the count is one constant integer, excluding pairs where
/// the difference is numerically trivial.  Throws ConfigError when the lag
/// resonates (every sampled difference trivial).
ZeroConstancyReport zero_constancy_check(const Trajectory& traj, double t_lag,
                                         int n_shifts, double late_fraction = 0.5);

} // namespace circlewave

#endif
