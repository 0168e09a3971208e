#ifndef CIRCLEWAVE_SOLVER_HPP
#define CIRCLEWAVE_SOLVER_HPP

#include "circlewave/expr.hpp"
#include "circlewave/field.hpp"

#include <tuple>
#include <vector>

namespace circlewave {

struct SolverConfig {
    int n = 128;                    // grid size, power of two >= 16
    double dt = 1e-3;               // time step
    double t_end = 10.0;            // integration horizon
    int record_stride = 100;        // snapshot every record_stride steps
    bool dealias = true;            // 2/3 rule on the nonlinear term
    double blowup_threshold = 1e6;  // max-norm abort level

    void validate() const; // throws ConfigError
};

/// Time-stamped snapshots of one integration.  Times are strictly
/// increasing with uniform spacing record_stride*dt; the horizon is snapped
/// to a whole number of recording intervals.
struct Trajectory {
    std::vector<double> times;
    std::vector<GridField> states;
    SolverConfig config;

    std::size_t size() const { return times.size(); }
    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }

    /// Index of the first snapshot with time >= t (clamped to the last).
    std::size_t index_at_or_after(double t) const;
};

/// Integrate u_t = u_xx + f(t,u,u_x) from u0 over [t0, t0 + cfg.t_end].
/// Exponential time differencing, second order: the diffusion factor
/// e^{-k^2 dt} is exact in spectral space, the nonlinearity is evaluated
/// pointwise on the (optionally dealiased) grid.  Throws BlowupError when
/// the max-norm exceeds cfg.blowup_threshold and NumericalError on NaN.
Trajectory integrate(const GridField& u0, const ExpressionAst& f,
                     const SolverConfig& cfg, double t0 = 0.0);

/// Time-T solution map of a T-periodic equation, P u0 = u(T,.;u0).  The
/// step is adjusted downward so that dt divides T exactly.
GridField poincare_map(const GridField& u0, const ExpressionAst& f, double T,
                       const SolverConfig& cfg);

struct DissipativityReport {
    bool sign_ok = true;
    // (t, u, u*f(t,u,0)) for every sampled violation of u*f <= 0
    std::vector<std::tuple<double, double, double>> violations;
    // max of |f| / (1 + |p|^{2-eps}), eps = 0.1, over the sample box
    double max_growth_ratio = 0.0;
    int samples = 0;
};

/// Samples the sign condition u*f(t,u,0) <= 0 for |u| in [delta, l] and the
/// gradient growth ratio on a (t,u,p) box.  Report-only; never throws on a
/// violation.  `t_period` bounds the t samples (use the forcing period, or
/// the default 1.0 for autonomous f).
DissipativityReport dissipativity_check(const ExpressionAst& f, double l,
                                        double delta, int samples,
                                        double t_period = 1.0);

} // namespace circlewave

#endif
