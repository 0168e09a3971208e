#include "circlewave/classify.hpp"

#include "circlewave/errors.hpp"
#include "circlewave/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace circlewave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double omega_dedupe_tol = 1e-6;
constexpr double trivial_difference_rel = 1e-7;

double wrap_to_pi(double a) {
    double r = std::fmod(a + std::numbers::pi, two_pi);
    if (r < 0) r += two_pi;
    return r - std::numbers::pi;
}

} // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::homogeneous_equilibrium: return "homogeneous_equilibrium";
        case Verdict::inhomogeneous_equilibrium: return "inhomogeneous_equilibrium";
        case Verdict::rotating_wave: return "rotating_wave";
        case Verdict::periodic_point: return "periodic_point";
        case Verdict::torus_rotating_wave: return "torus_rotating_wave";
        case Verdict::undecided: return "undecided";
    }
    return "undecided";
}

std::vector<GridField> omega_limit(const GridField& u0, const ExpressionAst& f,
                                   const SolverConfig& cfg, double t_transient) {
    const Trajectory traj = integrate(u0, f, cfg);
    std::vector<GridField> reps;
    for (std::size_t i = traj.index_at_or_after(t_transient); i < traj.size(); ++i) {
        const GridField& s = traj.states[i];
        bool merged = false;
        for (const GridField& r : reps) {
            if (orbit_distance(r, s) < omega_dedupe_tol) {
                merged = true;
                break;
            }
        }
        if (!merged) reps.push_back(s);
    }
    return reps;
}

RecurrenceStats recurrence_diagnostic(const GridField& u0, const ExpressionAst& f,
                                      const SolverConfig& cfg, double t_min) {
    const Trajectory traj = integrate(u0, f, cfg);
    RecurrenceStats stats;
    stats.gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] <= t_min) continue;
        const double d = distance(traj.states[i], u0);
        if (d < stats.gap) {
            stats.gap = d;
            stats.t_return = traj.times[i];
        }
    }
    return stats;
}

ClassificationReport classify_autonomous(const GridField& u0, const ExpressionAst& f,
                                         const SolverConfig& cfg,
                                         const ClassifyOptions& opts) {
    if (depends_on(f, "t"))
        throw ConfigError("classify_autonomous requires autonomous f (no t in the expression)");

    ClassificationReport rep;
    rep.options = opts;

    const Trajectory traj = integrate(u0, f, cfg);
    const double t_late = traj.t_begin() +
                          (1.0 - opts.late_fraction) * (traj.t_end() - traj.t_begin());
    const std::size_t i_ref = traj.index_at_or_after(t_late);
    const GridField& ref = traj.states[i_ref];
    rep.spatial_variance_value = spatial_variance(ref);
    rep.amplitude = max_norm(ref);

    // (1) fixed point: the window never leaves the reference state
    double sup_fix = 0.0;
    for (std::size_t i = i_ref; i < traj.size(); ++i)
        sup_fix = std::max(sup_fix, c1_distance(traj.states[i], ref));
    rep.fixed_point_residual = sup_fix;

    RecurrenceStats rec;
    rec.gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = i_ref + 1; i < traj.size(); ++i) {
        const double d = distance(traj.states[i], ref);
        if (d < rec.gap) {
            rec.gap = d;
            rec.t_return = traj.times[i];
        }
    }
    rep.recurrence = rec;

    if (sup_fix <= opts.eps_fix) {
        rep.verdict = rep.spatial_variance_value <= opts.eps_var
                          ? Verdict::homogeneous_equilibrium
                          : Verdict::inhomogeneous_equilibrium;
        return rep;
    }

    // (2) relative equilibrium: window stays on one group orbit
    double sup_orb = 0.0;
    for (std::size_t i = i_ref; i < traj.size(); ++i)
        sup_orb = std::max(sup_orb, orbit_distance(traj.states[i], ref));
    rep.orbit_residual = sup_orb;

    if (sup_orb <= opts.eps_orb) {
        const WaveSpeedEstimate ws = estimate_wave_speed(traj, traj.times[i_ref]);
        if (ws.degenerate) {
            rep.verdict = Verdict::undecided;
            return rep;
        }
        rep.wave_speed = ws.c;
        rep.speed_fit_residual = ws.fit_residual;
        if (std::abs(ws.c) > opts.eps_c) {
            if (ws.fit_residual < opts.fit_residual_max) {
                rep.verdict = Verdict::rotating_wave;
                try {
                    rep.zero_constancy =
                        zero_constancy_check(traj, opts.zero_lag, opts.zero_shifts,
                                             opts.late_fraction);
                } catch (const Error&) {
                    // resonant lag: evidence unavailable, verdict stands on the fit
                }
            } else {
                rep.verdict = Verdict::undecided;
            }
        } else {
            rep.verdict = Verdict::inhomogeneous_equilibrium;
        }
        return rep;
    }

    rep.verdict = Verdict::undecided;
    return rep;
}

ClassificationReport classify_periodic(const GridField& u0, const ExpressionAst& f,
                                       double T, const SolverConfig& cfg,
                                       const ClassifyOptions& opts) {
    if (!(T > 0.0)) throw ConfigError("classify_periodic requires T > 0");

    ClassificationReport rep;
    rep.options = opts;

    const int n_iter = std::max(8, static_cast<int>(std::ceil(cfg.t_end / T)));
    constexpr int stable_needed = 4;

    GridField current = u0;
    int stable_run = 0;
    double last_direct = std::numeric_limits<double>::infinity();
    double last_rotation = 0.0;
    double last_orbit = std::numeric_limits<double>::infinity();
    bool rotation_stable = false;
    double prev_rotation = std::numeric_limits<double>::quiet_NaN();

    for (int it = 0; it < n_iter; ++it) {
        const GridField next = poincare_map(current, f, T, cfg);
        rep.poincare_iterations = it + 1;
        last_direct = c1_distance(next, current);
        const AlignmentResult ar = align(next, current);
        last_orbit = ar.residual;
        const double r = ar.degenerate ? 0.0 : wrap_to_pi(ar.a_star);
        if (!std::isnan(prev_rotation) && std::abs(wrap_to_pi(r - prev_rotation)) < 1e-6)
            rotation_stable = true;
        else if (!std::isnan(prev_rotation))
            rotation_stable = false;
        prev_rotation = r;
        last_rotation = r;

        if (last_orbit <= opts.eps_orb) ++stable_run;
        else stable_run = 0;

        current = next;
        if (stable_run >= stable_needed &&
            (last_direct <= opts.eps_fix || rotation_stable))
            break;
    }

    rep.fixed_point_residual = last_direct;
    rep.orbit_residual = last_orbit;
    rep.spatial_variance_value = spatial_variance(current);
    rep.amplitude = max_norm(current);

    if (stable_run == 0) {
        rep.verdict = Verdict::undecided;
        return rep;
    }
    if (last_direct <= opts.eps_fix) {
        rep.verdict = Verdict::periodic_point;
        rep.rotation = 0.0;
        return rep;
    }
    if (rotation_stable && std::abs(last_rotation) > opts.eps_c) {
        rep.verdict = Verdict::torus_rotating_wave;
        // report in the wave convention: shift(P u, r) = u, rotation r = c*T
        rep.rotation = last_rotation;
        return rep;
    }
    rep.verdict = Verdict::undecided;
    return rep;
}

ZeroConstancyReport zero_constancy_check(const Trajectory& traj, double t_lag,
                                         int n_shifts, double late_fraction) {
    ZeroConstancyReport rep;
    if (traj.size() < 3) throw ConfigError("zero_constancy_check: trajectory too short");

    const double stride = traj.times[1] - traj.times[0];
    const long long lag_strides = std::llround(t_lag / stride);
    if (lag_strides < 1)
        throw ConfigError("zero_constancy_check: lag below the recording stride");

    const double t_late = traj.t_begin() + (1.0 - late_fraction) * (traj.t_end() - traj.t_begin());
    const std::size_t i0 = traj.index_at_or_after(t_late);

    double scale = 0.0;
    for (std::size_t i = i0; i < traj.size(); ++i)
        scale = std::max(scale, max_norm(traj.states[i]));

    for (std::size_t i = i0; i + static_cast<std::size_t>(lag_strides) < traj.size(); ++i) {
        const GridField& later = traj.states[i + static_cast<std::size_t>(lag_strides)];
        const GridField& now = traj.states[i];
        for (int s = 0; s < n_shifts; ++s) {
            const double a = two_pi * s / n_shifts;
            const GridField diff = later - shift(now, a);
            ++rep.pairs_checked;
            if (max_norm(diff) <= trivial_difference_rel * scale) {
                ++rep.pairs_trivial;
                continue;
            }
            const ZeroReport zr = zero_number(diff);
            if (std::find(rep.observed_counts.begin(), rep.observed_counts.end(), zr.count) ==
                rep.observed_counts.end())
                rep.observed_counts.push_back(zr.count);
        }
    }

    if (rep.pairs_checked == 0)
        throw ConfigError("zero_constancy_check: no (t, t+lag) pairs inside the window");
    if (rep.pairs_checked == rep.pairs_trivial) {
        rep.degenerate_lag = true;
        throw ConfigError("zero_constancy_check: degenerate lag, every difference trivial");
    }
    rep.constant = rep.observed_counts.size() == 1;
    if (rep.constant) rep.count = rep.observed_counts.front();
    return rep;
}

} // namespace circlewave
