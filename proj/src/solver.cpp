#include "circlewave/solver.hpp"

#include "circlewave/errors.hpp"
#include "etd.hpp"

#include <algorithm>
#include <cmath>

namespace circlewave {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Snap the horizon to a whole number of recording intervals.
long long step_count(const SolverConfig& cfg) {
    const double interval = cfg.dt * cfg.record_stride;
    const long long intervals =
        std::max<long long>(1, std::llround(cfg.t_end / interval));
    return intervals * cfg.record_stride;
}

} // namespace

void SolverConfig::validate() const {
    if (n < 16 || !power_of_two(n))
        throw ConfigError("solver.N must be a power of two >= 16");
    if (!(dt > 0.0)) throw ConfigError("solver.dt must be positive");
    if (!(t_end > 0.0)) throw ConfigError("solver.t_end must be positive");
    if (record_stride < 1) throw ConfigError("solver.record_stride must be >= 1");
    if (!(blowup_threshold > 0.0)) throw ConfigError("solver.blowup_threshold must be positive");
}

std::size_t Trajectory::index_at_or_after(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t - 1e-12);
    if (it == times.end()) return times.size() - 1;
    return static_cast<std::size_t>(it - times.begin());
}

Trajectory integrate(const GridField& u0, const ExpressionAst& f,
                     const SolverConfig& cfg, double t0) {
    cfg.validate();
    if (u0.size() != cfg.n)
        throw ConfigError("initial data size " + std::to_string(u0.size()) +
                          " does not match solver.N = " + std::to_string(cfg.n));

    const CompiledExpr fc(f);
    const int n = cfg.n;
    auto prhs = [&fc, n](double t, const double* u, const double* ux, double* out) {
        for (int j = 0; j < n; ++j) out[j] = fc(t, u[j], ux[j]);
    };

    detail::EtdStepper stepper(cfg.n, cfg.dt, cfg.dealias, cfg.blowup_threshold);
    stepper.set_state(u0.raw());

    const long long n_steps = step_count(cfg);
    Trajectory traj;
    traj.config = cfg;
    traj.times.reserve(static_cast<std::size_t>(n_steps / cfg.record_stride + 1));
    traj.states.reserve(traj.times.capacity());

    double last_recorded = t0;
    try {
        for (long long s = 0; s <= n_steps; ++s) {
            const double t = t0 + s * cfg.dt;
            if (s % cfg.record_stride == 0) {
                stepper.ensure_valid(t);
                traj.times.push_back(t);
                traj.states.emplace_back(stepper.state());
                last_recorded = t;
            }
            if (s < n_steps) stepper.step(t, prhs);
        }
    } catch (const BlowupError& e) {
        throw BlowupError(std::string(e.what()) + "; last valid recorded time " +
                              std::to_string(last_recorded),
                          last_recorded);
    }
    return traj;
}

GridField poincare_map(const GridField& u0, const ExpressionAst& f, double T,
                       const SolverConfig& cfg) {
    if (!(T > 0.0)) throw ConfigError("period T must be positive");
    SolverConfig one_period = cfg;
    const long long m = std::max<long long>(1, static_cast<long long>(std::ceil(T / cfg.dt - 1e-9)));
    one_period.dt = T / static_cast<double>(m);
    one_period.t_end = T;
    one_period.record_stride = static_cast<int>(m);
    Trajectory traj = integrate(u0, f, one_period);
    return traj.states.back();
}

DissipativityReport dissipativity_check(const ExpressionAst& f, double l,
                                        double delta, int samples,
                                        double t_period) {
    if (!(l > delta && delta > 0.0))
        throw ConfigError("dissipativity check requires l > delta > 0");
    const CompiledExpr fc(f);
    DissipativityReport rep;
    rep.samples = samples;

    const bool time_dependent = depends_on(f, "t");
    const int nt = time_dependent ? std::min(samples, 64) : 1;
    const double t_span = time_dependent ? t_period : 1.0;

    for (int i = 0; i < samples; ++i) {
        const double mag = delta + (l - delta) * i / std::max(1, samples - 1);
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            const double u = sgn * mag;
            for (int it = 0; it < nt; ++it) {
                const double t = t_span * it / nt;
                const double fu = fc(t, u, 0.0);
                if (u * fu > 0.0) {
                    rep.sign_ok = false;
                    if (rep.violations.size() < 32)
                        rep.violations.emplace_back(t, u, u * fu);
                }
            }
        }
    }

    // growth ratio |f| / (1+|p|^{2-eps}) over a (t,u,p) sample box
    constexpr double eps = 0.1;
    const double p_max = 10.0 * l;
    const int nb = std::max(8, samples / 4);
    for (int iu = 0; iu <= nb; ++iu) {
        const double u = -l + 2.0 * l * iu / nb;
        for (int ip = 0; ip <= nb; ++ip) {
            const double p = -p_max + 2.0 * p_max * ip / nb;
            for (int it = 0; it < nt; ++it) {
                const double t = t_span * it / nt;
                const double ratio = std::abs(fc(t, u, p)) / (1.0 + std::pow(std::abs(p), 2.0 - eps));
                rep.max_growth_ratio = std::max(rep.max_growth_ratio, ratio);
            }
        }
    }
    return rep;
}

} // namespace circlewave
