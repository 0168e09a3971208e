#include "circlewave/linear.hpp"

#include "circlewave/errors.hpp"
#include "etd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace circlewave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Piecewise-linear interpolation of coefficient slices in t, writing into
// caller arrays.  Clamped at the ends so stage evaluations at t_end + dt/2
// stay defined.
class CoefficientSampler {
public:
    explicit CoefficientSampler(const LinearCoefficients& c) : c_(c) {}

    void sample(double t, std::vector<double>& a, std::vector<double>& b) const {
        const auto& times = c_.times;
        if (times.size() == 1) {
            a = c_.a[0];
            b = c_.b[0];
            return;
        }
        auto hi = std::upper_bound(times.begin(), times.end(), t);
        std::size_t i1 = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
            hi - times.begin(), 1, static_cast<std::ptrdiff_t>(times.size()) - 1));
        const std::size_t i0 = i1 - 1;
        const double span = times[i1] - times[i0];
        double w = span > 0 ? (t - times[i0]) / span : 0.0;
        w = std::clamp(w, 0.0, 1.0);
        const std::size_t n = static_cast<std::size_t>(c_.n);
        a.resize(n);
        b.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = (1.0 - w) * c_.a[i0][j] + w * c_.a[i1][j];
            b[j] = (1.0 - w) * c_.b[i0][j] + w * c_.b[i1][j];
        }
    }

private:
    const LinearCoefficients& c_;
};

struct QrLogs {
    std::vector<double> sum_log_r; // accumulated log diag(R)
};

// Modified Gram-Schmidt in the discrete L2 inner product; returns log of
// the diagonal normalizers.
void mgs_orthonormalize(std::vector<std::vector<double>>& q, int n,
                        std::vector<double>& log_diag) {
    const double w = two_pi / n;
    const std::size_t m = q.size();
    log_diag.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double nrm2 = 0.0;
        for (int j = 0; j < n; ++j) nrm2 += q[i][static_cast<std::size_t>(j)] * q[i][static_cast<std::size_t>(j)];
        const double nrm = std::sqrt(nrm2 * w);
        if (!(nrm > 0.0)) throw NumericalError("rank collapse during QR re-orthonormalization");
        log_diag[i] = std::log(nrm);
        const double inv = 1.0 / nrm;
        for (int j = 0; j < n; ++j) q[i][static_cast<std::size_t>(j)] *= inv;
        for (std::size_t l = i + 1; l < m; ++l) {
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += q[i][static_cast<std::size_t>(j)] * q[l][static_cast<std::size_t>(j)];
            dot *= w;
            for (int j = 0; j < n; ++j) q[l][static_cast<std::size_t>(j)] -= dot * q[i][static_cast<std::size_t>(j)];
        }
    }
}

std::vector<int> cluster_multiplicities(const std::vector<double>& exponents, double tol) {
    std::vector<int> mult;
    std::size_t i = 0;
    while (i < exponents.size()) {
        std::size_t j = i + 1;
        while (j < exponents.size() && std::abs(exponents[j] - exponents[j - 1]) <= tol) ++j;
        mult.push_back(static_cast<int>(j - i));
        i = j;
    }
    return mult;
}

} // namespace

LinearCoefficients LinearCoefficients::constant(int n, double a_value, double b_value,
                                                double t0, double t1, double dt_hint) {
    LinearCoefficients c;
    c.n = n;
    c.times = {t0, t1};
    c.a = {std::vector<double>(static_cast<std::size_t>(n), a_value),
           std::vector<double>(static_cast<std::size_t>(n), a_value)};
    c.b = {std::vector<double>(static_cast<std::size_t>(n), b_value),
           std::vector<double>(static_cast<std::size_t>(n), b_value)};
    c.suggested_dt = dt_hint;
    return c;
}

LinearCoefficients LinearCoefficients::sampled(
    int n, const std::function<double(double, double)>& fa,
    const std::function<double(double, double)>& fb, double t0, double t1,
    int slices, double dt_hint) {
    if (slices < 2) throw ConfigError("need at least two coefficient slices");
    LinearCoefficients c;
    c.n = n;
    c.suggested_dt = dt_hint;
    c.times.resize(static_cast<std::size_t>(slices));
    c.a.resize(static_cast<std::size_t>(slices));
    c.b.resize(static_cast<std::size_t>(slices));
    for (int i = 0; i < slices; ++i) {
        const double t = t0 + (t1 - t0) * i / (slices - 1);
        c.times[static_cast<std::size_t>(i)] = t;
        auto& ai = c.a[static_cast<std::size_t>(i)];
        auto& bi = c.b[static_cast<std::size_t>(i)];
        ai.resize(static_cast<std::size_t>(n));
        bi.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const double x = two_pi * j / n;
            ai[static_cast<std::size_t>(j)] = fa(t, x);
            bi[static_cast<std::size_t>(j)] = fb(t, x);
        }
    }
    return c;
}

LinearCoefficients linearize_along(const Trajectory& traj, const ExpressionAst& f) {
    const CompiledExpr dfdp(differentiate(f, ExpressionAst::Var::p));
    const CompiledExpr dfdu(differentiate(f, ExpressionAst::Var::u));
    LinearCoefficients c;
    c.n = traj.config.n;
    c.suggested_dt = traj.config.dt;
    c.times = traj.times;
    c.a.resize(traj.size());
    c.b.resize(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const GridField& u = traj.states[i];
        const GridField ux = spectral_derivative(u, 1);
        const double t = traj.times[i];
        auto& ai = c.a[i];
        auto& bi = c.b[i];
        ai.resize(static_cast<std::size_t>(c.n));
        bi.resize(static_cast<std::size_t>(c.n));
        for (int j = 0; j < c.n; ++j) {
            ai[static_cast<std::size_t>(j)] = dfdp(t, u[j], ux[j]);
            bi[static_cast<std::size_t>(j)] = dfdu(t, u[j], ux[j]);
        }
    }
    return c;
}

Trajectory evolve_linear(const GridField& v0, const LinearCoefficients& coeffs,
                         double t0, double t1, const LinearEvolveOptions& opts) {
    if (coeffs.n != v0.size())
        throw ConfigError("evolve_linear: grid size mismatch");
    if (t0 < coeffs.t_begin() - 1e-9 || t1 > coeffs.t_end() + 1e-9)
        throw ConfigError("evolve_linear: time span outside coefficient support");
    if (!(t1 > t0)) throw ConfigError("evolve_linear: empty time span");

    const double dt = opts.dt > 0.0 ? opts.dt : coeffs.suggested_dt;
    SolverConfig cfg;
    cfg.n = coeffs.n;
    cfg.dt = dt;
    cfg.t_end = t1 - t0;
    cfg.record_stride = opts.record_stride;
    cfg.dealias = opts.dealias;
    cfg.blowup_threshold = opts.blowup_threshold;
    cfg.validate();

    const CoefficientSampler sampler(coeffs);
    std::vector<double> a, b;
    const int n = coeffs.n;
    auto rhs = [&](double t, const double* v, const double* vx, double* out) {
        sampler.sample(t, a, b);
        for (int j = 0; j < n; ++j)
            out[j] = a[static_cast<std::size_t>(j)] * vx[j] + b[static_cast<std::size_t>(j)] * v[j];
    };

    detail::EtdStepper stepper(n, dt, cfg.dealias, cfg.blowup_threshold);
    stepper.set_state(v0.raw());

    const long long intervals =
        std::max<long long>(1, std::llround(cfg.t_end / (dt * cfg.record_stride)));
    const long long n_steps = intervals * cfg.record_stride;

    Trajectory traj;
    traj.config = cfg;
    double last_recorded = t0;
    try {
        for (long long s = 0; s <= n_steps; ++s) {
            const double t = t0 + s * dt;
            if (s % cfg.record_stride == 0) {
                stepper.ensure_valid(t);
                traj.times.push_back(t);
                traj.states.emplace_back(stepper.state());
                last_recorded = t;
            }
            if (s < n_steps) stepper.step(t, rhs);
        }
    } catch (const BlowupError& e) {
        throw BlowupError(std::string(e.what()) + "; last valid recorded time " +
                              std::to_string(last_recorded),
                          last_recorded);
    }
    return traj;
}

std::vector<std::pair<double, double>> SpectrumEstimate::dichotomy_gaps(double gap) const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < exponents.size(); ++i)
        if (exponents[i] - exponents[i + 1] > gap)
            out.emplace_back(exponents[i], exponents[i + 1]);
    return out;
}

SpectrumEstimate constant_state_spectrum(double /*a*/, double b, int k_max) {
    SpectrumEstimate s;
    s.galerkin_dim = 1 + 2 * k_max;
    for (int k = 0; k <= k_max; ++k) {
        // exponent b - k^2; the pair {sin kx, cos kx} carries it twice
        s.exponents.push_back(b - static_cast<double>(k) * k);
        if (k >= 1) s.exponents.push_back(b - static_cast<double>(k) * k);
        s.multiplicities.push_back(k == 0 ? 1 : 2);
    }
    return s;
}

std::vector<GridField> fourier_mode_basis(int n, int m) {
    std::vector<GridField> basis;
    basis.reserve(static_cast<std::size_t>(m));
    const double c0 = 1.0 / std::sqrt(two_pi);
    const double c1 = 1.0 / std::sqrt(std::numbers::pi);
    basis.push_back(GridField::constant(n, c0));
    int k = 1;
    while (static_cast<int>(basis.size()) < m) {
        const int kk = k;
        basis.push_back(GridField::from_function(n, [kk, c1](double x) { return c1 * std::sin(kk * x); }));
        if (static_cast<int>(basis.size()) < m)
            basis.push_back(GridField::from_function(n, [kk, c1](double x) { return c1 * std::cos(kk * x); }));
        ++k;
    }
    return basis;
}

SpectrumEstimate finite_time_spectrum(const LinearCoefficients& coeffs,
                                      double window_begin, double window_end,
                                      int m, const FiniteTimeSpectrumOptions& opts) {
    if (m % 2 == 0) throw ConfigError("finite_time_spectrum: m must be odd");
    if (m > coeffs.n / 3) throw ConfigError("finite_time_spectrum: m must be <= N/3");
    if (window_end - window_begin < 5.0 - 1e-9)
        throw ConfigError("finite_time_spectrum: window must be at least 5 time units");
    if (window_begin < coeffs.t_begin() - 1e-9 || window_end > coeffs.t_end() + 1e-9)
        throw ConfigError("finite_time_spectrum: window exceeds coefficient support");

    const int n = coeffs.n;
    const double dt = opts.dt > 0.0 ? opts.dt : coeffs.suggested_dt;
    const CoefficientSampler sampler(coeffs);
    std::vector<double> a, b;
    auto rhs = [&](double t, const double* v, const double* vx, double* out) {
        sampler.sample(t, a, b);
        for (int j = 0; j < n; ++j)
            out[j] = a[static_cast<std::size_t>(j)] * vx[j] + b[static_cast<std::size_t>(j)] * v[j];
    };

    std::vector<GridField> seed = fourier_mode_basis(n, m);
    std::vector<std::vector<double>> q;
    q.reserve(static_cast<std::size_t>(m));
    for (const GridField& g : seed) q.push_back(g.raw());

    std::vector<detail::EtdStepper> steppers;
    steppers.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        steppers.emplace_back(n, dt, opts.dealias, 1e12);

    std::vector<double> sum_log(static_cast<std::size_t>(m), 0.0);
    std::vector<double> log_diag;

    const long long steps_per_qr = std::max<long long>(1, std::llround(opts.t_qr / dt));
    const long long total_steps = std::max<long long>(1, std::llround((window_end - window_begin) / dt));

    long long s = 0;
    while (s < total_steps) {
        const long long chunk = std::min(steps_per_qr, total_steps - s);
        for (int i = 0; i < m; ++i) {
            auto& st = steppers[static_cast<std::size_t>(i)];
            st.set_state(q[static_cast<std::size_t>(i)]);
            for (long long c = 0; c < chunk; ++c)
                st.step(window_begin + (s + c) * dt, rhs);
            q[static_cast<std::size_t>(i)] = st.state();
        }
        s += chunk;
        mgs_orthonormalize(q, n, log_diag);
        for (int i = 0; i < m; ++i) sum_log[static_cast<std::size_t>(i)] += log_diag[static_cast<std::size_t>(i)];
    }

    SpectrumEstimate est;
    est.window_begin = window_begin;
    est.window_end = window_end;
    est.galerkin_dim = m;
    est.exponents = sum_log;
    const double span = total_steps * dt;
    for (double& e : est.exponents) e /= span;
    std::sort(est.exponents.begin(), est.exponents.end(), std::greater<double>());
    est.multiplicities = cluster_multiplicities(est.exponents, 0.02);
    return est;
}

std::pair<int, int> constant_state_zero_bounds(int k1, int k2) {
    if (k1 < 0 || k2 < k1) throw ConfigError("bad mode range for zero bounds");
    // dim E^{0,k} = 2k+1; E^{0,-1} = {0}
    const int dim_below = k1 == 0 ? 0 : 2 * (k1 - 1) + 1;
    const int dim_upto = 2 * k2 + 1;
    const int n1 = dim_below % 2 == 0 ? dim_below : dim_below + 1;
    const int n2 = dim_upto % 2 == 0 ? dim_upto : dim_upto - 1;
    return {n1, n2};
}

ZeroBoundReport zero_bound_check(const std::vector<GridField>& basis, int n1,
                                 int n2, int samples, std::uint64_t seed) {
    if (basis.empty()) throw ConfigError("zero_bound_check: empty basis");
    ZeroBoundReport rep;
    rep.min_count = 1 << 30;
    rep.max_count = -1;

    std::uint64_t state = seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull;
    auto next_unit = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    };

    const int n = basis.front().size();
    for (int s = 0; s < samples; ++s) {
        std::vector<double> coef(basis.size());
        double norm2 = 0.0;
        for (double& c : coef) {
            c = 2.0 * next_unit() - 1.0;
            norm2 += c * c;
        }
        if (norm2 < 1e-8) {
            coef[0] = 1.0; // reject near-zero draws
        }
        std::vector<double> vals(static_cast<std::size_t>(n), 0.0);
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (int j = 0; j < n; ++j)
                vals[static_cast<std::size_t>(j)] += coef[i] * basis[i][j];
        const ZeroReport zr = zero_number(GridField(std::move(vals)));
        ++rep.checked;
        rep.min_count = std::min(rep.min_count, zr.count);
        rep.max_count = std::max(rep.max_count, zr.count);
        if (zr.count < n1 || zr.count > n2) {
            ++rep.violations;
            if (rep.violating_coefficients.size() < 8)
                rep.violating_coefficients.push_back(coef);
        }
    }
    return rep;
}

} // namespace circlewave
