#include "circlewave/symmetry.hpp"

#include "circlewave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace circlewave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double degeneracy_scale = 1e-12; // spatial variance < 1e-12*N => constant

double wrap(double a) {
    double r = std::fmod(a, two_pi);
    if (r < 0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

// Cross-correlation C(a) = (2*pi/N) sum_j u(x_j + a) v(x_j), evaluated from
// the cross-spectrum for arbitrary real a.  Maximizing C minimizes
// ||shift(u,a) - v||_2.
class CrossCorrelation {
public:
    CrossCorrelation(const GridField& u, const GridField& v) : n_(u.size()) {
        const Spectrum su = analyze(u);
        const Spectrum sv = analyze(v);
        const int half = n_ / 2;
        cross_.resize(static_cast<std::size_t>(half + 1));
        const double scale = two_pi / (static_cast<double>(n_) * n_);
        cross_[0] = scale * su.c[0] * std::conj(sv.c[0]);
        for (int k = 1; k < half; ++k)
            cross_[static_cast<std::size_t>(k)] =
                2.0 * scale * su.c[static_cast<std::size_t>(k)] *
                std::conj(sv.c[static_cast<std::size_t>(k)]);
        cross_[static_cast<std::size_t>(half)] =
            scale * su.c[static_cast<std::size_t>(half)] * std::conj(sv.c[static_cast<std::size_t>(half)]);
    }

    double operator()(double a) const {
        // shift(u,a) has coefficients u_k e^{ika}; Re sum gives the inner product
        double acc = 0.0;
        const int half = n_ / 2;
        for (int k = 0; k <= half; ++k) {
            const std::complex<double> w(std::cos(k * a), std::sin(k * a));
            acc += (w * cross_[static_cast<std::size_t>(k)]).real();
        }
        return acc;
    }

private:
    int n_;
    std::vector<std::complex<double>> cross_;
};

} // namespace

AlignmentResult align(const GridField& u, const GridField& v) {
    if (u.size() != v.size())
        throw FieldError("align: grid size mismatch");
    const int n = u.size();

    AlignmentResult res;
    if (spatial_variance(u) < degeneracy_scale) {
        // constant u: the orbit is a single point
        res.a_star = 0.0;
        res.degenerate = true;
        res.residual = distance(u, v);
        res.curvature = 0.0;
        return res;
    }

    const CrossCorrelation corr(u, v);

    // lattice scan
    int best = 0;
    double best_val = corr(0.0);
    for (int j = 1; j < n; ++j) {
        const double c = corr(two_pi * j / n);
        if (c > best_val) {
            best_val = c;
            best = j;
        }
    }

    // iterated three-point quadratic refinement of the maximum
    double h = two_pi / n;
    double a = two_pi * best / n;
    double c0 = best_val;
    for (int it = 0; it < 24 && h > 1e-13; ++it) {
        const double cm = corr(a - h);
        const double cp = corr(a + h);
        const double denom = cm - 2.0 * c0 + cp;
        if (denom < 0.0) {
            double delta = 0.5 * h * (cm - cp) / denom;
            delta = std::clamp(delta, -h, h);
            const double cand = corr(a + delta);
            if (cand >= c0) {
                a += delta;
                c0 = cand;
            }
        }
        h *= 0.5;
    }

    res.a_star = wrap(a);
    res.residual = distance(shift(u, res.a_star), v);
    const double hh = two_pi / n;
    res.curvature = (corr(res.a_star - hh) - 2.0 * corr(res.a_star) + corr(res.a_star + hh)) / (hh * hh);
    return res;
}

double orbit_distance(const GridField& u, const GridField& v) {
    return align(u, v).residual;
}

WaveSpeedEstimate estimate_wave_speed(const Trajectory& traj, double t_min) {
    WaveSpeedEstimate est;
    const std::size_t i0 = traj.index_at_or_after(t_min);
    if (i0 + 1 >= traj.size())
        throw ConfigError("estimate_wave_speed: fewer than two snapshots past t_min");

    const GridField& ref = traj.states[i0];
    if (spatial_variance(ref) < degeneracy_scale) {
        est.degenerate = true;
        return est;
    }

    double prev = 0.0;
    for (std::size_t i = i0; i < traj.size(); ++i) {
        const AlignmentResult ar = align(traj.states[i], ref);
        if (ar.degenerate) {
            est.degenerate = true;
            return est;
        }
        // unwrap assuming less than half a turn per stride
        double a = ar.a_star;
        const double base = std::floor((prev - a) / two_pi + 0.5);
        a += two_pi * base;
        if (a - prev > std::numbers::pi) a -= two_pi;
        else if (prev - a > std::numbers::pi) a += two_pi;
        est.times.push_back(traj.times[i]);
        est.phase.push_back(a);
        est.residual.push_back(ar.residual);
        prev = a;
    }

    // least squares a(t) ~ c*(t - t_min) through the origin
    double num = 0.0, den = 0.0;
    const double t0 = est.times.front();
    for (std::size_t i = 0; i < est.times.size(); ++i) {
        const double dt = est.times[i] - t0;
        num += dt * est.phase[i];
        den += dt * dt;
    }
    est.c = den > 0.0 ? num / den : 0.0;

    double ss = 0.0;
    for (std::size_t i = 0; i < est.times.size(); ++i) {
        const double r = est.phase[i] - est.c * (est.times[i] - t0);
        ss += r * r;
    }
    est.fit_residual = std::sqrt(ss / static_cast<double>(est.times.size()));
    return est;
}

} // namespace circlewave
