#include "circlewave/zeros.hpp"

#include "circlewave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace circlewave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int oversample = 8;       // samples per grid node when bracketing
constexpr double x_tol = 1e-10;     // bisection tolerance in x
constexpr double merge_tol = 1e-8;  // distinct zeros closer than this merge

double wrap(double x) {
    double r = std::fmod(x, two_pi);
    if (r < 0) r += two_pi;
    // guard against 2*pi sneaking through the fmod
    if (r >= two_pi) r -= two_pi;
    return r;
}

double bisect(const TrigInterpolant& f, double lo, double hi, double flo) {
    // f changes sign on [lo, hi]
    while (hi - lo > x_tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

int ZeroReport::n_multiple() const {
    return static_cast<int>(std::count_if(zeros.begin(), zeros.end(), [](const ZeroLocation& z) {
        return z.kind == ZeroKind::multiple;
    }));
}

int ZeroReport::n_uncertain() const {
    return static_cast<int>(std::count_if(zeros.begin(), zeros.end(), [](const ZeroLocation& z) {
        return z.kind == ZeroKind::uncertain;
    }));
}

ZeroReport zero_number(const GridField& u, const ZeroTolerances& tol) {
    const double amp = max_norm(u);
    const double slope_amp = max_norm(spectral_derivative(u, 1));
    ZeroReport rep;
    rep.tol_value = tol.value.value_or(1e-9 * amp);
    rep.tol_slope = tol.slope.value_or(1e-6 * slope_amp);

    if (amp <= 10.0 * rep.tol_value || amp == 0.0)
        throw FieldError("trivial field: zero number undefined for the (near-)zero function");

    const TrigInterpolant f(u);
    const int m = oversample * u.size();
    std::vector<double> val(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) val[static_cast<std::size_t>(i)] = f(two_pi * i / m);

    std::vector<ZeroLocation> found;
    std::vector<bool> covered(static_cast<std::size_t>(m), false);

    // sign changes between consecutive samples (periodic wrap)
    for (int i = 0; i < m; ++i) {
        const double a = val[static_cast<std::size_t>(i)];
        const double b = val[static_cast<std::size_t>((i + 1) % m)];
        const double xa = two_pi * i / m;
        const double xb = two_pi * (i + 1) / m;
        double x0;
        if (a == 0.0) {
            x0 = xa;
        } else if (a * b < 0.0) {
            x0 = bisect(f, xa, xb, a);
        } else {
            continue;
        }
        covered[static_cast<std::size_t>(i)] = true;
        covered[static_cast<std::size_t>((i + 1) % m)] = true;
        const double slope = f.derivative(x0);
        ZeroLocation z;
        z.x = wrap(x0);
        z.kind = std::abs(slope) < rep.tol_slope ? ZeroKind::multiple : ZeroKind::simple;
        found.push_back(z);
    }

    // Dips of |u| below tol_value with no sign change.  A dip that reaches
    // the rounding floor with a vanishing slope is a resolved tangency (a
    // multiple zero); anything merely below tol_value is uncertain --
    // discrete sampling cannot certify it.
    const double promote_tol = 1e-3 * rep.tol_value;
    int i = 0;
    while (i < m) {
        if (std::abs(val[static_cast<std::size_t>(i)]) < rep.tol_value &&
            !covered[static_cast<std::size_t>(i)]) {
            int j = i;
            double best = std::abs(val[static_cast<std::size_t>(i)]);
            int best_idx = i;
            bool touched_crossing = false;
            while (j < m && std::abs(val[static_cast<std::size_t>(j)]) < rep.tol_value) {
                if (covered[static_cast<std::size_t>(j)]) touched_crossing = true;
                if (std::abs(val[static_cast<std::size_t>(j)]) < best) {
                    best = std::abs(val[static_cast<std::size_t>(j)]);
                    best_idx = j;
                }
                ++j;
            }
            if (!touched_crossing) {
                // parabola through the three samples around the minimum
                const double h = two_pi / m;
                const double x1 = two_pi * best_idx / m;
                const double vm = f(x1 - h), v0 = f(x1), vp = f(x1 + h);
                double x_min = x1;
                double v_min = v0;
                const double denom = vm - 2.0 * v0 + vp;
                if (std::abs(denom) > 0.0) {
                    const double delta = 0.5 * h * (vm - vp) / denom;
                    if (std::abs(delta) <= h) {
                        x_min = x1 + delta;
                        v_min = f(x_min);
                    }
                }
                ZeroLocation z;
                z.x = wrap(x_min);
                const bool resolved = std::abs(v_min) < promote_tol &&
                                      std::abs(f.derivative(x_min)) < rep.tol_slope;
                z.kind = resolved ? ZeroKind::multiple : ZeroKind::uncertain;
                found.push_back(z);
            }
            i = j;
        } else {
            ++i;
        }
    }

    std::sort(found.begin(), found.end(),
              [](const ZeroLocation& a, const ZeroLocation& b) { return a.x < b.x; });

    // merge duplicates (bisection can land twice on the same root, and the
    // periodic wrap can alias 0 and 2*pi)
    std::vector<ZeroLocation> zeros;
    for (const ZeroLocation& z : found) {
        if (!zeros.empty() && z.x - zeros.back().x < merge_tol) {
            if (z.kind == ZeroKind::multiple) zeros.back().kind = ZeroKind::multiple;
            continue;
        }
        zeros.push_back(z);
    }
    if (zeros.size() > 1 && (two_pi - zeros.back().x) + zeros.front().x < merge_tol)
        zeros.pop_back();

    rep.zeros = std::move(zeros);
    rep.count = static_cast<int>(rep.zeros.size());
    return rep;
}

namespace {

// Bisect the count change along g_s = (1-s) u_a + s u_b.  Near the boundary
// parameter the vanishing pair's dip depth shrinks to the rounding floor,
// so a multiple or uncertain zero must surface.
bool pencil_multiple_witness(const GridField& u_a, const GridField& u_b,
                             int count_before, const ZeroTolerances& tol) {
    auto report_at = [&](double s) {
        std::vector<double> v(static_cast<std::size_t>(u_a.size()));
        for (int j = 0; j < u_a.size(); ++j)
            v[static_cast<std::size_t>(j)] = (1.0 - s) * u_a[j] + s * u_b[j];
        return zero_number(GridField(std::move(v)), tol);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 48 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        ZeroReport rep;
        try {
            rep = report_at(mid);
        } catch (const FieldError&) {
            return true; // the pencil collapsed to ~0: tangency beyond doubt
        }
        if (!rep.all_simple()) return true;
        if (rep.count >= count_before) lo = mid;
        else hi = mid;
    }
    return false;
}

} // namespace

ZeroTrackSeries zero_track(const Trajectory& traj, const ZeroTolerances& tol) {
    ZeroTrackSeries series;
    series.points.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        try {
            series.points.push_back({traj.times[i], zero_number(traj.states[i], tol)});
        } catch (const FieldError& e) {
            throw FieldError(std::string(e.what()) + " at t = " + std::to_string(traj.times[i]));
        }
    }
    for (std::size_t i = 0; i + 1 < series.points.size(); ++i) {
        const int before = series.points[i].report.count;
        const int after = series.points[i + 1].report.count;
        if (after > before) series.increase_indices.push_back(i);
        if (after < before) {
            series.drop_indices.push_back(i);
            bool seen = !series.points[i].report.all_simple() ||
                        !series.points[i + 1].report.all_simple();
            if (!seen)
                seen = pencil_multiple_witness(traj.states[i], traj.states[i + 1], before, tol);
            series.drop_multiple_seen.push_back(seen);
        }
    }
    return series;
}

std::vector<DropEvent> drop_events(const ZeroTrackSeries& series) {
    std::vector<DropEvent> events;
    for (std::size_t k = 0; k < series.drop_indices.size(); ++k) {
        const std::size_t i = series.drop_indices[k];
        const auto& a = series.points[i];
        const auto& b = series.points[i + 1];
        DropEvent e;
        e.t_before = a.t;
        e.t_after = b.t;
        e.count_before = a.report.count;
        e.count_after = b.report.count;
        e.multiple_zero_seen = k < series.drop_multiple_seen.size() &&
                               series.drop_multiple_seen[k];
        events.push_back(e);
    }
    return events;
}

std::vector<std::size_t> monotonicity_violations(const ZeroTrackSeries& series) {
    std::vector<std::size_t> out;
    for (std::size_t i : series.increase_indices) {
        const bool inconclusive = series.points[i].report.n_uncertain() > 0 ||
                                  series.points[i + 1].report.n_uncertain() > 0;
        if (!inconclusive) out.push_back(i);
    }
    return out;
}

} // namespace circlewave
