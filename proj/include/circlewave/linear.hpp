#ifndef CIRCLEWAVE_LINEAR_HPP
#define CIRCLEWAVE_LINEAR_HPP

#include "circlewave/expr.hpp"
#include "circlewave/field.hpp"
#include "circlewave/solver.hpp"
#include "circlewave/zeros.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace circlewave {

/// Coefficients a(t,x), b(t,x) of the linear equation
/// v_t = v_xx + a v_x + b v, sampled on a time grid of slices over the
/// generating trajectory's spatial grid.  Evolution interpolates linearly
/// between slices (frozen-coefficient interpolation).
struct LinearCoefficients {
    int n = 0;
    std::vector<double> times;             // slice times, strictly increasing
    std::vector<std::vector<double>> a;    // a[i][j] at (times[i], x_j)
    std::vector<std::vector<double>> b;
    double suggested_dt = 1e-3;            // stepping hint (generating dt)

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }

    static LinearCoefficients constant(int n, double a_value, double b_value,
                                       double t0, double t1, double dt_hint);
    static LinearCoefficients sampled(int n,
                                      const std::function<double(double, double)>& fa,
                                      const std::function<double(double, double)>& fb,
                                      double t0, double t1, int slices,
                                      double dt_hint);
};

/// a = df/dp and b = df/du evaluated along the trajectory, at
/// (t, u(t,x), u_x(t,x)).
LinearCoefficients linearize_along(const Trajectory& traj, const ExpressionAst& f);

struct LinearEvolveOptions {
    double dt = 0.0;        // 0: use coefficients' suggested_dt
    int record_stride = 1;
    bool dealias = true;
    double blowup_threshold = 1e6;
};

/// Evolve v_t = v_xx + a v_x + b v from v0 over [t0, t1] (same ETD stepping
/// as the nonlinear solver).  The span must lie within coefficient support.
Trajectory evolve_linear(const GridField& v0, const LinearCoefficients& coeffs,
                         double t0, double t1,
                         const LinearEvolveOptions& opts = {});

/// Ordered finite-time growth exponents with multiplicity hints; computable
/// surrogate for the dichotomy spectrum over the window.
struct SpectrumEstimate {
    std::vector<double> exponents;   // descending, one per basis field
    std::vector<int> multiplicities; // clusters of nearby exponents, sums to galerkin_dim
    double window_begin = 0.0;
    double window_end = 0.0;
    int galerkin_dim = 0;

    /// Gaps between consecutive exponents larger than `gap` (candidate
    /// resolvent intervals), as pairs (upper, lower).
    std::vector<std::pair<double, double>> dichotomy_gaps(double gap = 0.2) const;
};

/// Exact spectrum at constant coefficients: exponents {b - k^2, k = 0..k_max},
/// multiplicity 1 for k = 0 and 2 for k >= 1 (span{sin kx, cos kx}); constant
/// advection a contributes rotation, not growth.
SpectrumEstimate constant_state_spectrum(double a, double b, int k_max);

struct FiniteTimeSpectrumOptions {
    double t_qr = 0.1; // re-orthonormalization interval
    double dt = 0.0;   // 0: coefficients' suggested_dt
    bool dealias = true;
};

/// Evolve m orthonormal fields (the lowest Fourier modes; m odd, m <= N/3),
/// re-orthonormalizing by QR every t_qr and accumulating diagonal growth
/// logs; returns time-averaged exponents sorted descending.  Window must be
/// inside coefficient support and at least 5 time units long.
SpectrumEstimate finite_time_spectrum(const LinearCoefficients& coeffs,
                                      double window_begin, double window_end,
                                      int m, const FiniteTimeSpectrumOptions& opts = {});

/// Zero-number bounds N1 <= Z <= N2 on the constant-coefficient invariant
/// space spanned by modes k1..k2 (dim E^{0,k} = 2k+1 with the even/odd
/// adjustment).
std::pair<int, int> constant_state_zero_bounds(int k1, int k2);

struct ZeroBoundReport {
    int checked = 0;
    int violations = 0;
    int min_count = 0;
    int max_count = 0;
    std::vector<std::vector<double>> violating_coefficients;
};

/// Draw `samples` random nonzero combinations of the basis fields and check
/// N1 <= Z <= N2 for each.
ZeroBoundReport zero_bound_check(const std::vector<GridField>& basis, int n1,
                                 int n2, int samples, std::uint64_t seed = 1);

/// Orthonormal lowest-Fourier-mode fields: constant, sin x, cos x, sin 2x, ...
std::vector<GridField> fourier_mode_basis(int n, int m);

} // namespace circlewave

#endif
