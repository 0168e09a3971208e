#ifndef CIRCLEWAVE_SYMMETRY_HPP
#define CIRCLEWAVE_SYMMETRY_HPP

#include "circlewave/field.hpp"
#include "circlewave/solver.hpp"

#include <vector>

namespace circlewave {

struct AlignmentResult {
    double a_star = 0.0;    // argmin_a distance(shift(u,a), v), in [0, 2*pi)
    double residual = 0.0;  // distance after alignment
    double curvature = 0.0; // second difference of the objective at the optimum
    bool degenerate = false; // u spatially constant: every shift ties
};

/// Best circle-action alignment of u onto v.  The cross-correlation is
/// evaluated at all N lattice shifts and the winner refined with quadratic
/// interpolation of neighboring objective values, iterated to sub-grid
/// accuracy on the exact spectral objective.
AlignmentResult align(const GridField& u, const GridField& v);

/// Distance from v to the group orbit of u: the aligned residual.
double orbit_distance(const GridField& u, const GridField& v);

struct WaveSpeedEstimate {
    double c = 0.0;            // fitted speed, convention u(t,x) = u0(x - c t)
    double fit_residual = 0.0; // rms deviation of the unwrapped phase from c*(t - t_min)
    bool degenerate = false;   // constant profiles: speed undefined
    std::vector<double> times;
    std::vector<double> phase;    // unwrapped alignment phase a(t)
    std::vector<double> residual; // alignment residual per snapshot
};

/// Fit the alignment phase a(t) of u(t,.) against u(t_min,.) to c*(t-t_min).
/// Assumes |a(t_{i+1}) - a(t_i)| < pi per recording stride (contract:
/// |c| * record_stride * dt < pi), checked post hoc through fit_residual.
WaveSpeedEstimate estimate_wave_speed(const Trajectory& traj, double t_min);

} // namespace circlewave

#endif
