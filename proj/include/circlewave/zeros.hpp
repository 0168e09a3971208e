#ifndef CIRCLEWAVE_ZEROS_HPP
#define CIRCLEWAVE_ZEROS_HPP

#include "circlewave/field.hpp"
#include "circlewave/solver.hpp"

#include <optional>
#include <vector>

namespace circlewave {

enum class ZeroKind { simple, multiple, uncertain };

struct ZeroLocation {
    double x = 0.0; // in [0, 2*pi)
    ZeroKind kind = ZeroKind::simple;
};

struct ZeroReport {
    int count = 0; // every listed zero counts once, whatever its kind
    std::vector<ZeroLocation> zeros;
    double tol_value = 0.0;
    double tol_slope = 0.0;

    int n_multiple() const;
    int n_uncertain() const;
    bool all_simple() const { return n_multiple() == 0 && n_uncertain() == 0; }
};

struct ZeroTolerances {
    // Relative by default: tol_value = 1e-9*||u||_inf, tol_slope =
    // 1e-6*||u_x||_inf, so that classification is scale-free.  Absolute
    // overrides are for difference fields measured against an external
    // scale.
    std::optional<double> value;
    std::optional<double> slope;
};

/// Zero number Z(u) = card{x : u(x) = 0} of the spectral interpolant.
/// Zeros found from sign changes on an oversampled grid, refined by
/// bisection to |x| tolerance 1e-10; a zero is `multiple` when the
/// interpolated slope magnitude is below tol_slope, and dips of |u| below
/// tol_value without a sign change are recorded as `uncertain`.  Throws
/// FieldError for an (essentially) identically-zero field, for which Z is
/// undefined.
ZeroReport zero_number(const GridField& u, const ZeroTolerances& tol = {});

struct ZeroTrackPoint {
    double t = 0.0;
    ZeroReport report;
};

struct ZeroTrackSeries {
    std::vector<ZeroTrackPoint> points;
    // indices i where count(i+1) > count(i) -- candidate violations
    std::vector<std::size_t> increase_indices;
    // indices i where count(i+1) < count(i)
    std::vector<std::size_t> drop_indices;
    // parallel to drop_indices: a multiple/uncertain zero was observed in
    // the interval, either at an endpoint report or on the time-interpolated
    // pencil between the two states (the bounding snapshots of a drop sit
    // O(stride) away from the tangency, far above tol_value)
    std::vector<bool> drop_multiple_seen;
};

/// Per-snapshot zero reports along a trajectory.  Flags every interval
/// where the count increases (a violation candidate) or drops (an event);
/// each drop interval is probed for its tangency by bisecting the count
/// change along the line segment between the bounding states.
ZeroTrackSeries zero_track(const Trajectory& traj, const ZeroTolerances& tol = {});

struct DropEvent {
    double t_before = 0.0;
    double t_after = 0.0;
    int count_before = 0;
    int count_after = 0;
    bool multiple_zero_seen = false; // multiple or uncertain at an endpoint
};

std::vector<DropEvent> drop_events(const ZeroTrackSeries& series);

/// Increase intervals that do NOT touch a snapshot with an uncertain zero.
/// Intervals containing uncertain zeros are inconclusive: discrete sampling
/// cannot certify tangency.
std::vector<std::size_t> monotonicity_violations(const ZeroTrackSeries& series);

} // namespace circlewave

#endif
