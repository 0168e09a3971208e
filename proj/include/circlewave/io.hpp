#ifndef CIRCLEWAVE_IO_HPP
#define CIRCLEWAVE_IO_HPP

#include "circlewave/classify.hpp"
#include "circlewave/linear.hpp"
#include "circlewave/solver.hpp"
#include "circlewave/subshift.hpp"
#include "circlewave/symmetry.hpp"
#include "circlewave/zeros.hpp"

#include <filesystem>
#include <string>

namespace circlewave {

/// Rows "t, u_0, ..., u_{N-1}" with 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Initial data from a trajectory-style CSV: the last non-empty row; a
/// leading time column is dropped when the row has N+1 fields.
GridField read_field_csv(const std::filesystem::path& path, int expected_n);

/// Rows "t, count, n_multiple, n_uncertain".
std::string zero_track_csv(const ZeroTrackSeries& series);

/// Rows "rank, exponent, multiplicity_hint".
std::string spectrum_csv(const SpectrumEstimate& est);

/// Rows "t, a_unwrapped, residual".
std::string phase_csv(const WaveSpeedEstimate& est);

std::string classification_json(const ClassificationReport& rep);

std::string subshift_demo_table(const subshift::NonwanderingDemo& demo);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Best-effort decoration; never load-bearing.
void write_profile_svg(const std::filesystem::path& path, const GridField& u);
void write_timeline_svg(const std::filesystem::path& path,
                        const std::vector<double>& t, const std::vector<double>& y,
                        const std::string& label);

} // namespace circlewave

#endif
