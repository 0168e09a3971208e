#include "circlewave/io.hpp"

#include "circlewave/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace circlewave {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << fmt17(traj.times[i]);
        const GridField& u = traj.states[i];
        for (int j = 0; j < u.size(); ++j) os << ',' << fmt17(u[j]);
        os << '\n';
    }
    return os.str();
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    write_text_file(path, trajectory_csv(traj));
}

GridField read_field_csv(const std::filesystem::path& path, int expected_n) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open initial-data file " + path.string());
    std::string line, last;
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) last = line;
    if (last.empty()) throw ConfigError("empty initial-data file " + path.string());

    std::vector<double> vals;
    std::stringstream ss(last);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            vals.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError("malformed numeric cell '" + cell + "' in " + path.string());
        }
    }
    if (static_cast<int>(vals.size()) == expected_n + 1)
        vals.erase(vals.begin()); // drop the time column
    if (static_cast<int>(vals.size()) != expected_n)
        throw ConfigError("initial-data row has " + std::to_string(vals.size()) +
                          " values, expected " + std::to_string(expected_n));
    return GridField(std::move(vals));
}

std::string zero_track_csv(const ZeroTrackSeries& series) {
    std::ostringstream os;
    for (const ZeroTrackPoint& p : series.points)
        os << fmt17(p.t) << ',' << p.report.count << ',' << p.report.n_multiple() << ','
           << p.report.n_uncertain() << '\n';
    return os.str();
}

std::string spectrum_csv(const SpectrumEstimate& est) {
    std::ostringstream os;
    // multiplicity hint repeated across each cluster
    std::vector<int> hint;
    for (int m : est.multiplicities)
        for (int i = 0; i < m; ++i) hint.push_back(m);
    for (std::size_t i = 0; i < est.exponents.size(); ++i)
        os << i << ',' << fmt17(est.exponents[i]) << ','
           << (i < hint.size() ? hint[i] : 1) << '\n';
    return os.str();
}

std::string phase_csv(const WaveSpeedEstimate& est) {
    std::ostringstream os;
    for (std::size_t i = 0; i < est.times.size(); ++i)
        os << fmt17(est.times[i]) << ',' << fmt17(est.phase[i]) << ','
           << fmt17(est.residual[i]) << '\n';
    return os.str();
}

std::string classification_json(const ClassificationReport& rep) {
    json j;
    j["verdict"] = to_string(rep.verdict);
    j["wave_speed"] = rep.wave_speed;
    j["rotation"] = rep.rotation;
    j["amplitude"] = rep.amplitude;
    j["residuals"] = {{"fixed_point", rep.fixed_point_residual},
                      {"orbit", rep.orbit_residual},
                      {"speed_fit", rep.speed_fit_residual}};
    j["spatial_variance"] = rep.spatial_variance_value;
    j["poincare_iterations"] = rep.poincare_iterations;
    j["tolerances"] = {{"eps_fix", rep.options.eps_fix},
                       {"eps_var", rep.options.eps_var},
                       {"eps_orb", rep.options.eps_orb},
                       {"eps_c", rep.options.eps_c},
                       {"fit_residual_max", rep.options.fit_residual_max}};
    if (rep.zero_constancy) {
        const auto& z = *rep.zero_constancy;
        j["evidence"]["zero_constancy"] = {{"constant", z.constant},
                                           {"count", z.count},
                                           {"observed_counts", z.observed_counts},
                                           {"pairs_checked", z.pairs_checked},
                                           {"pairs_trivial", z.pairs_trivial}};
    }
    if (rep.recurrence) {
        j["evidence"]["recurrence"] = {{"t_return", rep.recurrence->t_return},
                                       {"gap", rep.recurrence->gap}};
    }
    return j.dump(2) + "\n";
}

std::string subshift_demo_table(const subshift::NonwanderingDemo& demo) {
    std::ostringstream os;
    os << "n,d_close,d_return,k_close,k_return\n";
    for (const auto& row : demo.rows)
        os << row.n << ',' << fmt17(row.d_close) << ',' << fmt17(row.d_return) << ','
           << row.k_close << ',' << row.k_return << '\n';
    os << "# x0 is a limit point: " << (demo.x0_is_limit_point ? "yes" : "no") << '\n';
    os << "# all rows equal 2^-n exactly: " << (demo.all_rows_exact ? "yes" : "no") << '\n';
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

namespace {

void svg_polyline(std::ostringstream& os, const std::vector<double>& xs,
                  const std::vector<double>& ys, int w, int h) {
    double ymin = ys.front(), ymax = ys.front();
    for (double y : ys) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (ymax - ymin < 1e-12) {
        ymax += 1.0;
        ymin -= 1.0;
    }
    const double xmin = xs.front(), xmax = xs.back();
    os << "<polyline fill='none' stroke='#1f6feb' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double px = (xs[i] - xmin) / (xmax - xmin) * (w - 20) + 10;
        const double py = h - 10 - (ys[i] - ymin) / (ymax - ymin) * (h - 20);
        os << px << ',' << py << ' ';
    }
    os << "'/>\n";
}

} // namespace

void write_profile_svg(const std::filesystem::path& path, const GridField& u) {
    std::ostringstream os;
    const int w = 640, h = 320;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    std::vector<double> xs, ys;
    for (int j = 0; j < u.size(); ++j) {
        xs.push_back(u.node(j));
        ys.push_back(u[j]);
    }
    xs.push_back(2.0 * 3.14159265358979312);
    ys.push_back(u[0]);
    svg_polyline(os, xs, ys, w, h);
    os << "</svg>\n";
    write_text_file(path, os.str());
}

void write_timeline_svg(const std::filesystem::path& path, const std::vector<double>& t,
                        const std::vector<double>& y, const std::string& label) {
    if (t.empty() || t.size() != y.size()) return;
    std::ostringstream os;
    const int w = 640, h = 320;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    os << "<text x='12' y='16' font-family='monospace' font-size='12'>" << label << "</text>\n";
    svg_polyline(os, t, y, w, h);
    os << "</svg>\n";
    write_text_file(path, os.str());
}

} // namespace circlewave
