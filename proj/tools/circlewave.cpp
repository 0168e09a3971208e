// circlewave: pseudo-spectral laboratory for scalar reaction-diffusion
// dynamics on the circle.  Subcommands: simulate, classify, spectrum,
// zeros, subshift, sweep.

#include "CLI11.hpp"

#include "circlewave/classify.hpp"
#include "circlewave/config.hpp"
#include "circlewave/errors.hpp"
#include "circlewave/io.hpp"
#include "circlewave/linear.hpp"
#include "circlewave/solver.hpp"
#include "circlewave/subshift.hpp"
#include "circlewave/symmetry.hpp"
#include "circlewave/zeros.hpp"

#include "json.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace circlewave;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    unsigned jobs = std::thread::hardware_concurrency();
};

fs::path resolve_out(const CommonArgs& args) {
    if (const char* env = std::getenv("CIRCLEWAVE_OUT"); env && *env) return fs::path(env);
    return fs::path(args.out_dir);
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_jobs = false) {
    cmd->add_option("--config", args.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", args.out_dir, "output directory (CIRCLEWAVE_OUT overrides)");
    cmd->add_option("--seed", args.seed, "override the random-initial-data seed");
    if (with_jobs) cmd->add_option("--jobs", args.jobs, "parallel workers for sweep points");
}

json meta_for(const ExperimentConfig& cfg, const Trajectory& traj) {
    json j = json::parse(cfg.to_json_text());
    j["run"] = {{"snapshots", traj.size()},
                {"t_begin", traj.t_begin()},
                {"t_end", traj.t_end()}};
    return j;
}

double transient_for(const ExperimentConfig& cfg) {
    return cfg.t_transient >= 0.0 ? cfg.t_transient : 0.75 * cfg.solver.t_end;
}

ClassificationReport classify_with_config(const ExperimentConfig& cfg,
                                          const std::optional<std::uint64_t>& seed) {
    const ExpressionAst f = cfg.parse_f();
    const GridField u0 = cfg.build_initial(seed);
    if (cfg.period) return classify_periodic(u0, f, *cfg.period, cfg.solver);
    return classify_autonomous(u0, f, cfg.solver);
}

int cmd_simulate(const CommonArgs& args) {
    const ExperimentConfig cfg = ExperimentConfig::load(args.config_path);
    const ExpressionAst f = cfg.parse_f();
    const GridField u0 = cfg.build_initial(args.seed);
    const fs::path out = resolve_out(args);

    const Trajectory traj = integrate(u0, f, cfg.solver);
    write_trajectory_csv(out / "trajectory.csv", traj);
    write_text_file(out / "trajectory.meta.json", meta_for(cfg, traj).dump(2) + "\n");
    write_profile_svg(out / "profile_final.svg", traj.states.back());

    if (cfg.analyses.count("zeros")) {
        const ZeroTrackSeries series = zero_track(traj);
        write_text_file(out / "zeros.csv", zero_track_csv(series));
        std::vector<double> t, c;
        for (const auto& p : series.points) {
            t.push_back(p.t);
            c.push_back(p.report.count);
        }
        write_timeline_svg(out / "zeros.svg", t, c, "zero count");
    }
    if (cfg.analyses.count("speed")) {
        const WaveSpeedEstimate est = estimate_wave_speed(traj, transient_for(cfg));
        write_text_file(out / "phase.csv", phase_csv(est));
        write_timeline_svg(out / "phase.svg", est.times, est.phase, "alignment phase");
    }
    if (cfg.analyses.count("spectrum")) {
        const LinearCoefficients lc = linearize_along(traj, f);
        const double t1 = traj.t_end();
        const double t0 = std::max(traj.t_begin(), t1 - cfg.spectrum.window);
        FiniteTimeSpectrumOptions opts;
        opts.t_qr = cfg.spectrum.t_qr;
        const SpectrumEstimate est = finite_time_spectrum(lc, t0, t1, cfg.spectrum.m, opts);
        write_text_file(out / "spectrum.csv", spectrum_csv(est));
    }
    if (cfg.analyses.count("classify"))
        write_text_file(out / "report.json", classification_json(classify_with_config(cfg, args.seed)));
    if (cfg.analyses.count("recurrence")) {
        const RecurrenceStats rec =
            recurrence_diagnostic(u0, f, cfg.solver, 0.25 * cfg.solver.t_end);
        json j = {{"t_return", rec.t_return}, {"gap", rec.gap}};
        write_text_file(out / "recurrence.json", j.dump(2) + "\n");
    }
    std::printf("simulate: %zu snapshots on [%.17g, %.17g]\n", traj.size(), traj.t_begin(),
                traj.t_end());
    return 0;
}

int cmd_classify(const CommonArgs& args) {
    const ExperimentConfig cfg = ExperimentConfig::load(args.config_path);
    const ClassificationReport rep = classify_with_config(cfg, args.seed);
    const fs::path out = resolve_out(args);
    write_text_file(out / "report.json", classification_json(rep));
    std::printf("classify: %s (c = %.6g, r = %.6g)\n", to_string(rep.verdict).c_str(),
                rep.wave_speed, rep.rotation);
    return 0;
}

int cmd_spectrum(const CommonArgs& args) {
    const ExperimentConfig cfg = ExperimentConfig::load(args.config_path);
    const ExpressionAst f = cfg.parse_f();
    const GridField u0 = cfg.build_initial(args.seed);
    const Trajectory traj = integrate(u0, f, cfg.solver);
    const LinearCoefficients lc = linearize_along(traj, f);
    const double t1 = traj.t_end();
    const double t0 = std::max(traj.t_begin(), t1 - cfg.spectrum.window);
    FiniteTimeSpectrumOptions opts;
    opts.t_qr = cfg.spectrum.t_qr;
    const SpectrumEstimate est = finite_time_spectrum(lc, t0, t1, cfg.spectrum.m, opts);
    write_text_file(resolve_out(args) / "spectrum.csv", spectrum_csv(est));
    std::printf("spectrum: top exponent %.6g over window [%.3f, %.3f]\n", est.exponents.front(),
                est.window_begin, est.window_end);
    return 0;
}

int cmd_zeros(const CommonArgs& args) {
    const ExperimentConfig cfg = ExperimentConfig::load(args.config_path);
    const ExpressionAst f = cfg.parse_f();
    const GridField u0 = cfg.build_initial(args.seed);
    const Trajectory traj = integrate(u0, f, cfg.solver);
    const ZeroTrackSeries series = zero_track(traj);
    write_text_file(resolve_out(args) / "zeros.csv", zero_track_csv(series));
    std::printf("zeros: %d -> %d over %zu snapshots (%zu drops, %zu increases)\n",
                series.points.front().report.count, series.points.back().report.count,
                series.points.size(), series.drop_indices.size(),
                series.increase_indices.size());
    return 0;
}

int cmd_subshift(const CommonArgs& args) {
    const ExperimentConfig cfg = ExperimentConfig::load(args.config_path);
    const int n_max = cfg.subshift_n_max.value_or(8);
    const subshift::NonwanderingDemo demo = subshift::nonwandering_demo(n_max);
    const std::string table = subshift_demo_table(demo);
    write_text_file(resolve_out(args) / "subshift_demo.txt", table);
    std::fputs(table.c_str(), stdout);
    const auto limits = subshift::limit_points(std::min(n_max, 20));
    for (const auto& l : limits) std::printf("limit point: %s\n", l.serialize().c_str());
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const ExperimentConfig base = ExperimentConfig::load(args.config_path);
    if (!base.sweep) throw ConfigError("sweep command requires a sweep block in the config");
    const SweepSpec sweep = *base.sweep;
    const fs::path out = resolve_out(args);

    struct PointResult {
        std::string status = "pending";
        ClassificationReport report;
    };
    std::vector<PointResult> results(sweep.values.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= sweep.values.size()) return;
            ExperimentConfig point = base;
            point.params[sweep.param] = sweep.values[i];
            point.sweep.reset();
            char dir_name[32];
            std::snprintf(dir_name, sizeof dir_name, "point_%03zu", i);
            const fs::path point_dir = out / dir_name;
            try {
                const ClassificationReport rep = classify_with_config(point, args.seed);
                write_text_file(point_dir / "report.json", classification_json(rep));
                write_text_file(point_dir / "config.json", point.to_json_text());
                results[i].report = rep;
                results[i].status = "ok";
            } catch (const Error& e) {
                results[i].status = std::string("error: ") + e.what();
                write_text_file(point_dir / "error.txt", results[i].status + "\n");
            }
        }
    };

    const unsigned jobs =
        std::max(1u, std::min(args.jobs, static_cast<unsigned>(sweep.values.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 0; j + 1 < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream agg;
    agg << "index,param,value,verdict,wave_speed,rotation,amplitude,fixed_point_residual,"
           "orbit_residual,status\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        char line[512];
        std::snprintf(line, sizeof line, "%zu,%s,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", i,
                      sweep.param.c_str(), sweep.values[i],
                      r.status == "ok" ? to_string(r.report.verdict).c_str() : "-",
                      r.report.wave_speed, r.report.rotation, r.report.amplitude,
                      r.report.fixed_point_residual, r.report.orbit_residual,
                      r.status == "ok" ? "ok" : r.status.c_str());
        agg << line;
    }
    write_text_file(out / "aggregate.csv", agg.str());
    std::printf("sweep: %zu points -> %s\n", sweep.values.size(),
                (out / "aggregate.csv").string().c_str());
    return 0;
}

int dispatch(int (*fn)(const CommonArgs&), const CommonArgs& args) {
    try {
        return fn(args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const BlowupError& e) {
        std::fprintf(stderr, "blow-up: %s\n", e.what());
        return 3;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral laboratory for reaction-diffusion dynamics on the circle"};
    app.require_subcommand(1);

    CommonArgs args;
    int (*fn)(const CommonArgs&) = nullptr;

    auto* simulate = app.add_subcommand("simulate", "integrate and dump the trajectory");
    add_common(simulate, args);
    simulate->callback([&] { fn = cmd_simulate; });

    auto* classify = app.add_subcommand("classify", "classify the long-run behavior");
    add_common(classify, args);
    classify->callback([&] { fn = cmd_classify; });

    auto* spectrum = app.add_subcommand("spectrum", "finite-time growth exponents");
    add_common(spectrum, args);
    spectrum->callback([&] { fn = cmd_spectrum; });

    auto* zeros = app.add_subcommand("zeros", "zero-number tracking");
    add_common(zeros, args);
    zeros->callback([&] { fn = cmd_zeros; });

    auto* subshift_cmd = app.add_subcommand("subshift", "shift-space recurrence demo");
    add_common(subshift_cmd, args);
    subshift_cmd->callback([&] { fn = cmd_subshift; });

    auto* sweep = app.add_subcommand("sweep", "parameter sweep of classifications");
    add_common(sweep, args, true);
    sweep->callback([&] { fn = cmd_sweep; });

    CLI11_PARSE(app, argc, argv);
    return dispatch(fn, args);
}
