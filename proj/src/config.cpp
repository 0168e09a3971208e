#include "circlewave/config.hpp"

#include "circlewave/errors.hpp"
#include "circlewave/io.hpp"

#include "json.hpp"

#include <cmath>

namespace circlewave {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double unit_from(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

} // namespace

GridField random_initial(int n, const RandomInitialSpec& spec) {
    std::uint64_t state = spec.seed;
    std::vector<double> amp_cos(static_cast<std::size_t>(spec.max_mode + 1));
    std::vector<double> amp_sin(static_cast<std::size_t>(spec.max_mode + 1));
    for (int k = 0; k <= spec.max_mode; ++k) {
        amp_cos[static_cast<std::size_t>(k)] =
            spec.amplitude * (2.0 * unit_from(state) - 1.0) / (1.0 + k);
        amp_sin[static_cast<std::size_t>(k)] =
            spec.amplitude * (2.0 * unit_from(state) - 1.0) / (1.0 + k);
    }
    return GridField::from_function(n, [&](double x) {
        double v = amp_cos[0];
        for (int k = 1; k <= spec.max_mode; ++k)
            v += amp_cos[static_cast<std::size_t>(k)] * std::cos(k * x) +
                 amp_sin[static_cast<std::size_t>(k)] * std::sin(k * x);
        return v;
    });
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return from_json_text(text);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        // f defaults to the heat equation; the subshift command needs none
        cfg.f_source = j.value("f", "0");
        if (j.contains("params"))
            for (const auto& [k, v] : j.at("params").items())
                cfg.params[k] = v.get<double>();
        if (j.contains("T")) cfg.period = j.at("T").get<double>();
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            if (s.contains("N")) cfg.solver.n = s.at("N").get<int>();
            if (s.contains("dt")) cfg.solver.dt = s.at("dt").get<double>();
            if (s.contains("t_end")) cfg.solver.t_end = s.at("t_end").get<double>();
            if (s.contains("record_stride")) cfg.solver.record_stride = s.at("record_stride").get<int>();
            if (s.contains("dealias")) cfg.solver.dealias = s.at("dealias").get<bool>();
            if (s.contains("blowup_threshold"))
                cfg.solver.blowup_threshold = s.at("blowup_threshold").get<double>();
        }
        if (j.contains("initial")) {
            const auto& ini = j.at("initial");
            if (ini.contains("expression")) cfg.initial_expression = ini.at("expression").get<std::string>();
            if (ini.contains("file")) cfg.initial_file = ini.at("file").get<std::string>();
            if (ini.contains("random")) {
                RandomInitialSpec r;
                const auto& rr = ini.at("random");
                if (rr.contains("seed")) r.seed = rr.at("seed").get<std::uint64_t>();
                if (rr.contains("amplitude")) r.amplitude = rr.at("amplitude").get<double>();
                if (rr.contains("max_mode")) r.max_mode = rr.at("max_mode").get<int>();
                cfg.initial_random = r;
            }
        }
        if (j.contains("analyses"))
            for (const auto& a : j.at("analyses")) cfg.analyses.insert(a.get<std::string>());
        if (j.contains("sweep")) {
            SweepSpec s;
            s.param = j.at("sweep").at("param").get<std::string>();
            for (const auto& v : j.at("sweep").at("values")) s.values.push_back(v.get<double>());
            cfg.sweep = s;
        }
        if (j.contains("spectrum")) {
            const auto& s = j.at("spectrum");
            if (s.contains("m")) cfg.spectrum.m = s.at("m").get<int>();
            if (s.contains("window")) cfg.spectrum.window = s.at("window").get<double>();
            if (s.contains("t_qr")) cfg.spectrum.t_qr = s.at("t_qr").get<double>();
        }
        if (j.contains("subshift") && j.at("subshift").contains("n_max"))
            cfg.subshift_n_max = j.at("subshift").at("n_max").get<int>();
        if (j.contains("t_transient")) cfg.t_transient = j.at("t_transient").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config structure: ") + e.what());
    }

    const int sources = (cfg.initial_expression ? 1 : 0) + (cfg.initial_file ? 1 : 0) +
                        (cfg.initial_random ? 1 : 0);
    if (sources > 1)
        throw ConfigError("config declares more than one initial-data source");
    cfg.solver.validate();
    if (cfg.period && !(*cfg.period > 0.0)) throw ConfigError("T must be positive");
    return cfg;
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["f"] = f_source;
    if (!params.empty()) j["params"] = params;
    if (period) j["T"] = *period;
    j["solver"] = {{"N", solver.n},
                   {"dt", solver.dt},
                   {"t_end", solver.t_end},
                   {"record_stride", solver.record_stride},
                   {"dealias", solver.dealias},
                   {"blowup_threshold", solver.blowup_threshold}};
    if (initial_expression) j["initial"]["expression"] = *initial_expression;
    if (initial_file) j["initial"]["file"] = *initial_file;
    if (initial_random)
        j["initial"]["random"] = {{"seed", initial_random->seed},
                                  {"amplitude", initial_random->amplitude},
                                  {"max_mode", initial_random->max_mode}};
    if (!analyses.empty()) j["analyses"] = analyses;
    if (sweep) j["sweep"] = {{"param", sweep->param}, {"values", sweep->values}};
    j["spectrum"] = {{"m", spectrum.m}, {"window", spectrum.window}, {"t_qr", spectrum.t_qr}};
    if (subshift_n_max) j["subshift"]["n_max"] = *subshift_n_max;
    if (t_transient >= 0.0) j["t_transient"] = t_transient;
    return j.dump(2) + "\n";
}

ExpressionAst ExperimentConfig::parse_f() const {
    try {
        return parse_nonlinearity(f_source, params);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("cannot parse f: ") + e.what());
    }
}

GridField ExperimentConfig::build_initial(std::optional<std::uint64_t> seed_override) const {
    if (initial_expression) {
        ExpressionAst profile;
        try {
            profile = parse_expression(*initial_expression, {"x"}, params);
        } catch (const ParseError& e) {
            throw ConfigError(std::string("cannot parse initial expression: ") + e.what());
        }
        const CompiledExpr compiled(profile);
        return GridField::from_function(solver.n, [&compiled](double x) {
            const double args[1] = {x};
            return compiled.eval(args);
        });
    }
    if (initial_file) return read_field_csv(*initial_file, solver.n);
    RandomInitialSpec spec = initial_random.value_or(RandomInitialSpec{});
    if (seed_override) spec.seed = *seed_override;
    return random_initial(solver.n, spec);
}

} // namespace circlewave
