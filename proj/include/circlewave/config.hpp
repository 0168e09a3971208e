#ifndef CIRCLEWAVE_CONFIG_HPP
#define CIRCLEWAVE_CONFIG_HPP

#include "circlewave/expr.hpp"
#include "circlewave/field.hpp"
#include "circlewave/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace circlewave {

struct RandomInitialSpec {
    std::uint64_t seed = 1;
    double amplitude = 0.5;
    int max_mode = 4;
};

struct SweepSpec {
    std::string param;
    std::vector<double> values;
};

struct SpectrumSpec {
    int m = 11;
    double window = 20.0;
    double t_qr = 0.1;
};

/// One experiment: a nonlinearity, solver settings, initial data and the
/// analyses to run.  Identical configs produce bit-identical CSV output.
struct ExperimentConfig {
    std::string f_source;
    std::map<std::string, double> params;
    std::optional<double> period; // T of a time-periodic f
    SolverConfig solver;
    // exactly one of the three initial-data sources
    std::optional<std::string> initial_expression; // expression in x
    std::optional<std::string> initial_file;
    std::optional<RandomInitialSpec> initial_random;
    std::set<std::string> analyses; // classify, zeros, speed, spectrum, recurrence
    std::optional<SweepSpec> sweep;
    SpectrumSpec spectrum;
    std::optional<int> subshift_n_max;
    double t_transient = -1.0; // <0: late quarter of the run

    static ExperimentConfig load(const std::filesystem::path& path);
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    ExpressionAst parse_f() const;                  // throws ConfigError with diagnostics
    GridField build_initial(std::optional<std::uint64_t> seed_override = {}) const;
};

/// Deterministic random trigonometric data: amplitude-scaled coefficients
/// on modes 0..max_mode decaying like 1/(1+k).
GridField random_initial(int n, const RandomInitialSpec& spec);

} // namespace circlewave

#endif
