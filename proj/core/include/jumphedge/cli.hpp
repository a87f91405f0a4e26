#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jumphedge/hedge.hpp"
#include "jumphedge/model.hpp"
#include "jumphedge/pide.hpp"
#include "jumphedge/poisson.hpp"
#include "jumphedge/robust.hpp"
#include "jumphedge/sim.hpp"

namespace jumphedge::cli {

// Parsed and validated experiment description. Schema violations raise
// ConfigError with a JSON-pointer-style path into the offending field.
struct ExperimentConfig {
    std::string experiment;  // validate | price | hedge | robust | poisson | acceptance-suite
    double horizon = 1.0;
    double x0 = 0.0;
    std::optional<model::TrueModel> truth;
    std::optional<model::MisspecifiedModel> mis;
    std::optional<model::Payoff> payoff;
    sim::TimeGrid pide_time = sim::TimeGrid::uniform(1.0, 100);
    pide::SpaceGrid space;
    sim::TimeGrid sim_time = sim::TimeGrid::uniform(1.0, 256);
    model::ValidationGrid vgrid;
    model::ValidationLimits vlimits;
    std::vector<std::vector<double>> measure_theta;  // hedge: one row per measure
    std::optional<robust::FamilySpec> family;
    std::vector<int> criteria;  // acceptance-suite: subset of 1..14 (empty = all)
    int n_paths = 10000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<double> checkpoints;
    double cross_check_budget = 0.02;
    double extrapolation_budget = 0.10;
    bool use_cache = false;
    nlohmann::ordered_json raw;
};

ExperimentConfig parse_config(const nlohmann::ordered_json& doc);
ExperimentConfig load_config(const std::filesystem::path& file);

// Built-in experiment presets (resolved configs); crit01..crit14 run single
// acceptance criteria.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

// Runs one experiment, writing report.json, CSV artifacts and plots/*.svg
// under out_dir. Returns 0 on pass, 2 on verdict failure (config errors and
// numerical failures surface as exceptions; the CLI maps them to 1 and 3).
int run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

// Re-renders the plot files from the report files already in dir.
void emit_plots(const std::filesystem::path& dir);

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    nlohmann::ordered_json report;
};

// Runs the requested acceptance criteria (1..14, empty = all); prints one
// PASS/FAIL line per criterion to log, writes one report per criterion plus
// a summary. Criterion 14 reruns the others single-threaded and compares
// serialized reports byte for byte.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& criteria,
                                            const std::filesystem::path& out_dir,
                                            std::ostream& log);

}  // namespace jumphedge::cli
