#pragma once

// Experiment runs: one agent configuration, an archive, N generations, with
// the archive persisted after every generation so runs can resume.

#include "talakat/archive.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace talakat {

struct ExperimentConfig {
    SkillLevel dexterity = SkillLevel::Low;
    SkillLevel strategy = SkillLevel::Low;
    long generations = 20;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::filesystem::path out;
    ArchiveConfig archive;
    SimConfig sim;
    FitnessOptions fitness;

    [[nodiscard]] AgentConfig agent() const { return AgentConfig::from_levels(dexterity, strategy, 0); }
};

/// Reads a JSON config document. Every key is optional; unknown keys are
/// rejected. Sim overrides go under "sim" with the trace file key names.
[[nodiscard]] ExperimentConfig parse_experiment_config(std::string_view text);

/// Settings that decide the archive contents (not generations, jobs, out).
/// Stored in the archive manifest and compared on resume.
[[nodiscard]] std::string experiment_identity(const ExperimentConfig& config);

struct GenerationLine {
    GenerationReport report;
    std::uint64_t archive_hash = 0;
};

[[nodiscard]] std::string format_generation_line(const GenerationLine& line);

/// Runs or resumes an experiment in config.out (when out is empty nothing is
/// written). `on_generation` sees every generation completed by this call.
Archive run_experiment(const ExperimentConfig& config,
                       const std::function<void(const GenerationLine&)>& on_generation = {});

/// Bin frequencies over cells whose best feasible member has fitness 1.
struct EliteHistogram {
    int elites = 0;
    std::array<std::array<double, kBinsPerDimension>, 3> frequency{};
};

[[nodiscard]] EliteHistogram elite_histogram(const Archive& archive);

inline constexpr std::array<std::string_view, 3> kDimensionNames{"entropy", "risk", "distribution"};

}  // namespace talakat
