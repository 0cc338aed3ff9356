#pragma once

// Level evaluation: play the level with the agent, then derive behaviour
// metrics, feasibility and fitness from the trace.

#include "talakat/agent.hpp"

#include <array>

namespace talakat {

struct FitnessOptions {
    /// Bullet count that makes a frame count towards the infeasible fitness
    /// multiplier. 1 follows "frames that contain bullets"; 10 matches the
    /// feasibility threshold.
    int infeasible_bullet_threshold = 1;
};

/// Feasible iff the spawner cap was never exceeded and more than half of the
/// frames held at least 10 bullets. An empty trace is infeasible.
[[nodiscard]] bool check_constraints(const PlayTrace& trace, const SimConfig& sim);

/// 1 - remaining / max health, times the bullet-frame fraction when infeasible.
[[nodiscard]] double fitness(const PlayTrace& trace, bool feasible, const FitnessOptions& options = {});

struct EvaluationResult {
    double entropy = 0.0;
    double risk = 0.0;
    double distribution = 0.0;
    std::array<int, 3> bins{};
    bool feasible = false;
    double fitness = 0.0;
    PlayTrace trace;
};

/// Mean of a per-frame series; 0 for an empty series.
[[nodiscard]] double frame_mean(const std::vector<double>& values);

[[nodiscard]] EvaluationResult summarize(PlayTrace trace, const SimConfig& sim, const FitnessOptions& options = {});

[[nodiscard]] EvaluationResult evaluate(const Script& script, const AgentConfig& agent,
                                        const SimConfig& sim = {}, const FitnessOptions& options = {});

}  // namespace talakat
