#include "talakat/evaluation.hpp"

#include "talakat/metrics.hpp"

#include <numeric>

namespace talakat {

bool check_constraints(const PlayTrace& trace, const SimConfig& sim)
{
    if (trace.frames_survived <= 0) {
        return false;
    }
    if (trace.spawner_overflow || trace.max_live_spawners_seen > sim.max_live_spawners) {
        return false;
    }
    return 2 * trace.frames_with_ten_plus_bullets > trace.frames_survived;
}

double fitness(const PlayTrace& trace, bool feasible, const FitnessOptions& options)
{
    if (trace.boss_health_max <= 0 || trace.frames_survived <= 0) {
        return 0.0;
    }
    const double base = 1.0 - static_cast<double>(trace.remaining_boss_health) / trace.boss_health_max;
    if (feasible) {
        return base;
    }
    const long bullet_frames = options.infeasible_bullet_threshold >= 10 ? trace.frames_with_ten_plus_bullets
                                                                          : trace.frames_with_any_bullet;
    return base * static_cast<double>(bullet_frames) / static_cast<double>(trace.frames_survived);
}

double frame_mean(const std::vector<double>& values)
{
    if (values.empty()) {
        return 0.0;
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

EvaluationResult summarize(PlayTrace trace, const SimConfig& sim, const FitnessOptions& options)
{
    EvaluationResult out;
    out.entropy = entropy_metric(trace.actions);
    out.risk = frame_mean(trace.per_frame_risk);
    out.distribution = frame_mean(trace.per_frame_distribution);
    out.bins = {metric_bin(out.entropy), metric_bin(out.risk), metric_bin(out.distribution)};
    out.feasible = check_constraints(trace, sim);
    out.fitness = fitness(trace, out.feasible, options);
    out.trace = std::move(trace);
    return out;
}

EvaluationResult evaluate(const Script& script, const AgentConfig& agent, const SimConfig& sim,
                          const FitnessOptions& options)
{
    return summarize(play(script, agent, sim), sim, options);
}

}  // namespace talakat
