#pragma once

// Best-first playing agent with dexterity and strategy error.
//
// Node score:  0.5 * progress - lose + 0.5 * safety - 0.25 * future
//   progress  frames survived since the decision root along the path
//   lose      1 when the player is dead at the node
//   safety    frames an idle player survives from the node, capped at 10
//   future    distance to the nearest cell whose 3x3 block holds the fewest
//             bullets, over the screen diagonal, scaled to [0, 10]
//
// Dexterity error repeats each chosen action max(1, round(|N(0, sigma)|))
// frames (at most 30). Strategy error is the node expansion budget per
// decision.

#include "talakat/random.hpp"
#include "talakat/simulator.hpp"

#include <cstdint>
#include <deque>
#include <string_view>
#include <vector>

namespace talakat {

enum class SkillLevel { Low, Medium, High };

[[nodiscard]] SkillLevel parse_skill_level(std::string_view text);
[[nodiscard]] std::string_view skill_level_name(SkillLevel level);

/// Gaussian std-dev of the repeat length: 10 / 6 / 2.
[[nodiscard]] double dexterity_sigma(SkillLevel level);

/// Node expansions per decision: 400 / 600 / 800.
[[nodiscard]] int strategy_budget(SkillLevel level);

struct AgentConfig {
    double dexterity_sigma = 10.0;
    int strategy_budget = 400;
    std::uint64_t seed = 0;

    [[nodiscard]] static AgentConfig from_levels(SkillLevel dexterity, SkillLevel strategy,
                                                 std::uint64_t seed);

    bool operator==(const AgentConfig&) const = default;
};

inline constexpr int kSafetyCap = 10;
inline constexpr int kMaxRepeat = 30;
inline constexpr double kFutureScale = 10.0;

struct HeuristicTerms {
    double progress = 0.0;
    double lose = 0.0;
    double safety = 0.0;
    double future = 0.0;
};

[[nodiscard]] constexpr double heuristic_value(const HeuristicTerms& t)
{
    return 0.5 * t.progress - t.lose + 0.5 * t.safety - 0.25 * t.future;
}

/// Reference evaluation on a full state: safety is measured by stepping
/// clones with Idle.
[[nodiscard]] HeuristicTerms heuristic_terms(const GameState& state, int progress);
[[nodiscard]] double heuristic(const GameState& state, int progress);

/// Future term for a bullet grid: 0 when the player's own cell is among the
/// emptiest, otherwise the distance to the nearest emptiest cell.
[[nodiscard]] double future_term(const Grid& grid, Vec2 player, const SimConfig& config);

/// World timeline shared by every node of a search. The world never reads
/// the player, so it is advanced once per frame and each node only carries
/// the player position.
class Lookahead {
public:
    explicit Lookahead(const GameState& root);

    /// Forget frames before `frame` (the new decision root).
    void drop_before(long frame);

    /// False when the level ended before `frame`.
    [[nodiscard]] bool has_frame(long frame);
    [[nodiscard]] bool level_ends_at(long frame);
    [[nodiscard]] bool collides(long frame, Vec2 player);
    [[nodiscard]] int safety(long frame, Vec2 player);
    [[nodiscard]] double future(long frame, Vec2 player);
    /// True when no bullet exists in frames [first, last] or up to the end of
    /// the level, whichever comes first.
    [[nodiscard]] bool empty_through(long first, long last);

    [[nodiscard]] const SimConfig& config() const { return level_->config; }

private:
    struct Disc {
        double x;
        double y;
        double radius;
    };
    struct Snapshot {
        std::vector<int> cell_start;
        std::vector<Disc> discs;
        std::vector<int> counts;
        double max_radius = 0.0;
        bool level_ends = false;
        bool targets_ready = false;
        std::vector<std::uint8_t> is_target;
        std::vector<int> targets;
    };

    Snapshot& at(long frame);
    void extend();
    void prepare_targets(Snapshot& snap) const;

    std::shared_ptr<const Level> level_;
    World world_;
    long base_frame_;
    std::deque<Snapshot> frames_;
};

/// Best-first search from `state`; returns the first action on the path to
/// the best node found within `budget` expansions.
[[nodiscard]] Action decide(const GameState& state, Lookahead& lookahead, int budget);
[[nodiscard]] Action decide(const GameState& state, const AgentConfig& config);

struct PlayTrace {
    AgentConfig agent;
    std::vector<Action> actions;
    long frames_survived = 0;
    int remaining_boss_health = 0;
    int boss_health_max = 0;
    bool died = false;
    long frames_with_any_bullet = 0;
    long frames_with_ten_plus_bullets = 0;
    int max_live_spawners_seen = 0;
    bool spawner_overflow = false;
    std::vector<double> per_frame_risk;
    std::vector<double> per_frame_distribution;

    bool operator==(const PlayTrace&) const = default;
};

/// Repeat length for one decision.
[[nodiscard]] int repeat_length(double sigma, Rng& rng);

[[nodiscard]] PlayTrace play(const Script& script, const AgentConfig& agent, const SimConfig& sim = {});

/// Replays recorded actions through the simulator and rebuilds the trace
/// tallies (used to check that traces reproduce).
[[nodiscard]] PlayTrace replay(const Script& script, std::span<const Action> actions,
                               const SimConfig& sim = {});

}  // namespace talakat
