#pragma once

// Deterministic fixed-timestep bullet-hell simulation.
//
// Screen coordinates are pixels with y pointing down. Angles are degrees,
// 0 points down the screen (towards the player) and grows counterclockwise,
// so direction(a) = (sin a, cos a).
//
// One call to GameState::advance runs, in order:
//   1. boss health -= 1
//   2. fire pending boss events whose trigger >= health / max health
//   3. update live spawners (fire the current pattern step every
//      patternTime frames, then step all samplers)
//   4. move bullets and spawners; drop off-screen bullets and expired spawners
//   5. move the player, clamped to the screen
//   6. collision, boss death and spawner overflow flags
// Phases 1-4 and the world half of phase 6 never look at the player, so the
// world can be advanced on its own (advance_world).

#include "talakat/script.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace talakat {

struct SimConfig {
    double screen_width = 384.0;
    double screen_height = 512.0;
    double player_speed = 4.0;
    double player_radius = 4.0;
    Vec2 player_start{0.5, 0.9};  // screen fractions
    int max_live_spawners = 100;
    int max_live_bullets = 4000;
    int grid_cols = 12;
    int grid_rows = 16;

    [[nodiscard]] double cell_width() const { return screen_width / grid_cols; }
    [[nodiscard]] double cell_height() const { return screen_height / grid_rows; }

    /// Throws std::invalid_argument when a field is non-positive or the grid
    /// does not tile the screen in whole pixels.
    void check() const;

    bool operator==(const SimConfig&) const = default;
};

/// Compass actions. The index is the wire value used in trace files.
enum class Action : std::uint8_t {
    Idle = 0,
    Up,
    UpRight,
    Right,
    DownRight,
    Down,
    DownLeft,
    Left,
    UpLeft,
};

inline constexpr int kActionCount = 9;

[[nodiscard]] constexpr Action action_from_index(int index) { return static_cast<Action>(index); }
[[nodiscard]] constexpr int action_index(Action action) { return static_cast<int>(action); }

/// Unit step (dx, dy) in {-1, 0, 1}^2 for an action, before speed scaling.
[[nodiscard]] std::array<int, 2> action_direction(Action action);

[[nodiscard]] std::string_view action_name(Action action);

[[nodiscard]] Vec2 direction(double degrees);

/// Child directions for n children spread over an arc centred on `center`.
[[nodiscard]] std::vector<double> arc_angles(double center, double arc, int n);

// Sampler slots of a spawner, in SpawnerDef field order.
enum SamplerSlot : std::size_t {
    kSpawnerAngle = 0,
    kSpawnerRadius,
    kSpawnedNumber,
    kSpawnedAngle,
    kSpawnedSpeed,
    kBulletRadius,
    kBulletColor,
    kSamplerSlots,
};

using SamplerSet = std::array<ValueSampler, kSamplerSlots>;

/// A Script with spawner ids resolved to indices, ready to simulate.
struct Level {
    struct Step {
        PatternStep::Kind kind = PatternStep::Kind::Bullet;
        int spawner = -1;
    };
    struct Spawner {
        std::string id;
        std::vector<Step> pattern;
        int pattern_time = 1;
        int pattern_repeat = 0;  // 0 repeats forever
        SamplerSet samplers;
    };
    struct Command {
        EventAction::Kind kind = EventAction::Kind::SpawnRef;
        int spawner = -1;
        double speed = 0.0;
        double angle = 0.0;
    };
    struct Event {
        double trigger = 1.0;
        std::vector<Command> actions;
    };

    std::vector<Spawner> spawners;
    std::vector<Event> events;
    Vec2 anchor;  // boss position in pixels
    int boss_health = 1;
    SimConfig config;

    [[nodiscard]] int spawner_index(std::string_view id) const;
};

[[nodiscard]] std::shared_ptr<const Level> compile_level(const Script& script, const SimConfig& config);

struct Bullet {
    Vec2 pos;
    Vec2 velocity;
    double radius = 8.0;
    int color = 0;
};

struct SpawnerEntity {
    int def = 0;
    Vec2 pos;
    Vec2 velocity;
    double heading = 0.0;  // assigned direction; emission centre = heading + spawnerAngle
    int pattern_index = 0;
    int repeats_done = 0;
    int step_timer = 0;
    SamplerSet samplers;
};

/// Everything that evolves independently of the player.
struct World {
    long frame = 0;
    int boss_health = 0;
    int boss_health_max = 0;
    std::vector<Bullet> bullets;
    std::vector<SpawnerEntity> spawners;
    std::vector<std::uint8_t> event_fired;
    bool boss_dead = false;
    bool spawner_overflow = false;
};

/// Runs phases 1-4 and the world flags of phase 6 for one frame.
void advance_world(World& world, const Level& level);

[[nodiscard]] Vec2 move_player(Vec2 pos, Action action, const SimConfig& config);

[[nodiscard]] bool collides(Vec2 player, std::span<const Bullet> bullets, const SimConfig& config);

class GameState {
public:
    GameState() = default;
    GameState(std::shared_ptr<const Level> level, World world, Vec2 player);

    [[nodiscard]] const Level& level() const { return *level_; }
    [[nodiscard]] const std::shared_ptr<const Level>& level_ptr() const { return level_; }
    [[nodiscard]] const SimConfig& config() const { return level_->config; }
    [[nodiscard]] const World& world() const { return world_; }
    [[nodiscard]] World& world() { return world_; }

    [[nodiscard]] long frame() const { return world_.frame; }
    [[nodiscard]] int boss_health() const { return world_.boss_health; }
    [[nodiscard]] int boss_health_max() const { return world_.boss_health_max; }
    [[nodiscard]] const std::vector<Bullet>& bullets() const { return world_.bullets; }
    [[nodiscard]] const std::vector<SpawnerEntity>& spawners() const { return world_.spawners; }
    [[nodiscard]] Vec2 player() const { return player_; }
    void set_player(Vec2 pos) { player_ = pos; }

    [[nodiscard]] bool player_dead() const { return player_dead_; }
    [[nodiscard]] bool boss_dead() const { return world_.boss_dead; }
    [[nodiscard]] bool spawner_overflow() const { return world_.spawner_overflow; }
    [[nodiscard]] bool terminal() const { return player_dead_ || world_.boss_dead; }

    /// Boss anchor in pixels.
    [[nodiscard]] Vec2 boss_position() const { return level_->anchor; }

    /// One frame in place. Throws std::logic_error on a terminal state.
    void advance(Action action);

private:
    std::shared_ptr<const Level> level_;
    World world_;
    Vec2 player_;
    bool player_dead_ = false;
};

[[nodiscard]] GameState init(const Script& script, const SimConfig& config = {});

/// Pure form of GameState::advance.
[[nodiscard]] GameState step(GameState state, Action action);

/// Per-cell bullet counts, row major (row * cols + col).
struct Grid {
    int cols = 0;
    int rows = 0;
    std::vector<int> counts;

    [[nodiscard]] int at(int col, int row) const { return counts[static_cast<std::size_t>(row * cols + col)]; }
    [[nodiscard]] bool occupied(int col, int row) const { return at(col, row) > 0; }
};

[[nodiscard]] std::array<int, 2> cell_of(Vec2 pos, const SimConfig& config);

[[nodiscard]] Grid bullet_grid(std::span<const Bullet> bullets, const SimConfig& config);

/// Occupancy (cell holds at least one bullet centre), row major.
[[nodiscard]] std::vector<bool> occupancy_grid(const GameState& state);

/// Stable digest of the full simulation state.
[[nodiscard]] std::uint64_t state_hash(const GameState& state);

}  // namespace talakat
