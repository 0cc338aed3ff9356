#include "talakat/simulator.hpp"

#include "talakat/hash.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace talakat {

namespace {

SamplerSet samplers_of(const SpawnerDef& def)
{
    return {def.spawner_angle, def.spawner_radius, def.spawned_number, def.spawned_angle,
            def.spawned_speed, def.bullet_radius, def.bullet_color};
}

bool on_screen(Vec2 p, const SimConfig& config)
{
    return p.x >= 0.0 && p.x < config.screen_width && p.y >= 0.0 && p.y < config.screen_height;
}

void spawn_spawner(World& world, const Level& level, std::vector<SpawnerEntity>& out, int def,
                   Vec2 pos, double heading, double speed)
{
    if (world.spawner_overflow) {
        return;
    }
    SpawnerEntity entity;
    entity.def = def;
    entity.pos = pos;
    const Vec2 dir = direction(heading);
    entity.velocity = {dir.x * speed, dir.y * speed};
    entity.heading = heading;
    entity.samplers = level.spawners[static_cast<std::size_t>(def)].samplers;
    out.push_back(std::move(entity));
}

void spawn_bullet(World& world, const Level& level, Vec2 pos, double heading, double speed,
                  double radius, int color)
{
    if (static_cast<int>(world.bullets.size()) >= level.config.max_live_bullets) {
        return;
    }
    const Vec2 dir = direction(heading);
    world.bullets.push_back({pos, {dir.x * speed, dir.y * speed}, radius, color});
}

void fire_events(World& world, const Level& level)
{
    const double fraction = static_cast<double>(world.boss_health) / world.boss_health_max;
    for (std::size_t i = 0; i < level.events.size(); ++i) {
        if (world.event_fired[i] != 0 || level.events[i].trigger < fraction) {
            continue;
        }
        world.event_fired[i] = 1;
        for (const Level::Command& command : level.events[i].actions) {
            switch (command.kind) {
            case EventAction::Kind::SpawnRef:
                spawn_spawner(world, level, world.spawners, command.spawner, level.anchor, command.angle,
                              command.speed);
                break;
            case EventAction::Kind::SpawnBullet:
                spawn_bullet(world, level, level.anchor, command.angle, command.speed, 8.0, 0);
                break;
            case EventAction::Kind::ClearRef:
                std::erase_if(world.spawners,
                              [&](const SpawnerEntity& s) { return s.def == command.spawner; });
                break;
            case EventAction::Kind::ClearBullets: world.bullets.clear(); break;
            case EventAction::Kind::ClearSpawners: world.spawners.clear(); break;
            }
        }
    }
}

void run_pattern_step(World& world, const Level& level, const SpawnerEntity& entity,
                      const Level::Step& step, std::vector<SpawnerEntity>& newborn)
{
    if (step.kind == PatternStep::Kind::Wait) {
        return;
    }
    const SamplerSet& s = entity.samplers;
    const int count = std::max(1, static_cast<int>(std::lround(s[kSpawnedNumber].current)));
    const double radius = s[kSpawnerRadius].current;
    const double speed = s[kSpawnedSpeed].current;
    for (const double angle : arc_angles(entity.heading + s[kSpawnerAngle].current, s[kSpawnedAngle].current, count)) {
        const Vec2 dir = direction(angle);
        const Vec2 pos{entity.pos.x + dir.x * radius, entity.pos.y + dir.y * radius};
        if (step.kind == PatternStep::Kind::Bullet) {
            spawn_bullet(world, level, pos, angle, speed, s[kBulletRadius].current,
                         static_cast<int>(std::lround(s[kBulletColor].current)));
        } else {
            spawn_spawner(world, level, newborn, step.spawner, pos, angle, speed);
        }
    }
}

void update_spawners(World& world, const Level& level)
{
    std::vector<SpawnerEntity> newborn;
    for (SpawnerEntity& entity : world.spawners) {
        const Level::Spawner& def = level.spawners[static_cast<std::size_t>(entity.def)];
        if (entity.step_timer == 0) {
            run_pattern_step(world, level, entity, def.pattern[static_cast<std::size_t>(entity.pattern_index)], newborn);
            if (++entity.pattern_index == static_cast<int>(def.pattern.size())) {
                entity.pattern_index = 0;
                ++entity.repeats_done;
            }
        }
        entity.step_timer = (entity.step_timer + 1) % def.pattern_time;
        for (ValueSampler& sampler : entity.samplers) {
            sampler.step();
        }
    }
    world.spawners.insert(world.spawners.end(), std::make_move_iterator(newborn.begin()),
                          std::make_move_iterator(newborn.end()));
}

}  // namespace

void SimConfig::check() const
{
    if (!(screen_width > 0 && screen_height > 0 && player_speed > 0 && player_radius > 0 &&
          max_live_spawners > 0 && max_live_bullets > 0 && grid_cols > 0 && grid_rows > 0)) {
        throw std::invalid_argument("simulation config fields must be positive");
    }
    if (std::fmod(screen_width, grid_cols) != 0.0 || std::fmod(screen_height, grid_rows) != 0.0) {
        throw std::invalid_argument("grid must divide the screen evenly");
    }
    if (!(player_start.x >= 0 && player_start.x <= 1 && player_start.y >= 0 && player_start.y <= 1)) {
        throw std::invalid_argument("player start is a screen fraction in [0, 1]");
    }
}

std::array<int, 2> action_direction(Action action)
{
    switch (action) {
    case Action::Idle: return {0, 0};
    case Action::Up: return {0, -1};
    case Action::UpRight: return {1, -1};
    case Action::Right: return {1, 0};
    case Action::DownRight: return {1, 1};
    case Action::Down: return {0, 1};
    case Action::DownLeft: return {-1, 1};
    case Action::Left: return {-1, 0};
    case Action::UpLeft: return {-1, -1};
    }
    throw std::invalid_argument("bad action");
}

std::string_view action_name(Action action)
{
    static constexpr std::array<std::string_view, kActionCount> names{
        "idle", "up", "up-right", "right", "down-right", "down", "down-left", "left", "up-left"};
    return names[static_cast<std::size_t>(action)];
}

Vec2 direction(double degrees)
{
    const double radians = degrees * (std::numbers::pi / 180.0);
    return {std::sin(radians), std::cos(radians)};
}

std::vector<double> arc_angles(double center, double arc, int n)
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) {
        if (arc >= 360.0) {
            out.push_back(center + 360.0 * i / n);
        } else {
            out.push_back(center - arc / 2.0 + arc * (i + 0.5) / n);
        }
    }
    return out;
}

int Level::spawner_index(std::string_view id) const
{
    for (std::size_t i = 0; i < spawners.size(); ++i) {
        if (spawners[i].id == id) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

std::shared_ptr<const Level> compile_level(const Script& script, const SimConfig& config)
{
    validate(script);
    config.check();
    auto level = std::make_shared<Level>();
    level->config = config;
    for (const auto& [id, def] : script.spawners) {
        Level::Spawner spawner;
        spawner.id = id;
        spawner.pattern_time = def.pattern_time;
        spawner.pattern_repeat = def.pattern_repeat.value_or(0);
        spawner.samplers = samplers_of(def);
        level->spawners.push_back(std::move(spawner));
    }
    for (const auto& [id, def] : script.spawners) {
        auto& pattern = level->spawners[static_cast<std::size_t>(level->spawner_index(id))].pattern;
        for (const PatternStep& step : def.pattern) {
            pattern.push_back({step.kind, step.kind == PatternStep::Kind::Ref ? level->spawner_index(step.ref) : -1});
        }
    }
    for (const BossEvent& event : script.boss.script) {
        Level::Event compiled;
        compiled.trigger = event.trigger;
        for (const EventAction& action : event.actions) {
            compiled.actions.push_back({action.kind, action.ref.empty() ? -1 : level->spawner_index(action.ref),
                                        action.speed.value_or(0.0), action.angle.value_or(0.0)});
        }
        level->events.push_back(std::move(compiled));
    }
    level->anchor = {script.boss.position.x * config.screen_width, script.boss.position.y * config.screen_height};
    level->boss_health = script.boss.health;
    return level;
}

void advance_world(World& world, const Level& level)
{
    if (world.boss_dead) {
        throw std::logic_error("the level has already ended");
    }
    ++world.frame;
    --world.boss_health;
    fire_events(world, level);
    update_spawners(world, level);

    const SimConfig& config = level.config;
    for (Bullet& b : world.bullets) {
        b.pos.x += b.velocity.x;
        b.pos.y += b.velocity.y;
    }
    std::erase_if(world.bullets, [&](const Bullet& b) { return !on_screen(b.pos, config); });
    for (SpawnerEntity& s : world.spawners) {
        s.pos.x += s.velocity.x;
        s.pos.y += s.velocity.y;
    }
    std::erase_if(world.spawners, [&](const SpawnerEntity& s) {
        const int repeat = level.spawners[static_cast<std::size_t>(s.def)].pattern_repeat;
        return repeat > 0 && s.repeats_done >= repeat;
    });

    if (static_cast<int>(world.spawners.size()) > config.max_live_spawners) {
        world.spawner_overflow = true;
    }
    if (world.boss_health <= 0) {
        world.boss_health = 0;
        world.boss_dead = true;
    }
}

Vec2 move_player(Vec2 pos, Action action, const SimConfig& config)
{
    const auto [dx, dy] = action_direction(action);
    const double scale = (dx != 0 && dy != 0) ? config.player_speed / std::numbers::sqrt2 : config.player_speed;
    pos.x = std::clamp(pos.x + dx * scale, config.player_radius, config.screen_width - config.player_radius);
    pos.y = std::clamp(pos.y + dy * scale, config.player_radius, config.screen_height - config.player_radius);
    return pos;
}

bool collides(Vec2 player, std::span<const Bullet> bullets, const SimConfig& config)
{
    for (const Bullet& b : bullets) {
        const double dx = b.pos.x - player.x;
        const double dy = b.pos.y - player.y;
        const double reach = b.radius + config.player_radius;
        if (dx * dx + dy * dy < reach * reach) {
            return true;
        }
    }
    return false;
}

GameState::GameState(std::shared_ptr<const Level> level, World world, Vec2 player)
    : level_(std::move(level)), world_(std::move(world)), player_(player)
{
}

void GameState::advance(Action action)
{
    if (terminal()) {
        throw std::logic_error("cannot step a terminal state");
    }
    advance_world(world_, *level_);
    player_ = move_player(player_, action, level_->config);
    if (collides(player_, world_.bullets, level_->config)) {
        player_dead_ = true;
    }
}

GameState init(const Script& script, const SimConfig& config)
{
    auto level = compile_level(script, config);
    World world;
    world.boss_health = level->boss_health;
    world.boss_health_max = level->boss_health;
    world.event_fired.assign(level->events.size(), 0);
    const Vec2 player{config.player_start.x * config.screen_width, config.player_start.y * config.screen_height};
    return {std::move(level), std::move(world), player};
}

GameState step(GameState state, Action action)
{
    state.advance(action);
    return state;
}

std::array<int, 2> cell_of(Vec2 pos, const SimConfig& config)
{
    const int col = std::clamp(static_cast<int>(std::floor(pos.x / config.cell_width())), 0, config.grid_cols - 1);
    const int row = std::clamp(static_cast<int>(std::floor(pos.y / config.cell_height())), 0, config.grid_rows - 1);
    return {col, row};
}

Grid bullet_grid(std::span<const Bullet> bullets, const SimConfig& config)
{
    Grid grid{config.grid_cols, config.grid_rows,
              std::vector<int>(static_cast<std::size_t>(config.grid_cols * config.grid_rows), 0)};
    for (const Bullet& b : bullets) {
        const auto [col, row] = cell_of(b.pos, config);
        ++grid.counts[static_cast<std::size_t>(row * grid.cols + col)];
    }
    return grid;
}

std::vector<bool> occupancy_grid(const GameState& state)
{
    const Grid grid = bullet_grid(state.bullets(), state.config());
    std::vector<bool> out(grid.counts.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = grid.counts[i] > 0;
    }
    return out;
}

std::uint64_t state_hash(const GameState& state)
{
    Fnv1a h;
    const World& w = state.world();
    h.i64(w.frame);
    h.i64(w.boss_health);
    h.i64(w.boss_health_max);
    h.f64(state.player().x);
    h.f64(state.player().y);
    h.u64((state.player_dead() ? 1U : 0U) | (w.boss_dead ? 2U : 0U) | (w.spawner_overflow ? 4U : 0U));
    for (const std::uint8_t fired : w.event_fired) {
        h.u64(fired);
    }
    h.u64(w.bullets.size());
    for (const Bullet& b : w.bullets) {
        h.f64(b.pos.x);
        h.f64(b.pos.y);
        h.f64(b.velocity.x);
        h.f64(b.velocity.y);
        h.f64(b.radius);
        h.i64(b.color);
    }
    h.u64(w.spawners.size());
    for (const SpawnerEntity& s : w.spawners) {
        h.i64(s.def);
        h.f64(s.pos.x);
        h.f64(s.pos.y);
        h.f64(s.velocity.x);
        h.f64(s.velocity.y);
        h.f64(s.heading);
        h.i64(s.pattern_index);
        h.i64(s.repeats_done);
        h.i64(s.step_timer);
        for (const ValueSampler& v : s.samplers) {
            h.f64(v.current);
            h.f64(v.rate);
            h.i64(v.frame_counter);
        }
    }
    return h.value();
}

}  // namespace talakat
