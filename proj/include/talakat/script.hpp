#pragma once

// Talakat level scripts: the spawner section plus the boss section.
//
// The on-disk form is a relaxed JSON document (see docs/talakat-format.md).
// Samplers are written as comma separated strings and events as
// "verb,arg[,speed,angle]" strings.

#include "talakat/sampler.hpp"
#include "talakat/structured_text.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace talakat {

struct PatternStep {
    enum class Kind { Bullet, Wait, Ref };

    Kind kind = Kind::Bullet;
    std::string ref;  // spawner id when kind == Ref

    [[nodiscard]] static PatternStep bullet() { return {Kind::Bullet, {}}; }
    [[nodiscard]] static PatternStep wait() { return {Kind::Wait, {}}; }
    [[nodiscard]] static PatternStep spawner(std::string id) { return {Kind::Ref, std::move(id)}; }

    bool operator==(const PatternStep&) const = default;
};

struct SpawnerDef {
    std::vector<PatternStep> pattern;
    int pattern_time = 1;
    std::optional<int> pattern_repeat;  // nullopt repeats forever
    ValueSampler spawner_angle = ValueSampler::constant(0.0);
    ValueSampler spawner_radius = ValueSampler::constant(0.0);
    ValueSampler spawned_number = ValueSampler::constant(1.0);
    ValueSampler spawned_angle = ValueSampler::constant(0.0);
    ValueSampler spawned_speed = ValueSampler::constant(0.0);
    ValueSampler bullet_radius = ValueSampler::constant(8.0);
    ValueSampler bullet_color = ValueSampler::constant(0.0);

    bool operator==(const SpawnerDef&) const = default;
};

struct EventAction {
    enum class Kind { SpawnRef, SpawnBullet, ClearRef, ClearBullets, ClearSpawners };

    Kind kind = Kind::SpawnRef;
    std::string ref;               // SpawnRef / ClearRef
    std::optional<double> speed;   // always set for SpawnBullet
    std::optional<double> angle;   // always set for SpawnBullet

    bool operator==(const EventAction&) const = default;
};

struct BossEvent {
    double trigger = 1.0;  // health fraction in (0, 1]
    std::vector<EventAction> actions;

    bool operator==(const BossEvent&) const = default;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

struct BossDef {
    int health = 1;
    Vec2 position{0.5, 0.2};  // screen fractions
    std::vector<BossEvent> script;

    bool operator==(const BossDef&) const = default;
};

struct Script {
    std::map<std::string, SpawnerDef> spawners;
    BossDef boss;

    bool operator==(const Script&) const = default;
};

/// Parses and validates a document. Throws ParseError carrying the source
/// position and a dotted field path ("spawners.two.spawnedAngle").
[[nodiscard]] Script parse_script(std::string_view text);

/// Semantic checks for scripts built in memory (decoded chromosomes, bindings).
/// Returns one message per violation; empty means valid.
[[nodiscard]] std::vector<std::string> validation_errors(const Script& script);

/// Throws std::invalid_argument with the first violation.
void validate(const Script& script);

/// Canonical document: strict JSON, every field written out explicitly.
[[nodiscard]] std::string serialize(const Script& script);

/// Event string form used in documents ("spawn,one", "clear,bullets", ...).
[[nodiscard]] EventAction parse_event(std::string_view text);
[[nodiscard]] std::string format_event(const EventAction& action);

/// Words that cannot be used as spawner ids.
[[nodiscard]] bool is_reserved_id(std::string_view id);

}  // namespace talakat
