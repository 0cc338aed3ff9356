#pragma once

// Trace documents shared with other tools.
//
// PlayTrace file: agent settings, actions as integers 0-8, per-frame metric
// arrays and the outcome. Golden trace file: a script hash, the simulator
// config, an action list and checkpoint states used for cross-implementation
// conformance. Both are strict JSON.

#include "talakat/agent.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace talakat {

/// FNV-1a of the canonical serialization, so formatting does not matter.
[[nodiscard]] std::uint64_t script_hash(const Script& script);
[[nodiscard]] std::string hash_hex(std::uint64_t value);
[[nodiscard]] std::uint64_t parse_hash_hex(std::string_view text);

struct TraceDocument {
    PlayTrace trace;
    std::optional<std::uint64_t> script_hash;
    bool from_agent = true;  // false for human recordings
};

[[nodiscard]] std::string format_trace(const TraceDocument& doc);
/// Throws std::runtime_error on malformed documents.
[[nodiscard]] TraceDocument parse_trace(std::string_view text);

[[nodiscard]] std::string format_sim_config(const SimConfig& config);

struct Checkpoint {
    long frame = 0;
    std::size_t bullet_count = 0;
    std::size_t spawner_count = 0;
    Vec2 player;
    int boss_health = 0;
    bool player_dead = false;
    std::uint64_t state_hash = 0;
    std::vector<Vec2> bullets;  // centres in simulation order

    bool operator==(const Checkpoint&) const = default;
};

struct GoldenTrace {
    std::uint64_t script_hash = 0;
    SimConfig config;
    std::vector<Action> actions;
    std::vector<Checkpoint> checkpoints;

    bool operator==(const GoldenTrace&) const = default;
};

[[nodiscard]] Checkpoint checkpoint_of(const GameState& state);

/// Plays `actions` from init and records the listed frames (0 is the initial
/// state). Frames past the end of the run are skipped.
[[nodiscard]] GoldenTrace record_golden(const Script& script, const SimConfig& config,
                                        std::vector<Action> actions, std::vector<long> frames);

[[nodiscard]] std::string format_golden(const GoldenTrace& golden);
[[nodiscard]] GoldenTrace parse_golden(std::string_view text);

/// Re-simulates a golden trace; one message per mismatch. Positions are
/// compared within `tolerance` pixels, everything else exactly.
[[nodiscard]] std::vector<std::string> check_golden(const Script& script, const GoldenTrace& golden,
                                                    double tolerance = 1e-6);

/// Replays a trace against a script and returns the first frame (1-based)
/// whose recorded metrics or outcome disagree with the simulation, or
/// nullopt when the trace reproduces.
[[nodiscard]] std::optional<long> find_divergence(const Script& script, const PlayTrace& trace,
                                                  const SimConfig& config = {});

}  // namespace talakat
