#include "talakat/trace_io.hpp"

#include "talakat/hash.hpp"
#include "talakat/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace talakat {

using nlohmann::json;

namespace {

std::vector<int> action_ints(const std::vector<Action>& actions)
{
    std::vector<int> out;
    out.reserve(actions.size());
    for (const Action a : actions) {
        out.push_back(action_index(a));
    }
    return out;
}

std::vector<Action> actions_from(const json& j)
{
    std::vector<Action> out;
    out.reserve(j.size());
    for (const json& v : j) {
        const int i = v.get<int>();
        if (i < 0 || i >= kActionCount) {
            throw std::runtime_error("action " + std::to_string(i) + " outside 0-8");
        }
        out.push_back(action_from_index(i));
    }
    return out;
}

json sim_json(const SimConfig& c)
{
    return {{"screenWidth", c.screen_width},
            {"screenHeight", c.screen_height},
            {"playerSpeed", c.player_speed},
            {"playerRadius", c.player_radius},
            {"playerStart", {c.player_start.x, c.player_start.y}},
            {"maxLiveSpawners", c.max_live_spawners},
            {"maxLiveBullets", c.max_live_bullets},
            {"gridCols", c.grid_cols},
            {"gridRows", c.grid_rows}};
}

SimConfig sim_from(const json& j)
{
    SimConfig c;
    c.screen_width = j.at("screenWidth").get<double>();
    c.screen_height = j.at("screenHeight").get<double>();
    c.player_speed = j.at("playerSpeed").get<double>();
    c.player_radius = j.at("playerRadius").get<double>();
    c.player_start = {j.at("playerStart").at(0).get<double>(), j.at("playerStart").at(1).get<double>()};
    c.max_live_spawners = j.at("maxLiveSpawners").get<int>();
    c.max_live_bullets = j.value("maxLiveBullets", c.max_live_bullets);
    c.grid_cols = j.at("gridCols").get<int>();
    c.grid_rows = j.at("gridRows").get<int>();
    c.check();
    return c;
}

template <typename F>
auto guarded(std::string_view what, F&& body)
{
    try {
        return body();
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string(what) + ": " + e.what());
    }
}

}  // namespace

std::uint64_t script_hash(const Script& script)
{
    Fnv1a h;
    h.str(serialize(script));
    return h.value();
}

std::string hash_hex(std::uint64_t value)
{
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

std::uint64_t parse_hash_hex(std::string_view text)
{
    if (text.empty() || text.size() > 16) {
        throw std::runtime_error("bad hash '" + std::string(text) + "'");
    }
    std::uint64_t v = 0;
    for (const char c : text) {
        int d = 0;
        if (c >= '0' && c <= '9') {
            d = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            d = c - 'a' + 10;
        } else if (c >= 'A' && c <= 'F') {
            d = c - 'A' + 10;
        } else {
            throw std::runtime_error("bad hash '" + std::string(text) + "'");
        }
        v = (v << 4) | static_cast<std::uint64_t>(d);
    }
    return v;
}

std::string format_trace(const TraceDocument& doc)
{
    const PlayTrace& t = doc.trace;
    json j;
    j["format"] = "talakat-trace";
    j["version"] = 1;
    if (doc.from_agent) {
        j["agent"] = {{"dexteritySigma", t.agent.dexterity_sigma},
                      {"strategyBudget", t.agent.strategy_budget},
                      {"seed", t.agent.seed}};
    } else {
        j["agent"] = nullptr;
    }
    if (doc.script_hash) {
        j["scriptHash"] = hash_hex(*doc.script_hash);
    }
    j["actions"] = action_ints(t.actions);
    j["framesSurvived"] = t.frames_survived;
    j["remainingBossHealth"] = t.remaining_boss_health;
    j["bossHealthMax"] = t.boss_health_max;
    j["died"] = t.died;
    j["framesWithAnyBullet"] = t.frames_with_any_bullet;
    j["framesWithTenPlusBullets"] = t.frames_with_ten_plus_bullets;
    j["maxLiveSpawnersSeen"] = t.max_live_spawners_seen;
    j["spawnerOverflow"] = t.spawner_overflow;
    j["perFrameRisk"] = t.per_frame_risk;
    j["perFrameDistribution"] = t.per_frame_distribution;
    return j.dump() + "\n";
}

TraceDocument parse_trace(std::string_view text)
{
    return guarded("trace", [&] {
        const json j = json::parse(text);
        if (j.value("format", "") != "talakat-trace") {
            throw std::runtime_error("not a talakat trace document");
        }
        TraceDocument doc;
        PlayTrace& t = doc.trace;
        const json& agent = j.at("agent");
        doc.from_agent = !agent.is_null();
        if (doc.from_agent) {
            t.agent.dexterity_sigma = agent.at("dexteritySigma").get<double>();
            t.agent.strategy_budget = agent.at("strategyBudget").get<int>();
            t.agent.seed = agent.at("seed").get<std::uint64_t>();
        }
        if (j.contains("scriptHash")) {
            doc.script_hash = parse_hash_hex(j.at("scriptHash").get<std::string>());
        }
        t.actions = actions_from(j.at("actions"));
        t.frames_survived = j.at("framesSurvived").get<long>();
        t.remaining_boss_health = j.at("remainingBossHealth").get<int>();
        t.boss_health_max = j.at("bossHealthMax").get<int>();
        t.died = j.at("died").get<bool>();
        t.frames_with_any_bullet = j.at("framesWithAnyBullet").get<long>();
        t.frames_with_ten_plus_bullets = j.at("framesWithTenPlusBullets").get<long>();
        t.max_live_spawners_seen = j.at("maxLiveSpawnersSeen").get<int>();
        t.spawner_overflow = j.at("spawnerOverflow").get<bool>();
        t.per_frame_risk = j.at("perFrameRisk").get<std::vector<double>>();
        t.per_frame_distribution = j.at("perFrameDistribution").get<std::vector<double>>();
        if (static_cast<long>(t.actions.size()) != t.frames_survived) {
            throw std::runtime_error("trace has " + std::to_string(t.actions.size()) +
                                     " actions but framesSurvived " + std::to_string(t.frames_survived));
        }
        return doc;
    });
}

std::string format_sim_config(const SimConfig& config)
{
    return sim_json(config).dump(2) + "\n";
}

Checkpoint checkpoint_of(const GameState& state)
{
    Checkpoint c;
    c.frame = state.frame();
    c.bullet_count = state.bullets().size();
    c.spawner_count = state.spawners().size();
    c.player = state.player();
    c.boss_health = state.boss_health();
    c.player_dead = state.player_dead();
    c.state_hash = state_hash(state);
    c.bullets.reserve(state.bullets().size());
    for (const Bullet& b : state.bullets()) {
        c.bullets.push_back(b.pos);
    }
    return c;
}

GoldenTrace record_golden(const Script& script, const SimConfig& config, std::vector<Action> actions,
                          std::vector<long> frames)
{
    std::sort(frames.begin(), frames.end());
    frames.erase(std::unique(frames.begin(), frames.end()), frames.end());
    GoldenTrace golden;
    golden.script_hash = script_hash(script);
    golden.config = config;
    GameState state = init(script, config);
    std::size_t next = 0;
    std::size_t used = 0;
    while (next < frames.size()) {
        if (frames[next] == state.frame()) {
            golden.checkpoints.push_back(checkpoint_of(state));
            ++next;
            continue;
        }
        if (state.terminal() || used == actions.size()) {
            break;
        }
        state.advance(actions[used++]);
    }
    actions.resize(used);
    golden.actions = std::move(actions);
    return golden;
}

std::string format_golden(const GoldenTrace& golden)
{
    json j;
    j["format"] = "talakat-golden";
    j["version"] = 1;
    j["scriptHash"] = hash_hex(golden.script_hash);
    j["config"] = sim_json(golden.config);
    j["actions"] = action_ints(golden.actions);
    j["checkpoints"] = json::array();
    for (const Checkpoint& c : golden.checkpoints) {
        json bullets = json::array();
        for (const Vec2& p : c.bullets) {
            bullets.push_back({p.x, p.y});
        }
        j["checkpoints"].push_back({{"frame", c.frame},
                                    {"bulletCount", c.bullet_count},
                                    {"spawnerCount", c.spawner_count},
                                    {"player", {c.player.x, c.player.y}},
                                    {"bossHealth", c.boss_health},
                                    {"playerDead", c.player_dead},
                                    {"stateHash", hash_hex(c.state_hash)},
                                    {"bullets", bullets}});
    }
    return j.dump(1) + "\n";
}

GoldenTrace parse_golden(std::string_view text)
{
    return guarded("golden trace", [&] {
        const json j = json::parse(text);
        if (j.value("format", "") != "talakat-golden") {
            throw std::runtime_error("not a talakat golden trace document");
        }
        GoldenTrace g;
        g.script_hash = parse_hash_hex(j.at("scriptHash").get<std::string>());
        g.config = sim_from(j.at("config"));
        g.actions = actions_from(j.at("actions"));
        for (const json& c : j.at("checkpoints")) {
            Checkpoint cp;
            cp.frame = c.at("frame").get<long>();
            cp.bullet_count = c.at("bulletCount").get<std::size_t>();
            cp.spawner_count = c.at("spawnerCount").get<std::size_t>();
            cp.player = {c.at("player").at(0).get<double>(), c.at("player").at(1).get<double>()};
            cp.boss_health = c.at("bossHealth").get<int>();
            cp.player_dead = c.at("playerDead").get<bool>();
            cp.state_hash = parse_hash_hex(c.at("stateHash").get<std::string>());
            for (const json& p : c.at("bullets")) {
                cp.bullets.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            }
            g.checkpoints.push_back(std::move(cp));
        }
        return g;
    });
}

std::vector<std::string> check_golden(const Script& script, const GoldenTrace& golden, double tolerance)
{
    std::vector<std::string> problems;
    if (script_hash(script) != golden.script_hash) {
        problems.push_back("script hash " + hash_hex(script_hash(script)) + " differs from golden " +
                           hash_hex(golden.script_hash));
        return problems;
    }
    const auto near = [tolerance](Vec2 a, Vec2 b) {
        return std::fabs(a.x - b.x) <= tolerance && std::fabs(a.y - b.y) <= tolerance;
    };
    GameState state = init(script, golden.config);
    std::size_t used = 0;
    for (const Checkpoint& want : golden.checkpoints) {
        while (state.frame() < want.frame && used < golden.actions.size() && !state.terminal()) {
            state.advance(golden.actions[used++]);
        }
        const std::string at = "frame " + std::to_string(want.frame) + ": ";
        if (state.frame() != want.frame) {
            problems.push_back(at + "simulation stopped at frame " + std::to_string(state.frame()));
            break;
        }
        const Checkpoint got = checkpoint_of(state);
        if (got.bullet_count != want.bullet_count) {
            problems.push_back(at + "bullet count " + std::to_string(got.bullet_count) + " != " +
                               std::to_string(want.bullet_count));
        }
        if (got.spawner_count != want.spawner_count) {
            problems.push_back(at + "spawner count " + std::to_string(got.spawner_count) + " != " +
                               std::to_string(want.spawner_count));
        }
        if (got.boss_health != want.boss_health) {
            problems.push_back(at + "boss health " + std::to_string(got.boss_health) + " != " +
                               std::to_string(want.boss_health));
        }
        if (got.player_dead != want.player_dead) {
            problems.push_back(at + "player dead flag differs");
        }
        if (!near(got.player, want.player)) {
            problems.push_back(at + "player position differs");
        }
        if (got.bullets.size() == want.bullets.size()) {
            for (std::size_t i = 0; i < got.bullets.size(); ++i) {
                if (!near(got.bullets[i], want.bullets[i])) {
                    problems.push_back(at + "bullet " + std::to_string(i) + " position differs");
                    break;
                }
            }
        }
        if (got.state_hash != want.state_hash) {
            problems.push_back(at + "state hash " + hash_hex(got.state_hash) + " != " + hash_hex(want.state_hash));
        }
    }
    return problems;
}

std::optional<long> find_divergence(const Script& script, const PlayTrace& trace, const SimConfig& config)
{
    GameState state = init(script, config);
    for (std::size_t i = 0; i < trace.actions.size(); ++i) {
        const long frame = static_cast<long>(i) + 1;
        if (state.terminal()) {
            return frame;
        }
        state.advance(trace.actions[i]);
        const Grid grid = bullet_grid(state.bullets(), state.config());
        const bool risk_ok = i >= trace.per_frame_risk.size() ||
                             trace.per_frame_risk[i] == risk_metric(grid, state.player(), state.config());
        const bool dist_ok = i >= trace.per_frame_distribution.size() ||
                             trace.per_frame_distribution[i] == distribution_metric(grid);
        if (!risk_ok || !dist_ok) {
            return frame;
        }
    }
    if (state.player_dead() != trace.died || state.boss_health() != trace.remaining_boss_health) {
        return static_cast<long>(trace.actions.size());
    }
    return std::nullopt;
}

}  // namespace talakat
