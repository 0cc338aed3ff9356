// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include "talakat/archive.hpp"
#include "talakat/metrics.hpp"
#include "talakat/trace_io.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace talakat;
using talakat::testing::crossfire_script;
using talakat::testing::read_data;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few failure messages of a criterion.
class Checker {
public:
    void expect(bool ok, const std::string& what)
    {
        if (ok) {
            return;
        }
        ++failures_;
        if (failures_ <= 3) {
            messages_ += (messages_.empty() ? "" : "; ") + what;
        }
    }

    [[nodiscard]] Outcome outcome(const std::string& summary) const
    {
        if (failures_ == 0) {
            return {true, summary};
        }
        return {false, std::to_string(failures_) + " failure(s): " + messages_};
    }

private:
    int failures_ = 0;
    std::string messages_;
};

std::string fmt(double v, int precision = 4)
{
    std::ostringstream out;
    out.precision(precision);
    out << v;
    return out.str();
}

double heading_of(Vec2 v)
{
    double deg = std::atan2(v.x, v.y) * 180.0 / std::numbers::pi;
    return deg < 0 ? deg + 360.0 : deg;
}

double angle_gap(double a, double b)
{
    const double d = std::fmod(std::fabs(a - b), 360.0);
    return std::min(d, 360.0 - d);
}

// ---------------------------------------------------------------------------

Outcome crossfire_conformance()
{
    Checker c;
    const Script script = crossfire_script();
    constexpr double kTol = 1e-9;

    const GoldenTrace golden = parse_golden(read_data("golden/crossfire.golden.json"));
    c.expect(golden.script_hash == script_hash(script), "golden script hash differs");
    for (const std::string& problem : check_golden(script, golden)) {
        c.expect(false, "golden: " + problem);
    }

    GameState s = init(script);
    const Level& level = s.level();
    const int two = level.spawner_index("two");
    const int three = level.spawner_index("three");
    const Vec2 anchor = s.boss_position();

    // "one" emits four "two" children 90 degrees apart on every volley; the
    // fan turns 10 degrees every 12 frames (3 volleys at patternTime 4).
    int volleys = 0;
    for (long f = 1; f <= 120; ++f) {
        s.advance(golden.actions[static_cast<std::size_t>(f - 1)]);
        std::vector<double> headings;
        for (const SpawnerEntity& e : s.spawners()) {
            if (e.def == two && e.repeats_done == 0 && e.step_timer == 0) {
                c.expect(e.pos == anchor, "child not at the anchor");
                headings.push_back(e.heading);
            }
        }
        if (headings.empty()) {
            continue;
        }
        c.expect(f % 4 == 1, "volley at frame " + std::to_string(f));
        c.expect(headings.size() == 4, "volley of " + std::to_string(headings.size()) + " children");
        const double centre = 10.0 * static_cast<double>(volleys / 3);
        for (std::size_t i = 0; i < headings.size(); ++i) {
            c.expect(angle_gap(headings[i], centre + 90.0 * static_cast<double>(i)) < kTol,
                     "child heading " + fmt(headings[i], 12) + " at frame " + std::to_string(f));
        }
        ++volleys;

        // next frame each child fires 3 bullets over a 30 degree arc at speed 4
        const GameState next = step(s, golden.actions[static_cast<std::size_t>(f)]);
        if (next.player_dead()) {
            continue;
        }
        std::vector<double> fired;
        for (std::size_t i = 0; i < next.bullets().size(); ++i) {
            const Bullet& b = next.bullets()[i];
            const double dx = b.pos.x - b.velocity.x - anchor.x;
            const double dy = b.pos.y - b.velocity.y - anchor.y;
            if (std::hypot(dx, dy) < 1e-9) {
                c.expect(std::fabs(std::hypot(b.velocity.x, b.velocity.y) - 4.0) < 1e-12, "bullet speed");
                fired.push_back(heading_of(b.velocity));
            }
        }
        c.expect(fired.size() == 12, "volley fired " + std::to_string(fired.size()) + " bullets");
        std::size_t k = 0;
        for (std::size_t i = 0; i < 4 && k + 3 <= fired.size(); ++i) {
            for (const double offset : {-10.0, 0.0, 10.0}) {
                c.expect(angle_gap(fired[k++], centre + 90.0 * static_cast<double>(i) + offset) < kTol,
                         "bullet heading at frame " + std::to_string(f + 1));
            }
        }
    }
    c.expect(volleys == 30, "expected 30 volleys in 120 frames, saw " + std::to_string(volleys));

    // the 50% health event clears all spawners and spawns "three"
    World w = init(script).world();
    while (w.frame < 1499) {
        advance_world(w, level);
    }
    c.expect(w.event_fired[1] == 0, "half-health event fired early");
    c.expect(std::any_of(w.spawners.begin(), w.spawners.end(),
                         [three](const SpawnerEntity& e) { return e.def != three; }),
             "spawners before the event");
    advance_world(w, level);
    c.expect(w.boss_health == 1500 && w.event_fired[1] == 1, "half-health event at frame 1500");
    c.expect(w.spawners.size() == 1 && w.spawners[0].def == three, "only three after the event");
    return c.outcome(std::to_string(golden.checkpoints.size()) + " checkpoints, " + std::to_string(volleys) +
                     " volleys");
}

// ---------------------------------------------------------------------------

Outcome health_law()
{
    Checker c;
    const Script script = crossfire_script();
    const GoldenTrace golden = parse_golden(read_data("golden/crossfire.golden.json"));

    // surviving run: replay the recorded survivor
    GameState s = init(script);
    for (const Action a : golden.actions) {
        const int before = s.boss_health();
        s.advance(a);
        c.expect(s.boss_health() == before - 1, "health step at frame " + std::to_string(s.frame()));
        if (s.terminal()) {
            break;
        }
    }
    c.expect(s.boss_dead() && !s.player_dead(), "survivor did not reach boss death");
    c.expect(s.frame() == 3000, "survivor run lasted " + std::to_string(s.frame()) + " frames");

    // the world timeline ignores actions: three different action streams agree
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(0, kActionCount - 1);
    for (int trial = 0; trial < 3; ++trial) {
        GameState t = init(script);
        while (!t.terminal()) {
            const int before = t.boss_health();
            t.advance(trial == 0 ? Action::Idle : action_from_index(pick(rng)));
            c.expect(t.boss_health() == before - 1, "health step in trial " + std::to_string(trial));
            c.expect(t.boss_health() == 3000 - static_cast<int>(t.frame()), "health not 3000 - frame");
        }
    }
    return c.outcome("3000 frames, -1 per frame");
}

// ---------------------------------------------------------------------------

struct Scene {
    std::string name;
    GameState state;
    int progress;
    bool expect_dead;
    int expect_safety;  // -1: no fixed expectation
};

// Independent terms: straight-line bullets with removal off screen, idle
// player, brute-force 3x3 neighbourhood counts.
HeuristicTerms oracle_terms(const GameState& s, int progress)
{
    const SimConfig& cfg = s.config();
    HeuristicTerms t;
    t.progress = progress;
    t.lose = s.player_dead() ? 1.0 : 0.0;
    if (s.player_dead()) {
        t.safety = 0;
    } else {
        t.safety = kSafetyCap;
        const long frames_left = s.boss_health();
        for (int k = 1; k <= kSafetyCap; ++k) {
            bool hit = false;
            for (const Bullet& b : s.bullets()) {
                bool alive = true;
                Vec2 p = b.pos;
                for (int j = 1; j <= k && alive; ++j) {
                    p = {p.x + b.velocity.x, p.y + b.velocity.y};
                    alive = p.x >= 0 && p.x < cfg.screen_width && p.y >= 0 && p.y < cfg.screen_height;
                }
                const double r = b.radius + cfg.player_radius;
                if (alive && std::pow(p.x - s.player().x, 2) + std::pow(p.y - s.player().y, 2) < r * r) {
                    hit = true;
                }
            }
            if (hit) {
                t.safety = k - 1;
                break;
            }
            if (k >= frames_left) {
                break;
            }
        }
    }
    const double w = cfg.cell_width();
    const double h = cfg.cell_height();
    std::vector<int> around(static_cast<std::size_t>(cfg.grid_cols * cfg.grid_rows), 0);
    for (int row = 0; row < cfg.grid_rows; ++row) {
        for (int col = 0; col < cfg.grid_cols; ++col) {
            for (const Bullet& b : s.bullets()) {
                const int bc = static_cast<int>(std::floor(b.pos.x / w));
                const int br = static_cast<int>(std::floor(b.pos.y / h));
                if (std::abs(bc - col) <= 1 && std::abs(br - row) <= 1) {
                    ++around[static_cast<std::size_t>(row * cfg.grid_cols + col)];
                }
            }
        }
    }
    const int fewest = *std::min_element(around.begin(), around.end());
    double best = std::numeric_limits<double>::infinity();
    for (int row = 0; row < cfg.grid_rows; ++row) {
        for (int col = 0; col < cfg.grid_cols; ++col) {
            if (around[static_cast<std::size_t>(row * cfg.grid_cols + col)] != fewest) {
                continue;
            }
            const double cx = std::clamp(s.player().x, col * w, (col + 1) * w);
            const double cy = std::clamp(s.player().y, row * h, (row + 1) * h);
            best = std::min(best, std::hypot(s.player().x - cx, s.player().y - cy));
        }
    }
    t.future = 10.0 * best / std::hypot(cfg.screen_width, cfg.screen_height);
    return t;
}

std::vector<Scene> heuristic_scenes()
{
    const Script quiet = parse_script(
        "{spawners: {s: {pattern: [\"wait\"]}}, boss: {bossHealth: 500, script: [{health: 1, events: [\"spawn,s\"]}]}}");
    const Script short_level = parse_script(
        "{spawners: {s: {pattern: [\"wait\"]}}, boss: {bossHealth: 4, script: [{health: 1, events: [\"spawn,s\"]}]}}");
    const auto base = [](const Script& script, Vec2 player) {
        GameState s = init(script);
        s.advance(Action::Idle);
        s.set_player(player);
        return s;
    };
    const auto with = [](GameState s, std::vector<Bullet> bullets) {
        s.world().bullets = std::move(bullets);
        return s;
    };
    std::vector<Scene> scenes;
    const Vec2 p{192, 400};
    // empty screen: safety capped at 10, future 0
    scenes.push_back({"empty", base(quiet, p), 0, false, 10});
    scenes.push_back({"empty, progress 7", base(quiet, p), 7, false, 10});
    // a bullet falling onto the player hits after k frames -> safety k-1
    for (const int k : {1, 2, 5, 10, 11}) {
        const double gap = 12.0 + 3.0 * (k - 1) + 1.0;  // touches on frame k
        scenes.push_back({"falling, contact in " + std::to_string(k),
                          with(base(quiet, p), {{{p.x, p.y - gap}, {0, 3}, 8, 0}}), k, false,
                          k <= 10 ? k - 1 : 10});
    }
    // a bullet passing beside the player never hits
    scenes.push_back({"grazing", with(base(quiet, p), {{{p.x + 12.5, 300}, {0, 3}, 8, 0}}), 3, false, 10});
    // a bullet that would hit on frame 5 but leaves the screen on frame 1
    scenes.push_back(
        {"leaves screen", with(base(quiet, {380, 200}), {{{383.5, 170}, {0.6, 6}, 8, 0}}), 2, false, 10});
    // the nearest of two threats decides
    scenes.push_back({"two threats",
                      with(base(quiet, p), {{{p.x, p.y - 31}, {0, 3}, 8, 0}, {{p.x - 21, p.y}, {3, 0}, 8, 0}}), 4,
                      false, 3});
    // the level ends before the threat arrives: safety capped
    scenes.push_back({"level ends first", with(base(short_level, p), {{{p.x, p.y - 30}, {0, 3}, 8, 0}}), 1, false,
                      10});
    // dead states: lose = 1, safety 0
    {
        GameState s = with(base(quiet, p), {{{p.x, p.y - 14}, {0, 3}, 8, 0}});
        s.advance(Action::Idle);
        scenes.push_back({"dead", s, 1, true, 0});
        scenes.push_back({"dead, progress 9", s, 9, true, 0});
    }
    // crowded screens exercise the future term
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ux(0.0, 384.0);
    std::uniform_real_distribution<double> uy(0.0, 512.0);
    std::uniform_real_distribution<double> uv(-4.0, 4.0);
    for (const int n : {3, 20, 60, 120, 200, 400, 800}) {
        std::vector<Bullet> bullets;
        for (int i = 0; i < n; ++i) {
            bullets.push_back({{ux(rng), uy(rng)}, {uv(rng), uv(rng)}, 4.0 + (i % 3) * 4.0, 0});
        }
        const Vec2 player{std::clamp(ux(rng), 4.0, 380.0), std::clamp(uy(rng), 4.0, 508.0)};
        scenes.push_back({"random " + std::to_string(n), with(base(quiet, player), bullets), n % 17, false, -1});
    }
    return scenes;
}

Outcome heuristic_equation()
{
    Checker c;
    const std::vector<Scene> scenes = heuristic_scenes();
    bool saw_cap = false;
    bool saw_lose = false;
    for (const Scene& scene : scenes) {
        const HeuristicTerms got = heuristic_terms(scene.state, scene.progress);
        const HeuristicTerms want = oracle_terms(scene.state, scene.progress);
        c.expect(got.progress == want.progress, scene.name + ": progress");
        c.expect(got.lose == want.lose, scene.name + ": lose");
        c.expect(got.safety == want.safety, scene.name + ": safety " + fmt(got.safety) + " vs " + fmt(want.safety));
        c.expect(std::fabs(got.future - want.future) <= 1e-12, scene.name + ": future");
        c.expect(scene.state.player_dead() == scene.expect_dead, scene.name + ": dead flag");
        if (scene.expect_safety >= 0) {
            c.expect(got.safety == scene.expect_safety, scene.name + ": expected safety");
        }
        const double formula = 0.5 * got.progress - got.lose + 0.5 * got.safety - 0.25 * got.future;
        c.expect(heuristic(scene.state, scene.progress) == formula, scene.name + ": heuristic value");
        saw_cap = saw_cap || got.safety == kSafetyCap;
        saw_lose = saw_lose || got.lose == 1.0;
    }
    c.expect(scenes.size() == 20, "expected 20 scenes");
    c.expect(saw_cap && saw_lose, "cap and lose cases present");
    return c.outcome(std::to_string(scenes.size()) + " states");
}

// ---------------------------------------------------------------------------

PlayTrace constructed_trace(long frames, int remaining, int max_health, long any, long ten, int spawners,
                            bool overflow)
{
    PlayTrace t;
    t.actions.assign(static_cast<std::size_t>(frames), Action::Idle);
    t.frames_survived = frames;
    t.remaining_boss_health = remaining;
    t.boss_health_max = max_health;
    t.died = remaining > 0;
    t.frames_with_any_bullet = any;
    t.frames_with_ten_plus_bullets = ten;
    t.max_live_spawners_seen = spawners;
    t.spawner_overflow = overflow;
    t.per_frame_risk.assign(static_cast<std::size_t>(frames), 0.0);
    t.per_frame_distribution.assign(static_cast<std::size_t>(frames), 0.0);
    return t;
}

Outcome constraints_and_fitness()
{
    Checker c;
    const SimConfig sim;
    struct Case {
        const char* name;
        PlayTrace trace;
        bool feasible;
        double fitness;  // infeasible multiplier: frames with any bullet
    };
    const Case cases[] = {
        {"win, dense", constructed_trace(3000, 0, 3000, 3000, 3000, 5, false), true, 1.0},
        {"win, exactly half dense", constructed_trace(1000, 0, 1000, 1000, 500, 5, false), false, 1.0},
        {"win, one past half", constructed_trace(1000, 0, 1000, 900, 501, 5, false), true, 1.0},
        {"death at 25%", constructed_trace(500, 1500, 2000, 500, 400, 5, false), true, 0.25},
        {"death, sparse", constructed_trace(400, 600, 1000, 100, 50, 5, false), false, 0.4 * 0.25},
        {"win, sparse", constructed_trace(2000, 0, 2000, 1500, 200, 5, false), false, 0.75},
        {"no bullets", constructed_trace(1000, 0, 1000, 0, 0, 1, false), false, 0.0},
        {"overflow", constructed_trace(1000, 0, 1000, 800, 1000, 101, true), false, 0.8},
        {"spawners at the cap", constructed_trace(1000, 0, 1000, 1000, 1000, 100, false), true, 1.0},
        {"death, half bullets", constructed_trace(1200, 2800, 4000, 600, 600, 3, false), false, 0.3 * 0.5},
    };
    for (const Case& k : cases) {
        const bool feasible = check_constraints(k.trace, sim);
        c.expect(feasible == k.feasible, std::string(k.name) + ": feasibility");
        c.expect(std::fabs(fitness(k.trace, feasible) - k.fitness) < 1e-12,
                 std::string(k.name) + ": fitness " + fmt(fitness(k.trace, feasible)));
        const EvaluationResult r = summarize(k.trace, sim);
        c.expect(r.feasible == k.feasible && std::fabs(r.fitness - k.fitness) < 1e-12,
                 std::string(k.name) + ": summary");
    }
    return c.outcome("10 traces");
}

// ---------------------------------------------------------------------------

struct Record {
    Chromosome chromosome;
    EvaluationResult result;
};

// Wraps the agent evaluator and remembers every evaluation by seed.
class RecordingEvaluator {
public:
    explicit RecordingEvaluator(Evaluator inner) : inner_(std::move(inner)) {}

    [[nodiscard]] Evaluator evaluator()
    {
        return [this](const Chromosome& c, std::uint64_t seed) {
            EvaluationResult r = inner_(c, seed);
            r.trace.actions.clear();
            r.trace.per_frame_risk.clear();
            r.trace.per_frame_distribution.clear();
            std::lock_guard lock(mutex_);
            records_[seed] = {c, r};
            return r;
        };
    }

    [[nodiscard]] const Record& at(std::uint64_t seed) const { return records_.at(seed); }
    void clear() { records_.clear(); }

private:
    Evaluator inner_;
    std::mutex mutex_;
    std::map<std::uint64_t, Record> records_;
};

// Expected cells after one generation: old members first, then children in
// event order, stably sorted by fitness; overflow removes the weakest
// infeasible members, then the weakest feasible ones.
std::map<CellKey, Cell> expected_after(const Archive& before, const std::vector<Member>& children, int capacity,
                                       std::size_t& trimmed)
{
    std::map<CellKey, std::vector<Member>> all;
    for (const auto& [key, cell] : before.cells()) {
        for (const Member& m : cell.feasible) {
            all[key].push_back(m);
        }
        for (const Member& m : cell.infeasible) {
            all[key].push_back(m);
        }
    }
    for (const Member& m : children) {
        all[m.key].push_back(m);
    }
    trimmed = 0;
    std::map<CellKey, Cell> out;
    for (auto& [key, members] : all) {
        Cell cell;
        for (const Member& m : members) {
            (m.feasible ? cell.feasible : cell.infeasible).push_back(m);
        }
        const auto by_fitness = [](const Member& a, const Member& b) { return a.fitness > b.fitness; };
        std::stable_sort(cell.feasible.begin(), cell.feasible.end(), by_fitness);
        std::stable_sort(cell.infeasible.begin(), cell.infeasible.end(), by_fitness);
        while (cell.size() > static_cast<std::size_t>(capacity)) {
            (cell.infeasible.empty() ? cell.feasible : cell.infeasible).pop_back();
            ++trimmed;
        }
        out[key] = std::move(cell);
    }
    return out;
}

struct SmokeRun {
    std::vector<std::uint64_t> hashes;
    std::vector<int> elite_counts;  // index 0 is the initial archive
    Outcome properties;
};

constexpr std::uint64_t kSmokeSeed = 1;
constexpr int kSmokeGenerations = 20;

SmokeRun smoke_run(int jobs, bool check_properties)
{
    SmokeRun run;
    Checker c;
    const ArchiveConfig config;
    RecordingEvaluator recorder(agent_evaluator(AgentConfig::from_levels(SkillLevel::Low, SkillLevel::Low, 0)));
    const Evaluator evaluator = recorder.evaluator();
    Archive archive = init_archive(config, kSmokeSeed, evaluator, jobs);
    run.hashes.push_back(archive.hash());
    run.elite_counts.push_back(archive.elite_count());
    const auto check_capacity = [&](long generation) {
        for (const auto& [key, cell] : archive.cells()) {
            c.expect(cell.size() <= static_cast<std::size_t>(config.cell_capacity),
                     "cell over capacity at generation " + std::to_string(generation));
        }
    };
    // the initial population is only trimmed at the first generation boundary
    std::size_t feasible_children = 0;
    for (int g = 1; g <= kSmokeGenerations; ++g) {
        const Archive before = archive;
        recorder.clear();
        const GenerationReport report = run_generation(archive, evaluator, jobs);
        run.hashes.push_back(archive.hash());
        run.elite_counts.push_back(archive.elite_count());
        if (!check_properties) {
            continue;
        }
        check_capacity(g);
        std::vector<Member> children;
        for (int e = 0; e < config.matings_per_generation; ++e) {
            const std::uint64_t seed = evaluation_seed(kSmokeSeed, g, e);
            const Record& r = recorder.at(seed);
            children.push_back(make_member(r.chromosome, r.result, seed));
            feasible_children += r.result.feasible ? 1 : 0;
        }
        std::size_t trimmed = 0;
        const std::map<CellKey, Cell> expected = expected_after(before, children, config.cell_capacity, trimmed);
        c.expect(expected == archive.cells(), "trimming differs from oracle at generation " + std::to_string(g));
        c.expect(trimmed == report.trimmed, "trim count at generation " + std::to_string(g));
        for (const auto& [key, cell] : before.cells()) {
            if (cell.feasible.empty()) {
                continue;
            }
            const Cell* now = archive.find(key);
            c.expect(now != nullptr && !now->feasible.empty() &&
                         now->feasible.front().fitness >= cell.feasible.front().fitness,
                     "best feasible fitness dropped at generation " + std::to_string(g));
        }
    }
    run.properties = c.outcome("");
    run.properties.detail = run.properties.pass
                                ? std::to_string(archive.cells().size()) + " cells, " +
                                      std::to_string(feasible_children) + " feasible children, hash " +
                                      hash_hex(archive.hash())
                                : run.properties.detail;
    return run;
}

int default_jobs()
{
    return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

SmokeRun& first_smoke_run()
{
    static SmokeRun run = smoke_run(default_jobs(), true);
    return run;
}

Outcome archive_properties()
{
    const SmokeRun& first = first_smoke_run();
    // the repeat uses a different thread count; the hash must not depend on it
    const SmokeRun second = smoke_run(default_jobs() == 1 ? 2 : 1, false);
    Outcome out = first.properties;
    if (first.hashes != second.hashes) {
        out.pass = false;
        out.detail += (out.detail.empty() ? "" : "; ") + std::string("archive hashes differ between runs");
    }
    return out;
}

Outcome elite_trend()
{
    const SmokeRun& run = first_smoke_run();
    int steps = 0;
    int non_decreasing = 0;
    for (std::size_t i = 1; i < run.elite_counts.size(); ++i) {
        ++steps;
        non_decreasing += run.elite_counts[i] >= run.elite_counts[i - 1] ? 1 : 0;
    }
    const double share = static_cast<double>(non_decreasing) / steps;
    const int last = run.elite_counts.back();
    std::string counts;
    for (const int e : run.elite_counts) {
        counts += (counts.empty() ? "" : ",") + std::to_string(e);
    }
    return {share >= 0.9 && last >= 1,
            "non-decreasing " + std::to_string(non_decreasing) + "/" + std::to_string(steps) + ", final " +
                std::to_string(last) + " (counts " + counts + ")"};
}

// ---------------------------------------------------------------------------

double brute_risk(const std::vector<Bullet>& bullets, Vec2 player, const SimConfig& cfg)
{
    const double w = cfg.cell_width();
    const double h = cfg.cell_height();
    const int pc = static_cast<int>(player.x / w);
    const int pr = static_cast<int>(player.y / h);
    int cells = 0;
    int hot = 0;
    for (int r = pr - 1; r <= pr + 1; ++r) {
        for (int col = pc - 1; col <= pc + 1; ++col) {
            if (r < 0 || col < 0 || r >= cfg.grid_rows || col >= cfg.grid_cols) {
                continue;
            }
            ++cells;
            hot += std::any_of(bullets.begin(), bullets.end(), [&](const Bullet& b) {
                return b.pos.x >= col * w && b.pos.x < (col + 1) * w && b.pos.y >= r * h && b.pos.y < (r + 1) * h;
            });
        }
    }
    return static_cast<double>(hot) / cells;
}

double brute_distribution(const std::vector<Bullet>& bullets, const SimConfig& cfg)
{
    std::vector<std::vector<bool>> hot(static_cast<std::size_t>(cfg.grid_rows),
                                       std::vector<bool>(static_cast<std::size_t>(cfg.grid_cols), false));
    for (const Bullet& b : bullets) {
        hot[static_cast<std::size_t>(b.pos.y / cfg.cell_height())][static_cast<std::size_t>(b.pos.x / cfg.cell_width())] =
            true;
    }
    int n = 0;
    for (const auto& row : hot) {
        n += static_cast<int>(std::count(row.begin(), row.end(), true));
    }
    return static_cast<double>(n) / (cfg.grid_rows * cfg.grid_cols);
}

Outcome metric_oracles()
{
    Checker c;
    const SimConfig cfg;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ux(0.0, 384.0);
    std::uniform_real_distribution<double> uy(0.0, 512.0);
    std::uniform_int_distribution<int> count(0, 300);
    for (int scene = 0; scene < 100; ++scene) {
        std::vector<Bullet> bullets;
        const int n = scene < 5 ? scene : count(rng);
        for (int i = 0; i < n; ++i) {
            bullets.push_back({{ux(rng), uy(rng)}, {}, 8, 0});
        }
        const Vec2 player{std::clamp(ux(rng), 4.0, 380.0), std::clamp(uy(rng), 4.0, 508.0)};
        const Grid grid = bullet_grid(bullets, cfg);
        c.expect(risk_metric(grid, player, cfg) == brute_risk(bullets, player, cfg),
                 "risk on scene " + std::to_string(scene));
        c.expect(distribution_metric(grid) == brute_distribution(bullets, cfg),
                 "distribution on scene " + std::to_string(scene));
    }

    for (int a = 0; a < kActionCount; ++a) {
        const std::vector<Action> constant(500, action_from_index(a));
        c.expect(entropy_metric(constant) == 0.0, "constant sequence entropy");
    }
    std::vector<Action> zigzag;
    for (int i = 0; i < 41; ++i) {
        zigzag.push_back(i % 2 == 0 ? Action::Left : Action::Right);
    }
    c.expect(derivative_entropies(zigzag)[0] == 1.0, "alternating first-difference entropy");

    std::mt19937 arng(23);
    std::uniform_int_distribution<int> pick(0, kActionCount - 1);
    std::vector<Action> noise;
    for (int i = 0; i < 10000; ++i) {
        noise.push_back(action_from_index(pick(arng)));
    }
    const double random_entropy = entropy_metric(noise);
    c.expect(random_entropy >= 0.9, "uniform random entropy " + fmt(random_entropy));
    return c.outcome("100 scenes, random entropy " + fmt(random_entropy));
}

// ---------------------------------------------------------------------------

Outcome dexterity_ordering()
{
    const Script script = parse_script(read_data("data/dodge.talakat"));
    const double sigmas[] = {2.0, 6.0, 10.0};
    constexpr int kSeeds = 20;
    std::vector<std::vector<long>> survived(3, std::vector<long>(kSeeds, 0));
    std::vector<std::thread> workers;
    std::mutex mutex;
    int next = 0;
    const auto work = [&] {
        for (;;) {
            int job = 0;
            {
                std::lock_guard lock(mutex);
                if (next >= 3 * kSeeds) {
                    return;
                }
                job = next++;
            }
            const int level = job / kSeeds;
            const int seed = job % kSeeds;
            const PlayTrace t = play(script, AgentConfig{sigmas[level], 400, static_cast<std::uint64_t>(seed + 1)});
            survived[static_cast<std::size_t>(level)][static_cast<std::size_t>(seed)] = t.frames_survived;
        }
    };
    for (int i = 0; i < default_jobs(); ++i) {
        workers.emplace_back(work);
    }
    for (std::thread& t : workers) {
        t.join();
    }

    std::vector<double> means;
    for (const auto& row : survived) {
        double sum = 0;
        for (const long v : row) {
            sum += static_cast<double>(v);
        }
        means.push_back(sum / kSeeds);
    }
    std::vector<int> inversions;
    for (std::size_t l = 0; l + 1 < 3; ++l) {
        int n = 0;
        for (std::size_t s = 0; s < kSeeds; ++s) {
            n += survived[l][s] < survived[l + 1][s] ? 1 : 0;
        }
        inversions.push_back(n);
    }
    const bool ordered = means[0] >= means[1] && means[1] >= means[2];
    const bool pass = ordered && inversions[0] <= 1 && inversions[1] <= 1;
    return {pass, "means " + fmt(means[0], 6) + " >= " + fmt(means[1], 6) + " >= " + fmt(means[2], 6) +
                      ", inversions " + std::to_string(inversions[0]) + "/" + std::to_string(inversions[1])};
}

// ---------------------------------------------------------------------------

Outcome closure_fuzz()
{
    Checker c;
    Rng rng(2024);
    constexpr int kChromosomes = 100000;
    int max_demand = 0;
    for (int i = 0; i < kChromosomes; ++i) {
        const Chromosome chromosome = random_chromosome(rng);
        std::array<int, kArrayCount> demand{};
        try {
            const Script script = decode(chromosome, &demand);
            const std::vector<std::string> errors = validation_errors(script);
            c.expect(errors.empty(), "chromosome " + std::to_string(i) + ": " + (errors.empty() ? "" : errors[0]));
            // the decoded script must also survive its text form
            if (i % 100 == 0) {
                c.expect(parse_script(serialize(script)) == script, "round trip of chromosome " + std::to_string(i));
            }
        } catch (const std::exception& e) {
            c.expect(false, "chromosome " + std::to_string(i) + " threw: " + e.what());
        }
        for (const int d : demand) {
            max_demand = std::max(max_demand, d);
            c.expect(d <= kMaxCodonReads, "codon cap exceeded by chromosome " + std::to_string(i));
        }
    }
    return c.outcome(std::to_string(kChromosomes) + " chromosomes, max codons read " + std::to_string(max_demand));
}

// ---------------------------------------------------------------------------

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

// With arguments, only the named criteria run.
int main(int argc, char** argv)
{
    const std::vector<std::string> only(argv + 1, argv + argc);
    const Criterion criteria[] = {
        {"crossfire-conformance", crossfire_conformance},
        {"health-law", health_law},
        {"heuristic-equation", heuristic_equation},
        {"constraints-fitness", constraints_and_fitness},
        {"archive-properties", archive_properties},
        {"elite-trend", elite_trend},
        {"metric-oracles", metric_oracles},
        {"dexterity-ordering", dexterity_ordering},
        {"grammar-closure", closure_fuzz},
    };
    int failed = 0;
    int ran = 0;
    for (const Criterion& criterion : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), criterion.name) == only.end()) {
            continue;
        }
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criterion.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += out.pass ? 0 : 1;
        std::printf("%s %-20s %8.2fs  %s\n", out.pass ? "PASS" : "FAIL", criterion.name, seconds, out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
