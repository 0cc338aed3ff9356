#include "talakat/agent.hpp"
#include "talakat/metrics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace talakat;
using talakat::testing::crossfire_script;

namespace {

Script quiet_script(int health = 500)
{
    return parse_script("{spawners: {s: {pattern: [\"wait\"]}}, boss: {bossHealth: " + std::to_string(health) +
                        ", script: [{health: 1, events: [\"spawn,s\"]}]}}");
}

// Player on the bottom wall under bullets filling every column from its x
// to the right wall; only the lanes to the left stay open.
GameState column_scene(const Script& script)
{
    SimConfig cfg;
    cfg.player_start = {0.5, 508.0 / 512.0};
    GameState s = init(script, cfg);
    s.advance(Action::Idle);
    for (double x = 192.0; x <= 384.0; x += 16.0) {
        for (double y = 340.0; y <= 484.0; y += 16.0) {
            s.world().bullets.push_back({{x, y}, {0.0, 6.0}, 8.0, 0});
        }
    }
    return s;
}

// Exhaustive over two actions: `first` once, then `second` held until the
// columns have passed.
bool survives(const GameState& state, Action first, Action second, int frames)
{
    GameState s = step(state, first);
    for (int k = 1; k < frames && !s.terminal(); ++k) {
        s.advance(second);
    }
    return !s.player_dead();
}

bool survivable(const GameState& state, Action first, int frames)
{
    for (int b = 0; b < kActionCount; ++b) {
        if (survives(state, first, action_from_index(b), frames)) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("node score arithmetic")
{
    CHECK(heuristic_value({10, 0, 10, 4}) == doctest::Approx(9.0));
    CHECK(heuristic_value({3, 1, 0, 0}) == doctest::Approx(0.5));
    CHECK(heuristic_value({0, 0, 0, 10}) == doctest::Approx(-2.5));
    CHECK(heuristic_value({1, 0, 10, 0}) == doctest::Approx(5.5));
}

TEST_CASE("skill levels")
{
    CHECK(dexterity_sigma(SkillLevel::Low) == 10.0);
    CHECK(dexterity_sigma(SkillLevel::Medium) == 6.0);
    CHECK(dexterity_sigma(SkillLevel::High) == 2.0);
    CHECK(strategy_budget(SkillLevel::Low) == 400);
    CHECK(strategy_budget(SkillLevel::Medium) == 600);
    CHECK(strategy_budget(SkillLevel::High) == 800);
    CHECK(parse_skill_level("medium") == SkillLevel::Medium);
    CHECK_THROWS_AS((void)parse_skill_level("expert"), std::invalid_argument);
    const AgentConfig a = AgentConfig::from_levels(SkillLevel::High, SkillLevel::Low, 7);
    CHECK(a == AgentConfig{2.0, 400, 7});
}

TEST_CASE("repeat length")
{
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        CHECK(repeat_length(0.0, rng) == 1);
    }
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const int r = repeat_length(10.0, rng);
        REQUIRE(r >= 1);
        REQUIRE(r <= kMaxRepeat);
        sum += r;
    }
    // E[round|N(0,10)|] is close to 10*sqrt(2/pi) = 7.98; clamping at 1 adds a little
    CHECK(sum / n == doctest::Approx(8.0).epsilon(0.03));
}

TEST_CASE("future term")
{
    const SimConfig cfg;
    // empty screen: every cell is among the emptiest
    CHECK(future_term(bullet_grid({}, cfg), {100, 100}, cfg) == 0.0);
    // bullets everywhere except a block in the bottom-left corner
    std::vector<Bullet> bullets;
    for (int row = 0; row < 16; ++row) {
        for (int col = 0; col < 12; ++col) {
            if (col > 2 || row < 13) {
                bullets.push_back({{col * 32.0 + 16, row * 32.0 + 16}, {}, 8, 0});
            }
        }
    }
    const Grid grid = bullet_grid(bullets, cfg);
    // zero-neighbourhood cells are (0..1, 14..15); the nearest is (1, 14)
    const Vec2 p{192, 256};
    const double dx = p.x - 64.0;
    const double dy = 448.0 - p.y;
    CHECK(future_term(grid, p, cfg) == doctest::Approx(10.0 * std::hypot(dx, dy) / std::hypot(384.0, 512.0)));
    CHECK(future_term(grid, {10, 500}, cfg) == 0.0);
}

TEST_CASE("lookahead agrees with the reference heuristic on random scenes")
{
    const Script script = crossfire_script();
    Rng rng(21);
    std::uniform_real_distribution<double> ux(4.0, 380.0);
    std::uniform_real_distribution<double> uy(4.0, 508.0);
    GameState root = init(script);
    int compared = 0;
    for (int scene = 0; scene < 40; ++scene) {
        for (int k = 0; k < 7; ++k) {
            World w = root.world();
            advance_world(w, root.level());
            root = GameState(root.level_ptr(), w, root.player());
        }
        Lookahead lookahead(root);
        for (int probe = 0; probe < 25; ++probe) {
            const Vec2 p{ux(rng), uy(rng)};
            const long frame = root.frame() + 1 + probe % 3;
            World w = root.world();
            while (w.frame < frame) {
                advance_world(w, root.level());
            }
            const bool hit = collides(p, w.bullets, root.config());
            CHECK(lookahead.collides(frame, p) == hit);
            if (hit) {
                continue;
            }
            const GameState at(root.level_ptr(), w, p);
            const HeuristicTerms terms = heuristic_terms(at, 0);
            CHECK(lookahead.safety(frame, p) == static_cast<int>(terms.safety));
            CHECK(lookahead.future(frame, p) == doctest::Approx(terms.future).epsilon(1e-12));
            ++compared;
        }
    }
    CHECK(compared > 500);
}

TEST_CASE("a bullet-free scene leaves the agent idle")
{
    const Script script = quiet_script();
    const GameState s = init(script);
    CHECK(decide(s, AgentConfig{0.0, 400, 0}) == Action::Idle);
    const PlayTrace trace = play(script, AgentConfig{0.0, 200, 1});
    CHECK(trace.frames_survived == 500);
    CHECK_FALSE(trace.died);
    for (const Action a : trace.actions) {
        REQUIRE(a == Action::Idle);
    }
}

TEST_CASE("a descending bullet column is dodged to the left")
{
    const Script script = quiet_script(1000);
    const GameState s = column_scene(script);
    const int horizon = 60;
    // the scene leaves only leftward escapes
    bool any = false;
    for (int a = 0; a < kActionCount; ++a) {
        const Action act = action_from_index(a);
        CAPTURE(action_name(act));
        if (action_direction(act)[0] != -1) {
            CHECK_FALSE(survivable(s, act, horizon));
        } else {
            any = any || survivable(s, act, horizon);
        }
    }
    REQUIRE(any);
    for (const int budget : {50, 400, 800}) {
        Lookahead lookahead(s);
        const Action a = decide(s, lookahead, budget);
        CAPTURE(budget);
        CHECK(action_direction(a)[0] == -1);
        CHECK(survivable(s, a, horizon));
    }
    // and the agent escapes when it keeps deciding
    GameState run = s;
    Lookahead lookahead(run);
    for (int f = 0; f < horizon; ++f) {
        lookahead.drop_before(run.frame() + 1);
        run.advance(decide(run, lookahead, 50));
    }
    CHECK_FALSE(run.player_dead());
}

TEST_CASE("decide never picks a fatal first move when a safe one exists")
{
    const Script script = crossfire_script();
    GameState s = init(script);
    Lookahead lookahead(s);
    int checked = 0;
    while (!s.terminal() && s.frame() < 300) {
        lookahead.drop_before(s.frame() + 1);
        const Action a = decide(s, lookahead, 800);
        bool any_safe = false;
        for (int b = 0; b < kActionCount; ++b) {
            any_safe = any_safe || !step(s, action_from_index(b)).player_dead();
        }
        if (any_safe) {
            CHECK_FALSE(step(s, a).player_dead());
            ++checked;
        }
        s.advance(a);
    }
    CHECK(checked == 300);
}

TEST_CASE("play is deterministic and replays reproduce the trace")
{
    const Script script = crossfire_script();
    const AgentConfig agent{6.0, 200, 11};
    const PlayTrace a = play(script, agent);
    const PlayTrace b = play(script, agent);
    CHECK(a == b);
    CHECK(a.frames_survived == static_cast<long>(a.actions.size()));
    CHECK(a.per_frame_risk.size() == a.actions.size());
    CHECK(a.remaining_boss_health == 3000 - a.frames_survived);
    PlayTrace r = replay(script, a.actions);
    r.agent = a.agent;
    CHECK(r == a);
    // the trace tallies agree with a direct recount
    GameState s = init(script);
    long any = 0;
    long ten = 0;
    for (const Action act : a.actions) {
        s.advance(act);
        any += s.bullets().empty() ? 0 : 1;
        ten += s.bullets().size() >= 10 ? 1 : 0;
    }
    CHECK(any == a.frames_with_any_bullet);
    CHECK(ten == a.frames_with_ten_plus_bullets);
    CHECK(s.player_dead() == a.died);
}

TEST_CASE("play rejects bad agent settings")
{
    CHECK_THROWS_AS((void)play(quiet_script(), AgentConfig{-1.0, 400, 0}), std::invalid_argument);
    CHECK_THROWS_AS((void)play(quiet_script(), AgentConfig{1.0, 0, 0}), std::invalid_argument);
}
