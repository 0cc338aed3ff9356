#include "talakat/agent.hpp"

#include "talakat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace talakat {

namespace {

double cell_distance(Vec2 p, int col, int row, const SimConfig& config)
{
    const double left = col * config.cell_width();
    const double top = row * config.cell_height();
    const double dx = std::max({0.0, left - p.x, p.x - (left + config.cell_width())});
    const double dy = std::max({0.0, top - p.y, p.y - (top + config.cell_height())});
    return std::sqrt(dx * dx + dy * dy);
}

double screen_diagonal(const SimConfig& config)
{
    return std::hypot(config.screen_width, config.screen_height);
}

/// Bullets inside each cell's 3x3 block (clipped at the screen edge).
std::vector<int> neighbourhood_counts(const std::vector<int>& counts, int cols, int rows)
{
    std::vector<int> out(counts.size(), 0);
    for (int row = 0; row < rows; ++row) {
        for (int col = 0; col < cols; ++col) {
            int sum = 0;
            for (int r = std::max(0, row - 1); r <= std::min(rows - 1, row + 1); ++r) {
                for (int c = std::max(0, col - 1); c <= std::min(cols - 1, col + 1); ++c) {
                    sum += counts[static_cast<std::size_t>(r * cols + c)];
                }
            }
            out[static_cast<std::size_t>(row * cols + col)] = sum;
        }
    }
    return out;
}

void record_frame(const GameState& state, Action action, PlayTrace& trace)
{
    trace.actions.push_back(action);
    const Grid grid = bullet_grid(state.bullets(), state.config());
    trace.per_frame_risk.push_back(risk_metric(grid, state.player(), state.config()));
    trace.per_frame_distribution.push_back(distribution_metric(grid));
    const std::size_t bullets = state.bullets().size();
    trace.frames_with_any_bullet += bullets >= 1 ? 1 : 0;
    trace.frames_with_ten_plus_bullets += bullets >= 10 ? 1 : 0;
    trace.max_live_spawners_seen = std::max(trace.max_live_spawners_seen, static_cast<int>(state.spawners().size()));
}

void finish_trace(const GameState& state, PlayTrace& trace)
{
    trace.frames_survived = static_cast<long>(trace.actions.size());
    trace.remaining_boss_health = state.boss_health();
    trace.boss_health_max = state.boss_health_max();
    trace.died = state.player_dead();
    trace.spawner_overflow = state.spawner_overflow();
}

}  // namespace

SkillLevel parse_skill_level(std::string_view text)
{
    if (text == "low") {
        return SkillLevel::Low;
    }
    if (text == "medium") {
        return SkillLevel::Medium;
    }
    if (text == "high") {
        return SkillLevel::High;
    }
    throw std::invalid_argument("skill level must be low, medium or high, got '" + std::string(text) + "'");
}

std::string_view skill_level_name(SkillLevel level)
{
    switch (level) {
    case SkillLevel::Low: return "low";
    case SkillLevel::Medium: return "medium";
    case SkillLevel::High: return "high";
    }
    return "?";
}

double dexterity_sigma(SkillLevel level)
{
    switch (level) {
    case SkillLevel::Low: return 10.0;
    case SkillLevel::Medium: return 6.0;
    case SkillLevel::High: return 2.0;
    }
    return 10.0;
}

int strategy_budget(SkillLevel level)
{
    switch (level) {
    case SkillLevel::Low: return 400;
    case SkillLevel::Medium: return 600;
    case SkillLevel::High: return 800;
    }
    return 400;
}

AgentConfig AgentConfig::from_levels(SkillLevel dexterity, SkillLevel strategy, std::uint64_t seed)
{
    return {talakat::dexterity_sigma(dexterity), talakat::strategy_budget(strategy), seed};
}

double future_term(const Grid& grid, Vec2 player, const SimConfig& config)
{
    const std::vector<int> around = neighbourhood_counts(grid.counts, grid.cols, grid.rows);
    const int fewest = *std::min_element(around.begin(), around.end());
    double best = std::numeric_limits<double>::infinity();
    for (int row = 0; row < grid.rows; ++row) {
        for (int col = 0; col < grid.cols; ++col) {
            if (around[static_cast<std::size_t>(row * grid.cols + col)] == fewest) {
                best = std::min(best, cell_distance(player, col, row, config));
            }
        }
    }
    return kFutureScale * best / screen_diagonal(config);
}

HeuristicTerms heuristic_terms(const GameState& state, int progress)
{
    HeuristicTerms t;
    t.progress = progress;
    t.lose = state.player_dead() ? 1.0 : 0.0;
    if (state.player_dead()) {
        t.safety = 0.0;
    } else if (state.boss_dead()) {
        t.safety = kSafetyCap;
    } else {
        GameState probe = state;
        t.safety = kSafetyCap;
        for (int k = 1; k <= kSafetyCap; ++k) {
            probe.advance(Action::Idle);
            if (probe.player_dead()) {
                t.safety = k - 1;
                break;
            }
            if (probe.boss_dead()) {
                break;
            }
        }
    }
    t.future = future_term(bullet_grid(state.bullets(), state.config()), state.player(), state.config());
    return t;
}

double heuristic(const GameState& state, int progress)
{
    return heuristic_value(heuristic_terms(state, progress));
}

// ---------------------------------------------------------------------------
// Lookahead

Lookahead::Lookahead(const GameState& root)
    : level_(root.level_ptr()), world_(root.world()), base_frame_(root.frame() + 1)
{
}

void Lookahead::drop_before(long frame)
{
    while (base_frame_ < frame) {
        if (!frames_.empty()) {
            frames_.pop_front();
        } else if (!world_.boss_dead) {
            advance_world(world_, *level_);
        }
        ++base_frame_;
    }
}

void Lookahead::extend()
{
    advance_world(world_, *level_);
    const SimConfig& config = level_->config;
    const std::size_t cells = static_cast<std::size_t>(config.grid_cols * config.grid_rows);

    Snapshot snap;
    snap.level_ends = world_.boss_dead;
    snap.counts.assign(cells, 0);
    std::vector<int> cell_of_bullet;
    cell_of_bullet.reserve(world_.bullets.size());
    for (const Bullet& b : world_.bullets) {
        const auto [col, row] = cell_of(b.pos, config);
        const int cell = row * config.grid_cols + col;
        cell_of_bullet.push_back(cell);
        ++snap.counts[static_cast<std::size_t>(cell)];
        snap.max_radius = std::max(snap.max_radius, b.radius);
    }
    snap.cell_start.assign(cells + 1, 0);
    for (std::size_t c = 0; c < cells; ++c) {
        snap.cell_start[c + 1] = snap.cell_start[c] + snap.counts[c];
    }
    snap.discs.resize(world_.bullets.size());
    std::vector<int> fill(snap.cell_start.begin(), snap.cell_start.end() - 1);
    for (std::size_t i = 0; i < world_.bullets.size(); ++i) {
        const Bullet& b = world_.bullets[i];
        snap.discs[static_cast<std::size_t>(fill[static_cast<std::size_t>(cell_of_bullet[i])]++)] = {b.pos.x, b.pos.y, b.radius};
    }
    frames_.push_back(std::move(snap));
}

bool Lookahead::has_frame(long frame)
{
    if (frame < base_frame_) {
        throw std::out_of_range("lookahead frame already dropped");
    }
    const auto index = static_cast<std::size_t>(frame - base_frame_);
    while (frames_.size() <= index && !world_.boss_dead) {
        extend();
    }
    return index < frames_.size();
}

Lookahead::Snapshot& Lookahead::at(long frame)
{
    if (!has_frame(frame)) {
        throw std::out_of_range("lookahead frame beyond the end of the level");
    }
    return frames_[static_cast<std::size_t>(frame - base_frame_)];
}

bool Lookahead::level_ends_at(long frame)
{
    return at(frame).level_ends;
}

bool Lookahead::collides(long frame, Vec2 player)
{
    const Snapshot& snap = at(frame);
    if (snap.discs.empty()) {
        return false;
    }
    const SimConfig& config = level_->config;
    const double reach = config.player_radius + snap.max_radius;
    const auto [c0, r0] = cell_of({player.x - reach, player.y - reach}, config);
    const auto [c1, r1] = cell_of({player.x + reach, player.y + reach}, config);
    for (int row = r0; row <= r1; ++row) {
        const int first = snap.cell_start[static_cast<std::size_t>(row * config.grid_cols + c0)];
        const int last = snap.cell_start[static_cast<std::size_t>(row * config.grid_cols + c1 + 1)];
        for (int i = first; i < last; ++i) {
            const Disc& d = snap.discs[static_cast<std::size_t>(i)];
            const double dx = d.x - player.x;
            const double dy = d.y - player.y;
            const double r = d.radius + config.player_radius;
            if (dx * dx + dy * dy < r * r) {
                return true;
            }
        }
    }
    return false;
}

int Lookahead::safety(long frame, Vec2 player)
{
    for (int k = 1; k <= kSafetyCap; ++k) {
        if (collides(frame + k, player)) {
            return k - 1;
        }
        if (level_ends_at(frame + k)) {
            break;
        }
    }
    return kSafetyCap;
}

void Lookahead::prepare_targets(Snapshot& snap) const
{
    const SimConfig& config = level_->config;
    const std::vector<int> around = neighbourhood_counts(snap.counts, config.grid_cols, config.grid_rows);
    const int fewest = *std::min_element(around.begin(), around.end());
    snap.is_target.assign(around.size(), 0);
    for (std::size_t c = 0; c < around.size(); ++c) {
        if (around[c] == fewest) {
            snap.is_target[c] = 1;
            snap.targets.push_back(static_cast<int>(c));
        }
    }
    snap.targets_ready = true;
}

double Lookahead::future(long frame, Vec2 player)
{
    Snapshot& snap = at(frame);
    if (!snap.targets_ready) {
        prepare_targets(snap);
    }
    const SimConfig& config = level_->config;
    const auto [pc, pr] = cell_of(player, config);
    if (snap.is_target[static_cast<std::size_t>(pr * config.grid_cols + pc)] != 0) {
        return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const int cell : snap.targets) {
        best = std::min(best, cell_distance(player, cell % config.grid_cols, cell / config.grid_cols, config));
    }
    return kFutureScale * best / screen_diagonal(config);
}

bool Lookahead::empty_through(long first, long last)
{
    for (long frame = first; frame <= last; ++frame) {
        if (!has_frame(frame)) {
            return true;
        }
        const Snapshot& snap = at(frame);
        if (!snap.discs.empty()) {
            return false;
        }
        if (snap.level_ends) {
            return true;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Search

Action decide(const GameState& state, Lookahead& lookahead, int budget)
{
    if (state.terminal()) {
        throw std::logic_error("decide called on a terminal state");
    }
    // With no bullets in reach every node at equal depth scores the same, so
    // the search follows the Idle branch to its deepest node.
    if (lookahead.empty_through(state.frame() + 1, state.frame() + budget + kSafetyCap)) {
        return Action::Idle;
    }
    struct Node {
        Vec2 pos;
        long frame;
        double score;
        std::uint8_t first_action;
    };
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(budget) * kActionCount + 1);
    nodes.push_back({state.player(), state.frame(), 0.0, 0});

    // Higher score first, then lower first action, then earlier insertion.
    const auto better = [&nodes](int a, int b) {
        const Node& x = nodes[static_cast<std::size_t>(a)];
        const Node& y = nodes[static_cast<std::size_t>(b)];
        if (x.score != y.score) {
            return x.score > y.score;
        }
        if (x.first_action != y.first_action) {
            return x.first_action < y.first_action;
        }
        return a < b;
    };
    const auto worse = [&better](int a, int b) { return better(b, a); };
    std::priority_queue<int, std::vector<int>, decltype(worse)> open(worse);
    open.push(0);

    const long root_frame = state.frame();
    const SimConfig& config = state.config();
    int best = -1;
    int expansions = 0;
    while (!open.empty() && expansions < budget) {
        const int index = open.top();
        open.pop();
        ++expansions;
        const Node parent = nodes[static_cast<std::size_t>(index)];
        const long frame = parent.frame + 1;
        if (!lookahead.has_frame(frame)) {
            continue;
        }
        const bool ends = lookahead.level_ends_at(frame);
        for (int a = 0; a < kActionCount; ++a) {
            const Vec2 pos = move_player(parent.pos, action_from_index(a), config);
            const bool dead = lookahead.collides(frame, pos);
            HeuristicTerms terms;
            terms.progress = static_cast<double>(frame - root_frame);
            terms.lose = dead ? 1.0 : 0.0;
            terms.safety = dead ? 0.0 : (ends ? kSafetyCap : lookahead.safety(frame, pos));
            terms.future = lookahead.future(frame, pos);
            const auto first = static_cast<std::uint8_t>(index == 0 ? a : parent.first_action);
            nodes.push_back({pos, frame, heuristic_value(terms), first});
            const int child = static_cast<int>(nodes.size()) - 1;
            if (best < 0 || better(child, best)) {
                best = child;
            }
            if (!dead && !ends) {
                open.push(child);
            }
        }
    }
    return best < 0 ? Action::Idle : action_from_index(nodes[static_cast<std::size_t>(best)].first_action);
}

Action decide(const GameState& state, const AgentConfig& config)
{
    Lookahead lookahead(state);
    return decide(state, lookahead, config.strategy_budget);
}

int repeat_length(double sigma, Rng& rng)
{
    if (sigma <= 0.0) {
        return 1;
    }
    std::normal_distribution<double> noise(0.0, sigma);
    const long r = std::lround(std::fabs(noise(rng)));
    return static_cast<int>(std::clamp<long>(r, 1, kMaxRepeat));
}

PlayTrace play(const Script& script, const AgentConfig& agent, const SimConfig& sim)
{
    if (agent.dexterity_sigma < 0.0 || agent.strategy_budget < 1) {
        throw std::invalid_argument("agent needs sigma >= 0 and budget >= 1");
    }
    GameState state = init(script, sim);
    Lookahead lookahead(state);
    Rng rng(agent.seed);
    PlayTrace trace;
    trace.agent = agent;
    while (!state.terminal()) {
        lookahead.drop_before(state.frame() + 1);
        const Action action = decide(state, lookahead, agent.strategy_budget);
        const int repeats = repeat_length(agent.dexterity_sigma, rng);
        for (int i = 0; i < repeats && !state.terminal(); ++i) {
            state.advance(action);
            record_frame(state, action, trace);
        }
    }
    finish_trace(state, trace);
    return trace;
}

PlayTrace replay(const Script& script, std::span<const Action> actions, const SimConfig& sim)
{
    GameState state = init(script, sim);
    PlayTrace trace;
    for (const Action action : actions) {
        if (state.terminal()) {
            throw std::invalid_argument("trace continues after the level ended at frame " +
                                        std::to_string(state.frame()));
        }
        state.advance(action);
        record_frame(state, action, trace);
    }
    finish_trace(state, trace);
    return trace;
}

}  // namespace talakat
