#include "talakat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace talakat {

namespace {

using Symbol = std::pair<int, int>;

std::vector<Symbol> differences(const std::vector<Symbol>& seq)
{
    std::vector<Symbol> out;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        out.emplace_back(seq[i].first - seq[i - 1].first, seq[i].second - seq[i - 1].second);
    }
    return out;
}

double normalised_entropy(const std::vector<Symbol>& seq)
{
    std::map<Symbol, std::size_t> counts;
    for (const Symbol& s : seq) {
        ++counts[s];
    }
    double h = 0.0;
    const auto n = static_cast<double>(seq.size());
    for (const auto& [symbol, count] : counts) {
        const double p = static_cast<double>(count) / n;
        h -= p * std::log(p);
    }
    const double alphabet = static_cast<double>(std::max<std::size_t>(2, counts.size()));
    return h / std::log(alphabet);
}

}  // namespace

std::array<double, 3> derivative_entropies(std::span<const Action> actions)
{
    if (actions.size() < 4) {
        return {0.0, 0.0, 0.0};
    }
    std::vector<Symbol> v;
    v.reserve(actions.size());
    for (const Action a : actions) {
        const auto [dx, dy] = action_direction(a);
        v.emplace_back(dx, dy);
    }
    const std::vector<Symbol> d1 = differences(v);
    const std::vector<Symbol> d2 = differences(d1);
    const std::vector<Symbol> d3 = differences(d2);
    return {normalised_entropy(d1), normalised_entropy(d2), normalised_entropy(d3)};
}

double entropy_metric(std::span<const Action> actions)
{
    const std::array<double, 3> h = derivative_entropies(actions);
    return (h[0] + h[1] + h[2]) / 3.0;
}

double risk_metric(const Grid& grid, Vec2 player, const SimConfig& config)
{
    const auto [pc, pr] = cell_of(player, config);
    int cells = 0;
    int hot = 0;
    for (int row = std::max(0, pr - 1); row <= std::min(grid.rows - 1, pr + 1); ++row) {
        for (int col = std::max(0, pc - 1); col <= std::min(grid.cols - 1, pc + 1); ++col) {
            ++cells;
            hot += grid.occupied(col, row) ? 1 : 0;
        }
    }
    return static_cast<double>(hot) / cells;
}

double risk_metric(const GameState& state)
{
    return risk_metric(bullet_grid(state.bullets(), state.config()), state.player(), state.config());
}

double distribution_metric(const Grid& grid)
{
    const auto occupied = std::count_if(grid.counts.begin(), grid.counts.end(), [](int c) { return c > 0; });
    return static_cast<double>(occupied) / static_cast<double>(grid.counts.size());
}

double distribution_metric(const GameState& state)
{
    return distribution_metric(bullet_grid(state.bullets(), state.config()));
}

int metric_bin(double value)
{
    return std::clamp(static_cast<int>(std::lround(value * 10.0)), 0, 10);
}

}  // namespace talakat
