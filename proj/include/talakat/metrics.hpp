#pragma once

// Behaviour metrics used to place a level in the archive.

#include "talakat/simulator.hpp"

#include <array>
#include <span>

namespace talakat {

/// Mean normalised Shannon entropy of the first, second and third difference
/// sequences of the action direction vectors. Each entropy is divided by
/// log(max(2, distinct symbols present)). Sequences shorter than 4 give 0.
[[nodiscard]] double entropy_metric(std::span<const Action> actions);

/// The three normalised entropies (d1, d2, d3) that entropy_metric averages.
[[nodiscard]] std::array<double, 3> derivative_entropies(std::span<const Action> actions);

/// Fraction of the (edge-clipped) 3x3 block of cells around `player` that
/// holds at least one bullet centre.
[[nodiscard]] double risk_metric(const Grid& grid, Vec2 player, const SimConfig& config);
[[nodiscard]] double risk_metric(const GameState& state);

/// Fraction of all grid cells holding at least one bullet centre.
[[nodiscard]] double distribution_metric(const Grid& grid);
[[nodiscard]] double distribution_metric(const GameState& state);

/// Archive bin for a metric in [0, 1]: round(value * 10).
[[nodiscard]] int metric_bin(double value);

}  // namespace talakat
