#pragma once

#include <string>
#include <string_view>

namespace talakat {

enum class Wrap { Circle, Inverse };

/// Time-varying spawner parameter: `current` starts at `min_value` and moves
/// by `rate` once every `interval` frames. Circle wraps into [min, max);
/// Inverse bounces inside [min, max] and flips the sign of `rate`.
struct ValueSampler {
    double min_value = 0.0;
    double max_value = 0.0;
    double rate = 0.0;
    int interval = 1;
    Wrap wrap = Wrap::Circle;
    double current = 0.0;
    long frame_counter = 0;

    [[nodiscard]] static ValueSampler constant(double value);
    [[nodiscard]] static ValueSampler ranged(double min_value, double max_value, double rate,
                                             int interval, Wrap wrap);

    [[nodiscard]] bool is_constant() const { return min_value == max_value && rate == 0.0; }

    /// Advances one frame in place.
    void step();

    bool operator==(const ValueSampler&) const = default;
};

/// Pure form of ValueSampler::step.
[[nodiscard]] ValueSampler sampler_step(ValueSampler sampler);

/// Reads the 1- to 5-field comma separated form ("4", "0,360",
/// "0,360,10,12,circle"). Throws std::invalid_argument describing the bad field.
[[nodiscard]] ValueSampler parse_sampler(std::string_view csv);

/// Canonical text: a bare number for plain constants, otherwise all five fields.
[[nodiscard]] std::string format_sampler(const ValueSampler& sampler);

}  // namespace talakat
