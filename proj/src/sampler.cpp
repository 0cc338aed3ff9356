#include "talakat/sampler.hpp"

#include "talakat/structured_text.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace talakat {

namespace {

std::string_view trim(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
        text.remove_suffix(1);
    }
    return text;
}

double read_number(std::string_view field, const char* name)
{
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double out = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size() || !std::isfinite(out)) {
        throw std::invalid_argument(std::string(name) + " field '" + std::string(field) +
                                    "' is not a number");
    }
    return out;
}

Wrap read_wrap(std::string_view field)
{
    field = trim(field);
    if (field == "circle") {
        return Wrap::Circle;
    }
    if (field == "inverse" || field == "reverse") {
        return Wrap::Inverse;
    }
    throw std::invalid_argument("unknown wrap type '" + std::string(field) + "'");
}

}  // namespace

ValueSampler ValueSampler::constant(double value)
{
    return ranged(value, value, 0.0, 1, Wrap::Circle);
}

ValueSampler ValueSampler::ranged(double min_value, double max_value, double rate, int interval,
                                  Wrap wrap)
{
    ValueSampler s;
    s.min_value = min_value;
    s.max_value = max_value;
    s.rate = rate;
    s.interval = interval < 1 ? 1 : interval;
    s.wrap = wrap;
    s.current = min_value;
    return s;
}

void ValueSampler::step()
{
    ++frame_counter;
    if (rate == 0.0 || frame_counter % interval != 0) {
        return;
    }
    const double span = max_value - min_value;
    if (span <= 0.0) {
        current = min_value;
        return;
    }
    double offset = current + rate - min_value;
    if (wrap == Wrap::Circle) {
        offset = std::fmod(offset, span);
        if (offset < 0.0) {
            offset += span;
        }
        // fmod of a tiny negative can round up to span
        if (offset >= span) {
            offset = 0.0;
        }
        current = min_value + offset;
        return;
    }
    // Whole periods of 2*span contain an even number of reflections.
    offset = std::fmod(offset, 2.0 * span);
    while (offset > span || offset < 0.0) {
        offset = offset > span ? 2.0 * span - offset : -offset;
        rate = -rate;
    }
    current = min_value + offset;
}

ValueSampler sampler_step(ValueSampler sampler)
{
    sampler.step();
    return sampler;
}

ValueSampler parse_sampler(std::string_view csv)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = csv.find(',', start);
        fields.push_back(csv.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    switch (fields.size()) {
    case 1:
        return ValueSampler::constant(read_number(fields[0], "value"));
    case 2:
    case 3:
    case 4:
    case 5: {
        const double lo = read_number(fields[0], "min");
        const double hi = read_number(fields[1], "max");
        if (lo > hi) {
            throw std::invalid_argument("min " + format_number(lo) + " exceeds max " + format_number(hi));
        }
        if (fields.size() == 2) {
            return ValueSampler::ranged(lo, hi, 0.0, 1, Wrap::Circle);
        }
        const double rate = read_number(fields[2], "rate");
        if (fields.size() == 3) {
            return ValueSampler::ranged(lo, hi, rate, 1, Wrap::Circle);
        }
        const double interval = read_number(fields[3], "interval");
        if (interval < 0.0 || interval != std::floor(interval) || interval > 1e9) {
            throw std::invalid_argument("interval '" + std::string(trim(fields[3])) +
                                        "' must be a non-negative integer");
        }
        const Wrap wrap = fields.size() == 5 ? read_wrap(fields[4]) : Wrap::Circle;
        return ValueSampler::ranged(lo, hi, rate, static_cast<int>(interval), wrap);
    }
    default:
        throw std::invalid_argument("expected 1 to 5 fields, got " + std::to_string(fields.size()));
    }
}

std::string format_sampler(const ValueSampler& sampler)
{
    if (sampler.is_constant() && sampler.interval == 1 && sampler.wrap == Wrap::Circle) {
        return format_number(sampler.min_value);
    }
    return format_number(sampler.min_value) + "," + format_number(sampler.max_value) + "," +
           format_number(sampler.rate) + "," + std::to_string(sampler.interval) + "," +
           (sampler.wrap == Wrap::Circle ? "circle" : "inverse");
}

}  // namespace talakat
