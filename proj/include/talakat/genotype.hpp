#pragma once

// Grammatical-evolution genotype for Talakat levels.
//
// A chromosome is 11 fixed-length codon arrays. Arrays 0..9 each decode one
// spawner ("s1".."s10"); array 10 decodes the boss section. At a grammar
// choice with N alternatives the next codon c picks alternative c % N; a
// numeric terminal maps c to lo + (c / 100) * (hi - lo). Reads wrap to the
// array start and stop after kMaxCodonReads (further reads yield codon 0).

#include "talakat/random.hpp"
#include "talakat/script.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace talakat {

inline constexpr int kArrayCount = 11;
inline constexpr int kCodonsPerArray = 23;
inline constexpr int kCodonLimit = 100;  // codons lie in [0, kCodonLimit)
inline constexpr int kSpawnerArrays = 10;
inline constexpr int kMaxCodonReads = 200;

struct Chromosome {
    using Array = std::array<std::uint8_t, kCodonsPerArray>;

    std::array<Array, kArrayCount> arrays{};

    bool operator==(const Chromosome&) const = default;
};

/// Value ranges used by the decoder for numeric terminals.
namespace ranges {
inline constexpr double kPatternTimeMin = 1, kPatternTimeMax = 20;
inline constexpr int kPatternLengthMax = 4;
inline constexpr int kPatternRepeatMax = 10;  // alternatives 1..10 plus "infinite"
inline constexpr double kAngleMin = 0, kAngleMax = 360;
inline constexpr double kRateMin = -20, kRateMax = 20;
inline constexpr double kIntervalMin = 1, kIntervalMax = 30;
inline constexpr double kNumberMin = 1, kNumberMax = 12;
inline constexpr double kSpeedMin = 0, kSpeedMax = 8;
inline constexpr double kRadiusMin = 0, kRadiusMax = 50;  // spawner offset
inline constexpr double kBulletRadiusMin = 4, kBulletRadiusMax = 16;
inline constexpr double kColorMin = 0, kColorMax = 9;
inline constexpr double kBossHealthMin = 1000, kBossHealthMax = 5000;
inline constexpr double kBossXMin = 0, kBossXMax = 1;
inline constexpr double kBossYMin = 0, kBossYMax = 0.5;
inline constexpr int kEventCountMax = 4;
inline constexpr int kActionsPerEventMax = 2;
inline constexpr double kTriggerRatioMin = 0.1, kTriggerRatioMax = 0.9;
}  // namespace ranges

[[nodiscard]] std::string spawner_id(int array_index);

/// `codon_demand`, when given, receives the number of codons each array's
/// derivation asked for (reads past kMaxCodonReads included).
[[nodiscard]] Script decode(const Chromosome& chromosome, std::array<int, kArrayCount>* codon_demand = nullptr);

[[nodiscard]] Chromosome random_chromosome(Rng& rng);

/// Uniform crossover with whole arrays as the exchanged unit.
[[nodiscard]] Chromosome crossover(const Chromosome& a, const Chromosome& b, Rng& rng);

/// Re-draws codons of one uniformly chosen array, each with probability
/// `codon_rate` (2/23 by default).
[[nodiscard]] Chromosome mutate(const Chromosome& parent, Rng& rng,
                                double codon_rate = 2.0 / kCodonsPerArray);

[[nodiscard]] bool is_valid(const Chromosome& chromosome);

/// 11 lines of 23 space separated integers.
[[nodiscard]] std::string format_chromosome(const Chromosome& chromosome);
[[nodiscard]] Chromosome parse_chromosome(std::string_view text);

}  // namespace talakat
