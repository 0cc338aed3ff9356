#include "talakat/genotype.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace talakat {

namespace {

class CodonReader {
public:
    explicit CodonReader(const Chromosome::Array& codons) : codons_(codons) {}

    int next()
    {
        ++requested_;
        if (reads_ >= kMaxCodonReads) {
            return 0;
        }
        const int codon = codons_[static_cast<std::size_t>(reads_ % kCodonsPerArray)];
        ++reads_;
        return codon;
    }

    int choose(int alternatives) { return next() % alternatives; }

    double real(double lo, double hi) { return lo + (next() / 100.0) * (hi - lo); }

    int integer(double lo, double hi) { return static_cast<int>(std::lround(real(lo, hi))); }

    [[nodiscard]] int requested() const { return requested_; }

private:
    const Chromosome::Array& codons_;
    int reads_ = 0;
    int requested_ = 0;
};

ValueSampler sampler(CodonReader& in, double lo, double hi)
{
    if (in.choose(2) == 0) {
        return ValueSampler::constant(in.real(lo, hi));
    }
    const double a = in.real(lo, hi);
    const double b = in.real(lo, hi);
    const double rate = in.real(ranges::kRateMin, ranges::kRateMax);
    const int interval = in.integer(ranges::kIntervalMin, ranges::kIntervalMax);
    const Wrap wrap = in.choose(2) == 0 ? Wrap::Circle : Wrap::Inverse;
    return ValueSampler::ranged(std::min(a, b), std::max(a, b), rate, interval, wrap);
}

SpawnerDef decode_spawner(CodonReader& in)
{
    using namespace ranges;
    SpawnerDef def;
    const int length = in.choose(kPatternLengthMax) + 1;
    for (int i = 0; i < length; ++i) {
        // bullet, wait, s1..s10
        const int choice = in.choose(2 + kSpawnerArrays);
        if (choice == 0) {
            def.pattern.push_back(PatternStep::bullet());
        } else if (choice == 1) {
            def.pattern.push_back(PatternStep::wait());
        } else {
            def.pattern.push_back(PatternStep::spawner(spawner_id(choice - 2)));
        }
    }
    def.pattern_time = in.integer(kPatternTimeMin, kPatternTimeMax);
    const int repeat = in.choose(kPatternRepeatMax + 1);
    if (repeat < kPatternRepeatMax) {
        def.pattern_repeat = repeat + 1;
    }
    def.spawner_angle = sampler(in, kAngleMin, kAngleMax);
    def.spawner_radius = sampler(in, kRadiusMin, kRadiusMax);
    def.spawned_number = sampler(in, kNumberMin, kNumberMax);
    def.spawned_angle = sampler(in, kAngleMin, kAngleMax);
    def.spawned_speed = sampler(in, kSpeedMin, kSpeedMax);
    def.bullet_radius = sampler(in, kBulletRadiusMin, kBulletRadiusMax);
    def.bullet_color = sampler(in, kColorMin, kColorMax);
    return def;
}

BossDef decode_boss(CodonReader& in)
{
    using namespace ranges;
    BossDef boss;
    boss.health = in.integer(kBossHealthMin, kBossHealthMax);
    boss.position.x = in.real(kBossXMin, kBossXMax);
    boss.position.y = in.real(kBossYMin, kBossYMax);
    const int events = in.choose(kEventCountMax) + 1;
    double trigger = 1.0;
    for (int e = 0; e < events; ++e) {
        BossEvent event;
        if (e > 0) {
            trigger *= in.real(kTriggerRatioMin, kTriggerRatioMax);
        }
        event.trigger = trigger;
        const int actions = in.choose(kActionsPerEventMax) + 1;
        for (int a = 0; a < actions; ++a) {
            EventAction action;
            switch (in.choose(5)) {
            case 0:
                action.kind = EventAction::Kind::SpawnRef;
                action.ref = spawner_id(in.choose(kSpawnerArrays));
                action.speed = in.real(kSpeedMin, kSpeedMax);
                action.angle = in.real(kAngleMin, kAngleMax);
                break;
            case 1:
                action.kind = EventAction::Kind::SpawnBullet;
                action.speed = in.real(kSpeedMin, kSpeedMax);
                action.angle = in.real(kAngleMin, kAngleMax);
                break;
            case 2:
                action.kind = EventAction::Kind::ClearRef;
                action.ref = spawner_id(in.choose(kSpawnerArrays));
                break;
            case 3: action.kind = EventAction::Kind::ClearBullets; break;
            default: action.kind = EventAction::Kind::ClearSpawners; break;
            }
            event.actions.push_back(std::move(action));
        }
        boss.script.push_back(std::move(event));
    }
    return boss;
}

}  // namespace

std::string spawner_id(int array_index)
{
    return "s" + std::to_string(array_index + 1);
}

Script decode(const Chromosome& chromosome, std::array<int, kArrayCount>* codon_demand)
{
    Script script;
    for (int i = 0; i < kArrayCount; ++i) {
        CodonReader in(chromosome.arrays[static_cast<std::size_t>(i)]);
        if (i < kSpawnerArrays) {
            script.spawners.emplace(spawner_id(i), decode_spawner(in));
        } else {
            script.boss = decode_boss(in);
        }
        if (codon_demand != nullptr) {
            (*codon_demand)[static_cast<std::size_t>(i)] = in.requested();
        }
    }
    return script;
}

Chromosome random_chromosome(Rng& rng)
{
    std::uniform_int_distribution<int> codon(0, kCodonLimit - 1);
    Chromosome out;
    for (auto& array : out.arrays) {
        for (auto& c : array) {
            c = static_cast<std::uint8_t>(codon(rng));
        }
    }
    return out;
}

Chromosome crossover(const Chromosome& a, const Chromosome& b, Rng& rng)
{
    std::bernoulli_distribution take_a(0.5);
    Chromosome child;
    for (std::size_t i = 0; i < child.arrays.size(); ++i) {
        child.arrays[i] = take_a(rng) ? a.arrays[i] : b.arrays[i];
    }
    return child;
}

Chromosome mutate(const Chromosome& parent, Rng& rng, double codon_rate)
{
    Chromosome child = parent;
    std::uniform_int_distribution<std::size_t> pick(0, kArrayCount - 1);
    std::bernoulli_distribution redraw(codon_rate);
    std::uniform_int_distribution<int> codon(0, kCodonLimit - 1);
    for (auto& c : child.arrays[pick(rng)]) {
        if (redraw(rng)) {
            c = static_cast<std::uint8_t>(codon(rng));
        }
    }
    return child;
}

bool is_valid(const Chromosome& chromosome)
{
    for (const auto& array : chromosome.arrays) {
        for (const auto c : array) {
            if (c >= kCodonLimit) {
                return false;
            }
        }
    }
    return true;
}

std::string format_chromosome(const Chromosome& chromosome)
{
    std::string out;
    for (const auto& array : chromosome.arrays) {
        for (std::size_t i = 0; i < array.size(); ++i) {
            out += (i == 0 ? "" : " ") + std::to_string(array[i]);
        }
        out += '\n';
    }
    return out;
}

Chromosome parse_chromosome(std::string_view text)
{
    std::istringstream lines{std::string(text)};
    std::string line;
    Chromosome out;
    std::size_t row = 0;
    while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (row >= out.arrays.size()) {
            throw std::invalid_argument("more than 11 codon lines");
        }
        std::istringstream fields(line);
        std::size_t col = 0;
        long value = 0;
        while (fields >> value) {
            if (col >= kCodonsPerArray) {
                throw std::invalid_argument("line " + std::to_string(row + 1) + " has more than 23 codons");
            }
            if (value < 0 || value >= kCodonLimit) {
                throw std::invalid_argument("codon " + std::to_string(value) + " outside [0, 99]");
            }
            out.arrays[row][col++] = static_cast<std::uint8_t>(value);
        }
        if (!fields.eof() || col != kCodonsPerArray) {
            throw std::invalid_argument("line " + std::to_string(row + 1) + " must hold 23 integers");
        }
        ++row;
    }
    if (row != out.arrays.size()) {
        throw std::invalid_argument("expected 11 codon lines, got " + std::to_string(row));
    }
    return out;
}

}  // namespace talakat
