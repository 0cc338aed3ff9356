#pragma once

// Constrained MAP-Elites archive.
//
// An 11x11x11 map over (entropy, risk, distribution) bins. Every cell keeps
// a feasible and an infeasible population, each sorted by fitness, sharing
// one capacity. Parents are picked by choosing a non-empty cell uniformly and
// then rank-selecting inside it (feasible members rank above infeasible).
// Children never replace parents; cells are trimmed back to capacity after
// each generation, infeasible members first.

#include "talakat/evaluation.hpp"
#include "talakat/genotype.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace talakat {

inline constexpr int kBinsPerDimension = 11;

struct CellKey {
    int entropy = 0;
    int risk = 0;
    int distribution = 0;

    auto operator<=>(const CellKey&) const = default;
};

/// A stored chromosome with the evaluation that placed it.
struct Member {
    Chromosome chromosome;
    double fitness = 0.0;
    bool feasible = false;
    double entropy = 0.0;
    double risk = 0.0;
    double distribution = 0.0;
    CellKey key;
    std::uint64_t eval_seed = 0;
    long frames_survived = 0;
    int remaining_boss_health = 0;

    bool operator==(const Member&) const = default;
};

[[nodiscard]] Member make_member(const Chromosome& chromosome, const EvaluationResult& eval,
                                 std::uint64_t eval_seed);

struct Cell {
    std::vector<Member> feasible;    // fitness descending
    std::vector<Member> infeasible;  // fitness descending

    [[nodiscard]] std::size_t size() const { return feasible.size() + infeasible.size(); }
    [[nodiscard]] bool empty() const { return size() == 0; }
    /// Rank order used by selection: feasible block, then infeasible block.
    [[nodiscard]] const Member& ranked(std::size_t index) const;

    bool operator==(const Cell&) const = default;
};

struct ArchiveConfig {
    double crossover_probability = 0.7;  // mutation otherwise
    int matings_per_generation = 100;
    int initial_population = 100;
    int cell_capacity = 50;
    double codon_mutation_rate = 2.0 / kCodonsPerArray;

    bool operator==(const ArchiveConfig&) const = default;
};

/// Evaluates a chromosome with a given agent seed. Must be safe to call
/// from several threads at once.
using Evaluator = std::function<EvaluationResult(const Chromosome&, std::uint64_t seed)>;

struct PlacementReport {
    CellKey key;
    bool feasible = false;
    bool new_elite = false;  // became the best feasible member of its cell
    std::size_t cell_size = 0;
};

struct GenerationReport {
    long generation = 0;
    int new_elites = 0;
    int elite_count = 0;  // cells whose best feasible fitness is 1
    std::size_t cells_occupied = 0;
    std::size_t members = 0;
    std::size_t trimmed = 0;
    double best_fitness = 0.0;
    std::map<CellKey, std::size_t> cell_sizes;
};

class Archive {
public:
    Archive() = default;
    Archive(ArchiveConfig config, std::uint64_t seed) : config_(config), seed_(seed) {}

    [[nodiscard]] const ArchiveConfig& config() const { return config_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] long generation() const { return generation_; }
    [[nodiscard]] const std::map<CellKey, Cell>& cells() const { return cells_; }
    [[nodiscard]] const Cell* find(CellKey key) const;
    [[nodiscard]] bool empty() const { return cells_.empty(); }
    [[nodiscard]] std::size_t total_members() const;

    /// Inserts keeping fitness order (ties go after existing members). Never trims.
    PlacementReport place(Member member);

    /// Uniform non-empty cell, then linear rank selection inside it.
    [[nodiscard]] const Member& select_parent(Rng& rng) const;

    /// Brings every cell back to capacity, dropping the weakest infeasible
    /// members first. Returns the number removed.
    std::size_t trim();

    [[nodiscard]] int elite_count() const;
    [[nodiscard]] std::uint64_t hash() const;

    void set_generation(long generation) { generation_ = generation; }

    bool operator==(const Archive&) const = default;

private:
    ArchiveConfig config_;
    std::uint64_t seed_ = 0;
    long generation_ = 0;
    std::map<CellKey, Cell> cells_;
};

/// Seed of the agent run for initial member `index` or for mating `event`
/// of `generation` (generation >= 1).
[[nodiscard]] std::uint64_t evaluation_seed(std::uint64_t archive_seed, long generation, int event);

/// Evaluates `items` on up to `jobs` threads; results keep input order.
[[nodiscard]] std::vector<EvaluationResult> evaluate_batch(const std::vector<Chromosome>& items,
                                                           const std::vector<std::uint64_t>& seeds,
                                                           const Evaluator& evaluator, int jobs);

[[nodiscard]] Archive init_archive(const ArchiveConfig& config, std::uint64_t seed,
                                   const Evaluator& evaluator, int jobs = 1);

/// One generation of mating events. Parents are drawn from the archive as it
/// stood when the generation began; children are placed in event order and
/// the archive is trimmed once at the end. If the evaluator throws, the
/// archive is left exactly as it was.
GenerationReport run_generation(Archive& archive, const Evaluator& evaluator, int jobs = 1);

[[nodiscard]] GenerationReport summarize_archive(const Archive& archive);

/// Evaluator that decodes the chromosome and plays it with `agent` (its seed
/// replaced by the per-evaluation seed).
[[nodiscard]] Evaluator agent_evaluator(AgentConfig agent, SimConfig sim = {}, FitnessOptions options = {});

// Directory format: manifest.json plus one JSON file per non-empty cell under
// the generation directory named in the manifest. `metadata` is an opaque
// JSON object text stored with the manifest (experiment settings).
void save_archive(const Archive& archive, const std::filesystem::path& dir, const std::string& metadata = "{}");

struct LoadedArchive {
    Archive archive;
    std::string metadata;
};

[[nodiscard]] LoadedArchive load_archive(const std::filesystem::path& dir);

[[nodiscard]] bool archive_exists(const std::filesystem::path& dir);

}  // namespace talakat
