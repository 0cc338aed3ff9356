#include "talakat/experiment.hpp"

#include "talakat/trace_io.hpp"

#include <json.hpp>

#include <set>
#include <stdexcept>

namespace talakat {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where)
{
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw std::invalid_argument("unknown key '" + where + key + "' in experiment config");
        }
    }
}

json identity_json(const ExperimentConfig& c)
{
    return {{"dexterity", skill_level_name(c.dexterity)},
            {"strategy", skill_level_name(c.strategy)},
            {"seed", c.seed},
            {"archive",
             {{"crossoverProbability", c.archive.crossover_probability},
              {"matingsPerGeneration", c.archive.matings_per_generation},
              {"initialPopulation", c.archive.initial_population},
              {"cellCapacity", c.archive.cell_capacity},
              {"codonMutationRate", c.archive.codon_mutation_rate}}},
            {"sim", json::parse(format_sim_config(c.sim))},
            {"infeasibleBulletThreshold", c.fitness.infeasible_bullet_threshold}};
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text)
{
    ExperimentConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("experiment config: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("experiment config must be an object");
    }
    reject_unknown(j, {"dexterity", "strategy", "generations", "seed", "jobs", "out", "archive", "sim",
                       "infeasibleBulletThreshold"},
                   "");
    try {
        if (j.contains("dexterity")) {
            c.dexterity = parse_skill_level(j["dexterity"].get<std::string>());
        }
        if (j.contains("strategy")) {
            c.strategy = parse_skill_level(j["strategy"].get<std::string>());
        }
        c.generations = j.value("generations", c.generations);
        c.seed = j.value("seed", c.seed);
        c.jobs = j.value("jobs", c.jobs);
        if (j.contains("out")) {
            c.out = j["out"].get<std::string>();
        }
        c.fitness.infeasible_bullet_threshold =
            j.value("infeasibleBulletThreshold", c.fitness.infeasible_bullet_threshold);
        if (j.contains("archive")) {
            const json& a = j["archive"];
            reject_unknown(a, {"crossoverProbability", "matingsPerGeneration", "initialPopulation", "cellCapacity",
                               "codonMutationRate"},
                           "archive.");
            c.archive.crossover_probability = a.value("crossoverProbability", c.archive.crossover_probability);
            c.archive.matings_per_generation = a.value("matingsPerGeneration", c.archive.matings_per_generation);
            c.archive.initial_population = a.value("initialPopulation", c.archive.initial_population);
            c.archive.cell_capacity = a.value("cellCapacity", c.archive.cell_capacity);
            c.archive.codon_mutation_rate = a.value("codonMutationRate", c.archive.codon_mutation_rate);
        }
        if (j.contains("sim")) {
            const json& s = j["sim"];
            reject_unknown(s, {"screenWidth", "screenHeight", "playerSpeed", "playerRadius", "playerStart",
                               "maxLiveSpawners", "maxLiveBullets", "gridCols", "gridRows"},
                           "sim.");
            c.sim.screen_width = s.value("screenWidth", c.sim.screen_width);
            c.sim.screen_height = s.value("screenHeight", c.sim.screen_height);
            c.sim.player_speed = s.value("playerSpeed", c.sim.player_speed);
            c.sim.player_radius = s.value("playerRadius", c.sim.player_radius);
            if (s.contains("playerStart")) {
                c.sim.player_start = {s["playerStart"].at(0).get<double>(), s["playerStart"].at(1).get<double>()};
            }
            c.sim.max_live_spawners = s.value("maxLiveSpawners", c.sim.max_live_spawners);
            c.sim.max_live_bullets = s.value("maxLiveBullets", c.sim.max_live_bullets);
            c.sim.grid_cols = s.value("gridCols", c.sim.grid_cols);
            c.sim.grid_rows = s.value("gridRows", c.sim.grid_rows);
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("experiment config: ") + e.what());
    }
    c.sim.check();
    if (c.generations < 0 || c.jobs < 1 || c.archive.cell_capacity < 1 || c.archive.initial_population < 0 ||
        c.archive.matings_per_generation < 0 || c.archive.crossover_probability < 0.0 ||
        c.archive.crossover_probability > 1.0) {
        throw std::invalid_argument("experiment config: value out of range");
    }
    return c;
}

std::string experiment_identity(const ExperimentConfig& config)
{
    return identity_json(config).dump();
}

std::string format_generation_line(const GenerationLine& line)
{
    const GenerationReport& r = line.report;
    const json j{{"generation", r.generation},
                 {"eliteCount", r.elite_count},
                 {"cellsOccupied", r.cells_occupied},
                 {"bestFitness", r.best_fitness},
                 {"newElites", r.new_elites},
                 {"members", r.members},
                 {"trimmed", r.trimmed},
                 {"archiveHash", hash_hex(line.archive_hash)}};
    return j.dump();
}

Archive run_experiment(const ExperimentConfig& config, const std::function<void(const GenerationLine&)>& on_generation)
{
    const std::string identity = experiment_identity(config);
    const Evaluator evaluator = agent_evaluator(config.agent(), config.sim, config.fitness);
    const bool persist = !config.out.empty();

    Archive archive;
    if (persist && archive_exists(config.out)) {
        LoadedArchive loaded = load_archive(config.out);
        if (json::parse(loaded.metadata) != json::parse(identity)) {
            throw std::runtime_error("archive in " + config.out.string() +
                                     " was produced by a different experiment configuration");
        }
        archive = std::move(loaded.archive);
    } else {
        archive = init_archive(config.archive, config.seed, evaluator, config.jobs);
        if (persist) {
            save_archive(archive, config.out, identity);
        }
    }

    while (archive.generation() < config.generations) {
        GenerationLine line;
        line.report = run_generation(archive, evaluator, config.jobs);
        line.archive_hash = archive.hash();
        if (persist) {
            save_archive(archive, config.out, identity);
        }
        if (on_generation) {
            on_generation(line);
        }
    }
    return archive;
}

EliteHistogram elite_histogram(const Archive& archive)
{
    EliteHistogram h;
    std::array<std::array<int, kBinsPerDimension>, 3> counts{};
    for (const auto& [key, cell] : archive.cells()) {
        if (cell.feasible.empty() || cell.feasible.front().fitness != 1.0) {
            continue;
        }
        ++h.elites;
        ++counts[0][static_cast<std::size_t>(key.entropy)];
        ++counts[1][static_cast<std::size_t>(key.risk)];
        ++counts[2][static_cast<std::size_t>(key.distribution)];
    }
    if (h.elites > 0) {
        for (std::size_t d = 0; d < 3; ++d) {
            for (std::size_t b = 0; b < kBinsPerDimension; ++b) {
                h.frequency[d][b] = static_cast<double>(counts[d][b]) / h.elites;
            }
        }
    }
    return h;
}

}  // namespace talakat
