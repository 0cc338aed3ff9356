#include "talakat/archive.hpp"

#include "talakat/hash.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace talakat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974ULL;  // "init"

void insert_sorted(std::vector<Member>& population, Member member)
{
    const auto at = std::upper_bound(population.begin(), population.end(), member.fitness,
                                     [](double f, const Member& m) { return f > m.fitness; });
    population.insert(at, std::move(member));
}

std::string hex(std::uint64_t v)
{
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(v));
    return buffer;
}

std::string cell_file_name(CellKey key)
{
    return std::to_string(key.entropy) + "_" + std::to_string(key.risk) + "_" +
           std::to_string(key.distribution) + ".json";
}

json member_to_json(const Member& m)
{
    return {{"chromosome", format_chromosome(m.chromosome)},
            {"fitness", m.fitness},
            {"feasible", m.feasible},
            {"entropy", m.entropy},
            {"risk", m.risk},
            {"distribution", m.distribution},
            {"eval_seed", m.eval_seed},
            {"frames_survived", m.frames_survived},
            {"remaining_boss_health", m.remaining_boss_health}};
}

Member member_from_json(const json& j, CellKey key)
{
    Member m;
    m.chromosome = parse_chromosome(j.at("chromosome").get<std::string>());
    m.fitness = j.at("fitness").get<double>();
    m.feasible = j.at("feasible").get<bool>();
    m.entropy = j.at("entropy").get<double>();
    m.risk = j.at("risk").get<double>();
    m.distribution = j.at("distribution").get<double>();
    m.eval_seed = j.at("eval_seed").get<std::uint64_t>();
    m.frames_survived = j.at("frames_survived").get<long>();
    m.remaining_boss_health = j.at("remaining_boss_health").get<int>();
    m.key = key;
    return m;
}

json config_to_json(const ArchiveConfig& c)
{
    return {{"crossover_probability", c.crossover_probability},
            {"matings_per_generation", c.matings_per_generation},
            {"initial_population", c.initial_population},
            {"cell_capacity", c.cell_capacity},
            {"codon_mutation_rate", c.codon_mutation_rate}};
}

ArchiveConfig config_from_json(const json& j)
{
    ArchiveConfig c;
    c.crossover_probability = j.at("crossover_probability").get<double>();
    c.matings_per_generation = j.at("matings_per_generation").get<int>();
    c.initial_population = j.at("initial_population").get<int>();
    c.cell_capacity = j.at("cell_capacity").get<int>();
    c.codon_mutation_rate = j.at("codon_mutation_rate").get<double>();
    return c;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

Member make_member(const Chromosome& chromosome, const EvaluationResult& eval, std::uint64_t eval_seed)
{
    Member m;
    m.chromosome = chromosome;
    m.fitness = eval.fitness;
    m.feasible = eval.feasible;
    m.entropy = eval.entropy;
    m.risk = eval.risk;
    m.distribution = eval.distribution;
    m.key = {eval.bins[0], eval.bins[1], eval.bins[2]};
    m.eval_seed = eval_seed;
    m.frames_survived = eval.trace.frames_survived;
    m.remaining_boss_health = eval.trace.remaining_boss_health;
    return m;
}

const Member& Cell::ranked(std::size_t index) const
{
    return index < feasible.size() ? feasible[index] : infeasible[index - feasible.size()];
}

const Cell* Archive::find(CellKey key) const
{
    const auto it = cells_.find(key);
    return it == cells_.end() ? nullptr : &it->second;
}

std::size_t Archive::total_members() const
{
    std::size_t n = 0;
    for (const auto& [key, cell] : cells_) {
        n += cell.size();
    }
    return n;
}

PlacementReport Archive::place(Member member)
{
    for (const int bin : {member.key.entropy, member.key.risk, member.key.distribution}) {
        if (bin < 0 || bin >= kBinsPerDimension) {
            throw std::invalid_argument("bin outside [0, 10]");
        }
    }
    PlacementReport report;
    report.key = member.key;
    report.feasible = member.feasible;
    Cell& cell = cells_[member.key];
    if (member.feasible) {
        report.new_elite = cell.feasible.empty() || member.fitness > cell.feasible.front().fitness;
        insert_sorted(cell.feasible, std::move(member));
    } else {
        insert_sorted(cell.infeasible, std::move(member));
    }
    report.cell_size = cell.size();
    return report;
}

const Member& Archive::select_parent(Rng& rng) const
{
    if (cells_.empty()) {
        throw std::logic_error("cannot select from an empty archive");
    }
    std::vector<const Cell*> occupied;
    occupied.reserve(cells_.size());
    for (const auto& [key, cell] : cells_) {
        if (!cell.empty()) {
            occupied.push_back(&cell);
        }
    }
    std::uniform_int_distribution<std::size_t> pick_cell(0, occupied.size() - 1);
    const Cell& cell = *occupied[pick_cell(rng)];

    // Position j (0 = best) of n carries weight n - j.
    const std::size_t n = cell.size();
    std::uniform_int_distribution<std::size_t> ticket(0, n * (n + 1) / 2 - 1);
    std::size_t draw = ticket(rng);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t weight = n - j;
        if (draw < weight) {
            return cell.ranked(j);
        }
        draw -= weight;
    }
    return cell.ranked(n - 1);
}

std::size_t Archive::trim()
{
    const auto capacity = static_cast<std::size_t>(config_.cell_capacity);
    std::size_t removed = 0;
    for (auto& [key, cell] : cells_) {
        while (cell.size() > capacity) {
            if (!cell.infeasible.empty()) {
                cell.infeasible.pop_back();
            } else {
                cell.feasible.pop_back();
            }
            ++removed;
        }
    }
    return removed;
}

int Archive::elite_count() const
{
    int n = 0;
    for (const auto& [key, cell] : cells_) {
        if (!cell.feasible.empty() && cell.feasible.front().fitness == 1.0) {
            ++n;
        }
    }
    return n;
}

std::uint64_t Archive::hash() const
{
    Fnv1a h;
    h.u64(seed_);
    h.i64(generation_);
    for (const auto& [key, cell] : cells_) {
        h.i64(key.entropy);
        h.i64(key.risk);
        h.i64(key.distribution);
        for (const auto* population : {&cell.feasible, &cell.infeasible}) {
            h.u64(population->size());
            for (const Member& m : *population) {
                for (const auto& array : m.chromosome.arrays) {
                    h.bytes(array.data(), array.size());
                }
                h.f64(m.fitness);
                h.u64(m.feasible ? 1 : 0);
                h.f64(m.entropy);
                h.f64(m.risk);
                h.f64(m.distribution);
                h.u64(m.eval_seed);
                h.i64(m.frames_survived);
                h.i64(m.remaining_boss_health);
            }
        }
    }
    return h.value();
}

std::uint64_t evaluation_seed(std::uint64_t archive_seed, long generation, int event)
{
    return mix_seed(mix_seed(archive_seed, static_cast<std::uint64_t>(generation)), static_cast<std::uint64_t>(event));
}

std::vector<EvaluationResult> evaluate_batch(const std::vector<Chromosome>& items,
                                             const std::vector<std::uint64_t>& seeds,
                                             const Evaluator& evaluator, int jobs)
{
    std::vector<EvaluationResult> results(items.size());
    const auto workers = static_cast<std::size_t>(std::clamp<int>(jobs, 1, static_cast<int>(std::max<std::size_t>(1, items.size()))));
    if (workers == 1) {
        for (std::size_t i = 0; i < items.size(); ++i) {
            results[i] = evaluator(items[i], seeds[i]);
        }
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < items.size(); i = next++) {
                try {
                    results[i] = evaluator(items[i], seeds[i]);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = items.size();
                }
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

Archive init_archive(const ArchiveConfig& config, std::uint64_t seed, const Evaluator& evaluator, int jobs)
{
    Archive archive(config, seed);
    Rng rng(mix_seed(seed, kInitTag));
    std::vector<Chromosome> items;
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < config.initial_population; ++i) {
        items.push_back(random_chromosome(rng));
        seeds.push_back(evaluation_seed(seed, 0, i));
    }
    const std::vector<EvaluationResult> results = evaluate_batch(items, seeds, evaluator, jobs);
    for (std::size_t i = 0; i < items.size(); ++i) {
        archive.place(make_member(items[i], results[i], seeds[i]));
    }
    return archive;
}

GenerationReport run_generation(Archive& archive, const Evaluator& evaluator, int jobs)
{
    if (archive.empty()) {
        throw std::logic_error("run_generation needs a non-empty archive");
    }
    const long generation = archive.generation() + 1;
    const ArchiveConfig& config = archive.config();
    Rng rng(mix_seed(archive.seed(), static_cast<std::uint64_t>(generation)));
    std::bernoulli_distribution use_crossover(config.crossover_probability);

    std::vector<Chromosome> children;
    std::vector<std::uint64_t> seeds;
    for (int event = 0; event < config.matings_per_generation; ++event) {
        if (use_crossover(rng)) {
            const Chromosome& a = archive.select_parent(rng).chromosome;
            const Chromosome& b = archive.select_parent(rng).chromosome;
            children.push_back(crossover(a, b, rng));
        } else {
            children.push_back(mutate(archive.select_parent(rng).chromosome, rng, config.codon_mutation_rate));
        }
        seeds.push_back(evaluation_seed(archive.seed(), generation, event));
    }

    const std::vector<EvaluationResult> results = evaluate_batch(children, seeds, evaluator, jobs);

    const Archive snapshot = archive;
    try {
        GenerationReport report;
        for (std::size_t i = 0; i < children.size(); ++i) {
            report.new_elites += archive.place(make_member(children[i], results[i], seeds[i])).new_elite ? 1 : 0;
        }
        report.trimmed = archive.trim();
        archive.set_generation(generation);
        GenerationReport summary = summarize_archive(archive);
        summary.new_elites = report.new_elites;
        summary.trimmed = report.trimmed;
        return summary;
    } catch (...) {
        archive = snapshot;
        throw;
    }
}

GenerationReport summarize_archive(const Archive& archive)
{
    GenerationReport report;
    report.generation = archive.generation();
    report.elite_count = archive.elite_count();
    for (const auto& [key, cell] : archive.cells()) {
        if (cell.empty()) {
            continue;
        }
        ++report.cells_occupied;
        report.members += cell.size();
        report.cell_sizes[key] = cell.size();
        if (!cell.feasible.empty()) {
            report.best_fitness = std::max(report.best_fitness, cell.feasible.front().fitness);
        }
    }
    return report;
}

Evaluator agent_evaluator(AgentConfig agent, SimConfig sim, FitnessOptions options)
{
    return [agent, sim, options](const Chromosome& chromosome, std::uint64_t seed) {
        AgentConfig seeded = agent;
        seeded.seed = seed;
        return evaluate(decode(chromosome), seeded, sim, options);
    };
}

void save_archive(const Archive& archive, const fs::path& dir, const std::string& metadata)
{
    fs::create_directories(dir);
    char name_buffer[32];
    std::snprintf(name_buffer, sizeof name_buffer, "gen-%06ld", archive.generation());
    const std::string cells_dir_name = name_buffer;
    const fs::path cells_dir = dir / cells_dir_name;
    fs::remove_all(cells_dir);
    fs::create_directories(cells_dir);
    for (const auto& [key, cell] : archive.cells()) {
        if (cell.empty()) {
            continue;
        }
        json j;
        j["key"] = {key.entropy, key.risk, key.distribution};
        j["feasible"] = json::array();
        j["infeasible"] = json::array();
        for (const Member& m : cell.feasible) {
            j["feasible"].push_back(member_to_json(m));
        }
        for (const Member& m : cell.infeasible) {
            j["infeasible"].push_back(member_to_json(m));
        }
        write_file(cells_dir / cell_file_name(key), j.dump(1) + "\n");
    }

    json manifest;
    manifest["format"] = "talakat-archive";
    manifest["version"] = 1;
    manifest["seed"] = archive.seed();
    manifest["generation"] = archive.generation();
    manifest["config"] = config_to_json(archive.config());
    manifest["cells_dir"] = cells_dir_name;
    manifest["hash"] = hex(archive.hash());
    manifest["metadata"] = json::parse(metadata);
    // The manifest swap is the commit point; older generation dirs go after it.
    const fs::path staging = dir / "manifest.json.tmp";
    write_file(staging, manifest.dump(2) + "\n");
    fs::rename(staging, dir / "manifest.json");
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_directory() && name.starts_with("gen-") && name != cells_dir_name) {
            fs::remove_all(entry.path());
        }
    }
}

bool archive_exists(const fs::path& dir)
{
    return fs::exists(dir / "manifest.json");
}

LoadedArchive load_archive(const fs::path& dir)
{
    const json manifest = json::parse(read_file(dir / "manifest.json"));
    if (manifest.value("format", "") != "talakat-archive") {
        throw std::runtime_error(dir.string() + " is not a talakat archive");
    }
    Archive archive(config_from_json(manifest.at("config")), manifest.at("seed").get<std::uint64_t>());
    archive.set_generation(manifest.at("generation").get<long>());
    const fs::path cells_dir = dir / manifest.at("cells_dir").get<std::string>();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cells_dir)) {
        if (entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        const json j = json::parse(read_file(file));
        const CellKey key{j.at("key").at(0).get<int>(), j.at("key").at(1).get<int>(), j.at("key").at(2).get<int>()};
        for (const char* population : {"feasible", "infeasible"}) {
            for (const json& m : j.at(population)) {
                archive.place(member_from_json(m, key));
            }
        }
    }
    if (hex(archive.hash()) != manifest.at("hash").get<std::string>()) {
        throw std::runtime_error("archive hash mismatch in " + dir.string());
    }
    return {std::move(archive), manifest.at("metadata").dump()};
}

}  // namespace talakat
