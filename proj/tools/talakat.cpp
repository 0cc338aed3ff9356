// talakat: generate, evaluate, validate, replay and inspect Talakat levels.

#include "talakat/archive.hpp"
#include "talakat/experiment.hpp"
#include "talakat/render.hpp"
#include "talakat/trace_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace talakat;

namespace {

struct CommandError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CommandError("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
        throw CommandError("cannot write " + path.string());
    }
}

Script load_script(const fs::path& path)
{
    try {
        return parse_script(read_text(path));
    } catch (const ParseError& e) {
        throw CommandError(path.string() + ":" + e.what());
    }
}

std::vector<long> parse_frames(const std::string& text)
{
    std::vector<long> frames;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const long v = std::stol(item, &used);
            if (used != item.size() || v < 0) {
                throw std::invalid_argument(item);
            }
            frames.push_back(v);
        } catch (const std::logic_error&) {
            throw CommandError("bad frame number '" + item + "'");
        }
    }
    if (frames.empty()) {
        throw CommandError("no frames given");
    }
    return frames;
}

json result_json(const EvaluationResult& r, const AgentConfig& agent)
{
    return {{"entropy", r.entropy},
            {"risk", r.risk},
            {"distribution", r.distribution},
            {"bins", r.bins},
            {"feasible", r.feasible},
            {"fitness", r.fitness},
            {"framesSurvived", r.trace.frames_survived},
            {"remainingBossHealth", r.trace.remaining_boss_health},
            {"bossHealthMax", r.trace.boss_health_max},
            {"died", r.trace.died},
            {"framesWithAnyBullet", r.trace.frames_with_any_bullet},
            {"framesWithTenPlusBullets", r.trace.frames_with_ten_plus_bullets},
            {"maxLiveSpawnersSeen", r.trace.max_live_spawners_seen},
            {"spawnerOverflow", r.trace.spawner_overflow},
            {"agent",
             {{"dexteritySigma", agent.dexterity_sigma},
              {"strategyBudget", agent.strategy_budget},
              {"seed", agent.seed}}}};
}

int cmd_validate(const fs::path& script_path)
{
    std::string text;
    try {
        text = read_text(script_path);
    } catch (const CommandError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    try {
        const Script script = parse_script(text);
        std::cout << script_path.string() << ": ok (" << script.spawners.size() << " spawners, "
                  << script.boss.script.size() << " events, health " << script.boss.health << ")\n";
        return 0;
    } catch (const ParseError& e) {
        std::cerr << script_path.string() << ":" << e.what() << "\n";
        return 1;
    }
}

int cmd_evaluate(const fs::path& script_path, const std::string& dexterity, const std::string& strategy,
                 std::uint64_t seed, const std::string& trace_out, int threshold)
{
    const Script script = load_script(script_path);
    const AgentConfig agent = AgentConfig::from_levels(parse_skill_level(dexterity), parse_skill_level(strategy), seed);
    FitnessOptions options;
    options.infeasible_bullet_threshold = threshold;
    const EvaluationResult result = evaluate(script, agent, {}, options);
    std::cout << result_json(result, agent).dump(2) << "\n";
    if (!trace_out.empty()) {
        write_text(trace_out, format_trace({result.trace, script_hash(script), true}));
    }
    return 0;
}

int cmd_generate(std::string config_path, std::optional<std::uint64_t> seed, std::optional<long> generations,
                 std::optional<int> jobs, std::string out)
{
    if (config_path.empty()) {
        if (const char* env = std::getenv("TALAKAT_DEFAULT_CONFIG"); env != nullptr && *env != '\0') {
            config_path = env;
        }
    }
    ExperimentConfig config;
    if (!config_path.empty()) {
        config = parse_experiment_config(read_text(config_path));
    }
    if (seed) {
        config.seed = *seed;
    }
    if (generations) {
        config.generations = *generations;
    }
    if (jobs) {
        config.jobs = *jobs;
    }
    if (!out.empty()) {
        config.out = out;
    }
    if (config.out.empty()) {
        throw CommandError("no output directory (use --out or set \"out\" in the config)");
    }
    if (config.jobs < 1 || config.generations < 0) {
        throw CommandError("--jobs must be >= 1 and --generations >= 0");
    }
    const Archive archive = run_experiment(config, [](const GenerationLine& line) {
        std::cout << format_generation_line(line) << std::endl;
    });
    std::cerr << "archive " << config.out.string() << " generation " << archive.generation() << " hash "
              << hash_hex(archive.hash()) << "\n";
    return 0;
}

int cmd_stats(const fs::path& archive_dir, const std::string& format)
{
    if (!archive_exists(archive_dir)) {
        throw CommandError("no archive in " + archive_dir.string());
    }
    const Archive archive = load_archive(archive_dir).archive;
    const EliteHistogram h = elite_histogram(archive);
    if (h.elites == 0) {
        std::cerr << "warning: archive has no elites with fitness 1\n";
    }
    if (format == "csv") {
        std::cout << "dimension,bin,frequency\n";
        for (std::size_t d = 0; d < 3; ++d) {
            for (std::size_t b = 0; b < kBinsPerDimension; ++b) {
                std::cout << kDimensionNames[d] << "," << b << "," << h.frequency[d][b] << "\n";
            }
        }
    } else {
        for (std::size_t d = 0; d < 3; ++d) {
            const json line{{"dimension", kDimensionNames[d]}, {"elites", h.elites}, {"frequency", h.frequency[d]}};
            std::cout << line.dump() << "\n";
        }
    }
    return 0;
}

int cmd_render(const fs::path& script_path, const fs::path& trace_path, const std::string& frames_text,
               const fs::path& out_dir)
{
    const Script script = load_script(script_path);
    const TraceDocument doc = parse_trace(read_text(trace_path));
    if (doc.script_hash && *doc.script_hash != script_hash(script)) {
        throw CommandError("trace was recorded on a different script");
    }
    if (const auto frame = find_divergence(script, doc.trace)) {
        throw CommandError("trace diverges from the script at frame " + std::to_string(*frame));
    }
    std::vector<long> frames = parse_frames(frames_text);
    std::sort(frames.begin(), frames.end());
    const long last = static_cast<long>(doc.trace.actions.size());
    if (frames.back() > last) {
        throw CommandError("frame " + std::to_string(frames.back()) + " is beyond the trace (" +
                           std::to_string(last) + " frames)");
    }
    fs::create_directories(out_dir);
    GameState state = init(script);
    std::size_t used = 0;
    for (const long frame : frames) {
        while (state.frame() < frame) {
            state.advance(doc.trace.actions[used++]);
        }
        char name[32];
        std::snprintf(name, sizeof name, "frame-%06ld.ppm", frame);
        write_ppm(render(state), out_dir / name);
        std::cout << (out_dir / name).string() << "\n";
    }
    return 0;
}

int cmd_replay(const fs::path& script_path, const fs::path& trace_path)
{
    const Script script = load_script(script_path);
    const TraceDocument doc = parse_trace(read_text(trace_path));
    if (const auto frame = find_divergence(script, doc.trace)) {
        std::cerr << "trace diverges at frame " << *frame << "\n";
        return 1;
    }
    const PlayTrace rebuilt = replay(script, doc.trace.actions);
    std::cout << "frames " << rebuilt.frames_survived << ", died " << (rebuilt.died ? "yes" : "no")
              << ", remaining health " << rebuilt.remaining_boss_health << "\n";
    return 0;
}

int cmd_golden_record(const fs::path& script_path, const std::string& trace_path, long idle_frames,
                      const std::string& frames_text, const fs::path& out)
{
    const Script script = load_script(script_path);
    std::vector<Action> actions;
    if (!trace_path.empty()) {
        actions = parse_trace(read_text(trace_path)).trace.actions;
    } else {
        actions.assign(static_cast<std::size_t>(std::max(0L, idle_frames)), Action::Idle);
    }
    const GoldenTrace golden = record_golden(script, {}, std::move(actions), parse_frames(frames_text));
    write_text(out, format_golden(golden));
    std::cout << out.string() << ": " << golden.checkpoints.size() << " checkpoints\n";
    return 0;
}

int cmd_golden_check(const fs::path& script_path, const fs::path& golden_path)
{
    const Script script = load_script(script_path);
    const GoldenTrace golden = parse_golden(read_text(golden_path));
    const std::vector<std::string> problems = check_golden(script, golden);
    for (const std::string& p : problems) {
        std::cerr << p << "\n";
    }
    if (problems.empty()) {
        std::cout << golden_path.string() << ": " << golden.checkpoints.size() << " checkpoints match\n";
    }
    return problems.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Talakat level generation toolkit"};
    app.require_subcommand(1);

    std::string script_path;
    std::string trace_path;
    std::string out;
    std::string frames = "0";

    auto* validate = app.add_subcommand("validate", "Check that a script parses and validates");
    validate->add_option("--script", script_path, "Script file")->required();

    std::string dexterity = "high";
    std::string strategy = "high";
    std::uint64_t eval_seed = 0;
    int threshold = 1;
    auto* evaluate = app.add_subcommand("evaluate", "Play a script with the agent and print the evaluation");
    evaluate->add_option("--script", script_path, "Script file")->required();
    evaluate->add_option("--dexterity", dexterity, "low | medium | high")
        ->check(CLI::IsMember({"low", "medium", "high"}));
    evaluate->add_option("--strategy", strategy, "low | medium | high")
        ->check(CLI::IsMember({"low", "medium", "high"}));
    evaluate->add_option("--seed", eval_seed, "Agent seed");
    evaluate->add_option("--trace-out", trace_path, "Write the play trace here");
    evaluate->add_option("--infeasible-bullet-threshold", threshold, "1 (default) or 10")
        ->check(CLI::IsMember({1, 10}));

    std::string config_path;
    std::optional<std::uint64_t> gen_seed;
    std::optional<long> generations;
    std::optional<int> jobs;
    auto* generate = app.add_subcommand("generate", "Run or resume a MAP-Elites experiment");
    generate->add_option("--config", config_path, "Experiment config (default: $TALAKAT_DEFAULT_CONFIG)");
    generate->add_option("--seed", gen_seed, "Archive seed");
    generate->add_option("--generations", generations, "Total generations");
    generate->add_option("--jobs", jobs, "Evaluation threads");
    generate->add_option("--out", out, "Archive directory");

    std::string archive_dir;
    std::string format = "csv";
    auto* stats = app.add_subcommand("stats", "Bin histograms of the fitness-1 elites");
    stats->add_option("--archive", archive_dir, "Archive directory")->required();
    stats->add_option("--format", format, "csv | json-lines")->check(CLI::IsMember({"csv", "json-lines"}));

    auto* render_cmd = app.add_subcommand("render", "Write PPM snapshots of a replayed trace");
    render_cmd->add_option("--script", script_path, "Script file")->required();
    render_cmd->add_option("--trace", trace_path, "Trace file")->required();
    render_cmd->add_option("--frames", frames, "Comma separated frame numbers")->required();
    render_cmd->add_option("--out-dir", out, "Output directory")->required();

    auto* replay_cmd = app.add_subcommand("replay", "Check that a trace reproduces on a script");
    replay_cmd->add_option("--script", script_path, "Script file")->required();
    replay_cmd->add_option("--trace", trace_path, "Trace file")->required();

    long idle_frames = 0;
    std::string golden_path;
    auto* golden = app.add_subcommand("golden", "Record or check golden traces");
    golden->require_subcommand(1);
    auto* record = golden->add_subcommand("record", "Record checkpoints for a script");
    record->add_option("--script", script_path, "Script file")->required();
    record->add_option("--trace", trace_path, "Take actions from this trace");
    record->add_option("--idle", idle_frames, "Otherwise stay idle for this many frames");
    record->add_option("--frames", frames, "Checkpoint frames")->required();
    record->add_option("--out", out, "Golden file")->required();
    auto* check = golden->add_subcommand("check", "Compare a script against a golden trace");
    check->add_option("--script", script_path, "Script file")->required();
    check->add_option("--golden", golden_path, "Golden file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            return cmd_validate(script_path);
        }
        if (*evaluate) {
            return cmd_evaluate(script_path, dexterity, strategy, eval_seed, trace_path, threshold);
        }
        if (*generate) {
            return cmd_generate(config_path, gen_seed, generations, jobs, out);
        }
        if (*stats) {
            return cmd_stats(archive_dir, format);
        }
        if (*render_cmd) {
            return cmd_render(script_path, trace_path, frames, out);
        }
        if (*replay_cmd) {
            return cmd_replay(script_path, trace_path);
        }
        if (*record) {
            return cmd_golden_record(script_path, trace_path, idle_frames, frames, out);
        }
        if (*check) {
            return cmd_golden_check(script_path, golden_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
