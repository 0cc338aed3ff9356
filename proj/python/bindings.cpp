#include "talakat/evaluation.hpp"
#include "talakat/genotype.hpp"
#include "talakat/metrics.hpp"
#include "talakat/trace_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace talakat;

namespace {

Chromosome to_chromosome(const std::vector<std::vector<int>>& arrays)
{
    if (arrays.size() != kArrayCount) {
        throw py::value_error("a chromosome has " + std::to_string(kArrayCount) + " arrays");
    }
    Chromosome c;
    for (std::size_t i = 0; i < arrays.size(); ++i) {
        if (arrays[i].size() != kCodonsPerArray) {
            throw py::value_error("each array has " + std::to_string(kCodonsPerArray) + " codons");
        }
        for (std::size_t k = 0; k < arrays[i].size(); ++k) {
            const int codon = arrays[i][k];
            if (codon < 0 || codon >= kCodonLimit) {
                throw py::value_error("codons lie in [0, " + std::to_string(kCodonLimit) + ")");
            }
            c.arrays[i][k] = static_cast<std::uint8_t>(codon);
        }
    }
    return c;
}

std::vector<std::vector<int>> from_chromosome(const Chromosome& c)
{
    std::vector<std::vector<int>> out;
    for (const auto& array : c.arrays) {
        out.emplace_back(array.begin(), array.end());
    }
    return out;
}

std::vector<Action> to_actions(const std::vector<int>& values)
{
    std::vector<Action> out;
    for (const int v : values) {
        if (v < 0 || v >= kActionCount) {
            throw py::value_error("actions lie in [0, " + std::to_string(kActionCount) + ")");
        }
        out.push_back(action_from_index(v));
    }
    return out;
}

py::dict result_dict(const EvaluationResult& r, const Script& script)
{
    py::dict d;
    d["entropy"] = r.entropy;
    d["risk"] = r.risk;
    d["distribution"] = r.distribution;
    d["bins"] = r.bins;
    d["feasible"] = r.feasible;
    d["fitness"] = r.fitness;
    d["frames_survived"] = r.trace.frames_survived;
    d["remaining_boss_health"] = r.trace.remaining_boss_health;
    d["died"] = r.trace.died;
    d["trace"] = format_trace({r.trace, script_hash(script), true});
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Talakat bullet hell level generation";
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("validate", [](const std::string& text) { return validation_errors(parse_script(text)); },
          py::arg("text"), "Parse a script; returns semantic problems (empty when valid).");
    m.def("normalize", [](const std::string& text) { return serialize(parse_script(text)); }, py::arg("text"),
          "Canonical JSON form of a script.");
    m.def("script_hash", [](const std::string& text) { return hash_hex(script_hash(parse_script(text))); },
          py::arg("text"));

    m.def("random_chromosome",
          [](std::uint64_t seed) {
              Rng rng(seed);
              return from_chromosome(random_chromosome(rng));
          },
          py::arg("seed"));
    m.def("decode", [](const std::vector<std::vector<int>>& arrays) { return serialize(decode(to_chromosome(arrays))); },
          py::arg("chromosome"), "Script text derived from a chromosome.");

    m.def("entropy", [](const std::vector<int>& actions) { return entropy_metric(to_actions(actions)); },
          py::arg("actions"));

    m.def("evaluate",
          [](const std::string& text, const std::string& dexterity, const std::string& strategy, std::uint64_t seed) {
              const Script script = parse_script(text);
              const AgentConfig agent =
                  AgentConfig::from_levels(parse_skill_level(dexterity), parse_skill_level(strategy), seed);
              EvaluationResult r;
              {
                  py::gil_scoped_release release;
                  r = evaluate(script, agent);
              }
              return result_dict(r, script);
          },
          py::arg("text"), py::arg("dexterity") = "low", py::arg("strategy") = "low", py::arg("seed") = 0);

    m.def("replay",
          [](const std::string& text, const std::string& trace) {
              const Script script = parse_script(text);
              const TraceDocument doc = parse_trace(trace);
              const std::optional<long> frame = find_divergence(script, doc.trace);
              return frame ? py::object(py::int_(*frame)) : py::object(py::none());
          },
          py::arg("text"), py::arg("trace"), "First diverging frame, or None when the trace reproduces.");

    m.def("check_golden",
          [](const std::string& text, const std::string& golden) {
              return check_golden(parse_script(text), parse_golden(golden));
          },
          py::arg("text"), py::arg("golden"));

    py::class_<GameState>(m, "Simulation")
        .def(py::init([](const std::string& text) { return init(parse_script(text)); }), py::arg("text"))
        .def("advance", [](GameState& s, int action) { s.advance(to_actions({action}).front()); },
             py::arg("action") = 0)
        .def_property_readonly("frame", &GameState::frame)
        .def_property_readonly("boss_health", &GameState::boss_health)
        .def_property_readonly("player", [](const GameState& s) { return py::make_tuple(s.player().x, s.player().y); })
        .def_property_readonly("player_dead", &GameState::player_dead)
        .def_property_readonly("terminal", &GameState::terminal)
        .def_property_readonly("spawner_count", [](const GameState& s) { return s.spawners().size(); })
        .def_property_readonly("bullets",
                               [](const GameState& s) {
                                   py::list out;
                                   for (const Bullet& b : s.bullets()) {
                                       out.append(py::make_tuple(b.pos.x, b.pos.y, b.radius));
                                   }
                                   return out;
                               })
        .def("hash", [](const GameState& s) { return hash_hex(state_hash(s)); });
}
