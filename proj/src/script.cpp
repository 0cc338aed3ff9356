#include "talakat/script.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace talakat {

namespace {

constexpr std::array<std::string_view, 6> kReservedIds{"bullet", "wait", "bullets",
                                                       "spawners", "spawn", "clear"};

std::vector<std::string_view> split_commas(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        std::string_view field = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
        while (!field.empty() && field.front() == ' ') {
            field.remove_prefix(1);
        }
        while (!field.empty() && field.back() == ' ') {
            field.remove_suffix(1);
        }
        out.push_back(field);
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

double to_number(std::string_view field)
{
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double out = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size() || !std::isfinite(out)) {
        throw std::invalid_argument("'" + std::string(field) + "' is not a number");
    }
    return out;
}

struct PendingRef {
    std::string id;
    SourcePos pos;
    std::string path;
};

class ScriptBuilder {
public:
    Script build(const TextValue& root)
    {
        expect_object(root, "");
        check_keys(root, "", {"spawners", "boss"});
        const TextValue* spawners = root.find("spawners");
        if (spawners == nullptr) {
            fail(root, "", "missing 'spawners' section");
        }
        const TextValue* boss = root.find("boss");
        if (boss == nullptr) {
            fail(root, "", "missing 'boss' section");
        }

        Script script;
        expect_object(*spawners, "spawners");
        if (spawners->as_object().empty()) {
            fail(*spawners, "spawners", "at least one spawner is required");
        }
        for (const auto& [id, body] : spawners->as_object()) {
            const std::string path = "spawners." + id;
            if (id.empty() || id.find(',') != std::string::npos || is_reserved_id(id)) {
                fail(body, path, "'" + id + "' cannot be used as a spawner id");
            }
            script.spawners.emplace(id, spawner(body, path));
        }
        script.boss = boss_section(*boss, "boss");

        for (const PendingRef& ref : refs_) {
            if (!script.spawners.contains(ref.id)) {
                throw ParseError("unknown spawner '" + ref.id + "'", ref.pos, ref.path);
            }
        }
        return script;
    }

private:
    std::vector<PendingRef> refs_;

    [[noreturn]] static void fail(const TextValue& at, const std::string& path, const std::string& message)
    {
        throw ParseError(message, at.pos(), path);
    }

    static void expect_object(const TextValue& value, const std::string& path)
    {
        if (!value.is_object()) {
            fail(value, path, "expected an object, found " + std::string(value.type_name()));
        }
    }

    static void check_keys(const TextValue& object, const std::string& path,
                           std::initializer_list<std::string_view> allowed)
    {
        for (const auto& [key, member] : object.as_object()) {
            bool known = false;
            for (const std::string_view name : allowed) {
                known = known || key == name;
            }
            if (!known) {
                fail(member, join(path, key), "unknown field '" + key + "'");
            }
        }
    }

    static std::string join(const std::string& path, std::string_view key)
    {
        return path.empty() ? std::string(key) : path + "." + std::string(key);
    }

    // Numbers may be written bare or quoted ("4").
    static double number(const TextValue& value, const std::string& path)
    {
        if (value.is_number()) {
            return value.as_number();
        }
        if (value.is_string()) {
            try {
                return to_number(value.as_string());
            } catch (const std::invalid_argument& e) {
                fail(value, path, e.what());
            }
        }
        fail(value, path, "expected a number, found " + std::string(value.type_name()));
    }

    static int positive_int(const TextValue& value, const std::string& path)
    {
        const double n = number(value, path);
        if (n < 1.0 || n != std::floor(n) || n > 1e9) {
            fail(value, path, "expected an integer >= 1, found " + format_number(n));
        }
        return static_cast<int>(n);
    }

    static ValueSampler sampler(const TextValue& value, const std::string& path)
    {
        if (value.is_number()) {
            return ValueSampler::constant(value.as_number());
        }
        if (!value.is_string()) {
            fail(value, path, "expected a sampler string, found " + std::string(value.type_name()));
        }
        try {
            return parse_sampler(value.as_string());
        } catch (const std::invalid_argument& e) {
            fail(value, path, e.what());
        }
    }

    void reference(const std::string& id, const TextValue& at, const std::string& path)
    {
        refs_.push_back({id, at.pos(), path});
    }

    SpawnerDef spawner(const TextValue& body, const std::string& path)
    {
        expect_object(body, path);
        check_keys(body, path,
                   {"pattern", "patternTime", "patternRepeat", "spawnerAngle", "spawnerRadius",
                    "spawnedNumber", "spawnedAngle", "spawnedSpeed", "bulletRadius", "bulletColor"});
        SpawnerDef def;

        const TextValue* pattern = body.find("pattern");
        const std::string pattern_path = join(path, "pattern");
        if (pattern == nullptr) {
            fail(body, pattern_path, "missing pattern");
        }
        if (!pattern->is_array()) {
            fail(*pattern, pattern_path, "expected an array, found " + std::string(pattern->type_name()));
        }
        if (pattern->as_array().empty()) {
            fail(*pattern, pattern_path, "pattern must not be empty");
        }
        for (std::size_t i = 0; i < pattern->as_array().size(); ++i) {
            const TextValue& item = pattern->as_array()[i];
            const std::string item_path = pattern_path + "[" + std::to_string(i) + "]";
            if (!item.is_string()) {
                fail(item, item_path, "expected a pattern step string");
            }
            const std::string& word = item.as_string();
            if (word == "bullet") {
                def.pattern.push_back(PatternStep::bullet());
            } else if (word == "wait") {
                def.pattern.push_back(PatternStep::wait());
            } else {
                reference(word, item, item_path);
                def.pattern.push_back(PatternStep::spawner(word));
            }
        }

        if (const TextValue* v = body.find("patternTime")) {
            def.pattern_time = positive_int(*v, join(path, "patternTime"));
        }
        if (const TextValue* v = body.find("patternRepeat")) {
            if (v->is_string() && (v->as_string() == "infinite" || v->as_string() == "inf")) {
                def.pattern_repeat.reset();
            } else {
                def.pattern_repeat = positive_int(*v, join(path, "patternRepeat"));
            }
        }

        const std::array<std::pair<std::string_view, ValueSampler SpawnerDef::*>, 7> fields{{
            {"spawnerAngle", &SpawnerDef::spawner_angle},
            {"spawnerRadius", &SpawnerDef::spawner_radius},
            {"spawnedNumber", &SpawnerDef::spawned_number},
            {"spawnedAngle", &SpawnerDef::spawned_angle},
            {"spawnedSpeed", &SpawnerDef::spawned_speed},
            {"bulletRadius", &SpawnerDef::bullet_radius},
            {"bulletColor", &SpawnerDef::bullet_color},
        }};
        for (const auto& [name, member] : fields) {
            if (const TextValue* v = body.find(name)) {
                def.*member = sampler(*v, join(path, name));
            }
        }
        if (def.spawned_number.min_value < 1.0) {
            fail(*body.find("spawnedNumber"), join(path, "spawnedNumber"), "spawned count must be >= 1");
        }
        if (def.bullet_radius.min_value < 0.0) {
            fail(*body.find("bulletRadius"), join(path, "bulletRadius"), "bullet radius must be >= 0");
        }
        return def;
    }

    BossDef boss_section(const TextValue& body, const std::string& path)
    {
        expect_object(body, path);
        check_keys(body, path, {"bossHealth", "bossPosition", "script"});
        BossDef boss;

        const TextValue* health = body.find("bossHealth");
        if (health == nullptr) {
            fail(body, join(path, "bossHealth"), "missing bossHealth");
        }
        boss.health = positive_int(*health, join(path, "bossHealth"));

        if (const TextValue* pos = body.find("bossPosition")) {
            boss.position = position(*pos, join(path, "bossPosition"));
        }

        const TextValue* events = body.find("script");
        const std::string script_path = join(path, "script");
        if (events == nullptr) {
            fail(body, script_path, "missing script");
        }
        if (!events->is_array()) {
            fail(*events, script_path, "expected an array, found " + std::string(events->type_name()));
        }
        for (std::size_t i = 0; i < events->as_array().size(); ++i) {
            boss.script.push_back(boss_event(events->as_array()[i], script_path + "[" + std::to_string(i) + "]"));
        }
        return boss;
    }

    static Vec2 position(const TextValue& value, const std::string& path)
    {
        std::vector<double> coords;
        if (value.is_string()) {
            for (const std::string_view field : split_commas(value.as_string())) {
                try {
                    coords.push_back(to_number(field));
                } catch (const std::invalid_argument& e) {
                    fail(value, path, e.what());
                }
            }
        } else if (value.is_array()) {
            for (const TextValue& item : value.as_array()) {
                coords.push_back(number(item, path));
            }
        } else {
            fail(value, path, "expected \"x, y\"");
        }
        if (coords.size() != 2) {
            fail(value, path, "expected exactly two coordinates");
        }
        for (const double c : coords) {
            if (c < 0.0 || c > 1.0) {
                fail(value, path, "coordinates are screen fractions in [0, 1]");
            }
        }
        return {coords[0], coords[1]};
    }

    BossEvent boss_event(const TextValue& body, const std::string& path)
    {
        expect_object(body, path);
        check_keys(body, path, {"health", "events"});
        BossEvent event;
        const TextValue* trigger = body.find("health");
        if (trigger == nullptr) {
            fail(body, join(path, "health"), "missing health trigger");
        }
        event.trigger = number(*trigger, join(path, "health"));
        if (!(event.trigger > 0.0 && event.trigger <= 1.0)) {
            fail(*trigger, join(path, "health"), "trigger " + format_number(event.trigger) + " is outside (0, 1]");
        }
        const TextValue* actions = body.find("events");
        const std::string actions_path = join(path, "events");
        if (actions == nullptr) {
            fail(body, actions_path, "missing events");
        }
        if (!actions->is_array() || actions->as_array().empty()) {
            fail(*actions, actions_path, "expected a non-empty array of events");
        }
        for (std::size_t i = 0; i < actions->as_array().size(); ++i) {
            const TextValue& item = actions->as_array()[i];
            const std::string item_path = actions_path + "[" + std::to_string(i) + "]";
            if (!item.is_string()) {
                fail(item, item_path, "expected an event string");
            }
            try {
                event.actions.push_back(parse_event(item.as_string()));
            } catch (const std::invalid_argument& e) {
                fail(item, item_path, e.what());
            }
            const EventAction& action = event.actions.back();
            if (action.kind == EventAction::Kind::SpawnRef || action.kind == EventAction::Kind::ClearRef) {
                reference(action.ref, item, item_path);
            }
        }
        return event;
    }
};

void check_sampler(const ValueSampler& s, const std::string& path, std::vector<std::string>& out)
{
    if (!(s.min_value <= s.max_value)) {
        out.push_back(path + ": min exceeds max");
    }
    if (s.interval < 1) {
        out.push_back(path + ": interval must be >= 1");
    }
    if (!std::isfinite(s.min_value) || !std::isfinite(s.max_value) || !std::isfinite(s.rate)) {
        out.push_back(path + ": non-finite value");
    }
}

}  // namespace

bool is_reserved_id(std::string_view id)
{
    for (const std::string_view word : kReservedIds) {
        if (id == word) {
            return true;
        }
    }
    return false;
}

EventAction parse_event(std::string_view text)
{
    const std::vector<std::string_view> fields = split_commas(text);
    EventAction action;
    if (fields[0] == "spawn") {
        if (fields.size() != 2 && fields.size() != 4) {
            throw std::invalid_argument("spawn takes an id and optionally speed and angle");
        }
        if (fields[1] == "bullet") {
            if (fields.size() != 4) {
                throw std::invalid_argument("spawn,bullet needs speed and angle");
            }
            action.kind = EventAction::Kind::SpawnBullet;
        } else {
            action.kind = EventAction::Kind::SpawnRef;
            action.ref = std::string(fields[1]);
        }
        if (fields.size() == 4) {
            action.speed = to_number(fields[2]);
            action.angle = to_number(fields[3]);
        }
    } else if (fields[0] == "clear") {
        if (fields.size() != 2) {
            throw std::invalid_argument("clear takes exactly one argument");
        }
        if (fields[1] == "bullets") {
            action.kind = EventAction::Kind::ClearBullets;
        } else if (fields[1] == "spawners") {
            action.kind = EventAction::Kind::ClearSpawners;
        } else {
            action.kind = EventAction::Kind::ClearRef;
            action.ref = std::string(fields[1]);
        }
    } else {
        throw std::invalid_argument("unknown event '" + std::string(fields[0]) + "'");
    }
    if ((action.kind == EventAction::Kind::SpawnRef || action.kind == EventAction::Kind::ClearRef) &&
        (action.ref.empty() || is_reserved_id(action.ref))) {
        throw std::invalid_argument("'" + action.ref + "' is not a spawner id");
    }
    return action;
}

std::string format_event(const EventAction& action)
{
    std::string out;
    switch (action.kind) {
    case EventAction::Kind::SpawnRef: out = "spawn," + action.ref; break;
    case EventAction::Kind::SpawnBullet: out = "spawn,bullet"; break;
    case EventAction::Kind::ClearRef: return "clear," + action.ref;
    case EventAction::Kind::ClearBullets: return "clear,bullets";
    case EventAction::Kind::ClearSpawners: return "clear,spawners";
    }
    if (action.speed || action.angle) {
        out += "," + format_number(action.speed.value_or(0.0)) + "," + format_number(action.angle.value_or(0.0));
    }
    return out;
}

Script parse_script(std::string_view text)
{
    return ScriptBuilder{}.build(parse_structured_text(text));
}

std::vector<std::string> validation_errors(const Script& script)
{
    std::vector<std::string> out;
    if (script.spawners.empty()) {
        out.emplace_back("spawners: at least one spawner is required");
    }
    const auto check_ref = [&](const std::string& id, const std::string& path) {
        if (!script.spawners.contains(id)) {
            out.push_back(path + ": unknown spawner '" + id + "'");
        }
    };
    for (const auto& [id, def] : script.spawners) {
        const std::string path = "spawners." + id;
        if (id.empty() || id.find(',') != std::string::npos || is_reserved_id(id)) {
            out.push_back(path + ": invalid spawner id");
        }
        if (def.pattern.empty()) {
            out.push_back(path + ".pattern: pattern must not be empty");
        }
        for (std::size_t i = 0; i < def.pattern.size(); ++i) {
            if (def.pattern[i].kind == PatternStep::Kind::Ref) {
                check_ref(def.pattern[i].ref, path + ".pattern[" + std::to_string(i) + "]");
            }
        }
        if (def.pattern_time < 1) {
            out.push_back(path + ".patternTime: must be >= 1");
        }
        if (def.pattern_repeat && *def.pattern_repeat < 1) {
            out.push_back(path + ".patternRepeat: must be >= 1");
        }
        check_sampler(def.spawner_angle, path + ".spawnerAngle", out);
        check_sampler(def.spawner_radius, path + ".spawnerRadius", out);
        check_sampler(def.spawned_number, path + ".spawnedNumber", out);
        check_sampler(def.spawned_angle, path + ".spawnedAngle", out);
        check_sampler(def.spawned_speed, path + ".spawnedSpeed", out);
        check_sampler(def.bullet_radius, path + ".bulletRadius", out);
        check_sampler(def.bullet_color, path + ".bulletColor", out);
        if (def.spawned_number.min_value < 1.0) {
            out.push_back(path + ".spawnedNumber: spawned count must be >= 1");
        }
        if (def.bullet_radius.min_value < 0.0) {
            out.push_back(path + ".bulletRadius: bullet radius must be >= 0");
        }
    }
    if (script.boss.health < 1) {
        out.emplace_back("boss.bossHealth: must be >= 1");
    }
    const Vec2 p = script.boss.position;
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
        out.emplace_back("boss.bossPosition: coordinates are screen fractions in [0, 1]");
    }
    for (std::size_t i = 0; i < script.boss.script.size(); ++i) {
        const BossEvent& event = script.boss.script[i];
        const std::string path = "boss.script[" + std::to_string(i) + "]";
        if (!(event.trigger > 0.0 && event.trigger <= 1.0)) {
            out.push_back(path + ".health: trigger outside (0, 1]");
        }
        if (event.actions.empty()) {
            out.push_back(path + ".events: must not be empty");
        }
        for (std::size_t j = 0; j < event.actions.size(); ++j) {
            const EventAction& action = event.actions[j];
            const std::string action_path = path + ".events[" + std::to_string(j) + "]";
            if (action.kind == EventAction::Kind::SpawnRef || action.kind == EventAction::Kind::ClearRef) {
                check_ref(action.ref, action_path);
            }
            if (action.kind == EventAction::Kind::SpawnBullet && (!action.speed || !action.angle)) {
                out.push_back(action_path + ": spawn,bullet needs speed and angle");
            }
        }
    }
    return out;
}

void validate(const Script& script)
{
    const std::vector<std::string> errors = validation_errors(script);
    if (!errors.empty()) {
        throw std::invalid_argument(errors.front());
    }
}

std::string serialize(const Script& script)
{
    std::string out = "{\n  \"spawners\": {";
    bool first = true;
    for (const auto& [id, def] : script.spawners) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "    " + quote_string(id) + ": {\n      \"pattern\": [";
        for (std::size_t i = 0; i < def.pattern.size(); ++i) {
            const PatternStep& step = def.pattern[i];
            out += i == 0 ? "" : ", ";
            switch (step.kind) {
            case PatternStep::Kind::Bullet: out += "\"bullet\""; break;
            case PatternStep::Kind::Wait: out += "\"wait\""; break;
            case PatternStep::Kind::Ref: out += quote_string(step.ref); break;
            }
        }
        out += "],\n";
        out += "      \"patternTime\": \"" + std::to_string(def.pattern_time) + "\",\n";
        out += "      \"patternRepeat\": \"" +
               (def.pattern_repeat ? std::to_string(*def.pattern_repeat) : std::string("infinite")) + "\",\n";
        out += "      \"spawnerAngle\": " + quote_string(format_sampler(def.spawner_angle)) + ",\n";
        out += "      \"spawnerRadius\": " + quote_string(format_sampler(def.spawner_radius)) + ",\n";
        out += "      \"spawnedNumber\": " + quote_string(format_sampler(def.spawned_number)) + ",\n";
        out += "      \"spawnedAngle\": " + quote_string(format_sampler(def.spawned_angle)) + ",\n";
        out += "      \"spawnedSpeed\": " + quote_string(format_sampler(def.spawned_speed)) + ",\n";
        out += "      \"bulletRadius\": " + quote_string(format_sampler(def.bullet_radius)) + ",\n";
        out += "      \"bulletColor\": " + quote_string(format_sampler(def.bullet_color)) + "\n";
        out += "    }";
    }
    out += "\n  },\n  \"boss\": {\n";
    out += "    \"bossHealth\": " + std::to_string(script.boss.health) + ",\n";
    out += "    \"bossPosition\": \"" + format_number(script.boss.position.x) + ", " +
           format_number(script.boss.position.y) + "\",\n";
    out += "    \"script\": [";
    for (std::size_t i = 0; i < script.boss.script.size(); ++i) {
        const BossEvent& event = script.boss.script[i];
        out += i == 0 ? "\n" : ",\n";
        out += "      {\n        \"health\": " + format_number(event.trigger) + ",\n        \"events\": [";
        for (std::size_t j = 0; j < event.actions.size(); ++j) {
            out += (j == 0 ? "" : ", ") + quote_string(format_event(event.actions[j]));
        }
        out += "]\n      }";
    }
    out += script.boss.script.empty() ? "]\n" : "\n    ]\n";
    out += "  }\n}\n";
    return out;
}

}  // namespace talakat
