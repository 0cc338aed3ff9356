#pragma once

// Relaxed JSON reader for Talakat documents.
//
// Accepts strict JSON plus: unquoted identifier keys, single-quoted
// strings, optional or trailing commas between members and elements, and
// `//` / `/* */` comments. Every value remembers where it started so the
// script builder can report errors against the source text.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace talakat {

struct SourcePos {
    std::size_t line = 1;
    std::size_t column = 1;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, SourcePos pos, std::string path = {});

    [[nodiscard]] const SourcePos& pos() const noexcept { return pos_; }
    [[nodiscard]] const std::string& path() const noexcept { return path_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    SourcePos pos_;
    std::string path_;
    std::string detail_;
};

class TextValue;

using TextArray = std::vector<TextValue>;
using TextObject = std::vector<std::pair<std::string, TextValue>>;

class TextValue {
public:
    using Storage = std::variant<std::nullptr_t, bool, double, std::string,
                                 std::shared_ptr<TextArray>, std::shared_ptr<TextObject>>;

    TextValue() = default;
    TextValue(Storage value, SourcePos pos) : value_(std::move(value)), pos_(pos) {}

    [[nodiscard]] bool is_null() const { return std::holds_alternative<std::nullptr_t>(value_); }
    [[nodiscard]] bool is_bool() const { return std::holds_alternative<bool>(value_); }
    [[nodiscard]] bool is_number() const { return std::holds_alternative<double>(value_); }
    [[nodiscard]] bool is_string() const { return std::holds_alternative<std::string>(value_); }
    [[nodiscard]] bool is_array() const { return std::holds_alternative<std::shared_ptr<TextArray>>(value_); }
    [[nodiscard]] bool is_object() const { return std::holds_alternative<std::shared_ptr<TextObject>>(value_); }

    [[nodiscard]] bool as_bool() const { return std::get<bool>(value_); }
    [[nodiscard]] double as_number() const { return std::get<double>(value_); }
    [[nodiscard]] const std::string& as_string() const { return std::get<std::string>(value_); }
    [[nodiscard]] const TextArray& as_array() const { return *std::get<std::shared_ptr<TextArray>>(value_); }
    [[nodiscard]] const TextObject& as_object() const { return *std::get<std::shared_ptr<TextObject>>(value_); }

    /// Member lookup on an object; nullptr when absent or when this is not an object.
    [[nodiscard]] const TextValue* find(std::string_view key) const;

    [[nodiscard]] const SourcePos& pos() const { return pos_; }
    [[nodiscard]] std::string_view type_name() const;

private:
    Storage value_ = nullptr;
    SourcePos pos_;
};

/// Parses a whole document. Throws ParseError with the offending position.
[[nodiscard]] TextValue parse_structured_text(std::string_view text);

/// Shortest decimal form that reads back to the same double ("4", "0.2", "-12.5").
[[nodiscard]] std::string format_number(double value);

/// Double-quoted JSON string literal with escapes.
[[nodiscard]] std::string quote_string(std::string_view text);

}  // namespace talakat
