#include "talakat/structured_text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace talakat {

namespace {

std::string describe(const std::string& message, SourcePos pos, const std::string& path)
{
    std::string out = std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
    if (!path.empty()) {
        out += path + ": ";
    }
    return out + message;
}

bool is_ident_start(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
}

bool is_ident_char(char c)
{
    return is_ident_start(c) || (c >= '0' && c <= '9') || c == '-';
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    TextValue document()
    {
        skip_space();
        TextValue root = value();
        skip_space();
        if (!at_end()) {
            fail("unexpected trailing content");
        }
        return root;
    }

private:
    std::string_view text_;
    std::size_t offset_ = 0;
    SourcePos pos_;
    int depth_ = 0;

    static constexpr int kMaxDepth = 256;

    [[nodiscard]] bool at_end() const { return offset_ >= text_.size(); }
    [[nodiscard]] char peek() const { return at_end() ? '\0' : text_[offset_]; }

    char advance()
    {
        const char c = text_[offset_++];
        if (c == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_space()
    {
        while (!at_end()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else if (c == '/' && offset_ + 1 < text_.size() && text_[offset_ + 1] == '/') {
                while (!at_end() && peek() != '\n') {
                    advance();
                }
            } else if (c == '/' && offset_ + 1 < text_.size() && text_[offset_ + 1] == '*') {
                advance();
                advance();
                while (!at_end() && !(peek() == '*' && offset_ + 1 < text_.size() && text_[offset_ + 1] == '/')) {
                    advance();
                }
                if (at_end()) {
                    fail("unterminated comment");
                }
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    TextValue value()
    {
        if (at_end()) {
            fail("unexpected end of input");
        }
        const SourcePos start = pos_;
        const char c = peek();
        if (c == '{') {
            return object();
        }
        if (c == '[') {
            return array();
        }
        if (c == '"' || c == '\'') {
            return {string_literal(), start};
        }
        if (c == '-' || c == '+' || c == '.' || (c >= '0' && c <= '9')) {
            return {number(), start};
        }
        if (is_ident_start(c)) {
            const std::string word = identifier();
            if (word == "true") {
                return {true, start};
            }
            if (word == "false") {
                return {false, start};
            }
            if (word == "null") {
                return {nullptr, start};
            }
            throw ParseError("unexpected bare word '" + word + "'", start);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    TextValue object()
    {
        const SourcePos start = pos_;
        enter();
        advance();  // {
        auto members = std::make_shared<TextObject>();
        skip_space();
        while (peek() != '}') {
            if (at_end()) {
                fail("unterminated object");
            }
            const SourcePos key_pos = pos_;
            std::string key;
            if (peek() == '"' || peek() == '\'') {
                key = string_literal();
            } else if (is_ident_start(peek())) {
                key = identifier();
            } else {
                fail("expected member name");
            }
            for (const auto& [existing, unused] : *members) {
                if (existing == key) {
                    throw ParseError("duplicate key '" + key + "'", key_pos);
                }
            }
            skip_space();
            if (peek() != ':') {
                fail("expected ':' after member name '" + key + "'");
            }
            advance();
            skip_space();
            TextValue member = value();
            members->emplace_back(std::move(key), std::move(member));
            skip_space();
            if (peek() == ',') {
                advance();
                skip_space();
            }
        }
        advance();  // }
        leave();
        return {std::move(members), start};
    }

    TextValue array()
    {
        const SourcePos start = pos_;
        enter();
        advance();  // [
        auto items = std::make_shared<TextArray>();
        skip_space();
        while (peek() != ']') {
            if (at_end()) {
                fail("unterminated array");
            }
            items->push_back(value());
            skip_space();
            if (peek() == ',') {
                advance();
                skip_space();
            }
        }
        advance();  // ]
        leave();
        return {std::move(items), start};
    }

    std::string identifier()
    {
        std::string out;
        while (!at_end() && is_ident_char(peek())) {
            out.push_back(advance());
        }
        return out;
    }

    std::string string_literal()
    {
        const char quote = advance();
        std::string out;
        while (true) {
            if (at_end()) {
                fail("unterminated string");
            }
            const char c = advance();
            if (c == quote) {
                break;
            }
            if (c == '\n') {
                fail("newline inside string");
            }
            if (c != '\\') {
                out.push_back(c);
                continue;
            }
            if (at_end()) {
                fail("unterminated escape");
            }
            const char e = advance();
            switch (e) {
            case '"': out.push_back('"'); break;
            case '\'': out.push_back('\''); break;
            case '\\': out.push_back('\\'); break;
            case '/': out.push_back('/'); break;
            case 'b': out.push_back('\b'); break;
            case 'f': out.push_back('\f'); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            case 't': out.push_back('\t'); break;
            case 'u': {
                unsigned code = 0;
                for (int i = 0; i < 4; ++i) {
                    if (at_end()) {
                        fail("truncated \\u escape");
                    }
                    const char h = advance();
                    code <<= 4;
                    if (h >= '0' && h <= '9') {
                        code |= static_cast<unsigned>(h - '0');
                    } else if (h >= 'a' && h <= 'f') {
                        code |= static_cast<unsigned>(h - 'a' + 10);
                    } else if (h >= 'A' && h <= 'F') {
                        code |= static_cast<unsigned>(h - 'A' + 10);
                    } else {
                        fail("bad hex digit in \\u escape");
                    }
                }
                append_utf8(out, code);
                break;
            }
            default: fail(std::string("unknown escape '\\") + e + "'");
            }
        }
        return out;
    }

    static void append_utf8(std::string& out, unsigned code)
    {
        if (code < 0x80) {
            out.push_back(static_cast<char>(code));
        } else if (code < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (code >> 6)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xE0 | (code >> 12)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        }
    }

    double number()
    {
        const std::size_t begin = offset_;
        if (peek() == '+') {
            advance();
        }
        const std::size_t digits = offset_;
        while (!at_end()) {
            const char c = peek();
            if ((c >= '0' && c <= '9') || c == '.' || c == 'e' || c == 'E' || c == '-' || c == '+') {
                advance();
            } else {
                break;
            }
        }
        const std::string_view token = text_.substr(digits, offset_ - digits);
        double out = 0.0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
        if (ec != std::errc{} || end != token.data() + token.size()) {
            fail("malformed number '" + std::string(text_.substr(begin, offset_ - begin)) + "'");
        }
        return out;
    }

    void enter()
    {
        if (++depth_ > kMaxDepth) {
            fail("nesting too deep");
        }
    }
    void leave() { --depth_; }
};

}  // namespace

ParseError::ParseError(std::string message, SourcePos pos, std::string path)
    : std::runtime_error(describe(message, pos, path)), pos_(pos), path_(std::move(path)),
      detail_(std::move(message))
{
}

const TextValue* TextValue::find(std::string_view key) const
{
    if (!is_object()) {
        return nullptr;
    }
    for (const auto& [name, member] : as_object()) {
        if (name == key) {
            return &member;
        }
    }
    return nullptr;
}

std::string_view TextValue::type_name() const
{
    static constexpr std::array<std::string_view, 6> names{"null", "boolean", "number",
                                                           "string", "array", "object"};
    return names[value_.index()];
}

TextValue parse_structured_text(std::string_view text)
{
    return Reader(text).document();
}

std::string format_number(double value)
{
    if (value == 0.0) {
        return "0";
    }
    std::array<char, 64> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("cannot format number");
    }
    return {buffer.data(), end};
}

std::string quote_string(std::string_view text)
{
    std::string out = "\"";
    for (const char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                static constexpr char hex[] = "0123456789abcdef";
                out += "\\u00";
                out.push_back(hex[(c >> 4) & 0xF]);
                out.push_back(hex[c & 0xF]);
            } else {
                out.push_back(c);
            }
        }
    }
    out.push_back('"');
    return out;
}

}  // namespace talakat
