#pragma once

#include <bit>
#include <cstdint>
#include <string_view>

namespace talakat {

/// 64-bit FNV-1a, fed field by field. Doubles hash by bit pattern.
class Fnv1a {
public:
    void bytes(const void* data, std::size_t size)
    {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }

    void u64(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i) {
            const auto byte = static_cast<unsigned char>(v >> (8 * i));
            bytes(&byte, 1);
        }
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v)); }
    void str(std::string_view s)
    {
        u64(s.size());
        bytes(s.data(), s.size());
    }

    [[nodiscard]] std::uint64_t value() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace talakat
