#pragma once

// Snapshot images of a game state as binary PPM (P6).

#include "talakat/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace talakat {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row major, 3 bytes per pixel

    [[nodiscard]] std::array<std::uint8_t, 3> pixel(int x, int y) const;
};

/// Bullets as filled discs coloured by palette index, the player as a ring,
/// the boss anchor as a diamond and a health bar along the top edge.
[[nodiscard]] Image render(const GameState& state);

[[nodiscard]] std::string encode_ppm(const Image& image);
void write_ppm(const Image& image, const std::filesystem::path& path);

/// The ten bullet colours.
[[nodiscard]] std::array<std::uint8_t, 3> palette_color(int index);

}  // namespace talakat
