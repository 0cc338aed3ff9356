#include "talakat/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace talakat {

namespace {

using Rgb = std::array<std::uint8_t, 3>;

constexpr Rgb kBackground{12, 12, 24};
constexpr Rgb kPlayer{255, 255, 255};
constexpr Rgb kBoss{230, 60, 200};
constexpr Rgb kBarBack{60, 60, 60};
constexpr Rgb kBarFill{220, 40, 40};
constexpr int kBarHeight = 4;

constexpr std::array<Rgb, 10> kPalette{{
    {255, 80, 80},
    {255, 170, 60},
    {250, 240, 90},
    {120, 230, 90},
    {70, 220, 220},
    {80, 140, 255},
    {170, 110, 255},
    {255, 120, 210},
    {200, 200, 200},
    {140, 255, 190},
}};

void put(Image& image, int x, int y, Rgb c)
{
    if (x < 0 || y < 0 || x >= image.width || y >= image.height) {
        return;
    }
    const auto i = static_cast<std::size_t>(y * image.width + x) * 3;
    image.rgb[i] = c[0];
    image.rgb[i + 1] = c[1];
    image.rgb[i + 2] = c[2];
}

// Pixel (x, y) covers [x, x+1) x [y, y+1); it is painted when its centre is
// inside the band inner <= d <= outer.
void disc(Image& image, Vec2 centre, double outer, double inner, Rgb c)
{
    const int x0 = static_cast<int>(std::floor(centre.x - outer));
    const int x1 = static_cast<int>(std::ceil(centre.x + outer));
    const int y0 = static_cast<int>(std::floor(centre.y - outer));
    const int y1 = static_cast<int>(std::ceil(centre.y + outer));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dx = x + 0.5 - centre.x;
            const double dy = y + 0.5 - centre.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 <= outer * outer && d2 >= inner * inner) {
                put(image, x, y, c);
            }
        }
    }
}

void diamond(Image& image, Vec2 centre, int size, Rgb c)
{
    const int cx = static_cast<int>(std::floor(centre.x));
    const int cy = static_cast<int>(std::floor(centre.y));
    for (int dy = -size; dy <= size; ++dy) {
        const int span = size - std::abs(dy);
        for (int dx = -span; dx <= span; ++dx) {
            put(image, cx + dx, cy + dy, c);
        }
    }
}

}  // namespace

std::array<std::uint8_t, 3> Image::pixel(int x, int y) const
{
    const auto i = static_cast<std::size_t>(y * width + x) * 3;
    return {rgb.at(i), rgb.at(i + 1), rgb.at(i + 2)};
}

std::array<std::uint8_t, 3> palette_color(int index)
{
    const int n = static_cast<int>(kPalette.size());
    return kPalette[static_cast<std::size_t>(((index % n) + n) % n)];
}

Image render(const GameState& state)
{
    const SimConfig& cfg = state.config();
    Image image;
    image.width = static_cast<int>(std::lround(cfg.screen_width));
    image.height = static_cast<int>(std::lround(cfg.screen_height));
    image.rgb.resize(static_cast<std::size_t>(image.width * image.height) * 3);
    for (std::size_t i = 0; i < image.rgb.size(); i += 3) {
        image.rgb[i] = kBackground[0];
        image.rgb[i + 1] = kBackground[1];
        image.rgb[i + 2] = kBackground[2];
    }

    diamond(image, state.boss_position(), 7, kBoss);
    for (const Bullet& b : state.bullets()) {
        disc(image, b.pos, std::max(b.radius, 1.0), 0.0, palette_color(b.color));
    }
    disc(image, state.player(), cfg.player_radius + 2.0, cfg.player_radius, kPlayer);
    put(image, static_cast<int>(state.player().x), static_cast<int>(state.player().y), kPlayer);

    const double fraction = state.boss_health_max() > 0
                                ? static_cast<double>(state.boss_health()) / state.boss_health_max()
                                : 0.0;
    const int filled = static_cast<int>(std::lround(fraction * image.width));
    for (int y = 0; y < kBarHeight; ++y) {
        for (int x = 0; x < image.width; ++x) {
            put(image, x, y, x < filled ? kBarFill : kBarBack);
        }
    }
    return image;
}

std::string encode_ppm(const Image& image)
{
    std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
    return out;
}

void write_ppm(const Image& image, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    const std::string bytes = encode_ppm(image);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

}  // namespace talakat
