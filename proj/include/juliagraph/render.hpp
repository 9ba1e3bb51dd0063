#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace juliagraph {

struct Image {
    int width = 0, height = 0;
    std::vector<std::uint8_t> rgb; // row-major, 3 bytes per pixel

    Image(int w, int h) : width(w), height(h), rgb(3u * w * h, 255) {}
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        if (x < 0 || y < 0 || x >= width || y >= height) return;
        std::size_t o = 3u * (static_cast<std::size_t>(y) * width + x);
        rgb[o] = r;
        rgb[o + 1] = g;
        rgb[o + 2] = b;
    }
};

void write_png(const Image& img, const std::string& path);

// Distinct-ish color for an integer id.
void id_color(int id, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b);

} // namespace juliagraph
