#include "juliagraph/render.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <png.h>

#include "juliagraph/grid_dynamics.hpp"

namespace juliagraph {

void write_png(const Image& img, const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(fp);
        throw std::runtime_error("libpng failure writing " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(&img.rgb[3u * static_cast<std::size_t>(y) *
                                                          img.width]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

void id_color(int id, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
    double h = std::fmod(0.61803398875 * (id + 1), 1.0) * 6.0;
    double s = 0.55, v = 0.95;
    int i = static_cast<int>(h);
    double f = h - i, p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    double rr, gg, bb;
    switch (i % 6) {
        case 0: rr = v, gg = t, bb = p; break;
        case 1: rr = q, gg = v, bb = p; break;
        case 2: rr = p, gg = v, bb = t; break;
        case 3: rr = p, gg = q, bb = v; break;
        case 4: rr = t, gg = p, bb = v; break;
        default: rr = v, gg = p, bb = q; break;
    }
    r = static_cast<std::uint8_t>(rr * 255);
    g = static_cast<std::uint8_t>(gg * 255);
    b = static_cast<std::uint8_t>(bb * 255);
}

void render_atlas_png(const FatouAtlas& atlas, const std::string& path) {
    int n = atlas.grid.n();
    Image img(2 * n, n);
    for (int chart = 0; chart < 2; ++chart)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                int idx = atlas.grid.index(chart, x, y);
                std::int32_t id = atlas.label[idx];
                int px = chart * n + x, py = n - 1 - y;
                if (id < 0) {
                    img.set(px, py, 0, 0, 0);
                    continue;
                }
                // Boundary pixels drawn black.
                bool boundary = false;
                static const int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                for (auto& d : d4) {
                    int nx = x + d[0], ny = y + d[1];
                    if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
                    if (atlas.label[atlas.grid.index(chart, nx, ny)] != id) boundary = true;
                }
                if (boundary) {
                    img.set(px, py, 0, 0, 0);
                    continue;
                }
                const ComponentRecord& rec = atlas.components[id];
                std::uint8_t r, g, b;
                id_color(rec.cycle_id * 7 + rec.alignment, r, g, b);
                // shade by preperiod so basins read as nested
                double shade = 1.0 / (1.0 + 0.08 * rec.preperiod);
                img.set(px, py, static_cast<std::uint8_t>(r * shade),
                        static_cast<std::uint8_t>(g * shade),
                        static_cast<std::uint8_t>(b * shade));
            }
    write_png(img, path);
}

} // namespace juliagraph
