#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fieldforge {

// Float RGB image, row-major top-to-bottom, values nominally in [0, 1].
struct Image {
    int width = 0, height = 0;
    std::vector<float> rgb;  // 3 * width * height

    static Image filled(int w, int h, std::array<float, 3> color) {
        Image im;
        im.width = w;
        im.height = h;
        im.rgb.assign(static_cast<std::size_t>(3) * w * h, 0.f);
        for (std::size_t p = 0; p < im.rgb.size(); p += 3)
            for (int c = 0; c < 3; ++c) im.rgb[p + c] = color[static_cast<std::size_t>(c)];
        return im;
    }

    float* pixel(int i, int j) { return &rgb[(static_cast<std::size_t>(j) * width + i) * 3]; }
    const float* pixel(int i, int j) const {
        return &rgb[(static_cast<std::size_t>(j) * width + i) * 3];
    }
};

// 8-bit PNG, color type RGB. Values are clamped to [0, 1] and quantized
// round-to-nearest.
void png_write(const std::string& path, const Image& image);

// Reads 8-bit RGB or RGBA PNGs (non-interlaced). Alpha is composited over
// `background` at load.
Image png_read(const std::string& path, std::array<float, 3> background = {0, 0, 0});

// Grayscale PFM, little-endian (scale -1.0), bottom-to-top scanlines per the
// format convention. `data` is row-major top-to-bottom like Image.
void pfm_write(const std::string& path, int width, int height, const std::vector<float>& data);

std::vector<float> pfm_read(const std::string& path, int* width, int* height);

}  // namespace fieldforge
