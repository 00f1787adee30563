#include "fieldforge/render/image.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "fieldforge/core/errors.hpp"

namespace fieldforge {

namespace {

void put_u32_be(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

std::uint32_t get_u32_be(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
           std::uint32_t(p[3]);
}

void append_chunk(std::vector<unsigned char>& out, const char type[4],
                  const std::vector<unsigned char>& payload) {
    put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const uLong crc = crc32(crc32(0L, nullptr, 0), out.data() + crc_start,
                            static_cast<uInt>(out.size() - crc_start));
    put_u32_be(out, static_cast<std::uint32_t>(crc));
}

std::vector<unsigned char> zlib_deflate(const std::vector<unsigned char>& raw) {
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> out(bound);
    if (compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError("png: deflate failed");
    out.resize(bound);
    return out;
}

std::vector<unsigned char> zlib_inflate(const std::vector<unsigned char>& comp,
                                        std::size_t expected) {
    std::vector<unsigned char> out(expected);
    uLongf len = static_cast<uLongf>(expected);
    const int rc = uncompress(out.data(), &len, comp.data(), static_cast<uLong>(comp.size()));
    if (rc != Z_OK || len != expected) throw IoError("png: inflate failed or size mismatch");
    return out;
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

unsigned char quantize(float v) {
    const float c = std::min(1.f, std::max(0.f, v));
    return static_cast<unsigned char>(std::lround(c * 255.f));
}

}  // namespace

void png_write(const std::string& path, const Image& image) {
    if (image.width < 1 || image.height < 1 ||
        image.rgb.size() != static_cast<std::size_t>(3) * image.width * image.height)
        throw IoError("png_write: inconsistent image buffer");

    // Filter 0 (none) on every scanline; fixtures compress fine regardless.
    std::vector<unsigned char> raw;
    raw.reserve(static_cast<std::size_t>(image.height) * (1 + 3 * image.width));
    for (int j = 0; j < image.height; ++j) {
        raw.push_back(0);
        for (int i = 0; i < image.width; ++i) {
            const float* px = image.pixel(i, j);
            raw.push_back(quantize(px[0]));
            raw.push_back(quantize(px[1]));
            raw.push_back(quantize(px[2]));
        }
    }

    std::vector<unsigned char> file = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    std::vector<unsigned char> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(image.width));
    put_u32_be(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type RGB
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace
    append_chunk(file, "IHDR", ihdr);
    append_chunk(file, "IDAT", zlib_deflate(raw));
    append_chunk(file, "IEND", {});

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("png_write: cannot open " + path);
    os.write(reinterpret_cast<const char*>(file.data()), static_cast<std::streamsize>(file.size()));
    if (!os) throw IoError("png_write: write failed for " + path);
}

Image png_read(const std::string& path, std::array<float, 3> background) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("png_read: cannot open " + path);
    std::vector<unsigned char> file((std::istreambuf_iterator<char>(is)),
                                    std::istreambuf_iterator<char>());
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (file.size() < 8 || std::memcmp(file.data(), sig, 8) != 0)
        throw IoError("png_read: not a PNG file: " + path);

    std::size_t pos = 8;
    int width = 0, height = 0, color_type = -1;
    std::vector<unsigned char> idat;
    while (pos + 8 <= file.size()) {
        const std::uint32_t len = get_u32_be(&file[pos]);
        if (pos + 12 + len > file.size()) throw IoError("png_read: truncated chunk in " + path);
        const char* type = reinterpret_cast<const char*>(&file[pos + 4]);
        const unsigned char* payload = &file[pos + 8];
        if (std::memcmp(type, "IHDR", 4) == 0) {
            width = static_cast<int>(get_u32_be(payload));
            height = static_cast<int>(get_u32_be(payload + 4));
            const int bit_depth = payload[8];
            color_type = payload[9];
            const int interlace = payload[12];
            if (bit_depth != 8 || (color_type != 2 && color_type != 6) || interlace != 0)
                throw IoError("png_read: unsupported PNG variant (need 8-bit RGB/RGBA, "
                              "non-interlaced): " + path);
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + len;
    }
    if (width < 1 || height < 1 || idat.empty()) throw IoError("png_read: missing image data in " + path);

    const int channels = color_type == 6 ? 4 : 3;
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    std::vector<unsigned char> raw = zlib_inflate(idat, static_cast<std::size_t>(height) * (stride + 1));

    // Undo scanline filters in place.
    std::vector<unsigned char> prev(stride, 0);
    Image im;
    im.width = width;
    im.height = height;
    im.rgb.assign(static_cast<std::size_t>(3) * width * height, 0.f);
    for (int j = 0; j < height; ++j) {
        const unsigned char filter = raw[static_cast<std::size_t>(j) * (stride + 1)];
        unsigned char* line = &raw[static_cast<std::size_t>(j) * (stride + 1) + 1];
        for (std::size_t i = 0; i < stride; ++i) {
            const int left = i >= static_cast<std::size_t>(channels) ? line[i - channels] : 0;
            const int up = prev[i];
            const int ul = i >= static_cast<std::size_t>(channels) ? prev[i - channels] : 0;
            int v = line[i];
            switch (filter) {
                case 0: break;
                case 1: v += left; break;
                case 2: v += up; break;
                case 3: v += (left + up) / 2; break;
                case 4: v += paeth(left, up, ul); break;
                default: throw IoError("png_read: unknown filter type in " + path);
            }
            line[i] = static_cast<unsigned char>(v & 0xff);
        }
        std::memcpy(prev.data(), line, stride);
        for (int i = 0; i < width; ++i) {
            const unsigned char* px = line + static_cast<std::size_t>(i) * channels;
            float rgba[4] = {px[0] / 255.f, px[1] / 255.f, px[2] / 255.f,
                             channels == 4 ? px[3] / 255.f : 1.f};
            float* out = im.pixel(i, j);
            for (int c = 0; c < 3; ++c)
                out[c] = rgba[c] * rgba[3] + background[static_cast<std::size_t>(c)] * (1.f - rgba[3]);
        }
    }
    return im;
}

void pfm_write(const std::string& path, int width, int height, const std::vector<float>& data) {
    if (data.size() != static_cast<std::size_t>(width) * height)
        throw IoError("pfm_write: buffer size does not match dimensions");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("pfm_write: cannot open " + path);
    os << "Pf\n" << width << " " << height << "\n-1.0\n";
    // PFM scanlines run bottom-to-top.
    for (int j = height - 1; j >= 0; --j)
        os.write(reinterpret_cast<const char*>(&data[static_cast<std::size_t>(j) * width]),
                 static_cast<std::streamsize>(width * sizeof(float)));
    if (!os) throw IoError("pfm_write: write failed for " + path);
}

std::vector<float> pfm_read(const std::string& path, int* width, int* height) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("pfm_read: cannot open " + path);
    std::string tag;
    double scale = 0;
    is >> tag >> *width >> *height >> scale;
    if (tag != "Pf" || *width < 1 || *height < 1) throw IoError("pfm_read: bad header in " + path);
    if (scale > 0) throw IoError("pfm_read: big-endian PFM not supported: " + path);
    is.get();  // single whitespace after the scale
    std::vector<float> data(static_cast<std::size_t>(*width) * *height);
    for (int j = *height - 1; j >= 0; --j)
        if (!is.read(reinterpret_cast<char*>(&data[static_cast<std::size_t>(j) * *width]),
                     static_cast<std::streamsize>(*width * sizeof(float))))
            throw IoError("pfm_read: truncated data in " + path);
    return data;
}

}  // namespace fieldforge
