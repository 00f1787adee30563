#include "fieldforge/autodiff/checkpoint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "fieldforge/core/errors.hpp"

namespace fieldforge {

namespace {

// This codebase only targets little-endian hosts; the raw value dump below
// relies on it.
static_assert(sizeof(float) == 4, "float must be 32-bit");

void write_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
}

std::uint32_t read_u32(std::istream& is, const char* what) {
    std::uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 4))
        throw IoError(std::string("checkpoint: truncated while reading ") + what);
    return v;
}

std::uint64_t read_u64(std::istream& is, const char* what) {
    std::uint64_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 8))
        throw IoError(std::string("checkpoint: truncated while reading ") + what);
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const NamedTensors& tensors) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("checkpoint: cannot open " + tmp.string() + " for writing");
        os.write("FFCK", 4);
        write_u32(os, kCheckpointVersion);
        for (const auto& [name, t] : tensors) {
            write_u32(os, static_cast<std::uint32_t>(name.size()));
            os.write(name.data(), static_cast<std::streamsize>(name.size()));
            write_u32(os, static_cast<std::uint32_t>(t.shape.size()));
            for (int e : t.shape) write_u64(os, static_cast<std::uint64_t>(e));
            os.write(reinterpret_cast<const char*>(t.data.data()),
                     static_cast<std::streamsize>(t.data.size() * sizeof(float)));
        }
        if (!os) throw IoError("checkpoint: write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("checkpoint: rename to " + path + " failed: " + ec.message());
}

NamedTensors load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("checkpoint: cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "FFCK", 4) != 0)
        throw IoError("checkpoint: bad magic in " + path);
    const std::uint32_t version = read_u32(is, "version");
    if (version != kCheckpointVersion)
        throw IoError("checkpoint: unsupported format version " + std::to_string(version) + " in " + path);
    NamedTensors out;
    while (is.peek() != std::char_traits<char>::eof()) {
        const std::uint32_t name_len = read_u32(is, "name length");
        std::string name(name_len, '\0');
        if (!is.read(name.data(), name_len)) throw IoError("checkpoint: truncated name in " + path);
        const std::uint32_t rank = read_u32(is, "rank");
        std::vector<int> shape(rank);
        std::int64_t count = 1;
        for (std::uint32_t i = 0; i < rank; ++i) {
            shape[i] = static_cast<int>(read_u64(is, "extent"));
            count *= shape[i];
        }
        Tensor<float> t = Tensor<float>::zeros(shape);
        if (!is.read(reinterpret_cast<char*>(t.data.data()),
                     static_cast<std::streamsize>(count * sizeof(float))))
            throw IoError("checkpoint: truncated values for '" + name + "' in " + path);
        out.emplace_back(std::move(name), std::move(t));
    }
    return out;
}

}  // namespace fieldforge
