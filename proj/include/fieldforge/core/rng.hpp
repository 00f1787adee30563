#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace fieldforge {

// Seeded mt19937 with hand-rolled output mappings. std::*_distribution is
// implementation-defined, so all mappings here are fixed bit manipulations;
// identical seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(static_cast<std::uint32_t>(seed ^ (seed >> 32))) {}

    std::uint32_t next_u32() { return engine_(); }

    // [0, 1) with 24 bits of mantissa, exact in float and double.
    double uniform() { return (next_u32() >> 8) * 0x1p-24; }

    // [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n). Fixed-point scaling; bias is < n / 2^32, irrelevant here.
    std::int64_t uniform_int(std::int64_t n) {
        return static_cast<std::int64_t>((static_cast<std::uint64_t>(next_u32()) * static_cast<std::uint64_t>(n)) >> 32);
    }

    // Symmetric range [-a, a)
    double symmetric(double a) { return uniform(-a, a); }

    std::string serialize() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void deserialize(const std::string& s) {
        std::istringstream is(s);
        is >> engine_;
    }

private:
    std::mt19937 engine_;
};

}  // namespace fieldforge
