#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fieldforge/autodiff/graph.hpp"
#include "fieldforge/core/errors.hpp"
#include "fieldforge/core/tensor.hpp"

namespace fieldforge {

// Sinusoidal encoding of coordinates and view directions. The raw input is
// always concatenated in front of the frequency bands, so a d-dim input
// encodes to d + 2*d*L values laid out as
//   [x, sin(x), cos(x), sin(2x), cos(2x), ..., sin(2^{L-1} x), cos(2^{L-1} x)]
// with each sin/cos block holding all d dimensions.
struct EncodingConfig {
    int l_coord = 16;  // frequency bands for positions
    int l_dir = 4;     // frequency bands for view directions
    // Raw-input concatenation is always on; the band mask below assumes it.

    void validate() const {
        if (l_coord < 1) throw ConfigError("encoding: l_coord must be >= 1");
        if (l_dir < 0) throw ConfigError("encoding: l_dir must be >= 0");
    }
};

inline int encoded_width(int d, int L) { return d + 2 * d * L; }

template <class Real>
void encode_point(const Real* x, int d, int L, Real* out) {
    for (int i = 0; i < d; ++i) out[i] = x[i];
    Real freq = 1;
    for (int b = 0; b < L; ++b) {
        Real* s = out + d + 2 * d * b;
        Real* c = s + d;
        for (int i = 0; i < d; ++i) {
            s[i] = std::sin(freq * x[i]);
            c[i] = std::cos(freq * x[i]);
        }
        freq *= 2;
    }
}

template <class Real>
Tensor<Real> encode_matrix(const Tensor<Real>& x, int L) {
    if (x.rank() != 2) throw ShapeError("encode_matrix: expected [N, d], got " + x.shape_str());
    const int n = x.shape[0], d = x.shape[1];
    Tensor<Real> out = Tensor<Real>::zeros({n, encoded_width(d, L)});
    for (int r = 0; r < n; ++r)
        encode_point(&x.data[static_cast<std::size_t>(r) * d], d, L, &out.data[static_cast<std::size_t>(r) * out.shape[1]]);
    return out;
}

// Per-band visibility vector of length L+3: an all-ones prefix covering the
// raw input plus opened bands, a 3-entry linear ramp, and a zero tail. The
// schedule opens bands linearly in t until t reaches T, after which the mask
// is all ones.
template <class Real>
struct FrequencyMask {
    std::vector<Real> alpha;  // length L + 3
    std::int64_t t = 0, T = 1;
    int L = 0;

    int length() const { return static_cast<int>(alpha.size()); }

    bool all_ones() const {
        for (Real a : alpha)
            if (a != Real(1)) return false;
        return true;
    }
};

template <class Real>
FrequencyMask<Real> frequency_mask(std::int64_t t, std::int64_t T, int L) {
    if (T < 1) throw ConfigError("frequency_mask: T must be >= 1");
    if (t < 0) throw ConfigError("frequency_mask: t must be >= 0");
    if (L < 1) throw ConfigError("frequency_mask: L must be >= 1");
    FrequencyMask<Real> m;
    m.t = t;
    m.T = T;
    m.L = L;
    m.alpha.assign(static_cast<std::size_t>(L) + 3, Real(0));
    if (t >= T) {
        std::fill(m.alpha.begin(), m.alpha.end(), Real(1));
        return m;
    }
    const double p = static_cast<double>(t) * L / static_cast<double>(T);
    const double frac = p - std::floor(p);
    for (int i1 = 1; i1 <= L + 3; ++i1) {  // 1-based band index
        double v;
        if (i1 <= p + 3)
            v = 1.0;
        else if (i1 <= p + 6)
            v = frac;
        else
            v = 0.0;
        m.alpha[static_cast<std::size_t>(i1 - 1)] = static_cast<Real>(v);
    }
    return m;
}

// Static mask for the masking-ratio study: raw input plus the lowest
// floor(L * ratio) bands stay visible for the whole run, the rest are zero.
template <class Real>
FrequencyMask<Real> static_visible_ratio_mask(double ratio, int L) {
    if (ratio <= 0 || ratio > 1) throw ConfigError("static mask: ratio must be in (0, 1]");
    FrequencyMask<Real> m;
    m.t = 0;
    m.T = 1;
    m.L = L;
    const int visible = static_cast<int>(L * ratio);
    m.alpha.assign(static_cast<std::size_t>(L) + 3, Real(0));
    for (int i = 0; i < 3 + visible && i < L + 3; ++i) m.alpha[static_cast<std::size_t>(i)] = Real(1);
    return m;
}

// First zeroed index of the one-line hard-mask form. Integer floor of
// t*L/T sidesteps float rounding exactly at band boundaries.
inline int hard_mask_cutoff(std::int64_t t, std::int64_t T, int L) {
    if (T < 1) throw ConfigError("hard_mask_cutoff: T must be >= 1");
    if (t < 0) throw ConfigError("hard_mask_cutoff: t must be >= 0");
    if (t > T) t = T;
    return static_cast<int>(t * L / T) + 3;
}

// Expands the abstract L+3 mask onto the columns of a concrete encoding of a
// d-dim input. Entries 1..3 gate the raw block (their min, all three are 1
// under the Eq-style schedule); entry 3+b gates all 2*d elements of band b.
template <class Real>
std::vector<Real> expand_mask(const FrequencyMask<Real>& mask, int d) {
    if (mask.length() != mask.L + 3)
        throw ShapeError("expand_mask: mask length " + std::to_string(mask.length()) +
                         " does not equal L+3 = " + std::to_string(mask.L + 3));
    std::vector<Real> cols(static_cast<std::size_t>(encoded_width(d, mask.L)));
    const Real raw = std::min({mask.alpha[0], mask.alpha[1], mask.alpha[2]});
    for (int i = 0; i < d; ++i) cols[static_cast<std::size_t>(i)] = raw;
    for (int b = 1; b <= mask.L; ++b) {
        const Real a = mask.alpha[static_cast<std::size_t>(b + 2)];
        for (int i = 0; i < 2 * d; ++i) cols[static_cast<std::size_t>(d + 2 * d * (b - 1) + i)] = a;
    }
    return cols;
}

template <class Real>
void apply_mask_inplace(Tensor<Real>& encoded, const FrequencyMask<Real>& mask, int d) {
    const int width = encoded.cols();
    if (width != encoded_width(d, mask.L))
        throw ShapeError("apply_mask: encoded width " + std::to_string(width) + " does not match d=" +
                         std::to_string(d) + ", L=" + std::to_string(mask.L) + " (want " +
                         std::to_string(encoded_width(d, mask.L)) + ")");
    const std::vector<Real> cols = expand_mask(mask, d);
    const std::int64_t n = encoded.size();
    for (std::int64_t i = 0; i < n; ++i) encoded[i] *= cols[static_cast<std::size_t>(i % width)];
}

template <class Real>
Tensor<Real> apply_mask(Tensor<Real> encoded, const FrequencyMask<Real>& mask, int d) {
    apply_mask_inplace(encoded, mask, d);
    return encoded;
}

// Tape-level encoding, used by tests that differentiate through the encoding
// (e.g. checking that masked bands receive exactly zero gradient).
template <class Real>
typename Graph<Real>::Id encode_on_graph(Graph<Real>& g, typename Graph<Real>::Id x, int L) {
    auto out = x;
    for (int b = 0; b < L; ++b) {
        const auto scaled = g.scale(x, static_cast<Real>(std::int64_t(1) << b));
        out = g.concat_cols(out, g.concat_cols(g.sin(scaled), g.cos(scaled)));
    }
    return out;
}

template <class Real>
typename Graph<Real>::Id apply_mask_on_graph(Graph<Real>& g, typename Graph<Real>::Id encoded,
                                             const FrequencyMask<Real>& mask, int d) {
    return g.mask_cols(encoded, Tensor<Real>::vector(expand_mask(mask, d)));
}

}  // namespace fieldforge
