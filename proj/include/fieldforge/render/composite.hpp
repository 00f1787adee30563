#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fieldforge/autodiff/graph.hpp"
#include "fieldforge/core/errors.hpp"
#include "fieldforge/core/parallel.hpp"
#include "fieldforge/core/tensor.hpp"

namespace fieldforge {

template <class Real>
struct CompositeOptions {
    Real terminal_delta = Real(1e10);  // delta past the last sample; lets it saturate
    std::array<Real, 3> background{0, 0, 0};
    Real depth_eps = Real(1e-10);
};

// Quadrature compositing of one ray, samples ordered near-to-far:
//   w_k = T_k * (1 - exp(-sigma_k * (t_{k+1} - t_k))),
//   T_k = exp(-sum_{k'<k} sigma_k' * (t_{k'+1} - t_k')),
//   color = sum w_k c_k + (1 - sum w_k) * background,
//   depth = sum w_k t_k / max(sum w_k, eps), opacity = sum w_k.
template <class Real>
void composite_ray(const Real* sigma, const Real* rgb, const Real* ts, int K,
                   const CompositeOptions<Real>& opt, Real out_rgb[3], Real* out_depth,
                   Real* out_opacity, Real* out_weights) {
    Real transmittance = 1;
    Real color[3] = {0, 0, 0};
    Real weight_sum = 0, depth_num = 0;
    for (int k = 0; k < K; ++k) {
        const Real delta = k + 1 < K ? ts[k + 1] - ts[k] : opt.terminal_delta;
        const Real alpha = Real(1) - std::exp(-sigma[k] * delta);
        const Real w = transmittance * alpha;
        for (int c = 0; c < 3; ++c) color[c] += w * rgb[k * 3 + c];
        weight_sum += w;
        depth_num += w * ts[k];
        transmittance *= Real(1) - alpha;
        if (out_weights) out_weights[k] = w;
    }
    for (int c = 0; c < 3; ++c) out_rgb[c] = color[c] + (Real(1) - weight_sum) * opt.background[c];
    if (out_depth) *out_depth = depth_num / std::max(weight_sum, opt.depth_eps);
    if (out_opacity) *out_opacity = weight_sum;
}

// Adjoint of the color output w.r.t. per-sample densities and colors.
template <class Real>
void composite_ray_backward(const Real* sigma, const Real* rgb, const Real* ts, int K,
                            const CompositeOptions<Real>& opt, const Real g_color[3], Real* g_sigma,
                            Real* g_rgb) {
    // Forward pass values are recomputed; rays are short.
    std::vector<Real> trans(static_cast<std::size_t>(K));
    std::vector<Real> weight(static_cast<std::size_t>(K));
    std::vector<Real> decay(static_cast<std::size_t>(K));  // exp(-sigma_k delta_k)
    Real transmittance = 1;
    for (int k = 0; k < K; ++k) {
        const Real delta = k + 1 < K ? ts[k + 1] - ts[k] : opt.terminal_delta;
        const Real e = std::exp(-sigma[k] * delta);
        trans[static_cast<std::size_t>(k)] = transmittance;
        decay[static_cast<std::size_t>(k)] = e;
        weight[static_cast<std::size_t>(k)] = transmittance * (Real(1) - e);
        transmittance *= e;
    }
    // suffix = sum_{k>j} w_k (c_k - bg) . g_color
    Real suffix = 0;
    for (int j = K - 1; j >= 0; --j) {
        const Real delta = j + 1 < K ? ts[j + 1] - ts[j] : opt.terminal_delta;
        Real dot_j = 0;
        for (int c = 0; c < 3; ++c) dot_j += (rgb[j * 3 + c] - opt.background[c]) * g_color[c];
        if (g_sigma)
            g_sigma[j] += delta * (trans[static_cast<std::size_t>(j)] * decay[static_cast<std::size_t>(j)] * dot_j - suffix);
        if (g_rgb)
            for (int c = 0; c < 3; ++c) g_rgb[j * 3 + c] += weight[static_cast<std::size_t>(j)] * g_color[c];
        suffix += weight[static_cast<std::size_t>(j)] * dot_j;
    }
}

template <class Real>
struct CompositeBatch {
    Tensor<Real> color;    // [R, 3]
    Tensor<Real> depth;    // [R]
    Tensor<Real> opacity;  // [R]
    Tensor<Real> weights;  // [R, K]
};

template <class Real>
void validate_samples(const Tensor<Real>& sigma, const Tensor<Real>& rgb, const Tensor<Real>& ts) {
    if (sigma.rank() != 2) throw ShapeError("composite: sigma must be [R, K], got " + sigma.shape_str());
    require_same_shape(sigma, ts, "composite sigma/ts");
    const int R = sigma.shape[0], K = sigma.shape[1];
    if (rgb.rank() != 2 || rgb.shape[0] != R * K || rgb.shape[1] != 3)
        throw ShapeError("composite: rgb must be [R*K, 3], got " + rgb.shape_str());
    for (int r = 0; r < R; ++r)
        for (int k = 0; k + 1 < K; ++k)
            if (!(ts.at(r, k) < ts.at(r, k + 1)))
                throw NumericError("composite: sample distances not strictly increasing");
}

// Pure numeric batch compositing; sigma [R, K], rgb [R*K, 3], ts [R, K].
template <class Real>
CompositeBatch<Real> composite_batch(const Tensor<Real>& sigma, const Tensor<Real>& rgb,
                                     const Tensor<Real>& ts, const CompositeOptions<Real>& opt) {
    validate_samples(sigma, rgb, ts);
    const int R = sigma.shape[0], K = sigma.shape[1];
    CompositeBatch<Real> out;
    out.color = Tensor<Real>::zeros({R, 3});
    out.depth = Tensor<Real>::zeros({R});
    out.opacity = Tensor<Real>::zeros({R});
    out.weights = Tensor<Real>::zeros({R, K});
    parallel_blocks(R, 64, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t r = lo; r < hi; ++r) {
            composite_ray(&sigma.data[r * K], &rgb.data[r * K * 3], &ts.data[r * K], K, opt,
                          &out.color.data[r * 3], &out.depth.data[r], &out.opacity.data[r],
                          &out.weights.data[r * K]);
        }
    });
    if (!out.color.all_finite()) throw NumericError("composite: non-finite density or color");
    return out;
}

template <class Real>
struct CompositeIds {
    typename Graph<Real>::Id color;  // [R, 3], differentiable
    Tensor<Real> depth;              // aux, not differentiated
    Tensor<Real> opacity;
    Tensor<Real> weights;
};

// Tape version: color flows gradients back into sigma and rgb.
template <class Real>
CompositeIds<Real> composite_rays(Graph<Real>& g, typename Graph<Real>::Id sigma_id,
                                  typename Graph<Real>::Id rgb_id, const Tensor<Real>& ts,
                                  const CompositeOptions<Real>& opt) {
    const Tensor<Real>& sigma = g.value(sigma_id);
    const Tensor<Real>& rgb = g.value(rgb_id);
    CompositeBatch<Real> fwd = composite_batch(sigma, rgb, ts, opt);
    const int R = sigma.shape[0], K = sigma.shape[1];

    CompositeIds<Real> out;
    out.depth = std::move(fwd.depth);
    out.opacity = std::move(fwd.opacity);
    out.weights = std::move(fwd.weights);
    Tensor<Real> ts_copy = ts;
    out.color = g.push_op(
        std::move(fwd.color), "composite", {sigma_id, rgb_id},
        [sigma_id, rgb_id, ts_copy, opt, R, K](Graph<Real>& gg) {
            const Tensor<Real>& go = gg.grad(gg.current());
            const Tensor<Real>& sig = gg.value(sigma_id);
            const Tensor<Real>& col = gg.value(rgb_id);
            Real* gs = gg.requires_grad(sigma_id) ? gg.grad_buf(sigma_id).data.data() : nullptr;
            Real* gc = gg.requires_grad(rgb_id) ? gg.grad_buf(rgb_id).data.data() : nullptr;
            parallel_blocks(R, 64, [&](std::int64_t lo, std::int64_t hi) {
                for (std::int64_t r = lo; r < hi; ++r) {
                    composite_ray_backward(&sig.data[r * K], &col.data[r * K * 3],
                                           &ts_copy.data[r * K], K, opt, &go.data[r * 3],
                                           gs ? gs + r * K : nullptr, gc ? gc + r * K * 3 : nullptr);
                }
            });
        });
    return out;
}

}  // namespace fieldforge
