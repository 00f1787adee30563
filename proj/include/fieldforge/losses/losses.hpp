#pragma once

#include <optional>
#include <vector>

#include "fieldforge/autodiff/graph.hpp"
#include "fieldforge/core/errors.hpp"
#include "fieldforge/core/tensor.hpp"

namespace fieldforge {

struct OcclusionConfig {
    double weight = 0.01;
    int range_m = 20;          // penalize the first M samples of each ray
    bool bw_prior = false;     // extend the range for near-black/near-white samples
    int bw_range = 25;         // wider range used by the prior (typically M + 5)
    double bw_low = 0.1;       // luminance thresholds, (r+g+b)/3
    double bw_high = 0.9;

    void validate(int K) const {
        if (weight < 0) throw ConfigError("occlusion: weight must be >= 0");
        if (range_m < 0 || range_m > K)
            throw ConfigError("occlusion: need 0 <= M <= K, got M=" + std::to_string(range_m) +
                              ", K=" + std::to_string(K));
        if (bw_prior && (bw_range < 0 || bw_range > K))
            throw ConfigError("occlusion: need 0 <= bw_range <= K");
    }
};

// Mean squared error over all pixels and channels of the batch.
template <class Real>
typename Graph<Real>::Id photometric_loss(Graph<Real>& g, typename Graph<Real>::Id rendered,
                                          const Tensor<Real>& target) {
    require_same_shape(g.value(rendered), target, "photometric_loss");
    const auto diff = g.sub(rendered, g.leaf(target));
    return g.mean(g.mul(diff, diff));
}

// Penalty mask over the K samples of a ray, near-to-far: 1 up to index M,
// 0 beyond. With the black-and-white prior, samples in (M, bw_range] whose
// predicted color luminance is extreme are penalized too; `sample_colors`
// is then required, [K, 3] per ray.
template <class Real>
std::vector<Real> build_occlusion_mask(int K, const OcclusionConfig& cfg,
                                       const Real* sample_colors = nullptr) {
    cfg.validate(K);
    if (cfg.bw_prior && sample_colors == nullptr)
        throw ConfigError("build_occlusion_mask: bw prior needs sample colors");
    std::vector<Real> m(static_cast<std::size_t>(K), Real(0));
    for (int k = 0; k < cfg.range_m; ++k) m[static_cast<std::size_t>(k)] = Real(1);
    if (cfg.bw_prior) {
        for (int k = cfg.range_m; k < cfg.bw_range; ++k) {
            const Real* c = sample_colors + 3 * k;
            const Real lum = (c[0] + c[1] + c[2]) / Real(3);
            if (lum < Real(cfg.bw_low) || lum > Real(cfg.bw_high)) m[static_cast<std::size_t>(k)] = Real(1);
        }
    }
    return m;
}

// L_occ = mean over rays of (1/K) sum_k sigma_k m_k. The gradient w.r.t.
// sigma_k is exactly m_k / (R*K). sigma: [R, K] on the graph; mask either
// one row of K entries (broadcast) or a full [R, K] tensor (bw prior).
template <class Real>
typename Graph<Real>::Id occlusion_loss(Graph<Real>& g, typename Graph<Real>::Id sigma,
                                        const Tensor<Real>& mask) {
    const Tensor<Real>& s = g.value(sigma);
    if (s.rank() != 2) throw ShapeError("occlusion_loss: sigma must be [R, K], got " + s.shape_str());
    if (!(mask.rank() == 1 && mask.shape[0] == s.shape[1]) && !mask.same_shape(s))
        throw ShapeError("occlusion_loss: mask " + mask.shape_str() + " does not match sigma " +
                         s.shape_str());
    return g.mean(g.mul(sigma, g.leaf(mask)));
}

}  // namespace fieldforge
