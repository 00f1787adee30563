#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fieldforge/core/errors.hpp"
#include "fieldforge/core/rng.hpp"

namespace fieldforge {

// One draw per equal-width bin of [t_near, t_far], strictly increasing.
// With rng == nullptr the draws degenerate to bin midpoints (deterministic
// mode used for evaluation and the quadrature-oracle tests).
template <class Real>
std::vector<Real> stratified_samples(Real t_near, Real t_far, int K, Rng* rng) {
    if (K < 1) throw ConfigError("stratified_samples: K must be >= 1");
    if (!(t_near < t_far)) throw ConfigError("stratified_samples: need t_near < t_far");
    std::vector<Real> ts(static_cast<std::size_t>(K));
    const Real width = (t_far - t_near) / static_cast<Real>(K);
    for (int k = 0; k < K; ++k) {
        const Real u = rng ? static_cast<Real>(rng->uniform()) : Real(0.5);
        ts[static_cast<std::size_t>(k)] = t_near + (static_cast<Real>(k) + u) * width;
    }
    return ts;
}

// Inverse-CDF draws over the piecewise-constant weight distribution spanned
// by consecutive coarse samples; used by the optional two-stage mode. The
// returned set merges coarse and fine samples, sorted near-to-far.
template <class Real>
std::vector<Real> importance_resample(const std::vector<Real>& coarse_ts,
                                      const std::vector<Real>& weights, int n_fine, Rng* rng) {
    const int K = static_cast<int>(coarse_ts.size());
    if (K < 2) throw ConfigError("importance_resample: need at least 2 coarse samples");
    if (weights.size() != coarse_ts.size())
        throw ShapeError("importance_resample: weights/samples length mismatch");
    // Interval k spans [t_k, t_{k+1}] with mass w_k (+ a floor to keep the
    // CDF invertible when all weights vanish).
    std::vector<Real> cdf(static_cast<std::size_t>(K));
    Real acc = 0;
    for (int k = 0; k + 1 < K; ++k) {
        acc += std::max(weights[static_cast<std::size_t>(k)], Real(0)) + Real(1e-5);
        cdf[static_cast<std::size_t>(k)] = acc;
    }
    cdf[static_cast<std::size_t>(K - 1)] = acc;

    std::vector<Real> merged = coarse_ts;
    merged.reserve(coarse_ts.size() + static_cast<std::size_t>(n_fine));
    for (int s = 0; s < n_fine; ++s) {
        const Real u01 = rng ? static_cast<Real>(rng->uniform())
                             : (static_cast<Real>(s) + Real(0.5)) / static_cast<Real>(n_fine);
        const Real target = u01 * acc;
        int k = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end() - 1, target) - cdf.begin());
        const Real lo_cdf = k == 0 ? Real(0) : cdf[static_cast<std::size_t>(k - 1)];
        const Real mass = cdf[static_cast<std::size_t>(k)] - lo_cdf;
        const Real frac = mass > 0 ? (target - lo_cdf) / mass : Real(0.5);
        const Real t0 = coarse_ts[static_cast<std::size_t>(k)];
        const Real t1 = coarse_ts[static_cast<std::size_t>(std::min(k + 1, K - 1))];
        merged.push_back(t0 + frac * (t1 - t0));
    }
    std::sort(merged.begin(), merged.end());
    return merged;
}

}  // namespace fieldforge
