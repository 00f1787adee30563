#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fieldforge/core/errors.hpp"
#include "fieldforge/core/tensor.hpp"

namespace fieldforge {

// First/second moment accumulators, one tensor per parameter tensor.
// Zero-initialized; the step counter advances by one per update.
template <class Real>
struct AdamState {
    std::vector<Tensor<Real>> m, v;
    std::int64_t step = 0;
    Real beta1 = Real(0.9);
    Real beta2 = Real(0.999);
    Real eps = Real(1e-8);

    static AdamState init(const std::vector<Tensor<Real>*>& params) {
        AdamState s;
        for (const auto* p : params) {
            s.m.push_back(Tensor<Real>::zeros(p->shape));
            s.v.push_back(Tensor<Real>::zeros(p->shape));
        }
        return s;
    }
};

// Bias-corrected Adam. Deterministic: same inputs, bit-identical outputs.
template <class Real>
void adam_step(std::vector<Tensor<Real>*>& params, const std::vector<Tensor<Real>>& grads,
               AdamState<Real>& state, Real lr) {
    if (lr <= Real(0)) throw NumericError("adam_step: lr must be > 0");
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw ShapeError("adam_step: parameter/gradient/state counts differ");
    state.step += 1;
    const Real bc1 = Real(1) - std::pow(state.beta1, static_cast<Real>(state.step));
    const Real bc2 = Real(1) - std::pow(state.beta2, static_cast<Real>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor<Real>& p = *params[i];
        const Tensor<Real>& g = grads[i];
        require_same_shape(p, g, "adam_step");
        if (!g.all_finite()) throw NumericError("adam_step: non-finite gradient");
        Tensor<Real>& m = state.m[i];
        Tensor<Real>& v = state.v[i];
        for (std::int64_t j = 0; j < p.size(); ++j) {
            m[j] = state.beta1 * m[j] + (Real(1) - state.beta1) * g[j];
            v[j] = state.beta2 * v[j] + (Real(1) - state.beta2) * g[j] * g[j];
            const Real mhat = m[j] / bc1;
            const Real vhat = v[j] / bc2;
            p[j] -= lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

// Per-element clamp to [-clip_value, clip_value], THEN rescale the whole set
// to global L2 norm <= clip_norm. The order matters and is fixed.
template <class Real>
void clip_gradients(std::vector<Tensor<Real>>& grads, Real clip_value, Real clip_norm) {
    for (auto& g : grads)
        for (auto& v : g.data) v = v < -clip_value ? -clip_value : (v > clip_value ? clip_value : v);
    double sq = 0;
    for (const auto& g : grads)
        for (Real v : g.data) sq += double(v) * double(v);
    const double norm = std::sqrt(sq);
    if (norm > double(clip_norm) && norm > 0) {
        const Real s = static_cast<Real>(double(clip_norm) / norm);
        for (auto& g : grads)
            for (auto& v : g.data) v *= s;
    }
}

}  // namespace fieldforge
