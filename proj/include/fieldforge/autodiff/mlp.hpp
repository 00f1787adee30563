#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fieldforge/autodiff/graph.hpp"
#include "fieldforge/core/rng.hpp"
#include "fieldforge/core/tensor.hpp"

namespace fieldforge {

enum class Activation { None, Relu, Sigmoid, Softplus };

template <class Real>
typename Graph<Real>::Id apply_activation(Graph<Real>& g, typename Graph<Real>::Id x, Activation a) {
    switch (a) {
        case Activation::Relu: return g.relu(x);
        case Activation::Sigmoid: return g.sigmoid(x);
        case Activation::Softplus: return g.softplus(x);
        case Activation::None: return x;
    }
    return x;
}

// Plain fully connected stack. Weights are [in x out] row-major so the
// forward pass is X * W + b. An optional skip index concatenates the network
// input back in before that layer (standard NeRF trunk wiring).
template <class Real>
struct MlpParams {
    struct Layer {
        Tensor<Real> w, b;
    };

    std::vector<int> widths;  // [in, h1, ..., out]
    std::vector<Layer> layers;
    Activation hidden = Activation::Relu;
    Activation output = Activation::None;
    int skip_input_at = -1;  // layer index whose input is [h, input], or -1

    // Hidden weights uniform in +-sqrt(6/(fan_in+fan_out)), biases zero.
    static MlpParams glorot(std::vector<int> widths, Rng& rng, Activation hidden = Activation::Relu,
                            Activation output = Activation::None, int skip_input_at = -1) {
        MlpParams p;
        p.widths = std::move(widths);
        p.hidden = hidden;
        p.output = output;
        p.skip_input_at = skip_input_at;
        for (std::size_t i = 0; i + 1 < p.widths.size(); ++i) {
            int fan_in = p.widths[i];
            if (static_cast<int>(i) == skip_input_at) fan_in += p.widths[0];
            const int fan_out = p.widths[i + 1];
            const Real bound = std::sqrt(Real(6) / static_cast<Real>(fan_in + fan_out));
            Tensor<Real> w = Tensor<Real>::zeros({fan_in, fan_out});
            for (auto& v : w.data) v = static_cast<Real>(rng.symmetric(bound));
            p.layers.push_back({std::move(w), Tensor<Real>::zeros({fan_out})});
        }
        return p;
    }

    std::int64_t param_count() const {
        std::int64_t n = 0;
        for (const auto& l : layers) n += l.w.size() + l.b.size();
        return n;
    }

    // X: [N x widths[0]] on the graph. Returns activation of the last layer.
    typename Graph<Real>::Id forward(Graph<Real>& g, typename Graph<Real>::Id x,
                                     std::vector<typename Graph<Real>::Id>* param_ids = nullptr) const {
        const auto input = x;
        auto h = x;
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (static_cast<int>(i) == skip_input_at) h = g.concat_cols(h, input);
            const auto w = g.leaf(layers[i].w, true);
            const auto b = g.leaf(layers[i].b, true);
            if (param_ids) {
                param_ids->push_back(w);
                param_ids->push_back(b);
            }
            h = g.add(g.matmul(h, w), b);
            h = apply_activation(g, h, i + 1 == layers.size() ? output : hidden);
        }
        return h;
    }
};

}  // namespace fieldforge
