#pragma once

#include <string>
#include <vector>

#include "fieldforge/autodiff/graph.hpp"
#include "fieldforge/autodiff/mlp.hpp"
#include "fieldforge/core/rng.hpp"
#include "fieldforge/encoding/encoding.hpp"

namespace fieldforge {

struct FieldConfig {
    EncodingConfig enc;
    double scene_bound = 1.0;  // positions are divided by this before encoding
    int trunk_layers = 4;
    int trunk_hidden = 128;
    int skip_layer = 2;  // 0-based trunk layer whose input gets the encoded position again
    int color_hidden = 64;
    Activation density_activation = Activation::Softplus;
    Activation color_activation = Activation::Sigmoid;

    void validate() const {
        enc.validate();
        if (scene_bound <= 0) throw ConfigError("field: scene_bound must be > 0");
        if (trunk_layers < 1 || trunk_hidden < 1 || color_hidden < 1)
            throw ConfigError("field: layer sizes must be >= 1");
        if (skip_layer >= trunk_layers) throw ConfigError("field: skip_layer out of range");
    }
};

// f(x, d) = (sigma, rgb). The trunk sees only the (masked) encoded position;
// the view direction feeds the color head alone, so density cannot depend
// on it. Outputs: sigma >= 0 via softplus, rgb in [0,1]^3 via sigmoid.
template <class Real>
struct RadianceField {
    FieldConfig cfg;
    MlpParams<Real> trunk;
    MlpParams<Real> density_head;
    MlpParams<Real> color_head;

    static RadianceField init(const FieldConfig& cfg, Rng& rng) {
        cfg.validate();
        RadianceField f;
        f.cfg = cfg;
        const int in_x = encoded_width(3, cfg.enc.l_coord);
        const int in_d = encoded_width(3, cfg.enc.l_dir);
        std::vector<int> trunk_widths{in_x};
        for (int i = 0; i < cfg.trunk_layers; ++i) trunk_widths.push_back(cfg.trunk_hidden);
        f.trunk = MlpParams<Real>::glorot(trunk_widths, rng, Activation::Relu, Activation::Relu,
                                          cfg.skip_layer);
        f.density_head = MlpParams<Real>::glorot({cfg.trunk_hidden, 1}, rng, Activation::None,
                                                 Activation::None);
        f.color_head = MlpParams<Real>::glorot({cfg.trunk_hidden + in_d, cfg.color_hidden, 3}, rng,
                                               Activation::Relu, Activation::None);
        return f;
    }

    // Fixed parameter order; names are stable and used by the checkpoint.
    std::vector<std::pair<std::string, Tensor<Real>*>> named_params() {
        std::vector<std::pair<std::string, Tensor<Real>*>> out;
        auto add = [&out](const std::string& prefix, MlpParams<Real>& mlp) {
            for (std::size_t i = 0; i < mlp.layers.size(); ++i) {
                out.emplace_back(prefix + "." + std::to_string(i) + ".w", &mlp.layers[i].w);
                out.emplace_back(prefix + "." + std::to_string(i) + ".b", &mlp.layers[i].b);
            }
        };
        add("trunk", trunk);
        add("density", density_head);
        add("color", color_head);
        return out;
    }

    std::int64_t param_count() const {
        return trunk.param_count() + density_head.param_count() + color_head.param_count();
    }

    struct BatchIds {
        typename Graph<Real>::Id sigma;  // [N, 1]
        typename Graph<Real>::Id rgb;    // [N, 3]
        std::vector<typename Graph<Real>::Id> param_ids;  // aligned with named_params()
    };

    // Forward from already-encoded (and masked) inputs living on the graph.
    BatchIds forward_encoded(Graph<Real>& g, typename Graph<Real>::Id enc_x,
                             typename Graph<Real>::Id enc_d) const {
        BatchIds out;
        const auto h = trunk.forward(g, enc_x, &out.param_ids);
        const auto sigma_raw = density_head.forward(g, h, &out.param_ids);
        out.sigma = apply_activation(g, sigma_raw, cfg.density_activation);
        const auto color_in = g.concat_cols(h, enc_d);
        const auto rgb_raw = color_head.forward(g, color_in, &out.param_ids);
        out.rgb = apply_activation(g, rgb_raw, cfg.color_activation);
        return out;
    }

    // Numeric entry point: positions [N, 3] in scene units, unit directions
    // [N, 3]. Rescales by scene_bound, encodes, masks, then runs the MLPs.
    BatchIds query_batch(Graph<Real>& g, const Tensor<Real>& positions, const Tensor<Real>& dirs,
                         const FrequencyMask<Real>& mask_x, const FrequencyMask<Real>& mask_d) const {
        if (positions.rank() != 2 || positions.shape[1] != 3)
            throw ShapeError("query_batch: positions must be [N, 3], got " + positions.shape_str());
        require_same_shape(positions, dirs, "query_batch positions/dirs");
        Tensor<Real> scaled = positions;
        const Real inv = Real(1) / static_cast<Real>(cfg.scene_bound);
        for (auto& v : scaled.data) v *= inv;
        Tensor<Real> enc_x = apply_mask(encode_matrix(scaled, cfg.enc.l_coord), mask_x, 3);
        Tensor<Real> enc_d = apply_mask(encode_matrix(dirs, cfg.enc.l_dir), mask_d, 3);
        return forward_encoded(g, g.leaf(std::move(enc_x)), g.leaf(std::move(enc_d)));
    }

    struct PointSample {
        Real sigma;
        Real rgb[3];
    };

    // Single-point convenience (tests, probes). No gradients retained.
    PointSample query(const Real* x, const Real* d, const FrequencyMask<Real>& mask_x,
                      const FrequencyMask<Real>& mask_d) const {
        Graph<Real> g;
        Tensor<Real> px = Tensor<Real>::matrix(1, 3, {x[0], x[1], x[2]});
        Tensor<Real> pd = Tensor<Real>::matrix(1, 3, {d[0], d[1], d[2]});
        const auto ids = query_batch(g, px, pd, mask_x, mask_d);
        PointSample s;
        s.sigma = g.value(ids.sigma)[0];
        for (int i = 0; i < 3; ++i) s.rgb[i] = g.value(ids.rgb)[i];
        return s;
    }
};

}  // namespace fieldforge
