#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fieldforge/autodiff/optim.hpp"
#include "fieldforge/core/rng.hpp"
#include "fieldforge/field/radiance_field.hpp"
#include "fieldforge/losses/losses.hpp"
#include "fieldforge/metrics/metrics.hpp"
#include "fieldforge/render/composite.hpp"
#include "fieldforge/scenes/view_set.hpp"

namespace fieldforge {

struct LrSchedule {
    double lr_start = 2e-3;
    double lr_end = 2e-5;
    std::int64_t warmup_steps = 512;
    double warmup_mult = 0.01;
};

// Log-linear interpolation from lr_start to lr_end over total_iters; during
// warmup the value is additionally scaled by
// warmup_mult + (1 - warmup_mult) * t / warmup_steps.
double lr_at(std::int64_t t, const LrSchedule& s, std::int64_t total_iters);

// Main-text curriculum defaults per view count: 3 -> 0.9, 6 -> 0.7,
// 9 -> 0.2. Other counts snap to the nearest of {3, 6, 9}, ties toward the
// longer (more regularized) schedule.
double curriculum_fraction_for_views(int n_views);

struct TrainConfig {
    std::int64_t total_iters = 5000;
    int batch_rays = 512;
    int samples_per_ray = 64;  // K
    double curriculum_fraction = -1;  // < 0: derive from the training view count
    double static_mask_ratio = -1;    // > 0: fixed visible-band ratio for the whole run
    LrSchedule lr;
    bool use_clip = true;
    double clip_value = 0.1;
    double clip_norm = 0.1;
    OcclusionConfig occ;
    std::uint64_t seed = 1;
    bool two_stage = false;
    int fine_samples = 64;
    std::int64_t eval_every = 500;  // holdout render cadence; 0 disables
    std::int64_t log_every = 100;
    FieldConfig field;
    std::array<float, 3> background{0, 0, 0};
    double terminal_delta = 1e10;
    double near_override = -1;  // > 0 replaces the cameras' t_near
    double far_override = -1;

    void validate() const;
    std::int64_t curriculum_end(int n_train_views) const;  // T in iterations
};

struct LossTracePoint {
    std::int64_t iter;
    double mse, occ, lr;
    int visible_bands;
    double psnr_holdout;  // NaN until the first eval
};

// One line per logged step, tab separated, machine-parsable.
std::string format_progress_line(const LossTracePoint& p);

class Trainer {
public:
    Trainer(TrainConfig cfg, ViewSet views);

    void step();                      // one training iteration
    void run(std::int64_t iters = -1);  // remaining iterations (or all)

    std::int64_t iteration() const { return iter_; }
    const TrainConfig& config() const { return cfg_; }
    const ViewSet& views() const { return views_; }
    RadianceField<float>& field() { return field_; }
    const std::vector<LossTracePoint>& trace() const { return trace_; }
    double last_mse() const { return last_mse_; }
    double last_occ() const { return last_occ_; }

    // Band masks for the current iteration (all ones when the curriculum is
    // off or finished).
    FrequencyMask<float> mask_x() const { return mask_for(cfg_.field.enc.l_coord); }
    FrequencyMask<float> mask_d() const { return mask_for(cfg_.field.enc.l_dir); }
    int visible_bands() const;

    // Deterministic (midpoint-sampled) render of one camera.
    struct EvalRender {
        Image rgb;
        std::vector<float> depth;
        std::vector<float> opacity;
    };
    EvalRender render_view(const Camera<float>& cam) const;

    double holdout_psnr() const;            // mean PSNR over test views
    double train_view_psnr() const;         // mean PSNR over training views
    MetricReport evaluate(const std::vector<int>& view_ids) const;

    // Mean predicted density over the first `window` samples of every
    // training-view ray, midpoint sampling (the near-field mass the
    // occlusion term acts on).
    double near_density_mass(int window) const;

    // Checkpointing. The parameter/optimizer file is the versioned FFCK
    // container; iteration and rng state ride in a JSON sidecar next to it.
    void save(const std::string& checkpoint_path) const;
    static Trainer restore(const std::string& checkpoint_path, TrainConfig cfg, ViewSet views);

    std::function<void(const std::string&)> log_sink;  // optional

private:
    void log_point();
    FrequencyMask<float> mask_for(int bands) const;
    CompositeOptions<float> composite_options() const;
    void field_outputs(Graph<float>& g, const Tensor<float>& positions, const Tensor<float>& dirs,
                       const RadianceField<float>& f, typename Graph<float>::Id* sigma,
                       typename Graph<float>::Id* rgb,
                       std::vector<typename Graph<float>::Id>* params) const;

    TrainConfig cfg_;
    ViewSet views_;
    RadianceField<float> field_;
    std::unique_ptr<RadianceField<float>> coarse_field_;  // two-stage mode only
    AdamState<float> adam_;
    Rng rng_;
    std::int64_t iter_ = 0;
    std::int64_t curriculum_T_ = 0;
    float t_near_ = 0, t_far_ = 1;
    double last_mse_ = 0, last_occ_ = 0, last_holdout_ = std::nan("");
    std::vector<LossTracePoint> trace_;
};

}  // namespace fieldforge
