#include "fieldforge/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fieldforge/autodiff/checkpoint.hpp"
#include "fieldforge/render/sampling.hpp"

namespace fieldforge {

using json = nlohmann::json;
using Id = Graph<float>::Id;

double lr_at(std::int64_t t, const LrSchedule& s, std::int64_t total_iters) {
    if (s.lr_start <= 0 || s.lr_end <= 0) throw ConfigError("lr schedule: rates must be > 0");
    if (total_iters < 1) throw ConfigError("lr schedule: total_iters must be >= 1");
    t = std::clamp<std::int64_t>(t, 0, total_iters);
    double base;
    if (t == 0)
        base = s.lr_start;
    else if (t == total_iters)
        base = s.lr_end;
    else
        base = std::exp(std::lerp(std::log(s.lr_start), std::log(s.lr_end),
                                  static_cast<double>(t) / static_cast<double>(total_iters)));
    double warm = 1.0;
    if (s.warmup_steps > 0 && t < s.warmup_steps)
        warm = s.warmup_mult + (1.0 - s.warmup_mult) * static_cast<double>(t) /
                                   static_cast<double>(s.warmup_steps);
    return base * warm;
}

double curriculum_fraction_for_views(int n_views) {
    if (n_views < 1) throw ConfigError("curriculum: n_views must be >= 1");
    static const std::pair<int, double> table[] = {{3, 0.9}, {6, 0.7}, {9, 0.2}};
    int best_dist = -1;
    double best_fraction = 0;
    for (const auto& [views, fraction] : table) {
        const int dist = std::abs(n_views - views);
        if (best_dist < 0 || dist < best_dist ||
            (dist == best_dist && fraction > best_fraction)) {
            best_dist = dist;
            best_fraction = fraction;
        }
    }
    return best_fraction;
}

void TrainConfig::validate() const {
    if (total_iters < 1) throw ConfigError("train: total_iters must be >= 1");
    if (batch_rays < 1) throw ConfigError("train: batch_rays must be >= 1");
    if (samples_per_ray < 2) throw ConfigError("train: samples_per_ray must be >= 2");
    if (curriculum_fraction > 1)
        throw ConfigError("train: curriculum_fraction must be <= 1");
    if (static_mask_ratio > 1) throw ConfigError("train: static_mask_ratio must be <= 1");
    if (use_clip && (clip_value <= 0 || clip_norm <= 0))
        throw ConfigError("train: clip thresholds must be > 0");
    occ.validate(samples_per_ray);
    field.validate();
    if (two_stage && fine_samples < 1) throw ConfigError("train: fine_samples must be >= 1");
}

std::int64_t TrainConfig::curriculum_end(int n_train_views) const {
    const double fraction =
        curriculum_fraction >= 0 ? curriculum_fraction : curriculum_fraction_for_views(n_train_views);
    return static_cast<std::int64_t>(fraction * static_cast<double>(total_iters));
}

std::string format_progress_line(const LossTracePoint& p) {
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%lld\t%.9g\t%.9g\t%.9g\t%d\t%.9g",
                  static_cast<long long>(p.iter), p.mse, p.occ, p.lr, p.visible_bands,
                  p.psnr_holdout);
    return buf;
}

Trainer::Trainer(TrainConfig cfg, ViewSet views)
    : cfg_(std::move(cfg)), views_(std::move(views)), field_(), adam_(), rng_(cfg_.seed) {
    cfg_.validate();
    if (cfg_.near_override > 0 || cfg_.far_override > 0) {
        for (auto& cam : views_.cameras) {
            if (cfg_.near_override > 0) cam.t_near = static_cast<float>(cfg_.near_override);
            if (cfg_.far_override > 0) cam.t_far = static_cast<float>(cfg_.far_override);
        }
    }
    views_.validate();
    if (views_.train_ids.empty()) throw ConfigError("train: need at least 1 training view");
    if (views_.images.empty()) throw ConfigError("train: views carry no images");

    Rng init_rng(cfg_.seed ^ 0x9e3779b97f4a7c15ull);
    field_ = RadianceField<float>::init(cfg_.field, init_rng);
    if (cfg_.two_stage)
        coarse_field_ = std::make_unique<RadianceField<float>>(
            RadianceField<float>::init(cfg_.field, init_rng));

    std::vector<Tensor<float>*> params;
    for (auto& [name, t] : field_.named_params()) params.push_back(t);
    if (coarse_field_)
        for (auto& [name, t] : coarse_field_->named_params()) params.push_back(t);
    adam_ = AdamState<float>::init(params);

    curriculum_T_ = cfg_.curriculum_end(static_cast<int>(views_.train_ids.size()));
    t_near_ = views_.cameras.front().t_near;
    t_far_ = views_.cameras.front().t_far;
}

FrequencyMask<float> Trainer::mask_for(int bands) const {
    if (bands < 1) {
        FrequencyMask<float> m;
        m.L = bands;
        m.alpha.assign(static_cast<std::size_t>(bands) + 3, 1.f);
        return m;
    }
    if (cfg_.static_mask_ratio > 0) return static_visible_ratio_mask<float>(cfg_.static_mask_ratio, bands);
    if (curriculum_T_ <= 0) return frequency_mask<float>(1, 1, bands);  // all ones
    return frequency_mask<float>(iter_, curriculum_T_, bands);
}

int Trainer::visible_bands() const {
    const int L = cfg_.field.enc.l_coord;
    if (cfg_.static_mask_ratio > 0) return 3 + static_cast<int>(L * cfg_.static_mask_ratio);
    if (curriculum_T_ <= 0) return L + 3;
    return std::min<std::int64_t>(L + 3, iter_ * L / curriculum_T_ + 3);
}

CompositeOptions<float> Trainer::composite_options() const {
    CompositeOptions<float> opt;
    opt.terminal_delta = static_cast<float>(cfg_.terminal_delta);
    opt.background = cfg_.background;
    return opt;
}

void Trainer::field_outputs(Graph<float>& g, const Tensor<float>& positions,
                            const Tensor<float>& dirs, const RadianceField<float>& f, Id* sigma,
                            Id* rgb, std::vector<Id>* params) const {
    const auto out = f.query_batch(g, positions, dirs, mask_x(), mask_d());
    *sigma = out.sigma;
    *rgb = out.rgb;
    if (params) params->insert(params->end(), out.param_ids.begin(), out.param_ids.end());
}

namespace {

struct RayBatch {
    Tensor<float> positions;  // [R*K, 3]
    Tensor<float> dirs;       // [R*K, 3]
    Tensor<float> ts;         // [R, K]
    Tensor<float> targets;    // [R, 3]
    std::vector<std::pair<int, int>> pixels;  // (view, flat pixel) for diagnostics
};

void fill_samples(const Ray<float>& ray, const std::vector<float>& ts, int r, int K,
                  Tensor<float>& positions, Tensor<float>& dirs, Tensor<float>& ts_out) {
    for (int k = 0; k < K; ++k) {
        const Vec3<float> p = ray.at(ts[static_cast<std::size_t>(k)]);
        const std::size_t row = (static_cast<std::size_t>(r) * K + k) * 3;
        positions.data[row] = p.x;
        positions.data[row + 1] = p.y;
        positions.data[row + 2] = p.z;
        dirs.data[row] = ray.dir.x;
        dirs.data[row + 1] = ray.dir.y;
        dirs.data[row + 2] = ray.dir.z;
        if (!ts_out.empty()) ts_out.at(r, k) = ts[static_cast<std::size_t>(k)];
    }
}

}  // namespace

void Trainer::step() {
    const int R = cfg_.batch_rays;
    const int K = cfg_.samples_per_ray;
    const auto& train_ids = views_.train_ids;
    const int W = views_.images[static_cast<std::size_t>(train_ids[0])].width;
    const int H = views_.images[static_cast<std::size_t>(train_ids[0])].height;
    const std::int64_t pixels_per_view = static_cast<std::int64_t>(W) * H;

    RayBatch batch;
    batch.positions = Tensor<float>::zeros({R * K, 3});
    batch.dirs = Tensor<float>::zeros({R * K, 3});
    batch.ts = Tensor<float>::zeros({R, K});
    batch.targets = Tensor<float>::zeros({R, 3});
    batch.pixels.reserve(static_cast<std::size_t>(R));

    // Uniform over all pixels of all training views, with replacement.
    for (int r = 0; r < R; ++r) {
        const std::int64_t flat = rng_.uniform_int(static_cast<std::int64_t>(train_ids.size()) * pixels_per_view);
        const int view = train_ids[static_cast<std::size_t>(flat / pixels_per_view)];
        const int pix = static_cast<int>(flat % pixels_per_view);
        const int i = pix % W, j = pix / W;
        const Ray<float> ray = views_.cameras[static_cast<std::size_t>(view)].generate_ray(i, j);
        const std::vector<float> ts = stratified_samples(ray.t_near, ray.t_far, K, &rng_);
        fill_samples(ray, ts, r, K, batch.positions, batch.dirs, batch.ts);
        const float* px = views_.images[static_cast<std::size_t>(view)].pixel(i, j);
        for (int c = 0; c < 3; ++c) batch.targets.at(r, c) = px[c];
        batch.pixels.emplace_back(view, pix);
    }

    try {
        Graph<float> g;
        std::vector<Id> param_ids;
        Id sigma_n, rgb_n;
        const RadianceField<float>& stage1 = coarse_field_ ? *coarse_field_ : field_;
        field_outputs(g, batch.positions, batch.dirs, stage1, &sigma_n, &rgb_n, &param_ids);
        const Id sigma_rk = g.reshape(sigma_n, {R, K});
        const auto comp = composite_rays(g, sigma_rk, rgb_n, batch.ts, composite_options());
        Id total = photometric_loss(g, comp.color, batch.targets);
        double mse_value = g.value(total)[0];

        Id occ_sigma = sigma_rk;
        Id occ_rgb = rgb_n;
        Tensor<float> occ_ts = batch.ts;

        if (coarse_field_) {
            // Importance-resample along each ray from the coarse weights,
            // then run the fine field on the merged, sorted samples. Sample
            // positions are constants; gradients do not flow through the
            // resampling.
            const int KF = K + cfg_.fine_samples;
            Tensor<float> fpos = Tensor<float>::zeros({R * KF, 3});
            Tensor<float> fdirs = Tensor<float>::zeros({R * KF, 3});
            Tensor<float> fts = Tensor<float>::zeros({R, KF});
            for (int r = 0; r < R; ++r) {
                std::vector<float> coarse_ts(static_cast<std::size_t>(K));
                std::vector<float> wts(static_cast<std::size_t>(K));
                for (int k = 0; k < K; ++k) {
                    coarse_ts[static_cast<std::size_t>(k)] = batch.ts.at(r, k);
                    wts[static_cast<std::size_t>(k)] = comp.weights.at(r, k);
                }
                const std::vector<float> merged =
                    importance_resample(coarse_ts, wts, cfg_.fine_samples, &rng_);
                Ray<float> ray;
                const std::size_t row0 = static_cast<std::size_t>(r) * K * 3;
                ray.dir = {batch.dirs.data[row0], batch.dirs.data[row0 + 1], batch.dirs.data[row0 + 2]};
                const Vec3<float> p0{batch.positions.data[row0], batch.positions.data[row0 + 1],
                                     batch.positions.data[row0 + 2]};
                ray.origin = p0 - ray.dir * batch.ts.at(r, 0);
                fill_samples(ray, merged, r, KF, fpos, fdirs, fts);
            }
            std::vector<Id> fine_param_ids;
            Id fsigma_n, frgb_n;
            field_outputs(g, fpos, fdirs, field_, &fsigma_n, &frgb_n, &fine_param_ids);
            const Id fsigma_rk = g.reshape(fsigma_n, {R, KF});
            const auto fine = composite_rays(g, fsigma_rk, frgb_n, fts, composite_options());
            const Id fine_mse = photometric_loss(g, fine.color, batch.targets);
            mse_value = g.value(fine_mse)[0];
            total = g.add(total, fine_mse);
            // L_occ applies to the second stage's outputs only.
            occ_sigma = fsigma_rk;
            occ_rgb = frgb_n;
            occ_ts = fts;
            // Fine parameters come first in the update order below, matching
            // named_params(); re-order: field_ params then coarse.
            std::vector<Id> ordered = fine_param_ids;
            ordered.insert(ordered.end(), param_ids.begin(), param_ids.end());
            param_ids = std::move(ordered);
        }

        double occ_value = 0;
        const bool occ_active =
            cfg_.occ.weight > 0 && (cfg_.occ.range_m > 0 || cfg_.occ.bw_prior);
        if (occ_active) {
            const int Ko = g.value(occ_sigma).shape[1];
            OcclusionConfig occ_cfg = cfg_.occ;
            if (coarse_field_) {
                // Ranges were validated against K; clamp to the fine count.
                occ_cfg.range_m = std::min(occ_cfg.range_m, Ko);
                occ_cfg.bw_range = std::min(occ_cfg.bw_range, Ko);
            }
            Tensor<float> mask;
            if (occ_cfg.bw_prior) {
                mask = Tensor<float>::zeros({R, Ko});
                const Tensor<float>& colors = g.value(occ_rgb);
                for (int r = 0; r < R; ++r) {
                    const auto row = build_occlusion_mask<float>(
                        Ko, occ_cfg, &colors.data[static_cast<std::size_t>(r) * Ko * 3]);
                    for (int k = 0; k < Ko; ++k) mask.at(r, k) = row[static_cast<std::size_t>(k)];
                }
            } else {
                mask = Tensor<float>::vector(build_occlusion_mask<float>(Ko, occ_cfg));
            }
            const Id occ_id = occlusion_loss(g, occ_sigma, mask);
            occ_value = g.value(occ_id)[0];
            total = g.add(total, g.scale(occ_id, static_cast<float>(cfg_.occ.weight)));
        }

        if (!std::isfinite(g.value(total)[0]))
            throw NumericError("total loss is non-finite");

        g.backward(total);

        std::vector<Tensor<float>*> params;
        for (auto& [name, t] : field_.named_params()) params.push_back(t);
        if (coarse_field_)
            for (auto& [name, t] : coarse_field_->named_params()) params.push_back(t);
        std::vector<Tensor<float>> grads;
        grads.reserve(params.size());
        for (std::size_t i = 0; i < param_ids.size(); ++i) {
            const Tensor<float>& gr = g.grad(param_ids[i]);
            grads.push_back(gr.empty() ? Tensor<float>::zeros(params[i]->shape) : gr);
        }
        if (cfg_.use_clip)
            clip_gradients(grads, static_cast<float>(cfg_.clip_value),
                           static_cast<float>(cfg_.clip_norm));
        adam_step(params, grads, adam_, static_cast<float>(lr_at(iter_, cfg_.lr, cfg_.total_iters)));

        last_mse_ = mse_value;
        last_occ_ = occ_value;
    } catch (const NumericError& e) {
        std::ostringstream os;
        os << e.what() << " [iteration " << iter_ << "; batch pixels (view:flat):";
        for (std::size_t i = 0; i < batch.pixels.size() && i < 16; ++i)
            os << " " << batch.pixels[i].first << ":" << batch.pixels[i].second;
        if (batch.pixels.size() > 16) os << " ...";
        os << "]";
        throw NumericError(os.str());
    }

    ++iter_;
    if (cfg_.eval_every > 0 && !views_.test_ids.empty() &&
        (iter_ % cfg_.eval_every == 0 || iter_ == cfg_.total_iters)) {
        const int probe = views_.test_ids.front();
        const EvalRender r = render_view(views_.cameras[static_cast<std::size_t>(probe)]);
        last_holdout_ = psnr(r.rgb, views_.images[static_cast<std::size_t>(probe)]);
    }
    if (iter_ % cfg_.log_every == 0 || iter_ == cfg_.total_iters) log_point();
}

void Trainer::log_point() {
    LossTracePoint p;
    p.iter = iter_;
    p.mse = last_mse_;
    p.occ = last_occ_;
    p.lr = lr_at(iter_ - 1, cfg_.lr, cfg_.total_iters);
    p.visible_bands = visible_bands();
    p.psnr_holdout = last_holdout_;
    trace_.push_back(p);
    if (log_sink) log_sink(format_progress_line(p));
}

void Trainer::run(std::int64_t iters) {
    const std::int64_t until =
        iters < 0 ? cfg_.total_iters : std::min(cfg_.total_iters, iter_ + iters);
    while (iter_ < until) step();
}

Trainer::EvalRender Trainer::render_view(const Camera<float>& cam) const {
    const int K = cfg_.samples_per_ray;
    EvalRender out;
    out.rgb = Image::filled(cam.width, cam.height, {0, 0, 0});
    out.depth.assign(static_cast<std::size_t>(cam.width) * cam.height, 0.f);
    out.opacity.assign(static_cast<std::size_t>(cam.width) * cam.height, 0.f);

    const int chunk_rows = std::max(1, 4096 / cam.width);
    for (int j0 = 0; j0 < cam.height; j0 += chunk_rows) {
        const int j1 = std::min(cam.height, j0 + chunk_rows);
        const int R = (j1 - j0) * cam.width;
        Tensor<float> positions = Tensor<float>::zeros({R * K, 3});
        Tensor<float> dirs = Tensor<float>::zeros({R * K, 3});
        Tensor<float> ts = Tensor<float>::zeros({R, K});
        int r = 0;
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < cam.width; ++i, ++r) {
                const Ray<float> ray = cam.generate_ray(i, j);
                const std::vector<float> mid = stratified_samples(ray.t_near, ray.t_far, K, nullptr);
                fill_samples(ray, mid, r, K, positions, dirs, ts);
            }
        Graph<float> g;
        Id sigma_n, rgb_n;
        // Fine field renders in two-stage mode as well; evaluation sampling
        // stays deterministic (midpoints), so no importance pass.
        const_cast<Trainer*>(this)->noop();
        const auto ids = field_.query_batch(g, positions, dirs, mask_x(), mask_d());
        sigma_n = ids.sigma;
        rgb_n = ids.rgb;
        Tensor<float> sigma = g.value(sigma_n);
        sigma.shape = {R, K};
        const CompositeBatch<float> comp =
            composite_batch(sigma, g.value(rgb_n), ts, composite_options());
        r = 0;
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < cam.width; ++i, ++r) {
                float* px = out.rgb.pixel(i, j);
                for (int c = 0; c < 3; ++c) px[c] = comp.color.at(r, c);
                out.depth[static_cast<std::size_t>(j) * cam.width + i] = comp.depth[r];
                out.opacity[static_cast<std::size_t>(j) * cam.width + i] = comp.opacity[r];
            }
    }
    return out;
}

double Trainer::holdout_psnr() const {
    double total = 0;
    int n = 0;
    for (int id : views_.test_ids) {
        const EvalRender r = render_view(views_.cameras[static_cast<std::size_t>(id)]);
        const double v = psnr(r.rgb, views_.images[static_cast<std::size_t>(id)]);
        if (std::isfinite(v)) {
            total += v;
            ++n;
        }
    }
    return n ? total / n : std::numeric_limits<double>::infinity();
}

double Trainer::train_view_psnr() const {
    double total = 0;
    int n = 0;
    for (int id : views_.train_ids) {
        const EvalRender r = render_view(views_.cameras[static_cast<std::size_t>(id)]);
        const double v = psnr(r.rgb, views_.images[static_cast<std::size_t>(id)]);
        if (std::isfinite(v)) {
            total += v;
            ++n;
        }
    }
    return n ? total / n : std::numeric_limits<double>::infinity();
}

MetricReport Trainer::evaluate(const std::vector<int>& view_ids) const {
    MetricReport report;
    for (int id : view_ids) {
        const EvalRender r = render_view(views_.cameras[static_cast<std::size_t>(id)]);
        MetricRow row;
        row.view_id = id;
        row.psnr = psnr(r.rgb, views_.images[static_cast<std::size_t>(id)]);
        row.ssim = ssim(r.rgb, views_.images[static_cast<std::size_t>(id)]);
        row.avg2 = std::isfinite(row.psnr) ? average_metric(row.psnr, row.ssim) : 0.0;
        report.rows.push_back(row);
    }
    report.finalize();
    return report;
}

double Trainer::near_density_mass(int window) const {
    const int K = cfg_.samples_per_ray;
    window = std::min(window, K);
    if (window < 1) throw ConfigError("near_density_mass: window must be >= 1");
    double total = 0;
    std::int64_t count = 0;
    for (int id : views_.train_ids) {
        const Camera<float>& cam = views_.cameras[static_cast<std::size_t>(id)];
        const int chunk_rows = std::max(1, 4096 / cam.width);
        for (int j0 = 0; j0 < cam.height; j0 += chunk_rows) {
            const int j1 = std::min(cam.height, j0 + chunk_rows);
            const int R = (j1 - j0) * cam.width;
            Tensor<float> positions = Tensor<float>::zeros({R * window, 3});
            Tensor<float> dirs = Tensor<float>::zeros({R * window, 3});
            Tensor<float> dummy;
            int r = 0;
            for (int j = j0; j < j1; ++j)
                for (int i = 0; i < cam.width; ++i, ++r) {
                    const Ray<float> ray = cam.generate_ray(i, j);
                    std::vector<float> mid = stratified_samples(ray.t_near, ray.t_far, K, nullptr);
                    mid.resize(static_cast<std::size_t>(window));
                    fill_samples(ray, mid, r, window, positions, dirs, dummy);
                }
            Graph<float> g;
            const auto ids = field_.query_batch(g, positions, dirs, mask_x(), mask_d());
            for (float v : g.value(ids.sigma).data) total += v;
            count += g.value(ids.sigma).size();
        }
    }
    return count ? total / static_cast<double>(count) : 0.0;
}

void Trainer::save(const std::string& checkpoint_path) const {
    NamedTensors tensors;
    auto dump_field = [&tensors](const std::string& prefix, RadianceField<float>& f) {
        for (auto& [name, t] : f.named_params()) tensors.emplace_back(prefix + name, *t);
    };
    dump_field("", const_cast<RadianceField<float>&>(field_));
    if (coarse_field_) dump_field("coarse.", *coarse_field_);

    std::vector<std::string> names;
    for (auto& [name, t] : const_cast<RadianceField<float>&>(field_).named_params())
        names.push_back(name);
    if (coarse_field_)
        for (auto& [name, t] : coarse_field_->named_params()) names.push_back("coarse." + name);
    for (std::size_t i = 0; i < names.size(); ++i) {
        tensors.emplace_back("__adam__.m." + names[i], adam_.m[i]);
        tensors.emplace_back("__adam__.v." + names[i], adam_.v[i]);
    }
    tensors.emplace_back("__adam__.meta",
                         Tensor<float>::vector({static_cast<float>(adam_.step), adam_.beta1,
                                                adam_.beta2, adam_.eps}));
    save_checkpoint(checkpoint_path, tensors);

    json state;
    state["iteration"] = iter_;
    state["rng"] = rng_.serialize();
    state["last_holdout"] = last_holdout_;
    std::ofstream os(checkpoint_path + ".state.json", std::ios::trunc);
    if (!os) throw IoError("trainer: cannot write state sidecar for " + checkpoint_path);
    os << state.dump(1);
}

Trainer Trainer::restore(const std::string& checkpoint_path, TrainConfig cfg, ViewSet views) {
    Trainer t(std::move(cfg), std::move(views));
    NamedTensors tensors = load_checkpoint(checkpoint_path);
    std::map<std::string, Tensor<float>*> slot;
    for (auto& [name, ptr] : t.field_.named_params()) slot[name] = ptr;
    if (t.coarse_field_)
        for (auto& [name, ptr] : t.coarse_field_->named_params()) slot["coarse." + name] = ptr;

    std::vector<std::string> names;
    for (auto& [name, ptr] : t.field_.named_params()) names.push_back(name);
    if (t.coarse_field_)
        for (auto& [name, ptr] : t.coarse_field_->named_params()) names.push_back("coarse." + name);
    std::map<std::string, std::size_t> adam_index;
    for (std::size_t i = 0; i < names.size(); ++i) adam_index[names[i]] = i;

    std::size_t loaded = 0;
    for (auto& [name, tensor] : tensors) {
        if (auto it = slot.find(name); it != slot.end()) {
            require_same_shape(*it->second, tensor, "restore");
            *it->second = std::move(tensor);
            ++loaded;
        } else if (name.rfind("__adam__.m.", 0) == 0) {
            t.adam_.m[adam_index.at(name.substr(11))] = std::move(tensor);
        } else if (name.rfind("__adam__.v.", 0) == 0) {
            t.adam_.v[adam_index.at(name.substr(11))] = std::move(tensor);
        } else if (name == "__adam__.meta") {
            t.adam_.step = static_cast<std::int64_t>(tensor[0]);
            t.adam_.beta1 = tensor[1];
            t.adam_.beta2 = tensor[2];
            t.adam_.eps = tensor[3];
        } else {
            throw IoError("restore: checkpoint tensor '" + name + "' has no destination");
        }
    }
    if (loaded != slot.size())
        throw IoError("restore: checkpoint is missing parameters (" + std::to_string(loaded) +
                      " of " + std::to_string(slot.size()) + ")");

    std::ifstream is(checkpoint_path + ".state.json");
    if (!is) throw IoError("restore: missing state sidecar for " + checkpoint_path);
    json state;
    is >> state;
    t.iter_ = state["iteration"].get<std::int64_t>();
    t.rng_.deserialize(state["rng"].get<std::string>());
    t.last_holdout_ = state["last_holdout"].get<double>();
    return t;
}

}  // namespace fieldforge
