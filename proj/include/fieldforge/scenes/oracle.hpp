#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "fieldforge/render/camera.hpp"
#include "fieldforge/render/image.hpp"

namespace fieldforge {

// Analytic reference scenes: constant-density primitives with constant
// emission color. Transmittance along any ray has the closed form
// exp(-sum sigma_i * chord_i), so the exact ray color is computable without
// sampling; fixture ground-truth images come from here.

template <class Real>
struct DensitySphere {
    Vec3<Real> center;
    Real radius;
    Real sigma;
    std::array<Real, 3> color;
};

template <class Real>
struct DensityBox {
    Vec3<Real> lo, hi;  // axis-aligned
    Real sigma;
    std::array<Real, 3> color;
};

template <class Real>
struct OracleRender {
    Image rgb;
    std::vector<float> depth;
    std::vector<float> opacity;
};

template <class Real>
struct SceneOracle {
    std::vector<DensitySphere<Real>> spheres;
    std::vector<DensityBox<Real>> boxes;
    std::array<Real, 3> background{0, 0, 0};
    Real bound = 1;  // scene-bound used to rescale positions before encoding

    // Point lookup used to feed the quadrature under test. Overlapping
    // primitives add densities; color is the density-weighted mixture.
    void sample(Vec3<Real> p, Real* sigma, Real* rgb) const {
        Real s = 0;
        Real c[3] = {0, 0, 0};
        for (const auto& sp : spheres) {
            const Vec3<Real> d = p - sp.center;
            if (d.dot(d) <= sp.radius * sp.radius) accumulate(sp.sigma, sp.color, s, c);
        }
        for (const auto& bx : boxes) {
            if (p.x >= bx.lo.x && p.x <= bx.hi.x && p.y >= bx.lo.y && p.y <= bx.hi.y &&
                p.z >= bx.lo.z && p.z <= bx.hi.z)
                accumulate(bx.sigma, bx.color, s, c);
        }
        *sigma = s;
        if (s > 0)
            for (int i = 0; i < 3; ++i) rgb[i] = c[i] / s;
        else
            for (int i = 0; i < 3; ++i) rgb[i] = 0;
    }

    // Exact emission-absorption integral over [t_near, t_far]. Boundary
    // events split the ray into constant segments; each segment integrates
    // in closed form.
    void ray_color(const Ray<Real>& ray, Real out_rgb[3], Real* out_depth, Real* out_opacity) const {
        struct Event {
            Real t;
            int delta_idx;  // +idx on entry, -(idx+1) on exit
        };
        std::vector<Event> events;
        std::vector<Real> sig;
        std::vector<std::array<Real, 3>> col;
        auto add_interval = [&](Real t0, Real t1, Real sigma, std::array<Real, 3> color) {
            t0 = std::max(t0, ray.t_near);
            t1 = std::min(t1, ray.t_far);
            if (t0 >= t1) return;
            const int idx = static_cast<int>(sig.size());
            sig.push_back(sigma);
            col.push_back(color);
            events.push_back({t0, idx + 1});
            events.push_back({t1, -(idx + 1)});
        };
        for (const auto& sp : spheres) {
            Real t0, t1;
            if (ray_sphere(ray, sp.center, sp.radius, &t0, &t1)) add_interval(t0, t1, sp.sigma, sp.color);
        }
        for (const auto& bx : boxes) {
            Real t0, t1;
            if (ray_box(ray, bx.lo, bx.hi, &t0, &t1)) add_interval(t0, t1, bx.sigma, bx.color);
        }
        std::sort(events.begin(), events.end(),
                  [](const Event& a, const Event& b) { return a.t < b.t; });

        Real transmittance = 1;
        Real color[3] = {0, 0, 0};
        Real depth_num = 0;
        std::vector<bool> active(sig.size(), false);
        std::size_t e = 0;
        Real t_prev = ray.t_near;
        while (e < events.size()) {
            const Real t_next = events[e].t;
            integrate_segment(t_prev, t_next, active, sig, col, transmittance, color, depth_num);
            while (e < events.size() && events[e].t == t_next) {
                const int d = events[e].delta_idx;
                active[static_cast<std::size_t>(std::abs(d) - 1)] = d > 0;
                ++e;
            }
            t_prev = t_next;
        }
        integrate_segment(t_prev, ray.t_far, active, sig, col, transmittance, color, depth_num);

        const Real opacity = Real(1) - transmittance;
        for (int i = 0; i < 3; ++i) out_rgb[i] = color[i] + transmittance * background[static_cast<std::size_t>(i)];
        if (out_depth) *out_depth = depth_num / std::max(opacity, Real(1e-10));
        if (out_opacity) *out_opacity = opacity;
    }

    OracleRender<Real> render(const Camera<Real>& cam) const {
        OracleRender<Real> out;
        out.rgb.width = cam.width;
        out.rgb.height = cam.height;
        out.rgb.rgb.assign(static_cast<std::size_t>(3) * cam.width * cam.height, 0.f);
        out.depth.assign(static_cast<std::size_t>(cam.width) * cam.height, 0.f);
        out.opacity.assign(static_cast<std::size_t>(cam.width) * cam.height, 0.f);
        for (int j = 0; j < cam.height; ++j)
            for (int i = 0; i < cam.width; ++i) {
                const Ray<Real> ray = cam.generate_ray(i, j);
                Real rgb[3], depth, opacity;
                ray_color(ray, rgb, &depth, &opacity);
                float* px = out.rgb.pixel(i, j);
                for (int c = 0; c < 3; ++c) px[c] = static_cast<float>(rgb[c]);
                out.depth[static_cast<std::size_t>(j) * cam.width + i] = static_cast<float>(depth);
                out.opacity[static_cast<std::size_t>(j) * cam.width + i] = static_cast<float>(opacity);
            }
        return out;
    }

    static bool ray_sphere(const Ray<Real>& ray, Vec3<Real> center, Real radius, Real* t0, Real* t1) {
        const Vec3<Real> oc = ray.origin - center;
        const Real b = oc.dot(ray.dir);
        const Real c = oc.dot(oc) - radius * radius;
        const Real disc = b * b - c;
        if (disc <= 0) return false;
        const Real s = std::sqrt(disc);
        *t0 = -b - s;
        *t1 = -b + s;
        return true;
    }

    static bool ray_box(const Ray<Real>& ray, Vec3<Real> lo, Vec3<Real> hi, Real* t0, Real* t1) {
        Real tmin = -std::numeric_limits<Real>::infinity();
        Real tmax = std::numeric_limits<Real>::infinity();
        const Real o[3] = {ray.origin.x, ray.origin.y, ray.origin.z};
        const Real d[3] = {ray.dir.x, ray.dir.y, ray.dir.z};
        const Real l[3] = {lo.x, lo.y, lo.z};
        const Real h[3] = {hi.x, hi.y, hi.z};
        for (int a = 0; a < 3; ++a) {
            if (d[a] == Real(0)) {
                if (o[a] < l[a] || o[a] > h[a]) return false;
                continue;
            }
            Real ta = (l[a] - o[a]) / d[a];
            Real tb = (h[a] - o[a]) / d[a];
            if (ta > tb) std::swap(ta, tb);
            tmin = std::max(tmin, ta);
            tmax = std::min(tmax, tb);
        }
        if (tmin >= tmax) return false;
        *t0 = tmin;
        *t1 = tmax;
        return true;
    }

private:
    static void accumulate(Real sigma, const std::array<Real, 3>& color, Real& s, Real c[3]) {
        s += sigma;
        for (int i = 0; i < 3; ++i) c[i] += sigma * color[static_cast<std::size_t>(i)];
    }

    // Exact integral of T(t) sigma c over [t0, t1] with the active set
    // constant. Also accumulates the depth numerator integral T sigma t.
    void integrate_segment(Real t0, Real t1, const std::vector<bool>& active,
                           const std::vector<Real>& sig, const std::vector<std::array<Real, 3>>& col,
                           Real& transmittance, Real color[3], Real& depth_num) const {
        if (t1 <= t0) return;
        Real s = 0;
        Real mixed[3] = {0, 0, 0};
        for (std::size_t i = 0; i < sig.size(); ++i)
            if (active[i]) {
                s += sig[i];
                for (int c = 0; c < 3; ++c) mixed[c] += sig[i] * col[i][static_cast<std::size_t>(c)];
            }
        if (s <= 0) return;
        const Real len = t1 - t0;
        const Real decay = std::exp(-s * len);
        const Real absorbed = Real(1) - decay;
        for (int c = 0; c < 3; ++c) color[c] += transmittance * absorbed * (mixed[c] / s);
        // integral of sigma e^{-sigma (t - t0)} t dt over [t0, t1]
        depth_num += transmittance * (t0 * absorbed + (Real(1) - decay * (Real(1) + s * len)) / s);
        transmittance *= decay;
    }
};

}  // namespace fieldforge
