#include "fieldforge/scenes/fixtures.hpp"

#include <cmath>

#include "fieldforge/core/errors.hpp"
#include "fieldforge/core/rng.hpp"

namespace fieldforge {

namespace {

constexpr float kPi = 3.14159265358979323846f;
constexpr float kCamRadius = 3.0f;
constexpr float kSceneRadius = 0.8f;
constexpr float kNear = kCamRadius - kSceneRadius - 0.3f;  // 1.9
constexpr float kFar = kCamRadius + kSceneRadius + 0.3f;   // 4.1
constexpr float kSceneBound = 2.2f;
constexpr int kTestViews = 4;

// Densities stay moderate so that K=1024 midpoint quadrature of the
// piecewise-constant field matches the closed form to < 1e-3 per pixel
// (boundary-bin error scales with sigma * bin width * color contrast).
constexpr float kSphereSigma = 0.8f;
constexpr float kBoxSigma = 0.55f;

Camera<float> hemisphere_camera(float azimuth_deg, float elevation_deg, int image_size) {
    const float az = azimuth_deg * kPi / 180.f;
    const float el = elevation_deg * kPi / 180.f;
    const Vec3<float> eye{kCamRadius * std::cos(el) * std::cos(az),
                          kCamRadius * std::cos(el) * std::sin(az), kCamRadius * std::sin(el)};
    const float focal = focal_from_fov(40.f * kPi / 180.f, image_size);
    return look_at_camera<float>(eye, {0, 0, 0}, {0, 0, 1}, image_size, image_size, focal, kNear,
                                 kFar);
}

// n jittered training cameras plus fixed test cameras halfway between the
// nominal training azimuths.
void place_cameras(ViewSet& views, int n_views, int image_size, Rng& rng) {
    for (int i = 0; i < n_views; ++i) {
        const float az = 360.f * i / n_views + static_cast<float>(rng.symmetric(8.0));
        const float el = 34.f + static_cast<float>(rng.symmetric(6.0));
        views.cameras.push_back(hemisphere_camera(az, el, image_size));
        views.train_ids.push_back(i);
    }
    for (int i = 0; i < kTestViews; ++i) {
        const float az = 360.f * (i + 0.5f) / kTestViews + 180.f / n_views;
        views.cameras.push_back(hemisphere_camera(az, 38.f, image_size));
        views.test_ids.push_back(n_views + i);
    }
}

SceneOracle<float> three_spheres_scene() {
    SceneOracle<float> sc;
    sc.background = {0.52f, 0.52f, 0.56f};
    sc.bound = kSceneBound;
    sc.spheres = {
        {{0.53f * std::cos(0.26f), 0.53f * std::sin(0.26f), -0.08f}, 0.42f, kSphereSigma, {0.95f, 0.15f, 0.10f}},
        {{0.53f * std::cos(2.36f), 0.53f * std::sin(2.36f), 0.12f}, 0.38f, kSphereSigma, {0.10f, 0.85f, 0.20f}},
        {{0.53f * std::cos(4.45f), 0.53f * std::sin(4.45f), 0.02f}, 0.40f, kSphereSigma, {0.12f, 0.25f, 0.95f}},
    };
    return sc;
}

SceneOracle<float> box_room_scene() {
    SceneOracle<float> sc;
    sc.background = {0.50f, 0.50f, 0.54f};
    sc.bound = kSceneBound;
    sc.boxes = {
        // floor slab and a back wall
        {{-0.75f, -0.75f, -0.55f}, {0.75f, 0.75f, -0.38f}, kBoxSigma, {0.90f, 0.80f, 0.25f}},
        {{-0.75f, 0.45f, -0.38f}, {0.75f, 0.62f, 0.55f}, kBoxSigma, {0.20f, 0.55f, 0.90f}},
    };
    sc.spheres = {
        {{0.05f, -0.12f, -0.05f}, 0.34f, kSphereSigma, {0.90f, 0.20f, 0.55f}},
    };
    return sc;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"three-spheres", "box-room", "near-clutter"};
    return names;
}

Fixture make_fixture(const std::string& name, int n_views, int image_size, std::uint64_t seed) {
    if (n_views < 1) throw ConfigError("make_fixture: n_views must be >= 1");
    if (image_size < 8) throw ConfigError("make_fixture: image_size must be >= 8");

    Fixture fx;
    Rng rng(seed * 7919u + 101u);
    place_cameras(fx.views, n_views, image_size, rng);

    if (name == "three-spheres") {
        fx.oracle = three_spheres_scene();
    } else if (name == "box-room") {
        fx.oracle = box_room_scene();
    } else if (name == "near-clutter") {
        fx.oracle = three_spheres_scene();
        // Small ball within 10% of t_near along the first training camera's
        // optical axis.
        const Camera<float>& cam0 = fx.views.cameras[0];
        const Ray<float> axis = cam0.pixel_ray(0.5f * cam0.width, 0.5f * cam0.height);
        const float t = kNear + 0.1f * (kFar - kNear);
        fx.oracle.spheres.push_back({axis.at(t), 0.11f, 0.6f, {0.95f, 0.90f, 0.15f}});
    } else {
        throw ConfigError("make_fixture: unknown fixture '" + name + "' (have: three-spheres, "
                          "box-room, near-clutter)");
    }

    for (const auto& cam : fx.views.cameras) {
        OracleRender<float> r = fx.oracle.render(cam);
        fx.views.images.push_back(std::move(r.rgb));
    }
    fx.views.validate();
    return fx;
}

}  // namespace fieldforge
