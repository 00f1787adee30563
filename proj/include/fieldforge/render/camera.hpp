#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "fieldforge/core/errors.hpp"

namespace fieldforge {

template <class Real>
struct Vec3 {
    Real x = 0, y = 0, z = 0;

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(Real s) const { return {x * s, y * s, z * s}; }
    Real dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(Vec3 o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    Real norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const Real n = norm();
        if (n == Real(0)) throw NumericError("cannot normalize zero vector");
        return {x / n, y / n, z / n};
    }
};

template <class Real>
struct Ray {
    Vec3<Real> origin;
    Vec3<Real> dir;  // unit within 1e-6
    Real t_near = 0, t_far = 1;

    Vec3<Real> at(Real t) const { return origin + dir * t; }
};

// Pinhole camera with a camera-to-world pose. Camera frame convention:
// +x right, +y up, -z forward (the standard synthetic-scene convention).
// Pixel (i, j) indexes column i rightward and row j downward from the top
// left; rays pass through pixel centers.
template <class Real>
struct Camera {
    std::array<std::array<Real, 4>, 4> c2w{};  // row-major
    int width = 0, height = 0;
    Real focal = 0;  // pixels
    Real t_near = 0, t_far = 1;

    void validate() const {
        if (width < 1 || height < 1) throw ConfigError("camera: image size must be positive");
        if (focal <= 0) throw ConfigError("camera: focal must be > 0");
        if (!(Real(0) <= t_near && t_near < t_far))
            throw ConfigError("camera: need 0 <= t_near < t_far");
        // Rotation block orthonormal within 1e-5.
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                Real dot = 0;
                for (int k = 0; k < 3; ++k) dot += c2w[k][a] * c2w[k][b];
                const Real want = a == b ? Real(1) : Real(0);
                if (std::abs(dot - want) > Real(1e-5))
                    throw ConfigError("camera: rotation block is not orthonormal");
            }
    }

    Vec3<Real> origin() const { return {c2w[0][3], c2w[1][3], c2w[2][3]}; }

    Vec3<Real> rotate(Vec3<Real> v) const {
        return {c2w[0][0] * v.x + c2w[0][1] * v.y + c2w[0][2] * v.z,
                c2w[1][0] * v.x + c2w[1][1] * v.y + c2w[1][2] * v.z,
                c2w[2][0] * v.x + c2w[2][1] * v.y + c2w[2][2] * v.z};
    }

    // Ray through an arbitrary (fractional) pixel position.
    Ray<Real> pixel_ray(Real px, Real py) const {
        const Vec3<Real> cam_dir{(px - Real(0.5) * width) / focal,
                                 -(py - Real(0.5) * height) / focal, Real(-1)};
        Ray<Real> r;
        r.origin = origin();
        r.dir = rotate(cam_dir).normalized();
        r.t_near = t_near;
        r.t_far = t_far;
        return r;
    }

    Ray<Real> generate_ray(int i, int j) const {
        if (i < 0 || i >= width || j < 0 || j >= height)
            throw ConfigError("generate_ray: pixel (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") outside " + std::to_string(width) + "x" + std::to_string(height));
        return pixel_ray(Real(i) + Real(0.5), Real(j) + Real(0.5));
    }
};

template <class Real>
std::vector<Ray<Real>> generate_rays(const Camera<Real>& cam,
                                     const std::vector<std::pair<int, int>>& pixels) {
    std::vector<Ray<Real>> rays;
    rays.reserve(pixels.size());
    for (const auto& [i, j] : pixels) rays.push_back(cam.generate_ray(i, j));
    return rays;
}

// Pose placed at `eye` looking at `target` with the given up hint.
template <class Real>
Camera<Real> look_at_camera(Vec3<Real> eye, Vec3<Real> target, Vec3<Real> up, int width, int height,
                            Real focal, Real t_near, Real t_far) {
    const Vec3<Real> forward = (target - eye).normalized();  // camera -z
    const Vec3<Real> right = forward.cross(up).normalized();
    const Vec3<Real> true_up = right.cross(forward);
    Camera<Real> cam;
    cam.c2w = {{{right.x, true_up.x, -forward.x, eye.x},
                {right.y, true_up.y, -forward.y, eye.y},
                {right.z, true_up.z, -forward.z, eye.z},
                {0, 0, 0, 1}}};
    cam.width = width;
    cam.height = height;
    cam.focal = focal;
    cam.t_near = t_near;
    cam.t_far = t_far;
    cam.validate();
    return cam;
}

template <class Real>
Real focal_from_fov(Real fov_x, int width) {
    return Real(0.5) * width / std::tan(Real(0.5) * fov_x);
}

}  // namespace fieldforge
