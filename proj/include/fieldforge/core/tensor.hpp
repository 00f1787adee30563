#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fieldforge/core/errors.hpp"

namespace fieldforge {

// Dense row-major array, rank 0..2 in practice. Plain value type; all
// arithmetic lives in the autodiff graph and the renderer.
template <class Real>
struct Tensor {
    std::vector<int> shape;
    std::vector<Real> data;

    Tensor() = default;

    static Tensor zeros(std::vector<int> shape) {
        Tensor t;
        t.shape = std::move(shape);
        t.data.assign(static_cast<std::size_t>(count(t.shape)), Real(0));
        return t;
    }

    static Tensor full(std::vector<int> shape, Real v) {
        Tensor t = zeros(std::move(shape));
        t.data.assign(t.data.size(), v);
        return t;
    }

    static Tensor scalar(Real v) {
        Tensor t;
        t.shape = {1};
        t.data = {v};
        return t;
    }

    static Tensor vector(std::vector<Real> v) {
        Tensor t;
        t.shape = {static_cast<int>(v.size())};
        t.data = std::move(v);
        return t;
    }

    static Tensor matrix(int r, int c, std::vector<Real> v) {
        if (static_cast<std::int64_t>(v.size()) != std::int64_t(r) * c)
            throw ShapeError("matrix init: " + std::to_string(v.size()) + " values for shape [" +
                             std::to_string(r) + ", " + std::to_string(c) + "]");
        Tensor t;
        t.shape = {r, c};
        t.data = std::move(v);
        return t;
    }

    static std::int64_t count(const std::vector<int>& shape) {
        std::int64_t n = 1;
        for (int e : shape) {
            if (e < 0) throw ShapeError("negative extent in shape");
            n *= e;
        }
        return n;
    }

    std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
    int rank() const { return static_cast<int>(shape.size()); }
    bool empty() const { return data.empty(); }

    // 2-D accessors; rank-1 tensors behave as a single row.
    int rows() const { return rank() == 2 ? shape[0] : 1; }
    int cols() const { return rank() == 2 ? shape[1] : (rank() == 1 ? shape[0] : 0); }

    Real& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols() + c]; }
    Real at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols() + c]; }
    Real& operator[](std::int64_t i) { return data[static_cast<std::size_t>(i)]; }
    Real operator[](std::int64_t i) const { return data[static_cast<std::size_t>(i)]; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    bool all_finite() const {
        for (Real v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    std::string shape_str() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? ", " : "") << shape[i];
        os << "]";
        return os.str();
    }
};

template <class Real>
inline void require_same_shape(const Tensor<Real>& a, const Tensor<Real>& b, const char* op) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
}

}  // namespace fieldforge
