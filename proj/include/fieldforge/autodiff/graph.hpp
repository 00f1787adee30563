#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fieldforge/core/errors.hpp"
#include "fieldforge/core/parallel.hpp"
#include "fieldforge/core/tensor.hpp"

namespace fieldforge {

// Row blocks for parallel matmul. Fixed so the arithmetic decomposition is
// independent of thread count (bitwise-reproducible results).
inline constexpr std::int64_t kMatmulRowBlock = 256;
inline constexpr std::int64_t kMatmulColBlock = 32;

// Reverse-mode tape over dense tensors. One graph is built per training
// step and discarded. Node ids are indices into the tape; creation order is
// a topological order, so backward() is a single reverse sweep that visits
// each node exactly once.
template <class Real>
class Graph {
public:
    using Id = std::int32_t;
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using MapM = Eigen::Map<Mat>;
    using MapC = Eigen::Map<const Mat>;

    Id leaf(Tensor<Real> v, bool requires_grad = false) {
        return push(std::move(v), "leaf", requires_grad, nullptr);
    }

    const Tensor<Real>& value(Id id) const { return nodes_[id].value; }
    const Tensor<Real>& grad(Id id) const { return nodes_[id].grad; }
    bool requires_grad(Id id) const { return nodes_[id].requires_grad; }
    std::size_t node_count() const { return nodes_.size(); }

    // Inside a backward closure: the node whose adjoint is being propagated.
    Id current() const { return last_; }

    // Grad buffer for `id`, zero-initialized on first touch. Public so custom
    // ops (e.g. the ray compositor) can implement their own backward.
    Tensor<Real>& grad_buf(Id id) {
        Node& n = nodes_[id];
        if (n.grad.empty()) n.grad = Tensor<Real>::zeros(n.value.shape);
        return n.grad;
    }

    // Extension point for ops with hand-written adjoints.
    Id push_op(Tensor<Real> value, const char* op, std::vector<Id> parents,
               std::function<void(Graph&)> backward) {
        bool rg = false;
        for (Id p : parents) rg |= nodes_[p].requires_grad;
        return push(std::move(value), op, rg, rg ? std::move(backward) : nullptr);
    }

    // ---- binary ops ----------------------------------------------------

    Id matmul(Id a, Id b) {
        const Tensor<Real>& A = value(a);
        const Tensor<Real>& B = value(b);
        if (A.rank() != 2 || B.rank() != 2 || A.shape[1] != B.shape[0])
            throw ShapeError("matmul: inner dimensions do not conform, " + A.shape_str() + " vs " +
                             B.shape_str());
        const int N = A.shape[0], K = A.shape[1], M = B.shape[1];
        Tensor<Real> C = Tensor<Real>::zeros({N, M});
        {
            MapC mA(A.data.data(), N, K), mB(B.data.data(), K, M);
            MapM mC(C.data.data(), N, M);
            parallel_blocks(N, kMatmulRowBlock, [&](std::int64_t lo, std::int64_t hi) {
                mC.middleRows(lo, hi - lo).noalias() = mA.middleRows(lo, hi - lo) * mB;
            });
        }
        return push_op(std::move(C), "matmul", {a, b}, [a, b, N, K, M](Graph& g) {
            const Tensor<Real>& gc = g.grad(g.last_);
            MapC mG(gc.data.data(), N, M);
            MapC mA(g.value(a).data.data(), N, K), mB(g.value(b).data.data(), K, M);
            if (g.requires_grad(a)) {
                MapM ga(g.grad_buf(a).data.data(), N, K);
                parallel_blocks(N, kMatmulRowBlock, [&](std::int64_t lo, std::int64_t hi) {
                    ga.middleRows(lo, hi - lo).noalias() += mG.middleRows(lo, hi - lo) * mB.transpose();
                });
            }
            if (g.requires_grad(b)) {
                // Split over columns of dB: the reduction over N stays in
                // ascending order per output element.
                MapM gb(g.grad_buf(b).data.data(), K, M);
                parallel_blocks(M, kMatmulColBlock, [&](std::int64_t lo, std::int64_t hi) {
                    gb.middleCols(lo, hi - lo).noalias() +=
                        mA.transpose() * mG.middleCols(lo, hi - lo);
                });
            }
        });
    }

    // Elementwise add; rank-1 rhs of length cols(a) broadcasts over rows.
    Id add(Id a, Id b) { return broadcast_binary(a, b, "add", BinKind::Add); }

    // Elementwise subtract (same shapes only).
    Id sub(Id a, Id b) {
        require_same_shape(value(a), value(b), "sub");
        Tensor<Real> out = value(a);
        for (std::int64_t i = 0; i < out.size(); ++i) out[i] -= value(b)[i];
        return push_op(std::move(out), "sub", {a, b}, [a, b](Graph& g) {
            const Tensor<Real>& go = g.grad(g.last_);
            if (g.requires_grad(a)) {
                Tensor<Real>& ga = g.grad_buf(a);
                for (std::int64_t i = 0; i < go.size(); ++i) ga[i] += go[i];
            }
            if (g.requires_grad(b)) {
                Tensor<Real>& gb = g.grad_buf(b);
                for (std::int64_t i = 0; i < go.size(); ++i) gb[i] -= go[i];
            }
        });
    }

    // Elementwise multiply; rank-1 rhs broadcasts over rows (masked-multiply).
    Id mul(Id a, Id b) { return broadcast_binary(a, b, "mul", BinKind::Mul); }

    Id scale(Id a, Real c) {
        Tensor<Real> out = value(a);
        for (auto& v : out.data) v *= c;
        return push_op(std::move(out), "scale", {a}, [a, c](Graph& g) {
            if (!g.requires_grad(a)) return;
            const Tensor<Real>& go = g.grad(g.last_);
            Tensor<Real>& ga = g.grad_buf(a);
            for (std::int64_t i = 0; i < go.size(); ++i) ga[i] += c * go[i];
        });
    }

    // ---- unary elementwise ops ------------------------------------------

    Id sin(Id a) {
        return unary(a, "sin", [](Real x) { return std::sin(x); },
                     [](Real x, Real) { return std::cos(x); });
    }
    Id cos(Id a) {
        return unary(a, "cos", [](Real x) { return std::cos(x); },
                     [](Real x, Real) { return -std::sin(x); });
    }
    Id exp(Id a) {
        return unary(a, "exp", [](Real x) { return std::exp(x); },
                     [](Real, Real y) { return y; });
    }
    Id neg(Id a) {
        return unary(a, "neg", [](Real x) { return -x; }, [](Real, Real) { return Real(-1); });
    }
    Id relu(Id a) {
        return unary(a, "relu", [](Real x) { return x > Real(0) ? x : Real(0); },
                     [](Real x, Real) { return x > Real(0) ? Real(1) : Real(0); });
    }
    Id sigmoid(Id a) {
        return unary(a, "sigmoid", [](Real x) { return stable_sigmoid(x); },
                     [](Real, Real y) { return y * (Real(1) - y); });
    }
    // log1p(exp(-|x|)) + max(x, 0): no overflow at large |x|.
    Id softplus(Id a) {
        return unary(a, "softplus",
                     [](Real x) { return std::log1p(std::exp(-std::abs(x))) + (x > Real(0) ? x : Real(0)); },
                     [](Real x, Real) { return stable_sigmoid(x); });
    }

    // ---- reductions (fixed, sequential summation order) ------------------

    Id sum(Id a) {
        Real acc = 0;
        for (Real v : value(a).data) acc += v;
        return push_op(Tensor<Real>::scalar(acc), "sum", {a}, [a](Graph& g) {
            if (!g.requires_grad(a)) return;
            const Real go = g.grad(g.last_)[0];
            Tensor<Real>& ga = g.grad_buf(a);
            for (auto& v : ga.data) v += go;
        });
    }

    Id mean(Id a) {
        const std::int64_t n = value(a).size();
        if (n == 0) throw ShapeError("mean: empty tensor");
        Real acc = 0;
        for (Real v : value(a).data) acc += v;
        const Real inv = Real(1) / static_cast<Real>(n);
        return push_op(Tensor<Real>::scalar(acc * inv), "mean", {a}, [a, inv](Graph& g) {
            if (!g.requires_grad(a)) return;
            const Real go = g.grad(g.last_)[0] * inv;
            Tensor<Real>& ga = g.grad_buf(a);
            for (auto& v : ga.data) v += go;
        });
    }

    // ---- structure ops ---------------------------------------------------

    Id concat_cols(Id a, Id b) {
        const Tensor<Real>& A = value(a);
        const Tensor<Real>& B = value(b);
        if (A.rank() != 2 || B.rank() != 2 || A.shape[0] != B.shape[0])
            throw ShapeError("concat_cols: row counts differ, " + A.shape_str() + " vs " + B.shape_str());
        const int N = A.shape[0], Ca = A.shape[1], Cb = B.shape[1];
        Tensor<Real> out = Tensor<Real>::zeros({N, Ca + Cb});
        for (int r = 0; r < N; ++r) {
            for (int c = 0; c < Ca; ++c) out.at(r, c) = A.at(r, c);
            for (int c = 0; c < Cb; ++c) out.at(r, Ca + c) = B.at(r, c);
        }
        return push_op(std::move(out), "concat_cols", {a, b}, [a, b, N, Ca, Cb](Graph& g) {
            const Tensor<Real>& go = g.grad(g.last_);
            if (g.requires_grad(a)) {
                Tensor<Real>& ga = g.grad_buf(a);
                for (int r = 0; r < N; ++r)
                    for (int c = 0; c < Ca; ++c) ga.at(r, c) += go.at(r, c);
            }
            if (g.requires_grad(b)) {
                Tensor<Real>& gb = g.grad_buf(b);
                for (int r = 0; r < N; ++r)
                    for (int c = 0; c < Cb; ++c) gb.at(r, c) += go.at(r, Ca + c);
            }
        });
    }

    Id slice_cols(Id a, int c0, int c1) {
        const Tensor<Real>& A = value(a);
        if (A.rank() != 2 || c0 < 0 || c1 > A.shape[1] || c0 >= c1)
            throw ShapeError("slice_cols: range [" + std::to_string(c0) + ", " + std::to_string(c1) +
                             ") invalid for " + A.shape_str());
        const int N = A.shape[0], C = c1 - c0;
        Tensor<Real> out = Tensor<Real>::zeros({N, C});
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < C; ++c) out.at(r, c) = A.at(r, c0 + c);
        return push_op(std::move(out), "slice_cols", {a}, [a, N, C, c0](Graph& g) {
            if (!g.requires_grad(a)) return;
            const Tensor<Real>& go = g.grad(g.last_);
            Tensor<Real>& ga = g.grad_buf(a);
            for (int r = 0; r < N; ++r)
                for (int c = 0; c < C; ++c) ga.at(r, c0 + c) += go.at(r, c);
        });
    }

    // Multiply each column by a constant (masked-multiply with a band mask).
    Id mask_cols(Id a, const Tensor<Real>& mask) {
        const Tensor<Real>& A = value(a);
        if (mask.rank() != 1 || A.rank() != 2 || mask.shape[0] != A.shape[1])
            throw ShapeError("mask_cols: mask " + mask.shape_str() + " does not match " + A.shape_str());
        return mul(a, leaf(mask, false));
    }

    Id reshape(Id a, std::vector<int> shape) {
        const Tensor<Real>& A = value(a);
        if (Tensor<Real>::count(shape) != A.size()) {
            Tensor<Real> probe;
            probe.shape = shape;
            throw ShapeError("reshape: cannot view " + A.shape_str() + " as " + probe.shape_str());
        }
        Tensor<Real> out;
        out.shape = std::move(shape);
        out.data = A.data;
        std::vector<int> orig = A.shape;
        return push_op(std::move(out), "reshape", {a}, [a, orig](Graph& g) {
            if (!g.requires_grad(a)) return;
            const Tensor<Real>& go = g.grad(g.last_);
            Tensor<Real>& ga = g.grad_buf(a);
            for (std::int64_t i = 0; i < go.size(); ++i) ga[i] += go[i];
        });
    }

    // ---- backward --------------------------------------------------------

    void backward(Id root) {
        if (value(root).size() != 1)
            throw ShapeError("backward: root must be scalar, got " + value(root).shape_str());
        grad_buf(root)[0] = Real(1);
        for (Id i = root; i >= 0; --i) {
            Node& n = nodes_[i];
            last_ = i;
            if (n.backward && !n.grad.empty()) n.backward(*this);
        }
    }

private:
    struct Node {
        Tensor<Real> value;
        Tensor<Real> grad;
        bool requires_grad = false;
        const char* op = "leaf";
        std::function<void(Graph&)> backward;
    };

    enum class BinKind { Add, Mul };

    static Real stable_sigmoid(Real x) {
        if (x >= Real(0)) return Real(1) / (Real(1) + std::exp(-x));
        const Real e = std::exp(x);
        return e / (Real(1) + e);
    }

    Id push(Tensor<Real> v, const char* op, bool rg, std::function<void(Graph&)> bwd) {
        check_finite(v, op);
        nodes_.push_back(Node{std::move(v), {}, rg, op, std::move(bwd)});
        return static_cast<Id>(nodes_.size() - 1);
    }

    static void check_finite(const Tensor<Real>& v, const char* op) {
        if (!v.all_finite())
            throw NumericError(std::string("non-finite value produced by op '") + op + "'");
    }

    template <class Fwd, class Bwd>
    Id unary(Id a, const char* op, Fwd fwd, Bwd dfd) {
        Tensor<Real> out = value(a);
        for (auto& v : out.data) v = fwd(v);
        return push_op(std::move(out), op, {a}, [a, dfd](Graph& g) {
            if (!g.requires_grad(a)) return;
            const Tensor<Real>& go = g.grad(g.last_);
            const Tensor<Real>& x = g.value(a);
            const Tensor<Real>& y = g.value(g.last_);
            Tensor<Real>& ga = g.grad_buf(a);
            for (std::int64_t i = 0; i < go.size(); ++i) ga[i] += dfd(x[i], y[i]) * go[i];
        });
    }

    Id broadcast_binary(Id a, Id b, const char* opname, BinKind kind) {
        const Tensor<Real>& A = value(a);
        const Tensor<Real>& B = value(b);
        const bool bcast = B.rank() == 1 && A.rank() == 2 && B.shape[0] == A.shape[1];
        if (!bcast && !A.same_shape(B))
            throw ShapeError(std::string(opname) + ": shape mismatch " + A.shape_str() + " vs " +
                             B.shape_str() + " (only same-shape or row-vector broadcast)");
        Tensor<Real> out = A;
        const int C = A.cols();
        if (bcast) {
            for (std::int64_t i = 0; i < out.size(); ++i) {
                const Real bv = B[i % C];
                out[i] = kind == BinKind::Add ? out[i] + bv : out[i] * bv;
            }
        } else {
            for (std::int64_t i = 0; i < out.size(); ++i)
                out[i] = kind == BinKind::Add ? out[i] + B[i] : out[i] * B[i];
        }
        return push_op(std::move(out), opname, {a, b}, [a, b, bcast, C, kind](Graph& g) {
            const Tensor<Real>& go = g.grad(g.last_);
            if (g.requires_grad(a)) {
                const Tensor<Real>& B2 = g.value(b);
                Tensor<Real>& ga = g.grad_buf(a);
                for (std::int64_t i = 0; i < go.size(); ++i) {
                    const Real w = kind == BinKind::Add ? Real(1) : (bcast ? B2[i % C] : B2[i]);
                    ga[i] += w * go[i];
                }
            }
            if (g.requires_grad(b)) {
                const Tensor<Real>& A2 = g.value(a);
                Tensor<Real>& gb = g.grad_buf(b);
                if (bcast) {
                    // Column reduction in ascending row order.
                    const std::int64_t rows = go.size() / C;
                    for (std::int64_t r = 0; r < rows; ++r)
                        for (int c = 0; c < C; ++c) {
                            const Real w = kind == BinKind::Add ? Real(1) : A2[r * C + c];
                            gb[c] += w * go[r * C + c];
                        }
                } else {
                    for (std::int64_t i = 0; i < go.size(); ++i) {
                        const Real w = kind == BinKind::Add ? Real(1) : A2[i];
                        gb[i] += w * go[i];
                    }
                }
            }
        });
    }

    std::vector<Node> nodes_;
    Id last_ = -1;  // node whose backward is currently running
};

}  // namespace fieldforge
