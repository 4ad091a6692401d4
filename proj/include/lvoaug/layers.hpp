#pragma once
// Layers of the small 3D classifier with hand-written backward passes.
// Everything is templated on the scalar type so the same code runs in float
// for training and in double for gradient checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "lvoaug/grid.hpp"

namespace lvoaug {

template <typename S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// Named view of a parameter and its gradient accumulator.
template <typename S>
struct Param {
    std::string name;
    MatrixX<S>* value;
    MatrixX<S>* grad;
};

// 3x3x3 convolution, stride 1, zero padding 1, via im2col and a GEMM.
// Weight columns are ordered (kernel offset, input channel).
template <typename S>
class Conv3d {
public:
    static constexpr int kTaps = 27;

    struct Cache {
        Shape3 shape;
        MatrixX<S> cols;  // voxels x (27 * in), one shifted input channel per column
    };

    Conv3d() = default;
    Conv3d(int in, int out)
        : weight(MatrixX<S>::Zero(out, kTaps * in)), bias(MatrixX<S>::Zero(out, 1)),
          grad_weight(MatrixX<S>::Zero(out, kTaps * in)), grad_bias(MatrixX<S>::Zero(out, 1)), in_(in), out_(out) {}

    int in_channels() const { return in_; }
    int out_channels() const { return out_; }
    int fan_in() const { return kTaps * in_; }

    Grid<S> forward(const Grid<S>& in, Cache& cache) const {
        if (in.channels() != in_) throw FrameError("conv input channel mismatch");
        cache.shape = in.shape;
        im2col(in, cache.cols);
        Grid<S> out;
        out.shape = in.shape;
        out.data.noalias() = weight * cache.cols.transpose();
        out.data.colwise() += bias.col(0);
        return out;
    }

    // Accumulates parameter gradients; returns the input gradient when asked.
    Grid<S> backward(const Cache& cache, const Grid<S>& grad_out, bool need_input_grad) {
        grad_weight.noalias() += grad_out.data * cache.cols;
        grad_bias += grad_out.data.rowwise().sum();
        Grid<S> grad_in;
        if (!need_input_grad) return grad_in;
        const MatrixX<S> dcols = grad_out.data.transpose() * weight;
        grad_in = Grid<S>(cache.shape, in_);
        col2im(dcols, grad_in);
        return grad_in;
    }

    MatrixX<S> weight, bias, grad_weight, grad_bias;

private:
    // Calls f(tap, first voxel, first neighbour, run length) for every run of
    // in-bounds voxels along x.
    template <typename F>
    static void for_each_run(const Shape3& s, F&& f) {
        const Eigen::Index sx = s.x, sxy = static_cast<Eigen::Index>(s.x) * s.y;
        int k = 0;
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx, ++k) {
                    const int x0 = std::max(0, -dx), x1 = std::min(s.x, s.x - dx);
                    if (x1 <= x0) continue;
                    for (int z = std::max(0, -dz); z < std::min(s.z, s.z - dz); ++z)
                        for (int y = std::max(0, -dy); y < std::min(s.y, s.y - dy); ++y) {
                            const Eigen::Index v = x0 + sx * y + sxy * z;
                            f(k, v, v + dx + sx * dy + sxy * dz, x1 - x0);
                        }
                }
    }

    void im2col(const Grid<S>& in, MatrixX<S>& cols) const {
        const Eigen::Index n = in.voxels();
        cols.setZero(n, static_cast<Eigen::Index>(kTaps) * in_);
        const S* src = in.data.data();
        for_each_run(in.shape, [&](int k, Eigen::Index v, Eigen::Index nb, int len) {
            for (int c = 0; c < in_; ++c) {
                S* dst = cols.data() + (static_cast<Eigen::Index>(k) * in_ + c) * n + v;
                const S* from = src + nb * in_ + c;
                for (int i = 0; i < len; ++i) dst[i] = from[static_cast<Eigen::Index>(i) * in_];
            }
        });
    }

    void col2im(const MatrixX<S>& dcols, Grid<S>& grad_in) const {
        const Eigen::Index n = grad_in.voxels();
        S* dst = grad_in.data.data();
        for_each_run(grad_in.shape, [&](int k, Eigen::Index v, Eigen::Index nb, int len) {
            for (int c = 0; c < in_; ++c) {
                const S* from = dcols.data() + (static_cast<Eigen::Index>(k) * in_ + c) * n + v;
                S* to = dst + nb * in_ + c;
                for (int i = 0; i < len; ++i) to[static_cast<Eigen::Index>(i) * in_] += from[i];
            }
        });
    }

    int in_ = 0;
    int out_ = 0;
};

template <typename S>
struct Relu {
    // In place; the cached output doubles as the mask.
    static void forward(Grid<S>& g) { g.data = g.data.cwiseMax(S(0)); }
    static void backward(const Grid<S>& out, Grid<S>& grad) {
        grad.data = (out.data.array() > S(0)).select(grad.data, S(0));
    }
};

// Max pooling by an integer factor with partial trailing windows.
template <typename S>
class MaxPool3d {
public:
    struct Cache {
        Shape3 in_shape;
        Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> argmax;  // channels x out voxels
    };

    explicit MaxPool3d(int factor = 2) : factor_(factor) {}
    int factor() const { return factor_; }

    Grid<S> forward(const Grid<S>& in, Cache& cache) const {
        const int f = factor_;
        const Shape3 os = pooled_shape(in.shape, f);
        Grid<S> out(os, in.channels());
        out.data.setConstant(-std::numeric_limits<S>::infinity());
        cache.in_shape = in.shape;
        cache.argmax.setConstant(in.channels(), out.voxels(), -1);
        const int C = in.channels();
        Eigen::Index v = 0;
        for (int z = 0; z < in.shape.z; ++z)
            for (int y = 0; y < in.shape.y; ++y) {
                const Eigen::Index orow = out.index(0, y / f, z / f);
                for (int x = 0; x < in.shape.x; ++x, ++v) {
                    const Eigen::Index o = orow + x / f;
                    for (int c = 0; c < C; ++c) {
                        const S val = in.data(c, v);
                        if (val > out.data(c, o)) {
                            out.data(c, o) = val;
                            cache.argmax(c, o) = v;
                        }
                    }
                }
            }
        return out;
    }

    Grid<S> backward(const Cache& cache, const Grid<S>& grad_out) const {
        Grid<S> grad_in(cache.in_shape, grad_out.channels());
        for (Eigen::Index o = 0; o < grad_out.voxels(); ++o)
            for (int c = 0; c < grad_out.channels(); ++c) grad_in.data(c, cache.argmax(c, o)) += grad_out.data(c, o);
        return grad_in;
    }

private:
    int factor_;
};

template <typename S>
struct GlobalMaxPool {
    struct Cache {
        Shape3 in_shape;
        Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 1> argmax;
    };

    static Eigen::Matrix<S, Eigen::Dynamic, 1> forward(const Grid<S>& in, Cache& cache) {
        cache.in_shape = in.shape;
        cache.argmax.resize(in.channels());
        Eigen::Matrix<S, Eigen::Dynamic, 1> out(in.channels());
        for (int c = 0; c < in.channels(); ++c) out(c) = in.data.row(c).maxCoeff(&cache.argmax(c));
        return out;
    }

    static Grid<S> backward(const Cache& cache, const Eigen::Matrix<S, Eigen::Dynamic, 1>& grad) {
        Grid<S> g(cache.in_shape, static_cast<int>(grad.size()));
        for (Eigen::Index c = 0; c < grad.size(); ++c) g.data(c, cache.argmax(c)) = grad(c);
        return g;
    }
};

// Fully connected layer on a (features x batch) matrix.
template <typename S>
struct Dense {
    Dense() = default;
    Dense(int in, int out)
        : weight(MatrixX<S>::Zero(out, in)), bias(MatrixX<S>::Zero(out, 1)), grad_weight(MatrixX<S>::Zero(out, in)),
          grad_bias(MatrixX<S>::Zero(out, 1)) {}

    MatrixX<S> forward(const MatrixX<S>& x) const {
        MatrixX<S> y = weight * x;
        y.colwise() += bias.col(0);
        return y;
    }
    MatrixX<S> backward(const MatrixX<S>& x, const MatrixX<S>& dy) {
        grad_weight.noalias() += dy * x.transpose();
        grad_bias += dy.rowwise().sum();
        return weight.transpose() * dy;
    }

    MatrixX<S> weight, bias, grad_weight, grad_bias;
};

// Per-feature batch normalization. Training mode normalizes with batch
// statistics and updates running estimates; inference uses the running ones.
template <typename S>
struct BatchNorm {
    struct Cache {
        MatrixX<S> xhat;
        Eigen::Matrix<S, Eigen::Dynamic, 1> inv_std;
        bool training = false;
    };

    BatchNorm() = default;
    explicit BatchNorm(int n)
        : gamma(MatrixX<S>::Ones(n, 1)), beta(MatrixX<S>::Zero(n, 1)), grad_gamma(MatrixX<S>::Zero(n, 1)),
          grad_beta(MatrixX<S>::Zero(n, 1)), running_mean(MatrixX<S>::Zero(n, 1)), running_var(MatrixX<S>::Ones(n, 1)) {}

    MatrixX<S> forward(const MatrixX<S>& x, bool training, Cache& cache, bool update_running = true) {
        const Eigen::Index n = x.rows(), b = x.cols();
        cache.training = training;
        cache.inv_std.resize(n);
        cache.xhat.resize(n, b);
        for (Eigen::Index i = 0; i < n; ++i) {
            S mean, var;
            if (training) {
                mean = x.row(i).mean();
                var = (x.row(i).array() - mean).square().mean();
                if (update_running) {
                    const S unbiased = b > 1 ? var * S(b) / S(b - 1) : var;
                    running_mean(i) = (1 - momentum) * running_mean(i) + momentum * mean;
                    running_var(i) = (1 - momentum) * running_var(i) + momentum * unbiased;
                }
            } else {
                mean = running_mean(i);
                var = running_var(i);
            }
            cache.inv_std(i) = S(1) / std::sqrt(var + eps);
            cache.xhat.row(i) = (x.row(i).array() - mean) * cache.inv_std(i);
        }
        MatrixX<S> y = cache.xhat.array().colwise() * gamma.col(0).array();
        y.colwise() += beta.col(0);
        return y;
    }

    MatrixX<S> backward(const Cache& cache, const MatrixX<S>& dy) {
        const Eigen::Index n = dy.rows(), b = dy.cols();
        grad_gamma += (dy.array() * cache.xhat.array()).rowwise().sum().matrix();
        grad_beta += dy.rowwise().sum();
        MatrixX<S> dx(n, b);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto dxhat = (dy.row(i).array() * gamma(i)).eval();
            if (!cache.training) {
                dx.row(i) = dxhat * cache.inv_std(i);
                continue;
            }
            const S sum = dxhat.sum();
            const S dot = (dxhat * cache.xhat.row(i).array()).sum();
            dx.row(i) = (S(b) * dxhat - sum - cache.xhat.row(i).array() * dot) * (cache.inv_std(i) / S(b));
        }
        return dx;
    }

    S momentum = S(0.1);
    S eps = S(1e-5);
    MatrixX<S> gamma, beta, grad_gamma, grad_beta, running_mean, running_var;
};

}  // namespace lvoaug
