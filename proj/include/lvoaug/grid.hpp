#pragma once
// Channel-major grids used as network activations: a (channels x voxels)
// Eigen matrix with voxels in x-fastest order, so each voxel's channels are
// contiguous.

#include <cmath>

#include <Eigen/Core>

#include "lvoaug/volume.hpp"

namespace lvoaug {

template <typename Scalar>
struct Grid {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Shape3 shape;
    Matrix data;  // channels x voxels

    Grid() = default;
    Grid(Shape3 s, int channels) : shape(s), data(Matrix::Zero(channels, static_cast<Eigen::Index>(s.voxels()))) {}

    int channels() const { return static_cast<int>(data.rows()); }
    Eigen::Index voxels() const { return data.cols(); }
    Eigen::Index index(int x, int y, int z) const {
        return x + static_cast<Eigen::Index>(shape.x) * (y + static_cast<Eigen::Index>(shape.y) * z);
    }

    template <typename Other>
    Grid<Other> cast() const {
        Grid<Other> g;
        g.shape = shape;
        g.data = data.template cast<Other>();
        return g;
    }
    bool operator==(const Grid& o) const { return shape == o.shape && data == o.data; }
};

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

inline Shape3 pooled_shape(Shape3 s, int f) { return {ceil_div(s.x, f), ceil_div(s.y, f), ceil_div(s.z, f)}; }

// Max-pooling of a binary volume by an integer factor (trailing partial
// windows included).
template <typename Scalar>
Grid<Scalar> downsample_max(const BinaryVolume& v, int factor) {
    if (factor < 1) throw FrameError("downsample factor must be >= 1");
    const Shape3 s = v.shape();
    Grid<Scalar> g(pooled_shape(s, factor), v.channels());
    const std::size_t n = s.voxels();
    for (int c = 0; c < v.channels(); ++c) {
        const std::uint8_t* src = v.data().data() + n * static_cast<std::size_t>(c);
        for (int z = 0; z < s.z; ++z)
            for (int y = 0; y < s.y; ++y)
                for (int x = 0; x < s.x; ++x) {
                    if (!src[v.index(x, y, z)]) continue;
                    g.data(c, g.index(x / factor, y / factor, z / factor)) = Scalar(1);
                }
    }
    return g;
}

template <typename Scalar>
Grid<Scalar> mirror_x(const Grid<Scalar>& g) {
    Grid<Scalar> out(g.shape, g.channels());
    for (int z = 0; z < g.shape.z; ++z)
        for (int y = 0; y < g.shape.y; ++y)
            for (int x = 0; x < g.shape.x; ++x)
                out.data.col(out.index(g.shape.x - 1 - x, y, z)) = g.data.col(g.index(x, y, z));
    return out;
}

// Sagittal concatenation: a occupies the low x range, b the high one.
template <typename Scalar>
Grid<Scalar> concat_x(const Grid<Scalar>& a, const Grid<Scalar>& b) {
    if (a.shape.y != b.shape.y || a.shape.z != b.shape.z || a.channels() != b.channels())
        throw FrameError("concat_x: incompatible grids");
    Grid<Scalar> out({a.shape.x + b.shape.x, a.shape.y, a.shape.z}, a.channels());
    for (int z = 0; z < a.shape.z; ++z)
        for (int y = 0; y < a.shape.y; ++y) {
            out.data.middleCols(out.index(0, y, z), a.shape.x) = a.data.middleCols(a.index(0, y, z), a.shape.x);
            out.data.middleCols(out.index(a.shape.x, y, z), b.shape.x) = b.data.middleCols(b.index(0, y, z), b.shape.x);
        }
    return out;
}

template <typename Scalar>
Grid<Scalar> stack_grids(const Grid<Scalar>& a, const Grid<Scalar>& b) {
    if (!(a.shape == b.shape)) throw FrameError("stack_grids: shape mismatch");
    Grid<Scalar> out(a.shape, a.channels() + b.channels());
    out.data.topRows(a.channels()) = a.data;
    out.data.bottomRows(b.channels()) = b.data;
    return out;
}

}  // namespace lvoaug
