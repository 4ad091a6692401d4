#pragma once
// Dense 3D volumes in the synthetic atlas frame and the geometric operations
// used by recombination: hemisphere split, sagittal mirror, sagittal concat,
// channel stacking and ICA/MCA box cropping.
//
// Memory order is x fastest, then y, then z, then channel. x is the sagittal
// (left-right) axis; the whole-head mid-plane sits at x = 100.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lvoaug/errors.hpp"

namespace lvoaug {

struct Shape3 {
    int x = 0;
    int y = 0;
    int z = 0;

    constexpr std::size_t voxels() const {
        return static_cast<std::size_t>(x) * static_cast<std::size_t>(y) *
               static_cast<std::size_t>(z);
    }
    constexpr bool operator==(const Shape3&) const = default;
};

enum class Frame { whole_head, hemisphere, ica_box, mca_box };

enum class Region { ica, mca };
enum class Side { left, right };

std::string_view to_string(Frame f);
Frame frame_from_string(std::string_view s);
std::string_view to_string(Region r);
std::string_view to_string(Side s);

// Fixed grid of each frame, 1 mm isotropic.
constexpr Shape3 frame_shape(Frame f) {
    switch (f) {
        case Frame::whole_head: return {200, 205, 90};
        case Frame::hemisphere: return {100, 205, 90};
        case Frame::ica_box: return {55, 121, 57};
        case Frame::mca_box: return {60, 77, 76};
    }
    return {};
}

constexpr int kMidPlaneX = 100;

std::string describe(const Shape3& s);

// Dense voxel grid with one value per voxel per channel. Shape is determined
// by the frame tag. Instantiated with std::uint8_t for binary occupancy.
template <typename T>
class Volume {
public:
    using value_type = T;

    Volume() : Volume(Frame::hemisphere) {}

    explicit Volume(Frame frame, int channels = 1)
        : frame_(frame), channels_(channels) {
        if (channels < 1) throw FrameError("volume needs at least one channel");
        data_.assign(frame_shape(frame).voxels() * static_cast<std::size_t>(channels), T{0});
    }

    Volume(Frame frame, int channels, std::vector<T> data)
        : frame_(frame), channels_(channels), data_(std::move(data)) {
        if (channels < 1) throw FrameError("volume needs at least one channel");
        if (data_.size() != frame_shape(frame).voxels() * static_cast<std::size_t>(channels)) {
            throw FrameError("data length does not match frame " +
                             std::string(to_string(frame)) + " x " +
                             std::to_string(channels) + " channels");
        }
        for (T v : data_) {
            if (v != T{0} && v != T{1}) throw FrameError("volume values must be 0 or 1");
        }
    }

    Frame frame() const { return frame_; }
    Shape3 shape() const { return frame_shape(frame_); }
    int channels() const { return channels_; }
    Eigen::Vector3d spacing_mm() const { return Eigen::Vector3d::Ones(); }

    std::size_t index(int x, int y, int z, int c = 0) const {
        const Shape3 s = shape();
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(s.x) *
                   (static_cast<std::size_t>(y) +
                    static_cast<std::size_t>(s.y) *
                        (static_cast<std::size_t>(z) + static_cast<std::size_t>(s.z) * c));
    }

    bool contains(int x, int y, int z) const {
        const Shape3 s = shape();
        return x >= 0 && y >= 0 && z >= 0 && x < s.x && y < s.y && z < s.z;
    }

    T at(int x, int y, int z, int c = 0) const { return data_[index(x, y, z, c)]; }
    void set(int x, int y, int z, T v, int c = 0) { data_[index(x, y, z, c)] = v; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    std::size_t foreground() const {
        return static_cast<std::size_t>(
            std::count_if(data_.begin(), data_.end(), [](T v) { return v != T{0}; }));
    }

    bool operator==(const Volume&) const = default;

private:
    Frame frame_;
    int channels_;
    std::vector<T> data_;
};

using BinaryVolume = Volume<std::uint8_t>;

// Axis-aligned ICA or MCA box in whole-head voxel coordinates.
struct RegionBox {
    Region region = Region::ica;
    Side side = Side::right;
    std::array<int, 3> origin{};
    std::array<int, 3> extent{};

    Frame frame() const { return region == Region::ica ? Frame::ica_box : Frame::mca_box; }
    bool contains(int x, int y, int z) const {
        return x >= origin[0] && x < origin[0] + extent[0] && y >= origin[1] &&
               y < origin[1] + extent[1] && z >= origin[2] && z < origin[2] + extent[2];
    }
    bool operator==(const RegionBox&) const = default;
};

// Box placement of the synthetic atlas. Left boxes are mirror images of the
// right ones across the mid-sagittal plane.
RegionBox atlas_box(Region region, Side side);

// Mirror image of a box across the whole-head mid-plane (side flipped).
RegionBox mirror_box(const RegionBox& box);

// Throws FrameError unless the box lies inside the whole-head grid and has the
// extent of its frame.
void validate_box(const RegionBox& box);

template <typename T>
Volume<T> mirror_sagittal(const Volume<T>& v) {
    Volume<T> out(v.frame(), v.channels());
    const Shape3 s = v.shape();
    const auto& src = v.data();
    auto& dst = out.data();
    const std::size_t rows = s.voxels() / static_cast<std::size_t>(s.x) * v.channels();
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t base = r * static_cast<std::size_t>(s.x);
        std::reverse_copy(src.begin() + static_cast<std::ptrdiff_t>(base),
                          src.begin() + static_cast<std::ptrdiff_t>(base + s.x),
                          dst.begin() + static_cast<std::ptrdiff_t>(base));
    }
    return out;
}

// Copies x-rows [x0, x0 + out.shape().x) of channel 0 of src into channel 0 of
// dst starting at dst column dx. Both must share y/z extents.
template <typename T>
void copy_x_slab(const Volume<T>& src, int x0, Volume<T>& dst, int dx, int width) {
    const Shape3 ss = src.shape();
    for (int z = 0; z < ss.z; ++z) {
        for (int y = 0; y < ss.y; ++y) {
            const auto from = src.data().begin() + static_cast<std::ptrdiff_t>(src.index(x0, y, z));
            std::copy(from, from + width,
                      dst.data().begin() + static_cast<std::ptrdiff_t>(dst.index(dx, y, z)));
        }
    }
}

template <typename T>
std::pair<Volume<T>, Volume<T>> split_hemispheres(const Volume<T>& v) {
    if (v.frame() != Frame::whole_head) throw FrameError("split_hemispheres expects a whole_head volume");
    if (v.channels() != 1) throw FrameError("split_hemispheres expects a single channel");
    Volume<T> left(Frame::hemisphere), right(Frame::hemisphere);
    copy_x_slab(v, 0, left, 0, kMidPlaneX);
    copy_x_slab(v, kMidPlaneX, right, 0, kMidPlaneX);
    return {std::move(left), std::move(right)};
}

// `left` must already be in left-handed orientation (un-mirror stored trees first).
template <typename T>
Volume<T> concat_sagittal(const Volume<T>& left, const Volume<T>& right) {
    if (left.frame() != Frame::hemisphere || right.frame() != Frame::hemisphere)
        throw FrameError("concat_sagittal expects two hemisphere volumes");
    if (left.channels() != 1 || right.channels() != 1)
        throw FrameError("concat_sagittal expects single-channel hemispheres");
    Volume<T> out(Frame::whole_head);
    copy_x_slab(left, 0, out, 0, kMidPlaneX);
    copy_x_slab(right, 0, out, kMidPlaneX, kMidPlaneX);
    return out;
}

template <typename T>
Volume<T> stack_channels(const Volume<T>& a, const Volume<T>& b) {
    if (a.frame() != b.frame()) throw FrameError("stack_channels: frame mismatch");
    if (a.channels() != 1 || b.channels() != 1)
        throw FrameError("stack_channels expects single-channel inputs");
    std::vector<T> data;
    data.reserve(a.data().size() * 2);
    data.insert(data.end(), a.data().begin(), a.data().end());
    data.insert(data.end(), b.data().begin(), b.data().end());
    return Volume<T>(a.frame(), 2, std::move(data));
}

template <typename T>
Volume<T> extract_channel(const Volume<T>& v, int c) {
    if (c < 0 || c >= v.channels()) throw FrameError("channel index out of range");
    const std::size_t n = v.shape().voxels();
    const auto first = v.data().begin() + static_cast<std::ptrdiff_t>(n * c);
    return Volume<T>(v.frame(), 1, std::vector<T>(first, first + static_cast<std::ptrdiff_t>(n)));
}

// Channel order reversed; for a two-channel left/right stack this is the mirror
// in stored orientation.
template <typename T>
Volume<T> swap_channels(const Volume<T>& v) {
    if (v.channels() != 2) throw FrameError("swap_channels expects two channels");
    return stack_channels(extract_channel(v, 1), extract_channel(v, 0));
}

// Left-side crops are mirrored so every crop shares the right-side orientation.
template <typename T>
Volume<T> crop_region(const Volume<T>& v, const RegionBox& box) {
    if (v.frame() != Frame::whole_head || v.channels() != 1)
        throw FrameError("crop_region expects a single-channel whole_head volume");
    validate_box(box);
    Volume<T> out(box.frame());
    const Shape3 s = out.shape();
    for (int z = 0; z < s.z; ++z) {
        for (int y = 0; y < s.y; ++y) {
            const auto from = v.data().begin() +
                              static_cast<std::ptrdiff_t>(v.index(box.origin[0], box.origin[1] + y,
                                                                   box.origin[2] + z));
            std::copy(from, from + s.x,
                      out.data().begin() + static_cast<std::ptrdiff_t>(out.index(0, y, z)));
        }
    }
    if (box.side == Side::left) return mirror_sagittal(out);
    return out;
}

}  // namespace lvoaug
