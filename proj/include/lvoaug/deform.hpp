#pragma once
// Random elastic deformation of binary volumes. A coarse grid of anchors per
// axis carries random displacements (border anchors pinned to zero); the dense
// field is their trilinear interpolation and volumes are resampled backwards
// with nearest-neighbour lookup.

#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "lvoaug/cohort.hpp"
#include "lvoaug/volume.hpp"

namespace lvoaug {

struct DeformSpec {
    int anchors_per_axis = 6;
    double max_displacement_vox = 20.0;
    int repetitions = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

class DisplacementField {
public:
    // Zero field.
    DisplacementField(Shape3 shape, int anchors_per_axis);

    Shape3 shape() const { return shape_; }
    int anchors() const { return anchors_; }

    // Anchor (i, j, k) displacement in voxels, components (x, y, z).
    Eigen::Vector3d& anchor(int i, int j, int k) { return coarse_[anchor_index(i, j, k)]; }
    const Eigen::Vector3d& anchor(int i, int j, int k) const { return coarse_[anchor_index(i, j, k)]; }
    // Voxel coordinate of anchor a along an axis of length `len`.
    static double anchor_position(int a, int anchors, int len);

    // Upper bound on |component| used to clamp interpolation round-off.
    double bound() const { return bound_; }
    void set_bound(double b) { bound_ = b; }

    Eigen::Vector3d at(int x, int y, int z) const;
    // Per-voxel displacements, x fastest; column v is voxel v.
    Eigen::Matrix3Xf dense() const;

    std::size_t anchor_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i + anchors_ * (j + anchors_ * k));
    }

private:
    Shape3 shape_;
    int anchors_;
    double bound_ = std::numeric_limits<double>::infinity();
    std::vector<Eigen::Vector3d> coarse_;
};

// Interior anchors uniform in [-d, d] per component, border anchors zero.
DisplacementField sample_field(const DeformSpec& spec, Shape3 shape, std::uint64_t seed);
inline DisplacementField sample_field(const DeformSpec& spec, Shape3 shape) {
    return sample_field(spec, shape, spec.seed);
}

// out(p) = in(round(p + d(p))), background outside the grid. Every channel
// uses the same field.
BinaryVolume warp(const BinaryVolume& v, const DisplacementField& field);

// Seed of repetition `rep` of volume `index`.
std::uint64_t repetition_seed(const DeformSpec& spec, std::uint64_t index, int rep);

// spec.repetitions warped copies of every volume, volume-major.
std::vector<BinaryVolume> augment_volumes(const std::vector<BinaryVolume>& volumes, const DeformSpec& spec);

// File-level augmentation: writes repetitions deformed copies of each
// patient's whole-head volume under out_dir and returns their manifest.
CohortManifest augment_dataset(const CohortManifest& cohort, const DeformSpec& spec,
                               const std::filesystem::path& out_dir);

// Raw little-endian float32 (dx, dy, dz) triples, x fastest.
void write_field_raw(const std::filesystem::path& path, const DisplacementField& field);

}  // namespace lvoaug
