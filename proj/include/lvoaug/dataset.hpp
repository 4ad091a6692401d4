#pragma once
// In-memory training pool: every patient's hemispheres and ICA/MCA crops in
// stored (right-side) orientation, optionally with elastically deformed
// copies, max-pooled to the network resolution.

#include <cstdint>
#include <vector>

#include "lvoaug/cohort.hpp"
#include "lvoaug/deform.hpp"
#include "lvoaug/grid.hpp"
#include "lvoaug/network.hpp"
#include "lvoaug/recombine.hpp"

namespace lvoaug {

struct PoolOptions {
    int downsample = 4;
    bool hemispheres = true;   // needed by whole_head and h_stack
    bool subvolumes = false;   // needed by im_stack
    bool deform = false;
    // Draw a fresh field per sample instead of using stored copies.
    bool online_deform = false;
    DeformSpec hemisphere_deform{6, 20.0, 10, 0};
    DeformSpec subvolume_deform{4, 20.0, 10, 0};
};

class TrainingPool {
public:
    using Stored = Grid<std::uint8_t>;

    TrainingPool() = default;
    // Builds the pool from whole-head volumes (one per patient).
    TrainingPool(const std::vector<BinaryVolume>& whole_heads, std::vector<PatientLabels> labels,
                 const PoolOptions& opts);

    std::size_t patients() const { return labels_.size(); }
    const std::vector<PatientLabels>& labels() const { return labels_; }
    const PoolOptions& options() const { return opts_; }
    // Number of stored versions per member: 1 + repetitions when deformed.
    int versions(Region r) const;
    int hemisphere_versions() const;

    // Network input for a plan entry. `version` picks the deformed copy of each
    // of the four members (0 = original); for hemisphere variants only the
    // first two are used.
    ModelInput<float> input(const PlanEntry& e, Variant variant, const std::array<int, 4>& version = {0, 0, 0, 0},
                            bool mirror = false) const;

    // Online variant: each member is warped with a field seeded by field_seed.
    ModelInput<float> input_online(const PlanEntry& e, Variant variant, const std::array<std::uint64_t, 4>& field_seed,
                                   bool mirror = false) const;

    const Stored& hemisphere(int patient, Side side, int version = 0) const;
    const Stored& subvolume(Region r, int patient, Side side, int version = 0) const;

private:
    PoolOptions opts_;
    std::vector<PatientLabels> labels_;
    // [patient][side][version]
    std::vector<std::array<std::vector<Stored>, 2>> hemi_, ica_, mca_;
    // Full-resolution members, kept only for online deformation.
    std::vector<std::array<BinaryVolume, 2>> hemi_full_, ica_full_, mca_full_;

    Grid<float> member(int kind, const MemberRef& m, int version) const;
    Grid<float> member_online(int kind, const MemberRef& m, std::uint64_t seed) const;
    template <typename Get>
    ModelInput<float> assemble(const PlanEntry& e, Variant variant, bool mirror, Get&& get) const;
};

}  // namespace lvoaug
