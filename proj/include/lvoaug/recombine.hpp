#pragma once
// Artificial patients from recombined hemisphere trees (s_ij) or ICA/MCA
// subvolumes (s_ijkl), and per-epoch plans with balanced classes in which
// every hemisphere (or every ICA and every MCA subvolume) appears once.

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "lvoaug/cohort.hpp"
#include "lvoaug/labels.hpp"
#include "lvoaug/volume.hpp"

namespace lvoaug {

enum class Variant { whole_head, h_stack, im_stack };
std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view s);

struct MemberRef {
    int patient = 0;
    Side side = Side::left;
    auto operator<=>(const MemberRef&) const = default;
};

// Slot assignment of one artificial patient. For hemisphere stacks the MCA
// refs equal the ICA refs (both subvolumes come from the same hemisphere).
struct PlanEntry {
    MemberRef ica_left;
    MemberRef ica_right;
    MemberRef mca_left;
    MemberRef mca_right;

    bool hemispheric() const { return ica_left == mca_left && ica_right == mca_right; }
    bool operator==(const PlanEntry&) const = default;
};

struct EpochPlan {
    Scheme scheme = Scheme::hemi;
    std::vector<PlanEntry> samples;
    std::array<int, 3> class_histogram{};  // global (no LVO, left, right)
    std::uint64_t seed = 0;
};

// Composed labels of an entry. Throws ExclusionError if inadmissible.
SampleLabels entry_labels(const PlanEntry& e, std::span<const PatientLabels> cohort);

// Recombined epoch. Throws PlanningError when positive hemispheres (or
// positive ICA / MCA subvolumes) outnumber negative ones.
EpochPlan plan_epoch(std::span<const PatientLabels> cohort, Scheme scheme, std::uint64_t seed);

// One entry per patient with its own hemispheres in their original slots.
EpochPlan original_plan(std::span<const PatientLabels> cohort);

// Stored form of one patient: hemispheres and ICA/MCA crops, all in
// right-side orientation (left ones mirrored at ingest). Indexed by Side.
struct PatientVolumes {
    std::array<BinaryVolume, 2> hemisphere;
    std::array<BinaryVolume, 2> ica;
    std::array<BinaryVolume, 2> mca;
};

PatientVolumes ingest(const BinaryVolume& whole_head);

struct SampleStack {
    Scheme scheme = Scheme::hemi;
    Variant variant = Variant::h_stack;
    PlanEntry members;
    // whole_head: one 1-channel whole-head volume; h_stack: one 2-channel
    // hemisphere volume; im_stack: 2-channel ICA then 2-channel MCA volume.
    std::vector<BinaryVolume> volumes;
    SampleLabels labels;
    std::uint64_t provenance_seed = 0;
};

SampleStack realize_sample(const PlanEntry& entry, std::span<const PatientVolumes> volumes,
                           std::span<const PatientLabels> labels, Variant variant,
                           std::uint64_t provenance_seed = 0);

// Sagittal flip: whole-head volumes mirrored, stacked variants channel-swapped;
// left/right label components swapped.
SampleStack mirror_sample(const SampleStack& s);

}  // namespace lvoaug
