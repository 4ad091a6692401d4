#pragma once
// Procedural vessel-tree phantoms on the whole-head atlas grid.
//
// Every patient gets a mirror-symmetric pair of ICA and MCA trees (cubic
// Bezier centerlines rasterized as tubes), perturbed per patient and per side.
// An LVO removes the part of the affected region's tree distal to a cut on its
// trunk; region trees are clipped to their atlas box so lesions never touch
// voxels outside it.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "lvoaug/cohort.hpp"
#include "lvoaug/volume.hpp"

namespace lvoaug {

struct RegionMix {
    double ica_only = 0.11;
    double mca_only = 0.64;
    double both = 0.25;
};

struct PhantomSpec {
    int patients = 60;
    double lvo_fraction = 2.0 / 3.0;
    RegionMix region_mix;
    double asymmetry_jitter = 0.1;
    std::uint64_t seed = 1;

    void validate() const;
};

struct Lesion {
    bool ica = false;
    bool mca = false;
    Side side = Side::right;
    double cut_fraction = 0.5;  // position of the cut along the trunk arc length

    PatientLabels labels() const;
};

struct PhantomPatient {
    std::string id;
    BinaryVolume whole_head{Frame::whole_head};
    PatientLabels labels;
    std::optional<Lesion> lesion;
};

// Lesion assignment for the whole cohort: round(lvo_fraction * P) positives.
std::vector<std::optional<Lesion>> assign_lesions(const PhantomSpec& spec);

// Patient `index` of the cohort. With apply_lesion = false the same anatomy is
// rendered without its lesion (the unlesioned twin).
PhantomPatient generate_patient(const PhantomSpec& spec, int index, bool apply_lesion = true);

std::vector<PhantomPatient> generate_cohort(const PhantomSpec& spec);

// Writes volumes/<id>.vmv and manifest.json under dir.
CohortManifest write_cohort(const std::filesystem::path& dir, const PhantomSpec& spec);

}  // namespace lvoaug
