#pragma once
// Cohort manifest: patient ids, per-region labels and volume paths.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lvoaug/labels.hpp"
#include "lvoaug/volume.hpp"

namespace lvoaug {

struct PatientLabels {
    bool ica_left = false;
    bool ica_right = false;
    bool mca_left = false;
    bool mca_right = false;

    HemisphereLabels hemisphere(Side s) const {
        return s == Side::left ? HemisphereLabels{ica_left, mca_left}
                               : HemisphereLabels{ica_right, mca_right};
    }
    bool positive() const { return ica_left || ica_right || mca_left || mca_right; }
    // Labels of the unrecombined patient; throws ExclusionError if bilateral.
    SampleLabels sample_labels() const {
        return compose_subvolume_labels(ica_left, ica_right, mca_left, mca_right);
    }
    bool operator==(const PatientLabels&) const = default;
};

struct PatientRecord {
    std::string id;
    PatientLabels labels;
    std::string volume;  // VMV1 header path, relative to the manifest directory
};

struct CohortManifest {
    std::vector<PatientRecord> patients;
    std::uint64_t seed = 0;
    std::filesystem::path base_dir;  // not serialized; set on load

    std::filesystem::path volume_path(std::size_t i) const;
};

void save_manifest(const std::filesystem::path& path, const CohortManifest& m);
CohortManifest load_manifest(const std::filesystem::path& path);

// P, r (fraction of patients with any positive region), N = 2P.
CohortStats cohort_stats(const CohortManifest& m);
CohortStats cohort_stats(const std::vector<PatientLabels>& labels);

}  // namespace lvoaug
