#pragma once
// Region labels, one-hot class triples and the recombination label algebra.
//
// Hemisphere stacks s_ij and ICA/MCA stacks s_ijkl are labelled by Boolean
// composition of the member labels; stacks that would be positive on both
// sides are excluded. The closed-form recombination counts come with a
// brute-force enumerator used as an oracle.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lvoaug {

// y in {0,1}: 1 if the region/hemisphere carries an LVO.
struct RegionLabel {
    bool value = false;

    constexpr RegionLabel() = default;
    constexpr RegionLabel(bool v) : value(v) {}  // NOLINT: implicit on purpose
    constexpr operator bool() const { return value; }
};

enum class LvoClass : int { none = 0, left = 1, right = 2 };

// One-hot over (no LVO, left LVO, right LVO).
struct ClassTriple {
    bool no_lvo = true;
    bool left = false;
    bool right = false;

    static constexpr ClassTriple of(LvoClass c) {
        return {c == LvoClass::none, c == LvoClass::left, c == LvoClass::right};
    }
    constexpr bool one_hot() const { return int(no_lvo) + int(left) + int(right) == 1; }
    LvoClass cls() const;
    constexpr ClassTriple side_swapped() const { return {no_lvo, right, left}; }
    constexpr std::array<double, 3> as_array() const {
        return {double(no_lvo), double(left), double(right)};
    }
    constexpr bool operator==(const ClassTriple&) const = default;
};

std::string to_string(const ClassTriple& t);

// Global, ICA and MCA triples of one sample, in head order.
struct SampleLabels {
    ClassTriple global;
    ClassTriple ica;
    ClassTriple mca;

    SampleLabels side_swapped() const {
        return {global.side_swapped(), ica.side_swapped(), mca.side_swapped()};
    }
    bool operator==(const SampleLabels&) const = default;
};

struct CohortStats {
    long long patients = 0;        // P
    double positive_ratio = 0.0;   // r in [0, 1]

    long long hemispheres() const { return 2 * patients; }  // N
};

bool is_admissible_hemi(RegionLabel left, RegionLabel right);
bool is_admissible_subvol(RegionLabel ica_left, RegionLabel ica_right, RegionLabel mca_left,
                          RegionLabel mca_right);

// [!(l | r), l, r]; throws ExclusionError for a pos-pos pair.
ClassTriple compose_hemi_labels(RegionLabel left, RegionLabel right);

// Global/ICA/MCA triples for s_ijkl; throws ExclusionError when both sides
// would be positive.
SampleLabels compose_subvolume_labels(RegionLabel ica_left, RegionLabel ica_right,
                                      RegionLabel mca_left, RegionLabel mca_right);

// 2r(2-r)P^2 + (2-r)^2 P^2
double count_hemi_recombinations(const CohortStats& stats);
// 2r^2(2-r)^2 P^4 + 4r(2-r)^3 P^4 + (2-r)^4 P^4
double count_subvol_recombinations(const CohortStats& stats);

enum class Scheme { hemi, subvol };
std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

// Per-hemisphere region labels, as stored after mirroring.
struct HemisphereLabels {
    RegionLabel ica;
    RegionLabel mca;
    RegionLabel any() const { return ica || mca; }
};

// Exact count of admissible ordered stacks drawn with replacement from the
// given hemispheres (pairs for hemi, ICA/ICA/MCA/MCA quadruples for subvol).
// Throws PlanningError when the number of candidates exceeds `cap`.
long long enumerate_admissible(std::span<const HemisphereLabels> hemispheres, Scheme scheme,
                               long long cap = 200'000'000);

// Cohort of P patients of which `positive_patients` carry an LVO on one side,
// affecting both ICA and MCA (the assumption behind the subvol closed form).
long long enumerate_admissible(long long patients, long long positive_patients, Scheme scheme,
                               long long cap = 200'000'000);

}  // namespace lvoaug
