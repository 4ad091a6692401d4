#include "lvoaug/labels.hpp"

#include <cmath>

#include "lvoaug/errors.hpp"

namespace lvoaug {

LvoClass ClassTriple::cls() const {
    if (left) return LvoClass::left;
    if (right) return LvoClass::right;
    return LvoClass::none;
}

std::string to_string(const ClassTriple& t) {
    return "[" + std::to_string(int(t.no_lvo)) + "," + std::to_string(int(t.left)) + "," +
           std::to_string(int(t.right)) + "]";
}

bool is_admissible_hemi(RegionLabel left, RegionLabel right) { return !(left && right); }

bool is_admissible_subvol(RegionLabel ica_left, RegionLabel ica_right, RegionLabel mca_left,
                          RegionLabel mca_right) {
    return !((ica_left || mca_left) && (ica_right || mca_right));
}

ClassTriple compose_hemi_labels(RegionLabel left, RegionLabel right) {
    if (!is_admissible_hemi(left, right))
        throw ExclusionError("two LVO-positive hemispheres cannot be recombined");
    return {!(left || right), left.value, right.value};
}

SampleLabels compose_subvolume_labels(RegionLabel ica_left, RegionLabel ica_right,
                                      RegionLabel mca_left, RegionLabel mca_right) {
    if (!is_admissible_subvol(ica_left, ica_right, mca_left, mca_right))
        throw ExclusionError("ICA/MCA quadruple is LVO-positive on both sides");
    SampleLabels out;
    out.global = {!(ica_left || ica_right || mca_left || mca_right), ica_left || mca_left,
                  ica_right || mca_right};
    out.ica = {!(ica_left || ica_right), ica_left.value, ica_right.value};
    out.mca = {!(mca_left || mca_right), mca_left.value, mca_right.value};
    return out;
}

double count_hemi_recombinations(const CohortStats& stats) {
    const double r = stats.positive_ratio;
    const double p2 = double(stats.patients) * double(stats.patients);
    return 2.0 * r * (2.0 - r) * p2 + (2.0 - r) * (2.0 - r) * p2;
}

double count_subvol_recombinations(const CohortStats& stats) {
    const double r = stats.positive_ratio;
    const double a = 2.0 - r;
    const double p = double(stats.patients);
    const double p4 = p * p * p * p;
    return 2.0 * r * r * a * a * p4 + 4.0 * r * a * a * a * p4 + a * a * a * a * p4;
}

std::string_view to_string(Scheme s) { return s == Scheme::hemi ? "hemi" : "subvol"; }

Scheme scheme_from_string(std::string_view s) {
    if (s == "hemi") return Scheme::hemi;
    if (s == "subvol") return Scheme::subvol;
    throw Error("unknown scheme '" + std::string(s) + "' (expected hemi or subvol)");
}

long long enumerate_admissible(std::span<const HemisphereLabels> h, Scheme scheme, long long cap) {
    const long long n = static_cast<long long>(h.size());
    const long long candidates = scheme == Scheme::hemi ? n * n : n * n * n * n;
    if (candidates > cap)
        throw PlanningError("enumeration of " + std::to_string(candidates) +
                            " candidates exceeds the cap of " + std::to_string(cap));
    long long count = 0;
    if (scheme == Scheme::hemi) {
        for (const auto& i : h)
            for (const auto& j : h) count += is_admissible_hemi(i.any(), j.any());
        return count;
    }
    for (const auto& i : h)
        for (const auto& j : h)
            for (const auto& k : h)
                for (const auto& l : h) count += is_admissible_subvol(i.ica, j.ica, k.mca, l.mca);
    return count;
}

long long enumerate_admissible(long long patients, long long positive_patients, Scheme scheme,
                               long long cap) {
    if (positive_patients < 0 || positive_patients > patients)
        throw PlanningError("positive count out of range");
    // Each positive patient contributes one affected hemisphere.
    std::vector<HemisphereLabels> h(static_cast<std::size_t>(2 * patients));
    for (long long i = 0; i < positive_patients; ++i) h[static_cast<std::size_t>(i)] = {true, true};
    return enumerate_admissible(h, scheme, cap);
}

}  // namespace lvoaug
