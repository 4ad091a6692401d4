#include "lvoaug/recombine.hpp"

#include <algorithm>
#include <utility>

#include "lvoaug/errors.hpp"
#include "lvoaug/random.hpp"

namespace lvoaug {

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::whole_head: return "whole_head";
        case Variant::h_stack: return "h_stack";
        case Variant::im_stack: return "im_stack";
    }
    return "?";
}

Variant variant_from_string(std::string_view s) {
    for (Variant v : {Variant::whole_head, Variant::h_stack, Variant::im_stack})
        if (to_string(v) == s) return v;
    throw Error("unknown variant '" + std::string(s) + "'");
}

namespace {

using Pair = std::pair<MemberRef, MemberRef>;

const PatientLabels& at(std::span<const PatientLabels> cohort, const MemberRef& m) {
    if (m.patient < 0 || static_cast<std::size_t>(m.patient) >= cohort.size())
        throw PlanningError("member refers to unknown patient " + std::to_string(m.patient));
    return cohort[static_cast<std::size_t>(m.patient)];
}

RegionLabel ica_of(std::span<const PatientLabels> c, const MemberRef& m) {
    return at(c, m).hemisphere(m.side).ica;
}
RegionLabel mca_of(std::span<const PatientLabels> c, const MemberRef& m) {
    return at(c, m).hemisphere(m.side).mca;
}

// Pairs every positive member with a distinct negative one, alternating the
// positive's slot, then pairs the remaining negatives among themselves.
std::vector<Pair> plan_pairs(std::vector<MemberRef> pos, std::vector<MemberRef> neg, Rng& rng,
                             std::string_view what) {
    if (pos.size() > neg.size())
        throw PlanningError("cannot plan epoch: " + std::to_string(pos.size()) + " positive " +
                            std::string(what) + " but only " + std::to_string(neg.size()) +
                            " negative ones");
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    std::vector<Pair> out;
    out.reserve((pos.size() + neg.size()) / 2);
    const bool left_first = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    for (std::size_t t = 0; t < pos.size(); ++t) {
        const bool pos_left = (t % 2 == 0) == left_first;
        out.push_back(pos_left ? Pair{pos[t], neg[t]} : Pair{neg[t], pos[t]});
    }
    for (std::size_t t = pos.size(); t + 1 < neg.size(); t += 2) out.push_back({neg[t], neg[t + 1]});
    return out;
}

template <typename Pred>
void split_members(std::span<const PatientLabels> cohort, Pred positive, std::vector<MemberRef>& pos,
                   std::vector<MemberRef>& neg) {
    for (std::size_t p = 0; p < cohort.size(); ++p) {
        for (Side s : {Side::left, Side::right}) {
            const MemberRef m{static_cast<int>(p), s};
            (positive(cohort[p].hemisphere(s)) ? pos : neg).push_back(m);
        }
    }
}

void fill_histogram(EpochPlan& plan, std::span<const PatientLabels> cohort) {
    plan.class_histogram = {0, 0, 0};
    for (const auto& e : plan.samples)
        ++plan.class_histogram[static_cast<int>(entry_labels(e, cohort).global.cls())];
}

bool zip_admissible(const Pair& ica, const Pair& mca, std::span<const PatientLabels> c) {
    return is_admissible_subvol(ica_of(c, ica.first), ica_of(c, ica.second), mca_of(c, mca.first),
                                mca_of(c, mca.second));
}

}  // namespace

SampleLabels entry_labels(const PlanEntry& e, std::span<const PatientLabels> cohort) {
    return compose_subvolume_labels(ica_of(cohort, e.ica_left), ica_of(cohort, e.ica_right),
                                    mca_of(cohort, e.mca_left), mca_of(cohort, e.mca_right));
}

EpochPlan plan_epoch(std::span<const PatientLabels> cohort, Scheme scheme, std::uint64_t seed) {
    if (cohort.empty()) throw PlanningError("cannot plan an epoch for an empty cohort");
    EpochPlan plan;
    plan.scheme = scheme;
    plan.seed = seed;
    Rng rng(seed);

    if (scheme == Scheme::hemi) {
        std::vector<MemberRef> pos, neg;
        split_members(cohort, [](const HemisphereLabels& h) { return h.any().value; }, pos, neg);
        for (const auto& [l, r] : plan_pairs(std::move(pos), std::move(neg), rng, "hemispheres"))
            plan.samples.push_back({l, r, l, r});
    } else {
        std::vector<MemberRef> ipos, ineg, mpos, mneg;
        split_members(cohort, [](const HemisphereLabels& h) { return h.ica.value; }, ipos, ineg);
        split_members(cohort, [](const HemisphereLabels& h) { return h.mca.value; }, mpos, mneg);
        const auto ica = plan_pairs(std::move(ipos), std::move(ineg), rng, "ICA subvolumes");
        auto mca = plan_pairs(std::move(mpos), std::move(mneg), rng, "MCA subvolumes");

        constexpr int kZipRetries = 8;
        bool ok = false;
        for (int attempt = 0; attempt < kZipRetries && !ok; ++attempt) {
            std::shuffle(mca.begin(), mca.end(), rng);
            ok = true;
            for (std::size_t t = 0; t < ica.size() && ok; ++t) ok = zip_admissible(ica[t], mca[t], cohort);
        }
        if (!ok) {
            // Each pair is positive on at most one side, so swapping the MCA
            // slots of a bilateral zip makes it unilateral.
            for (std::size_t t = 0; t < ica.size(); ++t)
                if (!zip_admissible(ica[t], mca[t], cohort)) std::swap(mca[t].first, mca[t].second);
        }
        for (std::size_t t = 0; t < ica.size(); ++t)
            plan.samples.push_back({ica[t].first, ica[t].second, mca[t].first, mca[t].second});
    }
    std::shuffle(plan.samples.begin(), plan.samples.end(), rng);
    fill_histogram(plan, cohort);
    return plan;
}

EpochPlan original_plan(std::span<const PatientLabels> cohort) {
    EpochPlan plan;
    plan.scheme = Scheme::hemi;
    for (std::size_t p = 0; p < cohort.size(); ++p) {
        const MemberRef l{static_cast<int>(p), Side::left}, r{static_cast<int>(p), Side::right};
        plan.samples.push_back({l, r, l, r});
    }
    fill_histogram(plan, cohort);
    return plan;
}

PatientVolumes ingest(const BinaryVolume& whole_head) {
    PatientVolumes pv;
    auto [left, right] = split_hemispheres(whole_head);
    pv.hemisphere[0] = mirror_sagittal(left);
    pv.hemisphere[1] = std::move(right);
    for (Side s : {Side::left, Side::right}) {
        const auto i = static_cast<std::size_t>(s);
        pv.ica[i] = crop_region(whole_head, atlas_box(Region::ica, s));
        pv.mca[i] = crop_region(whole_head, atlas_box(Region::mca, s));
    }
    return pv;
}

SampleStack realize_sample(const PlanEntry& entry, std::span<const PatientVolumes> volumes,
                           std::span<const PatientLabels> labels, Variant variant,
                           std::uint64_t provenance_seed) {
    auto vol = [&](const MemberRef& m) -> const PatientVolumes& {
        if (m.patient < 0 || static_cast<std::size_t>(m.patient) >= volumes.size())
            throw DataError("no volumes loaded for patient " + std::to_string(m.patient));
        return volumes[static_cast<std::size_t>(m.patient)];
    };
    auto side = [](const MemberRef& m) { return static_cast<std::size_t>(m.side); };

    SampleStack s;
    s.variant = variant;
    s.members = entry;
    s.provenance_seed = provenance_seed;
    s.scheme = entry.hemispheric() ? Scheme::hemi : Scheme::subvol;
    s.labels = entry_labels(entry, labels);

    switch (variant) {
        case Variant::whole_head:
        case Variant::h_stack: {
            if (!entry.hemispheric())
                throw PlanningError(std::string(to_string(variant)) +
                                    " needs a hemisphere stack, got an ICA/MCA quadruple");
            const BinaryVolume& l = vol(entry.ica_left).hemisphere[side(entry.ica_left)];
            const BinaryVolume& r = vol(entry.ica_right).hemisphere[side(entry.ica_right)];
            if (variant == Variant::whole_head)
                s.volumes.push_back(concat_sagittal(mirror_sagittal(l), r));
            else
                s.volumes.push_back(stack_channels(l, r));
            break;
        }
        case Variant::im_stack:
            s.volumes.push_back(stack_channels(vol(entry.ica_left).ica[side(entry.ica_left)],
                                               vol(entry.ica_right).ica[side(entry.ica_right)]));
            s.volumes.push_back(stack_channels(vol(entry.mca_left).mca[side(entry.mca_left)],
                                               vol(entry.mca_right).mca[side(entry.mca_right)]));
            break;
    }
    return s;
}

SampleStack mirror_sample(const SampleStack& s) {
    SampleStack m = s;
    for (auto& v : m.volumes) v = v.channels() == 2 ? swap_channels(v) : mirror_sagittal(v);
    m.labels = s.labels.side_swapped();
    std::swap(m.members.ica_left, m.members.ica_right);
    std::swap(m.members.mca_left, m.members.mca_right);
    return m;
}

}  // namespace lvoaug
