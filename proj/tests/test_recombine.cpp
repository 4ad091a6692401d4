#include <map>
#include <set>

#include <gtest/gtest.h>

#include "lvoaug/errors.hpp"
#include "lvoaug/recombine.hpp"
#include "test_util.hpp"

using namespace lvoaug;

namespace {

// k positives (alternating side, both regions) followed by negatives.
std::vector<PatientLabels> cohort(int patients, int positives) {
    std::vector<PatientLabels> c(static_cast<std::size_t>(patients));
    for (int p = 0; p < positives; ++p) {
        auto& l = c[static_cast<std::size_t>(p)];
        if (p % 2) l.ica_left = l.mca_left = true;
        else l.mca_right = true;
    }
    return c;
}

std::multiset<MemberRef> members(const EpochPlan& plan, bool mca) {
    std::multiset<MemberRef> out;
    for (const auto& e : plan.samples) {
        out.insert(mca ? e.mca_left : e.ica_left);
        out.insert(mca ? e.mca_right : e.ica_right);
    }
    return out;
}

std::multiset<MemberRef> all_members(int patients) {
    std::multiset<MemberRef> out;
    for (int p = 0; p < patients; ++p) {
        out.insert({p, Side::left});
        out.insert({p, Side::right});
    }
    return out;
}

}  // namespace

TEST(Recombine, HemiPlanSingleLesion) {
    auto c = cohort(3, 0);
    c[1].ica_left = true;
    const EpochPlan plan = plan_epoch(c, Scheme::hemi, 4);
    ASSERT_EQ(plan.samples.size(), 3u);
    EXPECT_EQ(plan.class_histogram[0], 2);
    EXPECT_EQ(plan.class_histogram[1] + plan.class_histogram[2], 1);
    EXPECT_EQ(members(plan, false), all_members(3));
}

TEST(Recombine, HemiPlanBalancesClasses) {
    const auto c = cohort(6, 4);
    const EpochPlan plan = plan_epoch(c, Scheme::hemi, 1);
    EXPECT_EQ(plan.class_histogram, (std::array<int, 3>{2, 2, 2}));
    std::array<int, 3> recount{};
    for (const auto& e : plan.samples) {
        EXPECT_TRUE(e.hemispheric());
        ++recount[static_cast<std::size_t>(entry_labels(e, c).global.cls())];
    }
    EXPECT_EQ(recount, plan.class_histogram);
}

TEST(Recombine, AllNegativeCohort) {
    const auto c = cohort(5, 0);
    const EpochPlan plan = plan_epoch(c, Scheme::hemi, 0);
    EXPECT_EQ(plan.class_histogram, (std::array<int, 3>{5, 0, 0}));
}

TEST(Recombine, PlanIsSeeded) {
    const auto c = cohort(20, 12);
    EXPECT_EQ(plan_epoch(c, Scheme::hemi, 9).samples, plan_epoch(c, Scheme::hemi, 9).samples);
    EXPECT_NE(plan_epoch(c, Scheme::hemi, 9).samples, plan_epoch(c, Scheme::hemi, 10).samples);
    EXPECT_EQ(plan_epoch(c, Scheme::subvol, 9).samples, plan_epoch(c, Scheme::subvol, 9).samples);
}

TEST(Recombine, SubvolPlanUsesEachSubvolumeOnce) {
    auto c = cohort(30, 20);
    c[3].mca_left = false;  // ICA-only lesion
    c[4].ica_right = true;  // ICA and MCA
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const EpochPlan plan = plan_epoch(c, Scheme::subvol, seed);
        EXPECT_EQ(members(plan, false), all_members(30));
        EXPECT_EQ(members(plan, true), all_members(30));
        for (const auto& e : plan.samples) EXPECT_NO_THROW(entry_labels(e, c));
    }
}

TEST(Recombine, InfeasiblePlanIsReported) {
    // Bilateral patients: more positive than negative hemispheres.
    std::vector<PatientLabels> c(4);
    for (auto& l : c) l.ica_left = l.mca_right = true;
    c[0] = {};
    EXPECT_THROW(plan_epoch(c, Scheme::hemi, 0), PlanningError);
}

TEST(Recombine, OriginalPlanKeepsSlots) {
    const auto c = cohort(4, 2);
    const EpochPlan plan = original_plan(c);
    ASSERT_EQ(plan.samples.size(), 4u);
    for (int p = 0; p < 4; ++p) {
        const auto& e = plan.samples[static_cast<std::size_t>(p)];
        EXPECT_EQ(e.ica_left, (MemberRef{p, Side::left}));
        EXPECT_EQ(e.ica_right, (MemberRef{p, Side::right}));
        EXPECT_EQ(entry_labels(e, c), c[static_cast<std::size_t>(p)].sample_labels());
    }
}

TEST(Recombine, IdentityEntryReproducesPatient) {
    const auto& pat = test_util::small_cohort()[0];
    const std::vector<PatientVolumes> vols{ingest(pat.whole_head)};
    const std::vector<PatientLabels> labels{pat.labels};
    const PlanEntry e{{0, Side::left}, {0, Side::right}, {0, Side::left}, {0, Side::right}};

    const SampleStack whole = realize_sample(e, vols, labels, Variant::whole_head);
    ASSERT_EQ(whole.volumes.size(), 1u);
    EXPECT_EQ(whole.volumes[0], pat.whole_head);
    EXPECT_EQ(whole.labels, pat.labels.sample_labels());

    const auto [l, r] = split_hemispheres(pat.whole_head);
    const SampleStack h = realize_sample(e, vols, labels, Variant::h_stack);
    EXPECT_EQ(h.volumes[0].channels(), 2);
    EXPECT_EQ(extract_channel(h.volumes[0], 0), mirror_sagittal(l));
    EXPECT_EQ(extract_channel(h.volumes[0], 1), r);

    const SampleStack im = realize_sample(e, vols, labels, Variant::im_stack);
    ASSERT_EQ(im.volumes.size(), 2u);
    EXPECT_EQ(im.volumes[0].frame(), Frame::ica_box);
    EXPECT_EQ(im.volumes[1].frame(), Frame::mca_box);
    EXPECT_EQ(extract_channel(im.volumes[0], 1), crop_region(pat.whole_head, atlas_box(Region::ica, Side::right)));
}

TEST(Recombine, NegativePairLabels) {
    const auto& pats = test_util::small_cohort();
    std::vector<PatientVolumes> vols;
    std::vector<PatientLabels> labels(pats.size());  // all negative
    for (const auto& p : pats) vols.push_back(ingest(p.whole_head));
    const PlanEntry e{{0, Side::left}, {1, Side::right}, {0, Side::left}, {1, Side::right}};
    const SampleStack s = realize_sample(e, vols, labels, Variant::h_stack);
    EXPECT_EQ(s.volumes[0].channels(), 2);
    EXPECT_EQ(s.labels.global, ClassTriple::of(LvoClass::none));
}

TEST(Recombine, QuadrupleLabels) {
    std::vector<PatientLabels> labels(4);
    labels[0].ica_left = true;
    // ICA-left positive, everything else negative.
    const PlanEntry e{{0, Side::left}, {1, Side::right}, {2, Side::left}, {3, Side::right}};
    const SampleLabels s = entry_labels(e, labels);
    EXPECT_EQ(s.global, ClassTriple::of(LvoClass::left));
    EXPECT_EQ(s.ica, ClassTriple::of(LvoClass::left));
    EXPECT_EQ(s.mca, ClassTriple::of(LvoClass::none));
    labels[3].mca_right = true;
    EXPECT_THROW(entry_labels(e, labels), ExclusionError);
}

TEST(Recombine, MirrorSwapsSidesAndIsInvolution) {
    const auto& pats = test_util::small_cohort();
    std::vector<PatientVolumes> vols;
    std::vector<PatientLabels> labels;
    for (const auto& p : pats) vols.push_back(ingest(p.whole_head)), labels.push_back(p.labels);
    const EpochPlan plan = plan_epoch(labels, Scheme::hemi, 2);
    for (Variant v : {Variant::whole_head, Variant::h_stack}) {
        const SampleStack s = realize_sample(plan.samples[0], vols, labels, v);
        const SampleStack m = mirror_sample(s);
        EXPECT_EQ(m.labels, s.labels.side_swapped());
        EXPECT_EQ(mirror_sample(m).volumes, s.volumes);
        if (v == Variant::whole_head) EXPECT_EQ(m.volumes[0], mirror_sagittal(s.volumes[0]));
    }
}

TEST(Recombine, HemisphereVariantsRejectQuadruples) {
    const auto& pats = test_util::small_cohort();
    std::vector<PatientVolumes> vols;
    std::vector<PatientLabels> labels(pats.size());
    for (const auto& p : pats) vols.push_back(ingest(p.whole_head));
    const PlanEntry e{{0, Side::left}, {1, Side::right}, {2, Side::left}, {3, Side::right}};
    EXPECT_THROW(realize_sample(e, vols, labels, Variant::h_stack), PlanningError);
    EXPECT_NO_THROW(realize_sample(e, vols, labels, Variant::im_stack));
}
