#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "lvoaug/cohort.hpp"
#include "lvoaug/errors.hpp"
#include "lvoaug/phantom.hpp"
#include "lvoaug/volume_io.hpp"
#include "test_util.hpp"

using namespace lvoaug;

namespace {

std::size_t box_count(const BinaryVolume& v, const RegionBox& b) { return crop_region(v, b).foreground(); }

}  // namespace

TEST(Phantom, NoLesionsWithZeroFraction) {
    PhantomSpec s = test_util::small_spec();
    s.lvo_fraction = 0.0;
    for (const auto& p : generate_cohort(s)) {
        EXPECT_FALSE(p.labels.positive());
        EXPECT_FALSE(p.lesion.has_value());
    }
}

TEST(Phantom, PositiveCountIsRounded) {
    PhantomSpec s;
    s.patients = 60;
    const auto lesions = assign_lesions(s);
    EXPECT_EQ(std::count_if(lesions.begin(), lesions.end(), [](const auto& l) { return l.has_value(); }), 40);
    s.patients = 151;
    s.lvo_fraction = 101.0 / 151.0;
    const auto more = assign_lesions(s);
    EXPECT_EQ(std::count_if(more.begin(), more.end(), [](const auto& l) { return l.has_value(); }), 101);
}

TEST(Phantom, VolumesAreBinaryAndNonEmpty) {
    for (const auto& p : test_util::small_cohort()) {
        EXPECT_GT(p.whole_head.foreground(), 1000u);
        for (auto x : p.whole_head.data()) ASSERT_TRUE(x == 0 || x == 1);
        for (Region r : {Region::ica, Region::mca})
            for (Side s : {Side::left, Side::right}) {
                const bool lesioned = p.lesion && p.lesion->side == s && (r == Region::ica ? p.lesion->ica : p.lesion->mca);
                if (!lesioned) EXPECT_GT(box_count(p.whole_head, atlas_box(r, s)), 0u);
            }
    }
}

TEST(Phantom, GenerationIsDeterministic) {
    const auto a = generate_patient(test_util::small_spec(), 4);
    const auto b = generate_patient(test_util::small_spec(), 4);
    EXPECT_EQ(a.whole_head, b.whole_head);
    EXPECT_EQ(a.labels, b.labels);
    PhantomSpec other = test_util::small_spec();
    other.seed = 99;
    EXPECT_NE(generate_patient(other, 4).whole_head, a.whole_head);
}

TEST(Phantom, LesionOnlyTouchesItsRegionBoxes) {
    const PhantomSpec spec = test_util::small_spec();
    int checked = 0;
    for (int i = 0; i < spec.patients; ++i) {
        const PhantomPatient p = generate_patient(spec, i);
        if (!p.lesion) continue;
        ++checked;
        const PhantomPatient twin = generate_patient(spec, i, false);
        std::vector<RegionBox> boxes;
        if (p.lesion->ica) boxes.push_back(atlas_box(Region::ica, p.lesion->side));
        if (p.lesion->mca) boxes.push_back(atlas_box(Region::mca, p.lesion->side));
        const Shape3 s = p.whole_head.shape();
        for (int z = 0; z < s.z; ++z)
            for (int y = 0; y < s.y; ++y)
                for (int x = 0; x < s.x; ++x) {
                    bool inside = false;
                    for (const auto& b : boxes) inside = inside || b.contains(x, y, z);
                    if (!inside) ASSERT_EQ(p.whole_head.at(x, y, z), twin.whole_head.at(x, y, z));
                }
        // The affected region loses voxels; lesions only remove.
        for (const auto& b : boxes) EXPECT_LT(box_count(p.whole_head, b), box_count(twin.whole_head, b));
        for (std::size_t k = 0; k < p.whole_head.data().size(); ++k)
            ASSERT_LE(p.whole_head.data()[k], twin.whole_head.data()[k]);
    }
    EXPECT_GT(checked, 0);
}

TEST(Phantom, SymmetricWithoutJitter) {
    PhantomSpec s = test_util::small_spec();
    s.asymmetry_jitter = 0.0;
    const PhantomPatient p = generate_patient(s, 0, false);
    EXPECT_EQ(mirror_sagittal(p.whole_head), p.whole_head);
}

TEST(Phantom, JitterBoundsLeftRightAsymmetry) {
    const PhantomSpec s = test_util::small_spec();
    for (int i = 0; i < s.patients; ++i) {
        const PhantomPatient p = generate_patient(s, i, false);
        const auto [l, r] = split_hemispheres(p.whole_head);
        const double a = double(l.foreground()), b = double(r.foreground());
        EXPECT_LE(std::abs(a - b) / std::max(a, b), 3 * s.asymmetry_jitter) << i;
    }
}

TEST(Phantom, CohortStatsMatchLabels) {
    std::vector<PatientLabels> l(3);
    l[1].mca_left = true;
    const CohortStats st = cohort_stats(l);
    EXPECT_EQ(st.patients, 3);
    EXPECT_DOUBLE_EQ(st.positive_ratio, 1.0 / 3.0);
    std::vector<PatientLabels> reference(151);
    for (int i = 0; i < 101; ++i) reference[static_cast<std::size_t>(i)].ica_right = true;
    EXPECT_NEAR(cohort_stats(reference).positive_ratio, 0.669, 5e-4);
    std::reverse(reference.begin(), reference.end());
    EXPECT_NEAR(cohort_stats(reference).positive_ratio, 0.669, 5e-4);
}

TEST(Phantom, WrittenCohortRoundTrips) {
    test_util::TempDir dir;
    PhantomSpec s = test_util::small_spec();
    s.patients = 3;
    const CohortManifest m = write_cohort(dir.path, s);
    const CohortManifest back = load_manifest(dir.path / "manifest.json");
    ASSERT_EQ(back.patients.size(), 3u);
    EXPECT_EQ(back.seed, s.seed);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(back.patients[i].id, m.patients[i].id);
        EXPECT_EQ(back.patients[i].labels, m.patients[i].labels);
        EXPECT_EQ(read_vmv(back.volume_path(i)), generate_patient(s, static_cast<int>(i)).whole_head);
    }
}

TEST(Phantom, SpecValidation) {
    PhantomSpec s;
    s.lvo_fraction = 1.5;
    EXPECT_THROW(s.validate(), Error);
    s = PhantomSpec{};
    s.region_mix = {0.5, 0.5, 0.5};
    EXPECT_THROW(s.validate(), Error);
    s = PhantomSpec{};
    s.patients = 0;
    EXPECT_THROW(s.validate(), Error);
}
