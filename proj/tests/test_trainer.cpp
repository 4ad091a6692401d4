#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "lvoaug/ablation.hpp"
#include "lvoaug/errors.hpp"
#include "lvoaug/trainer.hpp"
#include "test_util.hpp"

using namespace lvoaug;

namespace {

NetworkConfig small_net(Variant v) {
    NetworkConfig c;
    c.variant = v;
    c.conv_blocks = {{4, 2}, {8, 2}};
    c.feature_len = 8;
    c.weight_init_seed = 5;
    return c;
}

PoolOptions pool_opts(bool deform, double d_max = 20.0, bool subvolumes = false) {
    PoolOptions o;
    o.downsample = 5;
    o.subvolumes = subvolumes;
    o.deform = deform;
    o.hemisphere_deform = {6, d_max, 2, 1};
    o.subvolume_deform = {4, d_max, 2, 1};
    return o;
}

TrainConfig quick(std::string_view flags, int epochs = 3) {
    TrainConfig t;
    t.adam.learning_rate = 1e-3;
    t.max_epochs = epochs;
    t.seed = 4;
    t.flags = AugmentFlags::parse(flags);
    return t;
}

const std::vector<int> kTrain{0, 1, 2, 3, 4, 5, 6, 7, 8};
const std::vector<int> kVal{9, 10, 11};

TrainingPool pool(const PoolOptions& o) {
    const auto& c = test_util::small_cohort();
    return TrainingPool(test_util::heads_of(c), test_util::labels_of(c), o);
}

}  // namespace

TEST(Trainer, FlagStrings) {
    EXPECT_EQ(AugmentFlags::parse("RD").to_string(), "RD");
    EXPECT_EQ(AugmentFlags::parse("none").to_string(), "none");
    EXPECT_EQ(AugmentFlags::parse("R+D+M"), (AugmentFlags{true, true, true}));
    EXPECT_THROW(AugmentFlags::parse("X"), Error);
}

TEST(Trainer, ZeroDisplacementDeformMatchesNoDeform) {
    const TrainingPool p = pool(pool_opts(true, 0.0));
    TrainResult a = train(small_net(Variant::h_stack), p, kTrain, kVal, quick("R"));
    TrainResult b = train(small_net(Variant::h_stack), p, kTrain, kVal, quick("RD"));
    EXPECT_EQ(parameter_hash(a.network), parameter_hash(b.network));
}

TEST(Trainer, TrainingIsDeterministic) {
    const TrainingPool p = pool(pool_opts(true));
    TrainResult a = train(small_net(Variant::whole_head), p, kTrain, kVal, quick("RDM"));
    TrainResult b = train(small_net(Variant::whole_head), p, kTrain, kVal, quick("RDM"));
    EXPECT_EQ(parameter_hash(a.network), parameter_hash(b.network));
    ASSERT_EQ(a.history.size(), b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
}

TEST(Trainer, LossDecreasesOnPhantomCohort) {
    PhantomSpec s = test_util::small_spec();
    s.patients = 30;
    const auto c = generate_cohort(s);
    const TrainingPool p(test_util::heads_of(c), test_util::labels_of(c), pool_opts(false));
    std::vector<int> ids(30);
    std::iota(ids.begin(), ids.end(), 0);
    TrainConfig cfg = quick("R", 15);
    cfg.adam.learning_rate = 3e-3;
    const TrainResult r = train(small_net(Variant::h_stack), p, ids, {}, cfg);
    ASSERT_EQ(r.history.size(), 15u);
    EXPECT_LT(r.history.back().train_loss, r.history.front().train_loss);
    for (const auto& e : r.history) EXPECT_TRUE(std::isfinite(e.train_loss));
}

TEST(Trainer, RejectsInvalidSetups) {
    const TrainingPool p = pool(pool_opts(false));
    EXPECT_THROW(train(small_net(Variant::h_stack), p, kTrain, kVal, quick("M")), Error);
    EXPECT_THROW(train(small_net(Variant::h_stack), p, kTrain, kVal, quick("D")), Error);
    const std::vector<int> overlap{9, 1};
    EXPECT_THROW(train(small_net(Variant::h_stack), p, overlap, kVal, quick("none")), PlanningError);
    TrainConfig bad = quick("none");
    bad.batch_size = 0;
    EXPECT_THROW(train(small_net(Variant::h_stack), p, kTrain, kVal, bad), Error);
}

TEST(Trainer, OnlineDeformationRunsForSubvolumes) {
    PoolOptions o = pool_opts(true, 20.0, true);
    o.hemispheres = false;
    o.online_deform = true;
    const TrainingPool p = pool(o);
    EXPECT_EQ(p.versions(Region::ica), 1);
    TrainResult a = train(small_net(Variant::im_stack), p, kTrain, kVal, quick("RD", 2));
    TrainResult b = train(small_net(Variant::im_stack), p, kTrain, kVal, quick("RD", 2));
    EXPECT_EQ(a.history.size(), 2u);
    EXPECT_EQ(parameter_hash(a.network), parameter_hash(b.network));
}

TEST(Trainer, PredictionsCoverRequestedPatients) {
    const TrainingPool p = pool(pool_opts(false));
    Network<float> net(small_net(Variant::h_stack));
    const Predictions pr = predict_patients(net, p, kVal, 2);
    ASSERT_EQ(pr.logits.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_EQ(pr.truth[i], test_util::small_cohort()[static_cast<std::size_t>(kVal[i])].labels.sample_labels());
}

TEST(Ablation, ProducesOneRowPerVariantAndFlags) {
    const auto& c = test_util::small_cohort();
    std::vector<AblationRow> rows;
    for (Variant v : {Variant::whole_head, Variant::h_stack, Variant::im_stack})
        for (const char* f : {"none", "R"}) rows.push_back({v, AugmentFlags::parse(f)});
    AblationSettings s;
    s.folds = 3;
    s.train = quick("none", 2);
    s.conv_blocks = {{4, 2}};
    s.feature_len = 4;
    s.downsample = 5;
    const auto results = run_ablation(test_util::heads_of(c), test_util::labels_of(c), rows, s);
    ASSERT_EQ(results.size(), rows.size());
    for (const auto& r : results) {
        EXPECT_EQ(r.folds.size(), 3u) << r.row.label();
        for (const auto& f : r.folds) EXPECT_TRUE(f.error.empty()) << f.error;
    }
    test_util::TempDir dir;
    write_table_csv(dir.path / "table.csv", results);
    write_results_csv(dir.path / "results.csv", results);
    EXPECT_TRUE(std::filesystem::exists(dir.path / "table.csv"));
}

TEST(Ablation, AllNegativeCohortReportsErrors) {
    const auto& c = test_util::small_cohort();
    AblationSettings s;
    s.folds = 3;
    s.train = quick("none", 1);
    s.conv_blocks = {{4, 2}};
    s.feature_len = 4;
    s.downsample = 5;
    const auto results = run_ablation(test_util::heads_of(c), std::vector<PatientLabels>(c.size()),
                                      {{Variant::h_stack, AugmentFlags::parse("R")}}, s);
    ASSERT_EQ(results.size(), 1u);
    EXPECT_FALSE(results[0].error.empty());
}

TEST(Ablation, RowLabels) {
    EXPECT_EQ((AblationRow{Variant::h_stack, AugmentFlags::parse("RD")}).label(), "h_stack + R + D");
    EXPECT_EQ((AblationRow{Variant::whole_head, AugmentFlags{}}).label(), "whole_head");
}
