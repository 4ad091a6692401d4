#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "lvoaug/errors.hpp"
#include "lvoaug/metrics.hpp"

using namespace lvoaug;

namespace {

double pairwise_auc(const std::vector<ScoredCase>& c) {
    double wins = 0, pairs = 0;
    for (const auto& p : c)
        for (const auto& n : c)
            if (p.positive && !n.positive) {
                pairs += 1;
                wins += p.score > n.score ? 1.0 : p.score == n.score ? 0.5 : 0.0;
            }
    return wins / pairs;
}

std::vector<ScoredCase> random_cases(std::mt19937_64& rng, int n, int levels) {
    std::uniform_int_distribution<int> level(0, levels - 1);
    std::bernoulli_distribution pos(0.4);
    std::vector<ScoredCase> c;
    for (int i = 0; i < n; ++i) c.push_back({level(rng) / double(levels), pos(rng)});
    c[0].positive = true;
    c[1].positive = false;
    return c;
}

SideCase side_case(double none, double left, double right, LvoClass truth) {
    return {{none, left, right}, ClassTriple::of(truth)};
}

std::vector<PatientLabels> cohort(int neg, int left, int right) {
    std::vector<PatientLabels> c(static_cast<std::size_t>(neg));
    for (int i = 0; i < left; ++i) c.push_back({.ica_left = true});
    for (int i = 0; i < right; ++i) c.push_back({.mca_right = true});
    return c;
}

}  // namespace

TEST(Metrics, AucMatchesPairwiseOracleWithTies) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        const auto c = random_cases(rng, 2 + t * 7, 1 + t % 10);
        EXPECT_NEAR(class_auc(c), pairwise_auc(c), 1e-12);
    }
}

TEST(Metrics, AucEdgeValues) {
    const std::vector<ScoredCase> perfect{{0.1, false}, {0.2, false}, {0.9, true}};
    EXPECT_DOUBLE_EQ(class_auc(perfect), 1.0);
    const std::vector<ScoredCase> inverted{{0.9, false}, {0.1, true}};
    EXPECT_DOUBLE_EQ(class_auc(inverted), 0.0);
    const std::vector<ScoredCase> tied{{0.5, false}, {0.5, true}, {0.5, true}};
    EXPECT_DOUBLE_EQ(class_auc(tied), 0.5);
    const std::vector<ScoredCase> one_class{{0.5, true}, {0.7, true}};
    EXPECT_THROW(class_auc(one_class), UndefinedMetricError);
}

TEST(Metrics, AucInvariantUnderMonotoneTransform) {
    std::mt19937_64 rng(2);
    auto c = random_cases(rng, 80, 20);
    const double a = class_auc(c);
    for (auto& x : c) x.score = std::exp(3 * x.score) - 7;
    EXPECT_DOUBLE_EQ(class_auc(c), a);
}

TEST(Metrics, SideAccuracyHandBuilt) {
    const std::vector<SideCase> c{
        side_case(0, 2, 1, LvoClass::left),   // correct
        side_case(0, 1, 2, LvoClass::left),   // wrong side
        side_case(5, 2, 1, LvoClass::left),   // missed: counts as an error
        side_case(0, 1, 3, LvoClass::right),  // correct
        side_case(9, 0, 0, LvoClass::none),   // ignored
    };
    EXPECT_DOUBLE_EQ(side_accuracy(c), 0.5);
    EXPECT_DOUBLE_EQ(side_accuracy(c, SideGate::two_logit), 0.75);
}

TEST(Metrics, SideAccuracySwapInvariance) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    std::vector<SideCase> c, swapped;
    for (int i = 0; i < 40; ++i) {
        const LvoClass t = i % 3 == 0 ? LvoClass::none : i % 3 == 1 ? LvoClass::left : LvoClass::right;
        c.push_back(side_case(n(rng), n(rng), n(rng), t));
        swapped.push_back({{c.back().logits[0], c.back().logits[2], c.back().logits[1]}, c.back().truth.side_swapped()});
    }
    EXPECT_DOUBLE_EQ(side_accuracy(c), side_accuracy(swapped));
    const std::vector<SideCase> negatives{side_case(1, 0, 0, LvoClass::none)};
    EXPECT_THROW(side_accuracy(negatives), UndefinedMetricError);
}

TEST(Metrics, FoldsPartitionThePatients) {
    const auto c = cohort(4, 3, 3);
    const auto folds = make_folds(c, 5, 7);
    ASSERT_EQ(folds.size(), 5u);
    std::multiset<int> tested;
    for (const auto& f : folds) {
        EXPECT_EQ(f.test.size(), 2u);
        EXPECT_EQ(f.val.size(), 2u);
        EXPECT_EQ(f.train.size(), 6u);
        std::set<int> all(f.train.begin(), f.train.end());
        all.insert(f.val.begin(), f.val.end());
        all.insert(f.test.begin(), f.test.end());
        EXPECT_EQ(all.size(), 10u);
        tested.insert(f.test.begin(), f.test.end());
    }
    EXPECT_EQ(tested.size(), 10u);
    EXPECT_EQ(std::set<int>(tested.begin(), tested.end()).size(), 10u);
    for (int f = 0; f < 5; ++f) EXPECT_EQ(folds[static_cast<std::size_t>(f)].val, folds[static_cast<std::size_t>((f + 1) % 5)].test);
}

TEST(Metrics, FoldsAreStratified) {
    const auto c = cohort(20, 15, 15);
    for (const auto& f : make_folds(c, 5, 1)) {
        std::array<int, 3> h{};
        for (int i : f.test) ++h[static_cast<std::size_t>(c[static_cast<std::size_t>(i)].sample_labels().global.cls())];
        EXPECT_EQ(h, (std::array<int, 3>{4, 3, 3}));
    }
}

TEST(Metrics, FoldsAreSeeded) {
    const auto c = cohort(20, 15, 15);
    EXPECT_EQ(make_folds(c, 5, 1)[0].test, make_folds(c, 5, 1)[0].test);
    EXPECT_NE(make_folds(c, 5, 1)[0].test, make_folds(c, 5, 2)[0].test);
    EXPECT_NO_THROW(make_folds(c, 5, 1, false));
}

TEST(Metrics, FoldsRejectTinyCohorts) {
    EXPECT_THROW(make_folds(cohort(5, 2, 2), 5, 0), PlanningError);
    EXPECT_THROW(make_folds(cohort(5, 2, 2), 2, 0), Error);
}
