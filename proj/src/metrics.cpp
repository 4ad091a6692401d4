#include "lvoaug/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "lvoaug/errors.hpp"
#include "lvoaug/random.hpp"

namespace lvoaug {

double class_auc(std::span<const ScoredCase> cases) {
    std::vector<std::size_t> order(cases.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cases[a].score < cases[b].score; });

    double npos = 0, nneg = 0, rank_sum = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && cases[order[j]].score == cases[order[i]].score) ++j;
        // Ranks i+1 .. j share their average.
        const double avg_rank = 0.5 * double(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) {
            if (cases[order[t]].positive) {
                rank_sum += avg_rank;
                ++npos;
            } else {
                ++nneg;
            }
        }
        i = j;
    }
    if (npos == 0 || nneg == 0) throw UndefinedMetricError("AUC needs at least one positive and one negative case");
    const double u = rank_sum - npos * (npos + 1) / 2;
    return u / (npos * nneg);
}

double side_accuracy(std::span<const SideCase> cases, SideGate gate) {
    int total = 0, correct = 0;
    for (const auto& c : cases) {
        if (c.truth.no_lvo) continue;
        ++total;
        const bool says_left = c.logits[1] >= c.logits[2];
        const bool detected = gate == SideGate::two_logit || std::max(c.logits[1], c.logits[2]) > c.logits[0];
        if (detected && says_left == c.truth.left) ++correct;
    }
    if (total == 0) throw UndefinedMetricError("side accuracy needs at least one LVO-positive case");
    return double(correct) / double(total);
}

std::vector<FoldSplit> make_folds(std::span<const PatientLabels> cohort, int k, std::uint64_t seed, bool stratify) {
    if (k < 3) throw Error("need at least 3 folds for train/val/test splits");
    const int n = static_cast<int>(cohort.size());
    if (n < 2 * k) throw PlanningError("cohort of " + std::to_string(n) + " patients is too small for " +
                                       std::to_string(k) + " folds (need at least " + std::to_string(2 * k) + ")");
    Rng rng(derive_seed(seed, {0xf01dull}));
    std::array<std::vector<int>, 3> strata;
    for (int i = 0; i < n; ++i) {
        const int cls = stratify ? static_cast<int>(cohort[static_cast<std::size_t>(i)].sample_labels().global.cls()) : 0;
        strata[static_cast<std::size_t>(cls)].push_back(i);
    }
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(k));
    int slot = 0;
    for (auto& s : strata) {
        std::shuffle(s.begin(), s.end(), rng);
        for (int id : s) parts[static_cast<std::size_t>(slot++ % k)].push_back(id);
    }
    std::vector<FoldSplit> folds;
    for (int f = 0; f < k; ++f) {
        FoldSplit split;
        split.fold_id = f;
        const int v = (f + 1) % k;
        for (int p = 0; p < k; ++p) {
            auto& dst = p == f ? split.test : p == v ? split.val : split.train;
            dst.insert(dst.end(), parts[static_cast<std::size_t>(p)].begin(), parts[static_cast<std::size_t>(p)].end());
        }
        for (auto* v2 : {&split.train, &split.val, &split.test}) std::sort(v2->begin(), v2->end());
        folds.push_back(std::move(split));
    }
    return folds;
}

}  // namespace lvoaug
