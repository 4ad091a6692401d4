#pragma once
// Class AUC (positive-class probability vs. no LVO), side accuracy with false
// negatives counted as errors, and stratified k-fold splits.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "lvoaug/cohort.hpp"
#include "lvoaug/labels.hpp"

namespace lvoaug {

struct ScoredCase {
    double score = 0.0;  // sigmoid(left) + sigmoid(right)
    bool positive = false;
};

// Mann-Whitney rank statistic, ties counted 0.5. Throws UndefinedMetricError
// unless both classes are present.
double class_auc(std::span<const ScoredCase> cases);

// Per-case head output (three logits) and truth for one target.
struct SideCase {
    std::array<double, 3> logits{};
    ClassTriple truth;
};

enum class SideGate {
    three_logit,  // a positive counts only if argmax over all three is not "no LVO"
    two_logit,    // side argmax only
};

// Over truly positive cases: correct side (ties go left) and not predicted
// negative. Throws UndefinedMetricError without positives.
double side_accuracy(std::span<const SideCase> cases, SideGate gate = SideGate::three_logit);

struct FoldSplit {
    int fold_id = 0;
    std::vector<int> train, val, test;  // patient indices
};

// k folds, fold f tests on part f and validates on part (f + 1) mod k.
// Patients are stratified by global class unless stratify is false.
std::vector<FoldSplit> make_folds(std::span<const PatientLabels> cohort, int k, std::uint64_t seed,
                                  bool stratify = true);

}  // namespace lvoaug
