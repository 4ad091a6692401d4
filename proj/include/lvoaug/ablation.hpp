#pragma once
// Cross-validated ablation over (variant, augmentation flags) rows, with a
// per-fold results CSV and an aggregated table laid out as
// Global / ICA / MCA x (class AUC, side accuracy).

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lvoaug/trainer.hpp"

namespace lvoaug {

struct AblationRow {
    Variant variant = Variant::h_stack;
    AugmentFlags flags;

    std::string method() const { return std::string(to_string(variant)); }
    // "h_stack + R + D" style label.
    std::string label() const;
};

struct AblationSettings {
    int folds = 5;
    bool stratify = true;
    std::uint64_t seed = 0;  // master seed: folds, initialization, epoch plans, deformation
    TrainConfig train;
    std::vector<ConvBlockSpec> conv_blocks{{4, 2}, {8, 2}, {16, 2}};
    int feature_len = 64;
    int downsample = 4;
    DeformSpec hemisphere_deform{6, 20.0, 10, 0};
    DeformSpec subvolume_deform{4, 20.0, 10, 0};
    SideGate gate = SideGate::three_logit;
    bool online_deform = false;
    int jobs = 1;
};

struct FoldMetrics {
    int fold = 0;
    std::array<double, 3> auc{};   // global, ica, mca; NaN where undefined
    std::array<double, 3> side{};
    int best_epoch = -1;
    std::string error;             // non-empty if the fold failed
};

struct RowResult {
    AblationRow row;
    std::vector<FoldMetrics> folds;
    std::array<double, 3> mean_auc{};   // mean over folds where defined
    std::array<double, 3> mean_side{};
    std::string error;                  // set when no fold produced metrics
};

using ProgressFn = std::function<void(const std::string&)>;

std::vector<RowResult> run_ablation(const std::vector<BinaryVolume>& whole_heads, const std::vector<PatientLabels>& labels,
                                    const std::vector<AblationRow>& rows, const AblationSettings& settings,
                                    const ProgressFn& progress = {});

// Same, on a prebuilt pool (must contain what the rows need).
std::vector<RowResult> run_ablation(const TrainingPool& pool, const std::vector<AblationRow>& rows,
                                    const AblationSettings& settings, const ProgressFn& progress = {});

PoolOptions pool_options_for(const std::vector<AblationRow>& rows, const AblationSettings& settings);

void write_results_csv(const std::filesystem::path& path, const std::vector<RowResult>& results);
void write_table_csv(const std::filesystem::path& path, const std::vector<RowResult>& results);

}  // namespace lvoaug
