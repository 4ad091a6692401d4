#pragma once
// Training loop: per-epoch recombination plan, optional deformation and
// mirroring, Adam on the mean BCE of all nine logits, early stopping on the
// validation global AUC computed on unaugmented patients.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lvoaug/adam.hpp"
#include "lvoaug/dataset.hpp"
#include "lvoaug/metrics.hpp"
#include "lvoaug/network.hpp"

namespace lvoaug {

struct AugmentFlags {
    bool recombine = false;  // R
    bool deform = false;     // D
    bool mirror = false;     // M, whole_head only

    std::string to_string() const;  // "none", "R", "RD", "DM", ...
    static AugmentFlags parse(std::string_view s);
    bool operator==(const AugmentFlags&) const = default;
};

struct TrainConfig {
    AdamConfig adam;  // learning rate 1e-5 by default
    int batch_size = 6;
    int early_stop_patience = 100;
    int max_epochs = 1000;
    std::uint64_t seed = 0;
    AugmentFlags flags;

    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double val_auc_global = 0.0;  // NaN when undefined
    double val_auc_ica = 0.0;
    double val_auc_mca = 0.0;
};

struct TrainResult {
    Network<float> network;  // parameters of the best validation epoch
    std::vector<EpochRecord> history;
    int best_epoch = -1;
    double best_val_auc = 0.0;
};

// Per-case network outputs for a list of original patients.
struct Predictions {
    std::vector<std::array<double, kLogits>> logits;
    std::vector<SampleLabels> truth;
};

Predictions predict_patients(Network<float>& net, const TrainingPool& pool, std::span<const int> patients,
                             int batch_size = 16);

// Class AUC per head (global, ica, mca); NaN where undefined.
std::array<double, 3> head_aucs(const Predictions& p);
// Side accuracy per head; NaN where undefined.
std::array<double, 3> head_side_accuracies(const Predictions& p, SideGate gate = SideGate::three_logit);

using EpochCallback = std::function<void(const EpochRecord&)>;

TrainResult train(const NetworkConfig& net_cfg, const TrainingPool& pool, std::span<const int> train_ids,
                  std::span<const int> val_ids, const TrainConfig& cfg, const EpochCallback& on_epoch = {});

void write_history_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& history);

// Hash of all parameters and buffers; equal for bit-identical networks.
std::uint64_t parameter_hash(Network<float>& net);

}  // namespace lvoaug
