#include "lvoaug/ablation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "lvoaug/errors.hpp"
#include "lvoaug/random.hpp"

namespace lvoaug {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::array<double, 3> nan_mean(const std::vector<FoldMetrics>& folds, bool auc) {
    std::array<double, 3> out{};
    for (std::size_t h = 0; h < 3; ++h) {
        double sum = 0;
        int n = 0;
        for (const auto& f : folds) {
            if (!f.error.empty()) continue;
            const double v = auc ? f.auc[h] : f.side[h];
            if (std::isnan(v)) continue;
            sum += v;
            ++n;
        }
        out[h] = n ? sum / n : kNaN;
    }
    return out;
}

}  // namespace

std::string AblationRow::label() const {
    std::string s = method();
    if (flags.recombine) s += " + R";
    if (flags.deform) s += " + D";
    if (flags.mirror) s += " + M";
    return s;
}

PoolOptions pool_options_for(const std::vector<AblationRow>& rows, const AblationSettings& settings) {
    PoolOptions o;
    o.downsample = settings.downsample;
    o.hemispheres = false;
    o.subvolumes = false;
    for (const auto& r : rows) {
        if (r.variant == Variant::im_stack) o.subvolumes = true;
        else o.hemispheres = true;
        o.deform = o.deform || r.flags.deform;
    }
    o.hemisphere_deform = settings.hemisphere_deform;
    o.subvolume_deform = settings.subvolume_deform;
    o.online_deform = settings.online_deform;
    o.hemisphere_deform.seed = derive_seed(settings.seed, {0xd3full, 0});
    o.subvolume_deform.seed = derive_seed(settings.seed, {0xd3full, 1});
    return o;
}

std::vector<RowResult> run_ablation(const std::vector<BinaryVolume>& whole_heads, const std::vector<PatientLabels>& labels,
                                    const std::vector<AblationRow>& rows, const AblationSettings& settings,
                                    const ProgressFn& progress) {
    if (progress) progress("building training pool");
    const TrainingPool pool(whole_heads, labels, pool_options_for(rows, settings));
    return run_ablation(pool, rows, settings, progress);
}

std::vector<RowResult> run_ablation(const TrainingPool& pool, const std::vector<AblationRow>& rows,
                                    const AblationSettings& settings, const ProgressFn& progress) {
    std::vector<RowResult> results(rows.size());
    std::vector<FoldSplit> folds;
    std::string fold_error;
    try {
        folds = make_folds(pool.labels(), settings.folds, settings.seed, settings.stratify);
    } catch (const Error& e) {
        fold_error = e.what();
    }

    struct Task {
        std::size_t row;
        std::size_t fold;
    };
    std::vector<Task> tasks;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        results[r].row = rows[r];
        results[r].folds.resize(folds.size());
        for (std::size_t f = 0; f < folds.size(); ++f) tasks.push_back({r, f});
    }

    std::mutex log_mutex;
    auto run_task = [&](const Task& t) {
        const AblationRow& row = rows[t.row];
        const FoldSplit& split = folds[t.fold];
        FoldMetrics& m = results[t.row].folds[t.fold];
        m.fold = split.fold_id;
        try {
            NetworkConfig net;
            net.variant = row.variant;
            net.conv_blocks = settings.conv_blocks;
            net.feature_len = settings.feature_len;
            // Same initialization and epoch seeds for every row of a fold.
            net.weight_init_seed = derive_seed(settings.seed, {0x1417ull, static_cast<std::uint64_t>(split.fold_id)});
            TrainConfig tc = settings.train;
            tc.flags = row.flags;
            tc.seed = derive_seed(settings.seed, {0x7a17ull, static_cast<std::uint64_t>(split.fold_id)});
            TrainResult res = train(net, pool, split.train, split.val, tc);
            const Predictions p = predict_patients(res.network, pool, split.test);
            m.auc = head_aucs(p);
            m.side = head_side_accuracies(p, settings.gate);
            m.best_epoch = res.best_epoch;
        } catch (const Error& e) {
            m.error = e.what();
            m.auc = m.side = {kNaN, kNaN, kNaN};
        }
        if (progress) {
            std::lock_guard<std::mutex> lock(log_mutex);
            progress(row.label() + " fold " + std::to_string(split.fold_id) +
                     (m.error.empty() ? ": global AUC " + fmt(m.auc[0]) + " (best epoch " + std::to_string(m.best_epoch) + ")"
                                      : ": error: " + m.error));
        }
    };

    const int jobs = std::max(1, settings.jobs);
    if (jobs == 1) {
        for (const auto& t : tasks) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (int j = 0; j < jobs; ++j)
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(tasks[i]);
            });
        for (auto& w : workers) w.join();
    }

    for (auto& r : results) {
        r.mean_auc = nan_mean(r.folds, true);
        r.mean_side = nan_mean(r.folds, false);
        bool any_ok = false;
        for (const auto& f : r.folds) any_ok = any_ok || (f.error.empty() && !std::isnan(f.auc[0]));
        if (!fold_error.empty()) r.error = fold_error;
        else if (!any_ok) r.error = r.folds.empty() ? "no folds" : (r.folds[0].error.empty() ? "metrics undefined" : r.folds[0].error);
    }
    return results;
}

void write_results_csv(const fs::path& path, const std::vector<RowResult>& results) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path.string());
    f << "method,flags,fold,global_auc,global_side,ica_auc,ica_side,mca_auc,mca_side\n";
    auto line = [&](const RowResult& r, const std::string& fold, const std::array<double, 3>& auc,
                    const std::array<double, 3>& side) {
        f << r.row.method() << ',' << r.row.flags.to_string() << ',' << fold;
        for (std::size_t h = 0; h < 3; ++h) f << ',' << fmt(auc[h]) << ',' << fmt(side[h]);
        f << '\n';
    };
    for (const auto& r : results) {
        for (const auto& m : r.folds) line(r, std::to_string(m.fold), m.auc, m.side);
        line(r, "mean", r.mean_auc, r.mean_side);
    }
}

void write_table_csv(const fs::path& path, const std::vector<RowResult>& results) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path.string());
    f << "method,global_class_auc,global_side_acc,ica_class_auc,ica_side_acc,mca_class_auc,mca_side_acc,error\n";
    for (const auto& r : results) {
        f << r.row.label();
        for (std::size_t h = 0; h < 3; ++h) f << ',' << fmt(r.mean_auc[h]) << ',' << fmt(r.mean_side[h]);
        std::string err = r.error;
        for (char& c : err)
            if (c == ',' || c == '\n') c = ';';
        f << ',' << err << '\n';
    }
}

}  // namespace lvoaug
