#include "lvoaug/trainer.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "lvoaug/errors.hpp"
#include "lvoaug/random.hpp"
#include "lvoaug/volume_io.hpp"

namespace lvoaug {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::vector<PatientLabels> subset(const std::vector<PatientLabels>& all, std::span<const int> ids) {
    std::vector<PatientLabels> out;
    for (int id : ids) out.push_back(all.at(static_cast<std::size_t>(id)));
    return out;
}

PlanEntry remap(PlanEntry e, std::span<const int> ids) {
    for (MemberRef* m : {&e.ica_left, &e.ica_right, &e.mca_left, &e.mca_right})
        m->patient = ids[static_cast<std::size_t>(m->patient)];
    return e;
}

struct Sample {
    PlanEntry entry;
    std::array<int, 4> version{};
    std::array<std::uint64_t, 4> field_seed{};
    bool online = false;
    bool mirror = false;
    SampleLabels labels;
};

std::vector<Sample> epoch_samples(const NetworkConfig& net_cfg, const TrainingPool& pool, std::span<const int> train_ids,
                                  const TrainConfig& cfg, int epoch) {
    const auto sub = subset(pool.labels(), train_ids);
    const std::uint64_t epoch_seed = derive_seed(cfg.seed, {0xe90cull, static_cast<std::uint64_t>(epoch)});
    Rng rng(derive_seed(epoch_seed, {1}));
    EpochPlan plan;
    if (cfg.flags.recombine) {
        const Scheme scheme = net_cfg.variant == Variant::im_stack ? Scheme::subvol : Scheme::hemi;
        plan = plan_epoch(sub, scheme, epoch_seed);
    } else {
        plan = original_plan(sub);
        std::shuffle(plan.samples.begin(), plan.samples.end(), rng);
    }
    const bool hemi_variant = net_cfg.variant != Variant::im_stack;
    const int versions = hemi_variant ? pool.hemisphere_versions() : pool.versions(Region::ica);
    std::uniform_int_distribution<int> pick(0, versions - 1);
    std::bernoulli_distribution coin(0.5);

    std::vector<Sample> out;
    for (const auto& e : plan.samples) {
        Sample s;
        s.entry = remap(e, train_ids);
        if (cfg.flags.deform && pool.options().online_deform) {
            s.online = true;
            for (auto& f : s.field_seed) f = rng();
        } else if (cfg.flags.deform) {
            for (auto& v : s.version) v = pick(rng);
            if (hemi_variant) s.version[2] = s.version[0], s.version[3] = s.version[1];
        }
        s.mirror = cfg.flags.mirror && coin(rng);
        s.labels = entry_labels(s.entry, pool.labels());
        if (s.mirror) s.labels = s.labels.side_swapped();
        out.push_back(s);
    }
    return out;
}

}  // namespace

std::string AugmentFlags::to_string() const {
    std::string s;
    if (recombine) s += 'R';
    if (deform) s += 'D';
    if (mirror) s += 'M';
    return s.empty() ? "none" : s;
}

AugmentFlags AugmentFlags::parse(std::string_view s) {
    AugmentFlags f;
    if (s == "none" || s.empty()) return f;
    for (char c : s) {
        switch (c) {
            case 'R': case 'r': f.recombine = true; break;
            case 'D': case 'd': f.deform = true; break;
            case 'M': case 'm': f.mirror = true; break;
            case '+': break;
            default: throw Error("unknown augmentation flag '" + std::string(1, c) + "' in '" + std::string(s) + "'");
        }
    }
    return f;
}

void TrainConfig::validate() const {
    if (!(adam.learning_rate > 0)) throw Error("learning rate must be positive");
    if (batch_size < 1) throw Error("batch size must be positive");
    if (early_stop_patience < 1) throw Error("patience must be positive");
    if (max_epochs < 1) throw Error("max_epochs must be positive");
}

Predictions predict_patients(Network<float>& net, const TrainingPool& pool, std::span<const int> patients, int batch_size) {
    Predictions p;
    const Variant variant = net.config().variant;
    for (std::size_t start = 0; start < patients.size(); start += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(patients.size(), start + static_cast<std::size_t>(batch_size));
        std::vector<ModelInput<float>> batch;
        for (std::size_t i = start; i < end; ++i) {
            const int id = patients[i];
            const MemberRef l{id, Side::left}, r{id, Side::right};
            const PlanEntry e{l, r, l, r};
            batch.push_back(pool.input(e, variant));
            p.truth.push_back(pool.labels().at(static_cast<std::size_t>(id)).sample_labels());
        }
        const MatrixX<float> logits = net.predict(batch);
        for (Eigen::Index s = 0; s < logits.cols(); ++s) {
            std::array<double, kLogits> row{};
            for (int k = 0; k < kLogits; ++k) row[static_cast<std::size_t>(k)] = logits(k, s);
            p.logits.push_back(row);
        }
    }
    return p;
}

std::array<double, 3> head_aucs(const Predictions& p) {
    std::array<double, 3> out{};
    for (int h = 0; h < 3; ++h) {
        std::vector<ScoredCase> cases;
        for (std::size_t i = 0; i < p.logits.size(); ++i) {
            const auto& z = p.logits[i];
            const ClassTriple& t = h == 0 ? p.truth[i].global : h == 1 ? p.truth[i].ica : p.truth[i].mca;
            cases.push_back({sigmoid(z[static_cast<std::size_t>(3 * h + 1)]) + sigmoid(z[static_cast<std::size_t>(3 * h + 2)]),
                             !t.no_lvo});
        }
        try {
            out[static_cast<std::size_t>(h)] = class_auc(cases);
        } catch (const UndefinedMetricError&) {
            out[static_cast<std::size_t>(h)] = kNaN;
        }
    }
    return out;
}

std::array<double, 3> head_side_accuracies(const Predictions& p, SideGate gate) {
    std::array<double, 3> out{};
    for (int h = 0; h < 3; ++h) {
        std::vector<SideCase> cases;
        for (std::size_t i = 0; i < p.logits.size(); ++i) {
            const auto& z = p.logits[i];
            const ClassTriple& t = h == 0 ? p.truth[i].global : h == 1 ? p.truth[i].ica : p.truth[i].mca;
            cases.push_back({{z[static_cast<std::size_t>(3 * h)], z[static_cast<std::size_t>(3 * h + 1)],
                              z[static_cast<std::size_t>(3 * h + 2)]},
                             t});
        }
        try {
            out[static_cast<std::size_t>(h)] = side_accuracy(cases, gate);
        } catch (const UndefinedMetricError&) {
            out[static_cast<std::size_t>(h)] = kNaN;
        }
    }
    return out;
}

TrainResult train(const NetworkConfig& net_cfg, const TrainingPool& pool, std::span<const int> train_ids,
                  std::span<const int> val_ids, const TrainConfig& cfg, const EpochCallback& on_epoch) {
    cfg.validate();
    if (cfg.flags.mirror && net_cfg.variant != Variant::whole_head)
        throw Error("mirroring (M) applies to the whole_head variant only");
    if (cfg.flags.deform && !pool.options().deform) throw Error("deformation requested but the pool has no deformed copies");
    for (int t : train_ids)
        for (int v : val_ids)
            if (t == v) throw PlanningError("train and validation sets overlap (patient " + std::to_string(t) + ")");
    if (train_ids.empty()) throw PlanningError("empty training set");

    TrainResult result;
    Network<float> net(net_cfg);
    Adam<float> opt(net.params(), cfg.adam);
    double best_monitor = -std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const auto samples = epoch_samples(net_cfg, pool, train_ids, cfg, epoch);
        double loss_sum = 0;
        std::size_t start = 0;
        while (start < samples.size()) {
            std::size_t end = std::min(samples.size(), start + static_cast<std::size_t>(cfg.batch_size));
            // A lone trailing sample joins the previous batch (batch statistics need two).
            if (samples.size() - end == 1) end = samples.size();
            std::vector<ModelInput<float>> batch;
            std::vector<SampleLabels> labels;
            for (std::size_t i = start; i < end; ++i) {
                const Sample& smp = samples[i];
                batch.push_back(smp.online ? pool.input_online(smp.entry, net_cfg.variant, smp.field_seed, smp.mirror)
                                           : pool.input(smp.entry, net_cfg.variant, smp.version, smp.mirror));
                labels.push_back(samples[i].labels);
            }
            typename Network<float>::Cache cache;
            const MatrixX<float> logits = net.forward(batch, true, cache);
            MatrixX<float> grad;
            const float loss = bce_with_logits<float>(logits, targets_matrix<float>(labels), &grad);
            if (!std::isfinite(loss))
                throw NumericalError("non-finite training loss at epoch " + std::to_string(epoch));
            net.zero_grad();
            net.backward(cache, grad);
            opt.step();
            loss_sum += double(loss) * double(end - start);
            start = end;
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = samples.empty() ? kNaN : loss_sum / double(samples.size());
        double monitor = kNaN;
        if (!val_ids.empty()) {
            const Predictions p = predict_patients(net, pool, val_ids);
            const auto aucs = head_aucs(p);
            rec.val_auc_global = aucs[0];
            rec.val_auc_ica = aucs[1];
            rec.val_auc_mca = aucs[2];
            monitor = aucs[0];
            if (std::isnan(monitor)) {
                // Single-class validation set: fall back to the validation loss.
                MatrixX<float> z(kLogits, static_cast<Eigen::Index>(p.logits.size()));
                for (std::size_t i = 0; i < p.logits.size(); ++i)
                    for (int k = 0; k < kLogits; ++k) z(k, static_cast<Eigen::Index>(i)) = static_cast<float>(p.logits[i][static_cast<std::size_t>(k)]);
                monitor = -double(bce_with_logits<float>(z, targets_matrix<float>(p.truth)));
            }
        } else {
            rec.val_auc_global = rec.val_auc_ica = rec.val_auc_mca = kNaN;
            monitor = -rec.train_loss;
        }
        result.history.push_back(rec);
        if (on_epoch) on_epoch(rec);

        if (monitor > best_monitor) {
            best_monitor = monitor;
            result.best_epoch = epoch;
            result.best_val_auc = rec.val_auc_global;
            result.network = net;
        } else if (epoch - result.best_epoch >= cfg.early_stop_patience) {
            break;
        }
    }
    if (result.best_epoch < 0) result.network = net;
    return result;
}

void write_history_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& history) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path.string());
    f << "epoch,train_loss,val_auc_global,val_auc_ica,val_auc_mca\n";
    f.precision(9);
    for (const auto& r : history)
        f << r.epoch << ',' << r.train_loss << ',' << r.val_auc_global << ',' << r.val_auc_ica << ',' << r.val_auc_mca << '\n';
}

std::uint64_t parameter_hash(Network<float>& net) {
    std::uint64_t h = 14695981039346656037ull;
    auto add = [&](const MatrixX<float>& m) {
        const auto* bytes = reinterpret_cast<const std::uint8_t*>(m.data());
        h = fnv1a({bytes, static_cast<std::size_t>(m.size()) * sizeof(float)}, h);
    };
    for (const auto& p : net.params()) add(*p.value);
    for (const auto& b : net.buffers()) add(*b.second);
    return h;
}

}  // namespace lvoaug
