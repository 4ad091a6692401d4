// lvoaug command-line entry point.
//
//   lvoaug phantom gen  synthetic cohort (VMV1 volumes + manifest)
//   lvoaug count        closed-form and enumerated recombination counts
//   lvoaug recombine    one recombined epoch written to disk
//   lvoaug deform       elastically deformed copies of a cohort
//   lvoaug train        one cross-validation fold, checkpoint + history
//   lvoaug ablate       variants x augmentation flags, 5-fold CV tables
//
// Every subcommand accepts --config <json>; flags win over the file, the file
// wins over defaults. Each run writes the effective settings to
// <out>/config.json, which can be fed back through --config.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lvoaug/ablation.hpp"
#include "lvoaug/checkpoint.hpp"
#include "lvoaug/deform.hpp"
#include "lvoaug/errors.hpp"
#include "lvoaug/phantom.hpp"
#include "lvoaug/recombine.hpp"
#include "lvoaug/volume_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lvoaug;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

std::string config_scalar(const std::string& key, const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw Error("config entry '" + key + "' has an unsupported value " + v.dump());
}

// Fills options not given on the command line from a flat JSON object.
void apply_config(CLI::App* app, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot read config " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw DataError("config " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw DataError("config " + path + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        CLI::Option* opt = app->get_option_no_throw("--" + it.key());
        if (opt == nullptr || it.key() == "config" || it.key() == "help")
            throw Error("unknown config entry '" + it.key() + "' for " + app->get_name());
        if (opt->count() > 0) continue;
        if (it->is_array())
            for (const auto& v : *it) opt->add_result(config_scalar(it.key(), v));
        else
            opt->add_result(config_scalar(it.key(), *it));
        opt->run_callback();
    }
}

// Effective value of every named option of a subcommand.
json config_echo(const CLI::App* app) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
        const std::string name = opt->get_lnames()[0];
        if (name == "help" || name == "config") continue;
        if (opt->get_expected_min() == 0) {
            j[name] = opt->count() > 0 && opt->as<bool>();
        } else if (opt->count() > 0) {
            j[name] = opt->results().size() == 1 ? json(opt->results()[0]) : json(opt->results());
        } else {
            j[name] = opt->get_default_str();
        }
    }
    return j;
}

void write_echo(const fs::path& out, const CLI::App* app) {
    fs::create_directories(out);
    const json j = config_echo(app);
    std::ofstream f(out / "config.json");
    if (!f) throw DataError("cannot write " + (out / "config.json").string());
    f << j.dump(2) << '\n';
    std::cerr << "[lvoaug " << app->get_name() << "] config: " << j.dump() << '\n';
}

fs::path output_root() {
    const char* env = std::getenv("LVOAUG_OUT");
    return env && *env ? fs::path(env) : fs::path("lvoaug_out");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

std::vector<ConvBlockSpec> parse_blocks(const std::string& s) {
    std::vector<ConvBlockSpec> out;
    for (const auto& tok : split(s, ',')) {
        const auto parts = split(tok, ':');
        if (parts.size() != 2) throw Error("conv block '" + tok + "' is not channels:pool");
        out.push_back({std::stoi(parts[0]), std::stoi(parts[1])});
    }
    return out;
}

Scheme scheme_arg(const std::string& s) {
    if (s == "hemi") return Scheme::hemi;
    if (s == "subvol") return Scheme::subvol;
    throw Error("unknown scheme '" + s + "'");
}

Variant variant_arg(const std::string& s) {
    try {
        return variant_from_string(s);
    } catch (const std::exception&) {
        throw Error("unknown variant '" + s + "'");
    }
}

struct LoadedCohort {
    CohortManifest manifest;
    std::vector<BinaryVolume> heads;
    std::vector<PatientLabels> labels;
};

LoadedCohort load_cohort(const fs::path& manifest_path) {
    LoadedCohort c;
    c.manifest = load_manifest(manifest_path);
    for (std::size_t i = 0; i < c.manifest.patients.size(); ++i) {
        BinaryVolume v = read_vmv(c.manifest.volume_path(i));
        if (v.frame() != Frame::whole_head || v.channels() != 1)
            throw DataError("patient " + c.manifest.patients[i].id + " is not a 1-channel whole-head volume");
        c.heads.push_back(std::move(v));
        c.labels.push_back(c.manifest.patients[i].labels);
    }
    if (c.heads.empty()) throw DataError("cohort " + manifest_path.string() + " has no patients");
    return c;
}

void guard_output(const fs::path& out, const fs::path& input_manifest) {
    if (input_manifest.empty()) throw Error("--cohort is required");
    std::error_code ec;
    if (fs::exists(out) && fs::equivalent(out, input_manifest.parent_path().empty() ? "." : input_manifest.parent_path(), ec))
        throw Error("output directory must differ from the input cohort directory");
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Round-trip precision for double defaults in the config echo.
CLI::Option* exact(CLI::Option* opt, double v) {
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return opt->default_str(buf);
}

// Shared training and deformation settings.
struct TrainArgs {
    double lr = 1e-5;
    int batch = 6;
    int patience = 100;
    int max_epochs = 1000;
    int downsample = 4;
    std::string conv_blocks = "4:2,8:2,16:2";
    int feature_len = 64;
    int anchors_hemi = 6;
    int anchors_subvol = 4;
    double d_max = 20.0;
    int repetitions = 10;
    bool online_deform = false;
    int folds = 5;
    bool no_stratify = false;
    std::uint64_t seed = 0;

    void add(CLI::App* app) {
        exact(app->add_option("--lr", lr, "Adam learning rate"), lr);
        app->add_option("--batch", batch, "batch size");
        app->add_option("--patience", patience, "early-stopping patience (epochs)");
        app->add_option("--max-epochs", max_epochs, "epoch budget");
        app->add_option("--downsample", downsample, "max-pool factor applied to inputs");
        app->add_option("--conv-blocks", conv_blocks, "encoder blocks as channels:pool,...");
        app->add_option("--feature-len", feature_len, "encoder feature length");
        app->add_option("--anchors-hemi", anchors_hemi, "deformation anchors per axis for hemispheres");
        app->add_option("--anchors-subvol", anchors_subvol, "deformation anchors per axis for subvolumes");
        exact(app->add_option("--d-max", d_max, "maximum displacement (voxels)"), d_max);
        app->add_option("--repetitions", repetitions, "deformed copies per member");
        app->add_flag("--online-deform", online_deform, "draw a fresh field per sample instead of stored copies");
        app->add_option("--folds", folds, "cross-validation folds");
        app->add_flag("--no-stratify", no_stratify, "do not stratify folds by global class");
        app->add_option("--seed", seed, "master seed");
    }

    AblationSettings settings() const {
        AblationSettings s;
        s.folds = folds;
        s.stratify = !no_stratify;
        s.seed = seed;
        s.train.adam.learning_rate = lr;
        s.train.batch_size = batch;
        s.train.early_stop_patience = patience;
        s.train.max_epochs = max_epochs;
        s.train.validate();
        s.conv_blocks = parse_blocks(conv_blocks);
        s.feature_len = feature_len;
        s.downsample = downsample;
        s.hemisphere_deform = {anchors_hemi, d_max, repetitions, 0};
        s.subvolume_deform = {anchors_subvol, d_max, repetitions, 0};
        s.hemisphere_deform.validate();
        s.subvolume_deform.validate();
        s.online_deform = online_deform;
        return s;
    }
};

// ---- phantom gen ----

struct PhantomArgs {
    PhantomSpec spec;
    std::string out;
};

int cmd_phantom(const CLI::App* app, const PhantomArgs& a) {
    a.spec.validate();
    write_echo(a.out, app);
    const CohortManifest m = write_cohort(a.out, a.spec);
    const CohortStats st = cohort_stats(m);
    std::cout << "wrote " << st.patients << " patients (positive ratio " << fmt_g(st.positive_ratio) << ") to "
              << (fs::path(a.out) / "manifest.json").string() << '\n';
    return 0;
}

// ---- count ----

struct CountArgs {
    int patients = 151;
    double positive_ratio = 0.67;
    std::string scheme = "both";
    std::string out;
};

int cmd_count(const CLI::App* app, const CountArgs& a) {
    if (a.patients < 1) throw Error("--patients must be >= 1");
    if (!(a.positive_ratio >= 0 && a.positive_ratio <= 1)) throw Error("--positive-ratio must lie in [0, 1]");
    std::vector<Scheme> schemes;
    if (a.scheme == "both") schemes = {Scheme::hemi, Scheme::subvol};
    else schemes = {scheme_arg(a.scheme)};
    write_echo(a.out, app);
    const CohortStats st{a.patients, a.positive_ratio};
    const double positives = a.positive_ratio * a.patients;
    const bool integral = std::abs(positives - std::round(positives)) < 1e-9;
    for (Scheme s : schemes) {
        const double closed = s == Scheme::hemi ? count_hemi_recombinations(st) : count_subvol_recombinations(st);
        std::string enumerated = "n/a";
        const double stacks = std::pow(2.0 * a.patients, s == Scheme::hemi ? 2 : 4);
        if (integral && stacks <= 2e8)
            enumerated = std::to_string(
                enumerate_admissible(a.patients, static_cast<int>(std::lround(positives)), s));
        std::cout << to_string(s) << " closed_form " << fmt_g(closed) << " enumerated " << enumerated << '\n';
    }
    return 0;
}

// ---- recombine ----

struct RecombineArgs {
    std::string cohort;
    std::string scheme = "hemi";
    std::string variant;  // defaults by scheme
    std::uint64_t seed = 0;
    std::string out;
};

json labels_json(const SampleLabels& l) {
    auto t = [](const ClassTriple& c) { return json::array({int(c.no_lvo), int(c.left), int(c.right)}); };
    return {{"global", t(l.global)}, {"ica", t(l.ica)}, {"mca", t(l.mca)}};
}

int cmd_recombine(const CLI::App* app, const RecombineArgs& a) {
    const Scheme scheme = scheme_arg(a.scheme);
    const Variant variant =
        a.variant.empty() ? (scheme == Scheme::hemi ? Variant::h_stack : Variant::im_stack) : variant_arg(a.variant);
    if (scheme == Scheme::subvol && variant != Variant::im_stack)
        throw Error("subvolume recombination feeds the im_stack variant only");
    guard_output(a.out, a.cohort);
    const LoadedCohort c = load_cohort(a.cohort);
    write_echo(a.out, app);

    const EpochPlan plan = plan_epoch(c.labels, scheme, a.seed);
    std::vector<PatientVolumes> vols;
    for (const auto& h : c.heads) vols.push_back(ingest(h));

    fs::create_directories(fs::path(a.out) / "samples");
    auto ref = [&](const MemberRef& m) {
        return json{{"patient", c.manifest.patients[static_cast<std::size_t>(m.patient)].id},
                    {"side", std::string(to_string(m.side))}};
    };
    json samples = json::array();
    for (std::size_t k = 0; k < plan.samples.size(); ++k) {
        const PlanEntry& e = plan.samples[k];
        const SampleStack s = realize_sample(e, vols, c.labels, variant, derive_seed(a.seed, {k}));
        json files = json::array();
        for (std::size_t v = 0; v < s.volumes.size(); ++v) {
            char name[48];
            std::snprintf(name, sizeof name, "samples/s%04zu_%zu.vmv", k, v);
            write_vmv(fs::path(a.out) / name, s.volumes[v]);
            files.push_back(name);
        }
        json members = {{"ica_left", ref(e.ica_left)}, {"ica_right", ref(e.ica_right)}};
        if (scheme == Scheme::subvol) {
            members["mca_left"] = ref(e.mca_left);
            members["mca_right"] = ref(e.mca_right);
        }
        samples.push_back({{"members", members}, {"labels", labels_json(s.labels)}, {"volumes", files}});
    }
    const json index = {{"scheme", std::string(to_string(scheme))},
                        {"variant", std::string(to_string(variant))},
                        {"seed", a.seed},
                        {"class_histogram", plan.class_histogram},
                        {"samples", samples}};
    std::ofstream(fs::path(a.out) / "epoch.json") << index.dump(2) << '\n';
    std::cout << "wrote " << plan.samples.size() << " samples, class histogram (" << plan.class_histogram[0] << ", "
              << plan.class_histogram[1] << ", " << plan.class_histogram[2] << ")\n";
    return 0;
}

// ---- deform ----

struct DeformArgs {
    std::string cohort;
    DeformSpec spec;
    bool export_fields = false;
    std::string out;
};

int cmd_deform(const CLI::App* app, const DeformArgs& a) {
    a.spec.validate();
    guard_output(a.out, a.cohort);
    const CohortManifest in = load_manifest(a.cohort);
    write_echo(a.out, app);
    const CohortManifest out = augment_dataset(in, a.spec, a.out);
    if (a.export_fields) {
        fs::create_directories(fs::path(a.out) / "fields");
        for (std::size_t i = 0; i < in.patients.size(); ++i) {
            const Shape3 shape = read_vmv(in.volume_path(i)).shape();
            for (int rep = 0; rep < a.spec.repetitions; ++rep) {
                char name[32];
                std::snprintf(name, sizeof name, "_d%02d.f32", rep);
                write_field_raw(fs::path(a.out) / "fields" / (in.patients[i].id + name),
                                sample_field(a.spec, shape, repetition_seed(a.spec, i, rep)));
            }
        }
    }
    std::cout << "wrote " << out.patients.size() << " deformed volumes to " << (fs::path(a.out) / "manifest.json").string()
              << '\n';
    return 0;
}

// ---- train ----

struct TrainCmdArgs {
    std::string cohort;
    std::string variant = "h_stack";
    std::string flags = "none";
    int fold = 0;
    TrainArgs t;
    std::string out;
};

int cmd_train(const CLI::App* app, const TrainCmdArgs& a) {
    const AblationSettings s = a.t.settings();
    const AblationRow row{variant_arg(a.variant), AugmentFlags::parse(a.flags)};
    if (a.fold < 0 || a.fold >= s.folds) throw Error("--fold must lie in [0, folds)");
    guard_output(a.out, a.cohort);
    const LoadedCohort c = load_cohort(a.cohort);
    write_echo(a.out, app);

    const auto folds = make_folds(c.labels, s.folds, s.seed, s.stratify);
    const FoldSplit& split = folds[static_cast<std::size_t>(a.fold)];
    const TrainingPool pool(c.heads, c.labels, pool_options_for({row}, s));
    NetworkConfig net;
    net.variant = row.variant;
    net.conv_blocks = s.conv_blocks;
    net.feature_len = s.feature_len;
    net.weight_init_seed = derive_seed(s.seed, {0x1417ull, static_cast<std::uint64_t>(split.fold_id)});
    TrainConfig tc = s.train;
    tc.flags = row.flags;
    tc.seed = derive_seed(s.seed, {0x7a17ull, static_cast<std::uint64_t>(split.fold_id)});
    TrainResult res = train(net, pool, split.train, split.val, tc, [](const EpochRecord& r) {
        std::cerr << "epoch " << r.epoch << " train_loss " << fmt_g(r.train_loss) << " val_auc " << fmt_g(r.val_auc_global)
                  << '\n';
    });
    write_history_csv(fs::path(a.out) / "history.csv", res.history);
    save_checkpoint(fs::path(a.out) / "checkpoint", res.network);

    const Predictions p = predict_patients(res.network, pool, split.test);
    const auto auc = head_aucs(p);
    const auto side = head_side_accuracies(p, s.gate);
    auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    const json metrics = {{"fold", split.fold_id},
                          {"best_epoch", res.best_epoch},
                          {"global_auc", num(auc[0])}, {"global_side", num(side[0])},
                          {"ica_auc", num(auc[1])},    {"ica_side", num(side[1])},
                          {"mca_auc", num(auc[2])},    {"mca_side", num(side[2])}};
    std::ofstream(fs::path(a.out) / "metrics.json") << metrics.dump(2) << '\n';
    std::cout << row.label() << " fold " << split.fold_id << ": test global AUC " << fmt_g(auc[0]) << " (best epoch "
              << res.best_epoch << ")\n";
    return 0;
}

// ---- ablate ----

struct AblateArgs {
    std::string cohort;
    std::string variants = "whole_head,h_stack,im_stack";
    std::string flags = "none,R,RD";
    bool two_logit_side = false;
    int jobs = 1;
    TrainArgs t;
    std::string out;
};

int cmd_ablate(const CLI::App* app, const AblateArgs& a) {
    AblationSettings s = a.t.settings();
    s.gate = a.two_logit_side ? SideGate::two_logit : SideGate::three_logit;
    if (a.jobs < 1) throw Error("--jobs must be >= 1");
    s.jobs = a.jobs;
    std::vector<AblationRow> rows;
    for (const auto& v : split(a.variants, ','))
        for (const auto& f : split(a.flags, ',')) rows.push_back({variant_arg(v), AugmentFlags::parse(f)});
    if (rows.empty()) throw Error("no ablation rows requested");
    for (const auto& r : rows)
        if (r.flags.mirror && r.variant != Variant::whole_head)
            throw Error("flag M applies to whole_head only (row " + r.label() + ")");
    guard_output(a.out, a.cohort);
    const LoadedCohort c = load_cohort(a.cohort);
    write_echo(a.out, app);

    const auto results = run_ablation(c.heads, c.labels, rows, s, [](const std::string& m) { std::cerr << m << '\n'; });
    write_results_csv(fs::path(a.out) / "results.csv", results);
    write_table_csv(fs::path(a.out) / "table.csv", results);
    std::size_t failed = 0;
    for (const auto& r : results) {
        std::cout << r.row.label() << ": global AUC " << fmt_g(r.mean_auc[0]) << ", side " << fmt_g(r.mean_side[0]);
        if (!r.error.empty()) std::cout << " (error: " << r.error << ')', ++failed;
        std::cout << '\n';
    }
    return failed == results.size() ? kExitData : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recombination and deformation augmentation for LVO classification on vessel-tree volumes"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    const fs::path root = output_root();

    std::map<CLI::App*, std::string> config_paths;
    auto setup = [&](CLI::App* sub, std::string& out, const std::string& name) {
        sub->add_option("--config", config_paths[sub], "JSON config file (flags take precedence)")->configurable(false);
        out = (root / name).string();
        sub->add_option("--out", out, "output directory (default $LVOAUG_OUT/" + name + ")");
    };

    PhantomArgs pa;
    auto* phantom = app.add_subcommand("phantom", "synthetic cohorts");
    phantom->require_subcommand(1);
    auto* gen = phantom->add_subcommand("gen", "generate a phantom cohort");
    setup(gen, pa.out, "phantom");
    gen->add_option("--patients", pa.spec.patients, "number of patients");
    exact(gen->add_option("--lvo-fraction", pa.spec.lvo_fraction, "fraction of LVO-positive patients"), pa.spec.lvo_fraction);
    exact(gen->add_option("--ica-only", pa.spec.region_mix.ica_only, "share of positives with ICA-only occlusion"), pa.spec.region_mix.ica_only);
    exact(gen->add_option("--mca-only", pa.spec.region_mix.mca_only, "share of positives with MCA-only occlusion"), pa.spec.region_mix.mca_only);
    exact(gen->add_option("--both", pa.spec.region_mix.both, "share of positives with ICA and MCA occlusion"), pa.spec.region_mix.both);
    exact(gen->add_option("--jitter", pa.spec.asymmetry_jitter, "left/right asymmetry jitter"), pa.spec.asymmetry_jitter);
    gen->add_option("--seed", pa.spec.seed, "generator seed");

    CountArgs ca;
    auto* count = app.add_subcommand("count", "count admissible recombinations");
    setup(count, ca.out, "count");
    count->add_option("--patients", ca.patients, "cohort size P");
    exact(count->add_option("--positive-ratio", ca.positive_ratio, "fraction r of LVO-positive patients"), ca.positive_ratio);
    count->add_option("--scheme", ca.scheme, "hemi, subvol or both");

    RecombineArgs ra;
    auto* recombine = app.add_subcommand("recombine", "write one recombined epoch");
    setup(recombine, ra.out, "recombine");
    recombine->add_option("--cohort", ra.cohort, "cohort manifest (required)");
    recombine->add_option("--scheme", ra.scheme, "hemi or subvol");
    recombine->add_option("--variant", ra.variant, "whole_head, h_stack or im_stack (default by scheme)");
    recombine->add_option("--seed", ra.seed, "epoch seed");

    DeformArgs da;
    auto* deform = app.add_subcommand("deform", "write elastically deformed copies of a cohort");
    setup(deform, da.out, "deform");
    deform->add_option("--cohort", da.cohort, "cohort manifest (required)");
    deform->add_option("--anchors", da.spec.anchors_per_axis, "anchors per axis");
    exact(deform->add_option("--d-max", da.spec.max_displacement_vox, "maximum displacement (voxels)"), da.spec.max_displacement_vox);
    deform->add_option("--repetitions", da.spec.repetitions, "deformed copies per volume");
    deform->add_option("--seed", da.spec.seed, "field seed");
    deform->add_flag("--export-fields", da.export_fields, "also write dense fields as float32 triples");

    TrainCmdArgs ta;
    auto* trainc = app.add_subcommand("train", "train and test one cross-validation fold");
    setup(trainc, ta.out, "train");
    trainc->add_option("--cohort", ta.cohort, "cohort manifest (required)");
    trainc->add_option("--variant", ta.variant, "whole_head, h_stack or im_stack");
    trainc->add_option("--flags", ta.flags, "augmentations: none or letters from R, D, M");
    trainc->add_option("--fold", ta.fold, "fold index used for testing");
    ta.t.add(trainc);

    AblateArgs aa;
    auto* ablate = app.add_subcommand("ablate", "cross-validated ablation over variants and augmentations");
    setup(ablate, aa.out, "ablate");
    ablate->add_option("--cohort", aa.cohort, "cohort manifest (required)");
    ablate->add_option("--variants", aa.variants, "comma-separated variants");
    ablate->add_option("--flags", aa.flags, "comma-separated augmentation sets");
    ablate->add_flag("--two-logit-side", aa.two_logit_side, "side accuracy gate on left/right logits only");
    ablate->add_option("--jobs", aa.jobs, "parallel fold trainings");
    aa.t.add(ablate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        for (auto& [sub, path] : config_paths)
            if (sub->parsed() && !path.empty()) apply_config(sub, path);
        if (gen->parsed()) return cmd_phantom(gen, pa);
        if (count->parsed()) return cmd_count(count, ca);
        if (recombine->parsed()) return cmd_recombine(recombine, ra);
        if (deform->parsed()) return cmd_deform(deform, da);
        if (trainc->parsed()) return cmd_train(trainc, ta);
        if (ablate->parsed()) return cmd_ablate(ablate, aa);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const FrameError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const PlanningError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const ExclusionError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const UndefinedMetricError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
