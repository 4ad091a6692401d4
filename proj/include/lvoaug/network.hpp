#pragma once
// Three input-feeding topologies over one or two convolutional encoders:
//
//   whole_head  1-channel whole head          -> encoder -> 3 heads
//   h_stack     2-channel hemisphere stack    -> encoder -> 3 heads
//   im_stack    2-channel ICA stack           -> encoder A -+-> global head (A ++ B)
//               2-channel MCA stack           -> encoder B -+   ica head (A), mca head (B)
//
// Each head is a dense layer followed by batch normalization and emits three
// logits (no LVO, left, right). Logits are ordered global, ica, mca.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lvoaug/errors.hpp"
#include "lvoaug/layers.hpp"
#include "lvoaug/random.hpp"
#include "lvoaug/recombine.hpp"

namespace lvoaug {

struct ConvBlockSpec {
    int out_channels = 8;
    int downsample = 2;  // max-pool factor after the block; 1 = none
    bool operator==(const ConvBlockSpec&) const = default;
};

struct EncoderConfig {
    std::vector<ConvBlockSpec> conv_blocks{{4, 2}, {8, 2}, {16, 2}};
    int feature_len = 64;
    int input_channels = 2;
    std::uint64_t weight_init_seed = 0;
};

struct NetworkConfig {
    Variant variant = Variant::h_stack;
    std::vector<ConvBlockSpec> conv_blocks{{4, 2}, {8, 2}, {16, 2}};
    int feature_len = 64;
    std::uint64_t weight_init_seed = 0;

    int input_channels() const { return variant == Variant::whole_head ? 1 : 2; }
    int encoder_count() const { return variant == Variant::im_stack ? 2 : 1; }
    EncoderConfig encoder(int i) const {
        return {conv_blocks, feature_len, input_channels(),
                derive_seed(weight_init_seed, {0xe0ull, static_cast<std::uint64_t>(i)})};
    }
};

constexpr int kHeads = 3;
constexpr int kLogits = 9;

template <typename S>
class Encoder {
public:
    struct Cache {
        std::vector<typename Conv3d<S>::Cache> conv;
        std::vector<Grid<S>> relu_out;
        std::vector<typename MaxPool3d<S>::Cache> pool;
        typename GlobalMaxPool<S>::Cache global;
    };

    Encoder() = default;
    explicit Encoder(const EncoderConfig& cfg) : cfg_(cfg) {
        if (cfg.feature_len < 1) throw Error("feature_len must be >= 1");
        int in = cfg.input_channels;
        for (const auto& b : cfg.conv_blocks) {
            if (b.out_channels < 1 || b.downsample < 1) throw Error("invalid conv block");
            convs_.emplace_back(in, b.out_channels);
            pools_.emplace_back(b.downsample);
            in = b.out_channels;
        }
        // Final block lifts to the feature length before global max pooling.
        convs_.emplace_back(in, cfg.feature_len);
        pools_.emplace_back(1);
        Rng rng(cfg.weight_init_seed);
        for (auto& c : convs_) {
            std::normal_distribution<double> n(0.0, std::sqrt(2.0 / c.fan_in()));
            c.weight = c.weight.unaryExpr([&](S) { return static_cast<S>(n(rng)); });
        }
    }

    const EncoderConfig& config() const { return cfg_; }
    int feature_len() const { return cfg_.feature_len; }

    Eigen::Matrix<S, Eigen::Dynamic, 1> forward(const Grid<S>& input, Cache& cache) const {
        cache.conv.resize(convs_.size());
        cache.relu_out.resize(convs_.size());
        cache.pool.resize(convs_.size());
        Grid<S> x;
        for (std::size_t i = 0; i < convs_.size(); ++i) {
            Grid<S> h = convs_[i].forward(i == 0 ? input : x, cache.conv[i]);
            Relu<S>::forward(h);
            cache.relu_out[i] = h;
            x = pools_[i].factor() > 1 ? pools_[i].forward(h, cache.pool[i]) : std::move(h);
        }
        return GlobalMaxPool<S>::forward(x, cache.global);
    }

    void backward(const Cache& cache, const Eigen::Matrix<S, Eigen::Dynamic, 1>& grad_features) {
        Grid<S> g = GlobalMaxPool<S>::backward(cache.global, grad_features);
        for (std::size_t k = convs_.size(); k-- > 0;) {
            if (pools_[k].factor() > 1) g = pools_[k].backward(cache.pool[k], g);
            Relu<S>::backward(cache.relu_out[k], g);
            g = convs_[k].backward(cache.conv[k], g, k > 0);
        }
    }

    std::vector<Conv3d<S>>& convs() { return convs_; }
    const std::vector<Conv3d<S>>& convs() const { return convs_; }

    void params(const std::string& prefix, std::vector<Param<S>>& out) {
        for (std::size_t i = 0; i < convs_.size(); ++i) {
            const std::string p = prefix + "conv" + std::to_string(i) + ".";
            out.push_back({p + "weight", &convs_[i].weight, &convs_[i].grad_weight});
            out.push_back({p + "bias", &convs_[i].bias, &convs_[i].grad_bias});
        }
    }

private:
    EncoderConfig cfg_;
    std::vector<Conv3d<S>> convs_;
    std::vector<MaxPool3d<S>> pools_;
};

template <typename S>
struct Head {
    Dense<S> dense;
    BatchNorm<S> norm;

    Head() = default;
    Head(int in, Rng& rng) : dense(in, 3), norm(3) {
        std::normal_distribution<double> n(0.0, std::sqrt(2.0 / in));
        dense.weight = dense.weight.unaryExpr([&](S) { return static_cast<S>(n(rng)); });
    }
};

// One network input: a single grid, or ICA then MCA grids for im_stack.
template <typename S>
using ModelInput = std::vector<Grid<S>>;

template <typename S>
class Network {
public:
    struct Cache {
        std::vector<std::vector<typename Encoder<S>::Cache>> encoder;  // [sample][encoder]
        std::array<MatrixX<S>, kHeads> head_in;
        std::array<typename BatchNorm<S>::Cache, kHeads> norm;
    };

    Network() = default;
    explicit Network(const NetworkConfig& cfg) : cfg_(cfg) {
        for (int e = 0; e < cfg.encoder_count(); ++e) encoders_.emplace_back(cfg.encoder(e));
        Rng rng(derive_seed(cfg.weight_init_seed, {0x4eadull}));
        const int f = cfg.feature_len;
        const int global_in = cfg.variant == Variant::im_stack ? 2 * f : f;
        heads_[0] = Head<S>(global_in, rng);
        heads_[1] = Head<S>(f, rng);
        heads_[2] = Head<S>(f, rng);
    }

    const NetworkConfig& config() const { return cfg_; }
    int head_input_len(int h) const { return static_cast<int>(heads_[static_cast<std::size_t>(h)].dense.weight.cols()); }

    // Logits (9 x batch). Training mode uses batch statistics in the heads.
    MatrixX<S> forward(const std::vector<ModelInput<S>>& batch, bool training, Cache& cache) {
        const auto b = static_cast<Eigen::Index>(batch.size());
        const int f = cfg_.feature_len;
        const int ne = cfg_.encoder_count();
        MatrixX<S> feats(static_cast<Eigen::Index>(f) * ne, b);
        cache.encoder.assign(batch.size(), std::vector<typename Encoder<S>::Cache>(static_cast<std::size_t>(ne)));
        for (Eigen::Index s = 0; s < b; ++s) {
            const auto& in = batch[static_cast<std::size_t>(s)];
            check_input(in);
            for (int e = 0; e < ne; ++e)
                feats.block(static_cast<Eigen::Index>(e) * f, s, f, 1) =
                    encoders_[static_cast<std::size_t>(e)].forward(in[static_cast<std::size_t>(e)],
                                                                  cache.encoder[static_cast<std::size_t>(s)][static_cast<std::size_t>(e)]);
        }
        cache.head_in[0] = feats;
        cache.head_in[1] = feats.topRows(f);
        cache.head_in[2] = feats.bottomRows(f);
        MatrixX<S> logits(kLogits, b);
        for (std::size_t h = 0; h < kHeads; ++h) {
            const MatrixX<S> z = heads_[h].dense.forward(cache.head_in[h]);
            logits.middleRows(static_cast<Eigen::Index>(3 * h), 3) = heads_[h].norm.forward(z, training, cache.norm[h]);
        }
        return logits;
    }

    MatrixX<S> predict(const std::vector<ModelInput<S>>& batch) {
        Cache cache;
        return forward(batch, false, cache);
    }

    // Accumulates gradients of the loss whose logit gradient is dlogits.
    void backward(const Cache& cache, const MatrixX<S>& dlogits) {
        const Eigen::Index b = dlogits.cols();
        const int f = cfg_.feature_len;
        const int ne = cfg_.encoder_count();
        MatrixX<S> dfeats = MatrixX<S>::Zero(static_cast<Eigen::Index>(f) * ne, b);
        for (std::size_t h = 0; h < kHeads; ++h) {
            const MatrixX<S> dz = heads_[h].norm.backward(cache.norm[h], dlogits.middleRows(static_cast<Eigen::Index>(3 * h), 3));
            const MatrixX<S> dx = heads_[h].dense.backward(cache.head_in[h], dz);
            if (h == 0) dfeats += dx;
            else if (h == 1) dfeats.topRows(f) += dx;
            else dfeats.bottomRows(f) += dx;
        }
        for (Eigen::Index s = 0; s < b; ++s)
            for (int e = 0; e < ne; ++e)
                encoders_[static_cast<std::size_t>(e)].backward(cache.encoder[static_cast<std::size_t>(s)][static_cast<std::size_t>(e)],
                                                               dfeats.block(static_cast<Eigen::Index>(e) * f, s, f, 1));
    }

    std::vector<Param<S>> params() {
        std::vector<Param<S>> out;
        for (std::size_t e = 0; e < encoders_.size(); ++e) encoders_[e].params("enc" + std::to_string(e) + ".", out);
        static constexpr const char* names[kHeads] = {"head_global.", "head_ica.", "head_mca."};
        for (std::size_t h = 0; h < kHeads; ++h) {
            auto& hd = heads_[h];
            out.push_back({std::string(names[h]) + "dense.weight", &hd.dense.weight, &hd.dense.grad_weight});
            out.push_back({std::string(names[h]) + "dense.bias", &hd.dense.bias, &hd.dense.grad_bias});
            out.push_back({std::string(names[h]) + "norm.gamma", &hd.norm.gamma, &hd.norm.grad_gamma});
            out.push_back({std::string(names[h]) + "norm.beta", &hd.norm.beta, &hd.norm.grad_beta});
        }
        return out;
    }

    // Non-trainable state saved with checkpoints.
    std::vector<std::pair<std::string, MatrixX<S>*>> buffers() {
        std::vector<std::pair<std::string, MatrixX<S>*>> out;
        static constexpr const char* names[kHeads] = {"head_global.", "head_ica.", "head_mca."};
        for (std::size_t h = 0; h < kHeads; ++h) {
            out.emplace_back(std::string(names[h]) + "norm.running_mean", &heads_[h].norm.running_mean);
            out.emplace_back(std::string(names[h]) + "norm.running_var", &heads_[h].norm.running_var);
        }
        return out;
    }

    std::size_t parameter_count() {
        std::size_t n = 0;
        for (const auto& p : params()) n += static_cast<std::size_t>(p.value->size());
        return n;
    }

    void zero_grad() {
        for (auto& p : params()) p.grad->setZero();
    }

    std::vector<Encoder<S>>& encoders() { return encoders_; }
    std::array<Head<S>, kHeads>& heads() { return heads_; }

    template <typename Other>
    Network<Other> cast() {
        Network<Other> out(cfg_);
        auto src = params();
        auto dst = out.params();
        for (std::size_t i = 0; i < src.size(); ++i) *dst[i].value = src[i].value->template cast<Other>();
        auto sb = buffers();
        auto db = out.buffers();
        for (std::size_t i = 0; i < sb.size(); ++i) *db[i].second = sb[i].second->template cast<Other>();
        return out;
    }

private:
    void check_input(const ModelInput<S>& in) const {
        if (static_cast<int>(in.size()) != cfg_.encoder_count())
            throw FrameError(std::string(to_string(cfg_.variant)) + " expects " + std::to_string(cfg_.encoder_count()) +
                             " input grid(s)");
        for (const auto& g : in) {
            if (g.channels() != cfg_.input_channels())
                throw FrameError(std::string(to_string(cfg_.variant)) + " expects " +
                                 std::to_string(cfg_.input_channels()) + "-channel input");
            if (g.shape.x < 1 || g.shape.y < 1 || g.shape.z < 1 ||
                static_cast<std::size_t>(g.voxels()) != g.shape.voxels())
                throw FrameError("input grid shape does not match its data");
        }
    }

    NetworkConfig cfg_;
    std::vector<Encoder<S>> encoders_;
    std::array<Head<S>, kHeads> heads_;
};

// Mean binary cross-entropy over all logits, in the stable logit form:
// max(z, 0) - z t + log(1 + exp(-|z|)). Writes d loss / d logits into grad.
template <typename S>
S bce_with_logits(const MatrixX<S>& logits, const MatrixX<S>& targets, MatrixX<S>* grad = nullptr) {
    const S n = static_cast<S>(logits.size());
    S total = 0;
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
        const S z = logits(i), t = targets(i);
        total += std::max(z, S(0)) - z * t + std::log1p(std::exp(-std::abs(z)));
    }
    if (grad) {
        *grad = logits.unaryExpr([](S z) { return S(1) / (S(1) + std::exp(-z)); });
        *grad = (*grad - targets) / n;
    }
    return total / n;
}

// Targets (9 x batch) from sample labels.
template <typename S>
MatrixX<S> targets_matrix(const std::vector<SampleLabels>& labels) {
    MatrixX<S> t(kLogits, static_cast<Eigen::Index>(labels.size()));
    for (std::size_t s = 0; s < labels.size(); ++s) {
        const ClassTriple* tr[kHeads] = {&labels[s].global, &labels[s].ica, &labels[s].mca};
        for (int h = 0; h < kHeads; ++h) {
            const auto a = tr[h]->as_array();
            for (int k = 0; k < 3; ++k) t(3 * h + k, static_cast<Eigen::Index>(s)) = static_cast<S>(a[static_cast<std::size_t>(k)]);
        }
    }
    return t;
}

}  // namespace lvoaug
