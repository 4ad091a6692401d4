#pragma once
// Central finite-difference check of the network gradients in double
// precision, shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lvoaug/network.hpp"

namespace gradcheck {

using lvoaug::Grid;
using lvoaug::MatrixX;
using lvoaug::ModelInput;
using lvoaug::Network;
using lvoaug::NetworkConfig;
using lvoaug::Variant;

struct Result {
    double max_rel_err = 0.0;
    int checked = 0;
    int skipped = 0;  // coordinates sitting on a kink (max-pool switch, ReLU edge)
    std::size_t parameters = 0;
};

inline NetworkConfig toy_config(Variant v) {
    NetworkConfig c;
    c.variant = v;
    c.conv_blocks = {{2, 2}};
    c.feature_len = 4;
    c.weight_init_seed = 17;
    return c;
}

inline Grid<double> random_grid(lvoaug::Shape3 s, int channels, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    Grid<double> g(s, channels);
    g.data = g.data.unaryExpr([&](double) { return u(rng); });
    return g;
}

// Toy inputs: 8^3 whole head, 8^3 hemisphere stack, two 8^3 subvolume stacks.
// Each sample gets its own intensity scale; otherwise global max pooling makes
// the samples' features nearly equal and batch norm divides by a tiny spread.
inline std::vector<ModelInput<double>> toy_batch(Variant v, int batch, std::mt19937_64& rng) {
    std::vector<ModelInput<double>> out;
    for (int b = 0; b < batch; ++b) {
        const double k = 1.0 + b;
        switch (v) {
            case Variant::whole_head: out.push_back({random_grid({8, 8, 8}, 1, rng, k)}); break;
            case Variant::h_stack: out.push_back({random_grid({8, 8, 8}, 2, rng, k)}); break;
            case Variant::im_stack:
                out.push_back({random_grid({8, 8, 8}, 2, rng, k), random_grid({8, 8, 8}, 2, rng, k)});
                break;
        }
    }
    return out;
}

inline MatrixX<double> random_targets(int batch, std::mt19937_64& rng) {
    MatrixX<double> t = MatrixX<double>::Zero(lvoaug::kLogits, batch);
    std::uniform_int_distribution<int> cls(0, 2);
    for (int b = 0; b < batch; ++b)
        for (int h = 0; h < lvoaug::kHeads; ++h) t(3 * h + cls(rng), b) = 1.0;
    return t;
}

inline double loss(Network<double>& net, const std::vector<ModelInput<double>>& batch, const MatrixX<double>& t) {
    typename Network<double>::Cache cache;
    return lvoaug::bce_with_logits<double>(net.forward(batch, true, cache), t);
}

// Relative error |a - n| / max(|a|, |n|, 1e-6) over random parameter
// coordinates, central step h. A coordinate whose central differences at h and
// h/2 disagree has a kink (ReLU edge, max-pool switch) inside the stencil and
// is replaced by a fresh draw.
inline Result check(Variant v, int coords, std::uint64_t seed, double h = 1e-4) {
    std::mt19937_64 rng(seed);
    Network<double> net(toy_config(v));
    const int batch = 3;
    const auto inputs = toy_batch(v, batch, rng);
    const MatrixX<double> targets = random_targets(batch, rng);

    typename Network<double>::Cache cache;
    MatrixX<double> dlogits;
    lvoaug::bce_with_logits<double>(net.forward(inputs, true, cache), targets, &dlogits);
    net.zero_grad();
    net.backward(cache, dlogits);

    auto params = net.params();
    std::vector<std::pair<std::size_t, Eigen::Index>> all;
    for (std::size_t p = 0; p < params.size(); ++p)
        for (Eigen::Index i = 0; i < params[p].value->size(); ++i) all.emplace_back(p, i);

    Result r;
    r.parameters = all.size();
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    int attempts = 0;
    while (r.checked < coords && attempts < 20 * coords) {
        ++attempts;
        const auto [p, i] = all[pick(rng)];
        double& w = params[p].value->data()[i];
        const double analytic = params[p].grad->data()[i];
        const double saved = w;
        auto central = [&](double step) {
            w = saved + step;
            const double lp = loss(net, inputs, targets);
            w = saved - step;
            const double lm = loss(net, inputs, targets);
            w = saved;
            return (lp - lm) / (2 * step);
        };
        const double numeric = central(h), half = central(h / 2);
        if (std::abs(numeric - half) > 1e-6 * std::max({std::abs(numeric), std::abs(half), 1e-6})) {
            ++r.skipped;
            continue;
        }
        const double rel = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        r.max_rel_err = std::max(r.max_rel_err, rel);
        ++r.checked;
    }
    return r;
}

}  // namespace gradcheck
