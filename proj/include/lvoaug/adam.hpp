#pragma once

#include <cmath>
#include <vector>

#include "lvoaug/layers.hpp"

namespace lvoaug {

struct AdamConfig {
    double learning_rate = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Bias-corrected Adam over a fixed parameter list.
template <typename S>
class Adam {
public:
    Adam(std::vector<Param<S>> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
        for (const auto& p : params_) {
            m_.push_back(MatrixX<S>::Zero(p.value->rows(), p.value->cols()));
            v_.push_back(MatrixX<S>::Zero(p.value->rows(), p.value->cols()));
        }
    }

    void step() {
        ++t_;
        const S b1 = static_cast<S>(cfg_.beta1), b2 = static_cast<S>(cfg_.beta2);
        const S c1 = static_cast<S>(1.0 - std::pow(cfg_.beta1, t_));
        const S c2 = static_cast<S>(1.0 - std::pow(cfg_.beta2, t_));
        const S lr = static_cast<S>(cfg_.learning_rate), eps = static_cast<S>(cfg_.epsilon);
        for (std::size_t i = 0; i < params_.size(); ++i) {
            const auto& g = *params_[i].grad;
            m_[i] = b1 * m_[i] + (S(1) - b1) * g;
            v_[i] = b2 * v_[i] + (S(1) - b2) * g.cwiseProduct(g);
            params_[i].value->array() -= lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps);
        }
    }

    long steps() const { return t_; }

private:
    std::vector<Param<S>> params_;
    AdamConfig cfg_;
    std::vector<MatrixX<S>> m_, v_;
    long t_ = 0;
};

}  // namespace lvoaug
