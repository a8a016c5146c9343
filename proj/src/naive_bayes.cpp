#include "factoropt/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "factoropt/error.hpp"

namespace factoropt {

NaiveBayesModel fit_naive_bayes(const Dataset& train, const NbParams& params) {
    const std::size_t n = train.rows();
    const std::size_t d = train.cols();
    const std::size_t n1 = train.positives();
    const std::size_t n0 = n - n1;
    if (n0 == 0 || n1 == 0) throw validation_error("naive Bayes needs both classes in training data");

    NaiveBayesModel m;
    m.variant = params.variant;
    m.prior = {static_cast<double>(n0) / static_cast<double>(n),
               static_cast<double>(n1) / static_cast<double>(n)};
    const std::array<std::size_t, 2> count{n0, n1};

    if (params.variant == NbVariant::categorical) {
        if (!(params.alpha > 0.0)) throw validation_error("Laplace alpha must be positive");
        m.alpha = params.alpha;
        for (int c = 0; c < 2; ++c) m.level_prob[c].assign(d * kNumLevels, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const int c = train.outcome(i);
            for (std::size_t j = 0; j < d; ++j)
                m.level_prob[c][j * kNumLevels + (train.at(i, j) - kMinLevel)] += 1.0;
        }
        for (int c = 0; c < 2; ++c)
            for (auto& p : m.level_prob[c])
                p = (p + params.alpha) / (static_cast<double>(count[c]) + kNumLevels * params.alpha);
        return m;
    }

    // largest per-feature variance over the whole training set sets the floor scale
    double max_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += train.at(i, j);
        const double mu = s / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) ss += (train.at(i, j) - mu) * (train.at(i, j) - mu);
        max_var = std::max(max_var, ss / static_cast<double>(n));
    }
    m.var_floor = params.var_smoothing * (max_var + 1.0);
    if (!(m.var_floor > 0.0)) throw validation_error("variance smoothing must be positive");

    for (int c = 0; c < 2; ++c) {
        m.mean[c].assign(d, 0.0);
        m.var[c].assign(d, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) m.mean[train.outcome(i)][j] += train.at(i, j);
    for (int c = 0; c < 2; ++c)
        for (auto& mu : m.mean[c]) mu /= static_cast<double>(count[c]);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = train.outcome(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = train.at(i, j) - m.mean[c][j];
            m.var[c][j] += dv * dv;
        }
    }
    for (int c = 0; c < 2; ++c)
        for (auto& v : m.var[c]) v = std::max(v / static_cast<double>(count[c]), m.var_floor);
    return m;
}

std::array<double, 2> nb_class_posteriors(const NaiveBayesModel& model, std::span<const int> s) {
    const std::size_t d = model.dims();
    if (s.size() != d)
        throw validation_error("allocation has " + std::to_string(s.size()) + " levels, model expects " +
                               std::to_string(d));
    std::array<double, 2> log_joint{};
    for (int c = 0; c < 2; ++c) {
        double lj = std::log(model.prior[c]);
        if (model.variant == NbVariant::gaussian) {
            for (std::size_t j = 0; j < d; ++j) {
                const double var = model.var[c][j];
                const double dv = s[j] - model.mean[c][j];
                lj += -0.5 * std::log(2.0 * std::numbers::pi * var) - dv * dv / (2.0 * var);
            }
        } else {
            for (std::size_t j = 0; j < d; ++j) {
                if (!valid_level(s[j])) throw validation_error("level outside {1..9}");
                lj += std::log(model.level_prob[c][j * kNumLevels + (s[j] - kMinLevel)]);
            }
        }
        log_joint[c] = lj;
    }
    const double top = std::max(log_joint[0], log_joint[1]);
    const double e0 = std::exp(log_joint[0] - top);
    const double e1 = std::exp(log_joint[1] - top);
    const double z = e0 + e1;
    return {e0 / z, e1 / z};
}

double nb_posterior(const NaiveBayesModel& model, std::span<const int> s, double eps) {
    return std::clamp(nb_class_posteriors(model, s)[1], eps, 1.0 - eps);
}

}  // namespace factoropt
