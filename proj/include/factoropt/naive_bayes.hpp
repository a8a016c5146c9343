#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "factoropt/dataset.hpp"

namespace factoropt {

enum class NbVariant { gaussian, categorical };

struct NbParams {
    NbVariant variant = NbVariant::gaussian;
    /// Variance floor = var_smoothing * (largest feature variance + 1).
    double var_smoothing = 1e-9;
    /// Laplace pseudo-count for the categorical variant.
    double alpha = 1.0;
};

/// Two-class naive Bayes over levels. Index 0 is Y=0, index 1 is Y=1.
struct NaiveBayesModel {
    NbVariant variant = NbVariant::gaussian;
    std::array<double, 2> prior{0.5, 0.5};
    // gaussian: per-class per-feature moments
    std::array<std::vector<double>, 2> mean;
    std::array<std::vector<double>, 2> var;
    double var_floor = 1e-9;
    // categorical: per-class [feature * 9 + (level - 1)] probabilities
    std::array<std::vector<double>, 2> level_prob;
    double alpha = 1.0;

    std::size_t dims() const {
        return variant == NbVariant::gaussian ? mean[0].size() : level_prob[0].size() / kNumLevels;
    }
};

/// Empirical priors and per-class moments (population variance, floored).
/// Throws validation_error unless both classes are present.
NaiveBayesModel fit_naive_bayes(const Dataset& train, const NbParams& params = {});

/// Unclamped posteriors {P(Y=0|s), P(Y=1|s)}, evaluated in log space.
std::array<double, 2> nb_class_posteriors(const NaiveBayesModel& model, std::span<const int> s);

/// P(Y=1|s) clamped to [eps, 1-eps].
double nb_posterior(const NaiveBayesModel& model, std::span<const int> s, double eps);

}  // namespace factoropt
