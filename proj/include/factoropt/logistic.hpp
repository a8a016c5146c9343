#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "factoropt/dataset.hpp"

namespace factoropt {

struct TrainParams {
    double l2 = 1.0;
    std::size_t max_iterations = 10000;
    /// Stop when the Euclidean norm of the full gradient falls below this.
    double tolerance = 1e-8;
    /// Constant step schedule: step = step_scale / L, where L bounds the
    /// curvature of the objective on the training data. Must lie in (0, 2).
    double step_scale = 1.0;
    std::uint64_t seed = 0;
};

void validate(const TrainParams& params);

struct LogisticModel {
    double intercept = 0.0;
    std::vector<double> coef;
    double l2 = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double final_loss = 0.0;
    double final_grad_norm = 0.0;
};

struct LossGradient {
    double loss = 0.0;
    /// [d/d intercept, d/d coef_1, ..., d/d coef_d]
    std::vector<double> gradient;
};

/// Mean negative log-likelihood plus (l2/2)*||coef||^2 and its exact gradient.
/// The intercept is not penalized.
LossGradient logistic_loss_and_gradient(double intercept, std::span<const double> coef,
                                        const Dataset& data, double l2);

/// Full-batch gradient descent with a constant 1/L step. Throws
/// numeric_error if the loss becomes non-finite.
LogisticModel fit_logistic(const Dataset& train, const TrainParams& params = {});

/// Logistic function without overflow for large |z|.
double sigmoid(double z);

double lr_linear_predictor(const LogisticModel& model, std::span<const int> s);

/// sigmoid(intercept + coef . s) clamped to [eps, 1-eps].
double lr_probability(const LogisticModel& model, std::span<const int> s, double eps);

}  // namespace factoropt
