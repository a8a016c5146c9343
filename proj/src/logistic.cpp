#include "factoropt/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "factoropt/error.hpp"

namespace factoropt {

void validate(const TrainParams& p) {
    if (!(p.tolerance > 0.0)) throw validation_error("tolerance must be positive");
    if (p.max_iterations < 1) throw validation_error("max_iterations must be at least 1");
    if (!(p.l2 >= 0.0) || !std::isfinite(p.l2)) throw validation_error("l2 strength must be >= 0");
    if (!(p.step_scale > 0.0 && p.step_scale < 2.0)) throw validation_error("step_scale must lie in (0,2)");
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

// log(1 + e^z)
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// Loss and gradient for z = a + sum_j b_j (x_j - shift_j). With shift = 0 this
// is the model's own parameterization.
LossGradient loss_grad(double a, std::span<const double> b, std::span<const double> shift,
                       const Dataset& data, double l2) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    LossGradient out;
    out.gradient.assign(d + 1, 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = data.row(i);
        double z = a;
        for (std::size_t j = 0; j < d; ++j) z += b[j] * (x[j] - shift[j]);
        const double y = data.outcome(i);
        loss += softplus(z) - y * z;
        const double r = sigmoid(z) - y;
        out.gradient[0] += r;
        for (std::size_t j = 0; j < d; ++j) out.gradient[j + 1] += r * (x[j] - shift[j]);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    loss *= inv_n;
    for (auto& g : out.gradient) g *= inv_n;
    double pen = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        pen += b[j] * b[j];
        out.gradient[j + 1] += l2 * b[j];
    }
    out.loss = loss + 0.5 * l2 * pen;
    return out;
}

double norm(std::span<const double> v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

LossGradient logistic_loss_and_gradient(double intercept, std::span<const double> coef,
                                        const Dataset& data, double l2) {
    if (data.rows() == 0) throw validation_error("logistic loss on empty data");
    if (coef.size() != data.cols()) throw validation_error("coefficient count does not match data");
    if (!std::isfinite(intercept) || !std::isfinite(l2) ||
        !std::all_of(coef.begin(), coef.end(), [](double c) { return std::isfinite(c); }))
        throw numeric_error("non-finite logistic parameters");
    const std::vector<double> zero(data.cols(), 0.0);
    return loss_grad(intercept, coef, zero, data, l2);
}

LogisticModel fit_logistic(const Dataset& train, const TrainParams& params) {
    validate(params);
    const std::size_t n = train.rows();
    const std::size_t d = train.cols();
    if (n == 0) throw validation_error("logistic regression on empty data");

    // Descent runs on mean-centered features. The penalty only touches the
    // slopes, so this is the same problem with a shifted intercept and far
    // better conditioning than raw 1..9 levels.
    std::vector<double> center(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) center[j] += train.at(i, j);
    for (auto& c : center) c /= static_cast<double>(n);

    // Curvature bound: the logistic Hessian is at most 0.25 * X'X/n, which is
    // block diagonal after centering (1 for the intercept, the covariance for
    // the slopes). The top covariance eigenvalue comes from power iteration,
    // padded by 10% since the estimate approaches it from below.
    std::vector<double> cov(d * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = train.row(i);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) cov[j * d + k] += (x[j] - center[j]) * (x[k] - center[k]);
    }
    for (auto& c : cov) c /= static_cast<double>(n);
    double top = 0.0;
    if (d > 0) {
        std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d))), w(d);
        for (int rep = 0; rep < 200; ++rep) {
            for (std::size_t j = 0; j < d; ++j)
                w[j] = std::inner_product(v.begin(), v.end(), cov.begin() + static_cast<std::ptrdiff_t>(j * d), 0.0);
            const double wn = norm(w);
            top = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
            if (wn == 0.0) break;
            for (std::size_t j = 0; j < d; ++j) v[j] = w[j] / wn;
        }
    }
    const double lipschitz = 0.25 * std::max(1.0, 1.1 * top) + params.l2;
    const double step = params.step_scale / lipschitz;

    double a = 0.0;
    std::vector<double> b(d, 0.0);
    std::vector<double> orig_grad(d + 1);

    LogisticModel model;
    model.l2 = params.l2;
    LossGradient cur = loss_grad(a, b, center, train, params.l2);

    auto original_gradient_norm = [&](const LossGradient& lg) {
        orig_grad[0] = lg.gradient[0];
        for (std::size_t j = 0; j < d; ++j) orig_grad[j + 1] = lg.gradient[j + 1] + center[j] * lg.gradient[0];
        return norm(orig_grad);
    };

    std::size_t it = 0;
    double gnorm = original_gradient_norm(cur);
    while (gnorm >= params.tolerance && it < params.max_iterations) {
        if (!std::isfinite(cur.loss)) throw numeric_error("logistic regression diverged");
        a -= step * cur.gradient[0];
        for (std::size_t j = 0; j < d; ++j) b[j] -= step * cur.gradient[j + 1];
        cur = loss_grad(a, b, center, train, params.l2);
        ++it;
        gnorm = original_gradient_norm(cur);
    }
    if (!std::isfinite(cur.loss)) throw numeric_error("logistic regression diverged");

    model.coef = b;
    model.intercept = a - std::inner_product(b.begin(), b.end(), center.begin(), 0.0);
    model.iterations = it;
    model.final_loss = cur.loss;
    model.final_grad_norm = gnorm;
    model.converged = gnorm < params.tolerance;
    if (!std::isfinite(model.intercept) ||
        !std::all_of(model.coef.begin(), model.coef.end(), [](double c) { return std::isfinite(c); }))
        throw numeric_error("logistic regression produced non-finite coefficients");
    return model;
}

double lr_linear_predictor(const LogisticModel& model, std::span<const int> s) {
    if (s.size() != model.coef.size())
        throw validation_error("allocation has " + std::to_string(s.size()) + " levels, model expects " +
                               std::to_string(model.coef.size()));
    double z = model.intercept;
    for (std::size_t j = 0; j < s.size(); ++j) z += model.coef[j] * s[j];
    return z;
}

double lr_probability(const LogisticModel& model, std::span<const int> s, double eps) {
    return std::clamp(sigmoid(lr_linear_predictor(model, s)), eps, 1.0 - eps);
}

}  // namespace factoropt
