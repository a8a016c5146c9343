#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "factoropt/logistic.hpp"
#include "factoropt/naive_bayes.hpp"

namespace factoropt {

inline constexpr int kModelFormatVersion = 1;

struct ProbabilityBreakdown {
    double p_nb = 0.0;
    double p_lr = 0.0;
    double p_agg = 0.0;
};

/// Naive Bayes + logistic regression pair scoring allocations by the mean of
/// the two (clamped) probabilities.
class AggregatedScorer {
public:
    AggregatedScorer(NaiveBayesModel nb, LogisticModel lr, double clamp = 1e-6);

    const NaiveBayesModel& nb() const noexcept { return nb_; }
    const LogisticModel& lr() const noexcept { return lr_; }
    double clamp() const noexcept { return clamp_; }
    std::size_t dims() const noexcept { return lr_.coef.size(); }

    double nb_probability(std::span<const int> s) const;
    double lr_probability(std::span<const int> s) const;
    ProbabilityBreakdown breakdown(std::span<const int> s) const;
    double probability(std::span<const int> s) const { return breakdown(s).p_agg; }

private:
    void check_dims(std::span<const int> s) const;

    NaiveBayesModel nb_;
    LogisticModel lr_;
    double clamp_;
};

struct ScorerConfig {
    NbParams nb;
    TrainParams lr;
    double clamp = 1e-6;
};

/// Fits both models on the same training data.
AggregatedScorer train_scorer(const Dataset& train, const ScorerConfig& config = {});

struct EvalMetrics {
    double accuracy = 0.0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double majority_baseline = 0.0;
};

struct EvaluationReport {
    EvalMetrics nb;
    EvalMetrics lr;
    EvalMetrics aggregated;
};

/// Confusion counts at a probability threshold (predict 1 iff p >= threshold).
/// `predict` returns P(Y=1) for a row.
template <class Predict>
EvalMetrics evaluate_predictions(const Dataset& test, Predict&& predict, double threshold = 0.5) {
    EvalMetrics m;
    for (std::size_t i = 0; i < test.rows(); ++i) {
        const bool yhat = predict(test.row(i)) >= threshold;
        const bool y = test.outcome(i) == 1;
        if (yhat && y) ++m.tp;
        else if (yhat && !y) ++m.fp;
        else if (!yhat && !y) ++m.tn;
        else ++m.fn;
    }
    const double n = static_cast<double>(test.rows());
    if (test.rows() > 0) {
        m.accuracy = static_cast<double>(m.tp + m.tn) / n;
        const auto pos = static_cast<double>(test.positives());
        m.majority_baseline = std::max(pos, n - pos) / n;
    }
    return m;
}

EvaluationReport evaluate(const AggregatedScorer& scorer, const Dataset& test,
                          double threshold = 0.5);

/// Versioned JSON document with both models and the clamp.
std::string scorer_to_json(const AggregatedScorer& scorer, const FactorCatalog& catalog);
/// Throws parse_error on malformed documents and validation_error for an
/// unsupported format version or a factor list that does not match the catalog.
AggregatedScorer scorer_from_json(std::string_view text, const FactorCatalog& catalog);

}  // namespace factoropt
