#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "factoropt/survey.hpp"
#include "factoropt/taxonomy.hpp"

namespace factoropt {

struct OutcomePolicy {
    /// y = 1 iff familiarity >= threshold. Must lie in {2..9}.
    int threshold = 7;
};

void validate(const OutcomePolicy& policy);

enum class Provenance { loaded, synthetic };

/// Row-major N x d level matrix with a binary outcome per row.
class Dataset {
public:
    Dataset(const FactorCatalog& catalog, std::vector<int> levels, std::vector<int> outcome,
            Provenance provenance);

    const FactorCatalog& catalog() const noexcept { return *catalog_; }
    std::size_t rows() const noexcept { return outcome_.size(); }
    std::size_t cols() const noexcept { return catalog_->size(); }

    std::span<const int> row(std::size_t i) const {
        return {levels_.data() + i * cols(), cols()};
    }
    int at(std::size_t i, std::size_t j) const { return levels_[i * cols() + j]; }
    int outcome(std::size_t i) const { return outcome_[i]; }

    const std::vector<int>& levels() const noexcept { return levels_; }
    const std::vector<int>& outcomes() const noexcept { return outcome_; }
    Provenance provenance() const noexcept { return provenance_; }

    std::size_t positives() const;
    std::size_t negatives() const { return rows() - positives(); }

    /// Optional effort matrix, same shape as the level matrix.
    const std::optional<std::vector<int>>& effort() const noexcept { return effort_; }
    void set_effort(std::vector<int> effort);

    /// Rows by index, in the given order.
    Dataset subset(std::span<const std::size_t> indices) const;

private:
    const FactorCatalog* catalog_;
    std::vector<int> levels_;
    std::vector<int> outcome_;
    Provenance provenance_;
    std::optional<std::vector<int>> effort_;
};

/// Throws validation_error if a record lacks a factor rating or has an
/// out-of-range level.
Dataset build_dataset(const std::vector<SurveyRecord>& records, const FactorCatalog& catalog,
                      const OutcomePolicy& policy);

enum class SdConvention { sample, population };

struct DescriptiveRow {
    std::size_t factor = 0;  // catalog index
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

/// Per-factor mean and standard deviation in catalog order. Requires N >= 2.
std::vector<DescriptiveRow> descriptive_stats(const Dataset& dataset,
                                              SdConvention sd = SdConvention::sample);

struct FactorTarget {
    double mean = 5.0;
    double sd = 1.0;
};

struct SynthesisSpec {
    std::vector<FactorTarget> targets;  // catalog order
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    std::uint64_t seed = 0;

    std::size_t size() const { return n_pos + n_neg; }
};

/// Built-in replication targets: 19 per-factor (mean, sd) pairs, 126 respondents split 90/36.
SynthesisSpec replication_synthesis_spec(std::uint64_t seed);

/// Parses `{ "targets": {"<factor_id>": {"mean", "sd"}}, "n_pos", "n_neg", "seed" }`.
/// "seed" is optional; `default_seed` is used when absent.
SynthesisSpec load_synthesis_spec(std::string_view json_text, const FactorCatalog& catalog,
                                  std::uint64_t default_seed);

/// Probability mass over {1..9} of a normal(location, scale) discretized to the
/// nearest level and truncated to [0.5, 9.5].
std::vector<double> discretized_normal_pmf(double location, double scale);

/// Location and scale whose discretized pmf has the requested mean and sd.
/// Throws validation_error when no such pmf exists.
std::vector<double> fit_level_pmf(const FactorTarget& target);

/// Fills each column with level counts proportional to fit_level_pmf(target)
/// (largest-remainder rounding), shuffled independently per column, and assigns
/// exactly n_pos positive outcomes at random rows. Deterministic in spec.seed.
Dataset synthesize_dataset(const FactorCatalog& catalog, const SynthesisSpec& spec);

struct Split {
    Dataset train;
    Dataset test;
};

/// Per-class stratified split. Train gets floor(n_c * ratio) of each class, then
/// single rows go to the class with the largest fractional remainder (ties to
/// the larger class) until train holds round(N * ratio) rows.
Split stratified_split(const Dataset& dataset, double ratio, std::uint64_t seed);

/// Per-class train sizes produced by the rule above; exposed for tests/reports.
std::pair<std::size_t, std::size_t> stratified_train_counts(std::size_t n_neg, std::size_t n_pos,
                                                            double ratio);

}  // namespace factoropt
