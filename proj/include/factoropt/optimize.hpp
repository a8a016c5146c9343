#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "factoropt/dataset.hpp"
#include "factoropt/ga.hpp"

namespace factoropt {

enum class BaselineSource { ratings, effort };

/// Rounded (half-up) column means clipped to {1..9}, full catalog length.
/// BaselineSource::effort reads the dataset's effort matrix instead.
std::vector<int> baseline_levels(const Dataset& dataset,
                                 BaselineSource source = BaselineSource::ratings);

/// baseline_levels restricted to the scope's optimized factors.
Allocation baseline_allocation(const Dataset& dataset, const Scope& scope,
                               BaselineSource source = BaselineSource::ratings);

/// All factors in scope, baseline = mean-rounded levels.
GAResult optimize_global(const ProbabilityFn& probability, const std::vector<int>& baseline,
                         const GAParams& params);

struct ThemeSummaryRow {
    std::string category_id;
    std::string theme;  // "<id>_<name>"
    std::size_t num_factors = 0;
    double ga_p_agg = 0.0;
    double ga_norm_cost = 0.0;
    double ga_fitness = 0.0;
    double delta_fitness = 0.0;
};

struct CategoryRun {
    std::string category_id;
    Scope scope;
    GAResult result;
};

struct CategoryOptimization {
    /// Sorted by delta_fitness descending (ties keep catalog order).
    std::vector<ThemeSummaryRow> rows;
    /// Catalog category order.
    std::vector<CategoryRun> runs;
};

/// One GA run per category: the category's factors are optimized, all other
/// factors stay at the global baseline, cost is normalized over the category.
/// Run i uses seed derive_seed(params.seed, i).
CategoryOptimization optimize_per_category(const ProbabilityFn& probability,
                                           const FactorCatalog& catalog,
                                           const std::vector<int>& baseline,
                                           const GAParams& params);

}  // namespace factoropt
