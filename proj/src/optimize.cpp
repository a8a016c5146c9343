#include "factoropt/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "factoropt/error.hpp"
#include "factoropt/random.hpp"

namespace factoropt {

std::vector<int> baseline_levels(const Dataset& dataset, BaselineSource source) {
    if (dataset.rows() == 0) throw validation_error("baseline of an empty dataset");
    const std::vector<int>* matrix = &dataset.levels();
    if (source == BaselineSource::effort) {
        if (!dataset.effort()) throw validation_error("dataset has no effort ratings");
        matrix = &*dataset.effort();
    }
    const std::size_t n = dataset.rows();
    const std::size_t d = dataset.cols();
    std::vector<int> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        long long sum = 0;
        for (std::size_t i = 0; i < n; ++i) sum += (*matrix)[i * d + j];
        // half-up on exact integer arithmetic: floor(sum / n + 1/2)
        const long long rounded = (2 * sum + static_cast<long long>(n)) / (2 * static_cast<long long>(n));
        out[j] = static_cast<int>(std::clamp<long long>(rounded, kMinLevel, kMaxLevel));
    }
    return out;
}

Allocation baseline_allocation(const Dataset& dataset, const Scope& scope, BaselineSource source) {
    const auto full = baseline_levels(dataset, source);
    Allocation a;
    for (auto j : scope.optimized) a.levels.push_back(full.at(j));
    return a;
}

GAResult optimize_global(const ProbabilityFn& probability, const std::vector<int>& baseline,
                         const GAParams& params) {
    return run_ga(probability, Scope::global(baseline), params);
}

CategoryOptimization optimize_per_category(const ProbabilityFn& probability,
                                           const FactorCatalog& catalog,
                                           const std::vector<int>& baseline,
                                           const GAParams& params) {
    if (baseline.size() != catalog.size()) throw validation_error("baseline length does not match catalog");
    CategoryOptimization out;
    const auto& cats = catalog.categories();
    for (std::size_t c = 0; c < cats.size(); ++c) {
        auto members = catalog.category_members(cats[c].id);
        if (members.empty()) throw validation_error("category '" + cats[c].id + "' has no factors");
        Scope scope = Scope::subset(std::move(members), baseline);
        GAParams p = params;
        p.seed = derive_seed(params.seed, c);
        GAResult r = run_ga(probability, scope, p);

        ThemeSummaryRow row;
        row.category_id = cats[c].id;
        row.theme = cats[c].label();
        row.num_factors = scope.size();
        row.ga_p_agg = r.best_report.p_agg;
        row.ga_norm_cost = r.best_report.c_norm;
        row.ga_fitness = r.best_report.fitness;
        row.delta_fitness = r.delta_fitness;
        out.rows.push_back(row);
        out.runs.push_back({cats[c].id, std::move(scope), std::move(r)});
    }
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const auto& a, const auto& b) {
        return a.delta_fitness > b.delta_fitness;
    });
    return out;
}

}  // namespace factoropt
