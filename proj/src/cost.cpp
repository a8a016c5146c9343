#include "factoropt/cost.hpp"

#include <algorithm>
#include <numeric>

#include "factoropt/error.hpp"

namespace factoropt {

Scope Scope::global(std::vector<int> baseline) {
    Scope s;
    s.optimized.resize(baseline.size());
    std::iota(s.optimized.begin(), s.optimized.end(), std::size_t{0});
    s.context = std::move(baseline);
    return s;
}

Scope Scope::subset(std::vector<std::size_t> optimized, std::vector<int> context) {
    return Scope{std::move(optimized), std::move(context)};
}

Allocation Scope::baseline() const {
    Allocation a;
    a.levels.reserve(optimized.size());
    for (auto j : optimized) a.levels.push_back(context.at(j));
    return a;
}

std::vector<int> Scope::assemble(const Allocation& allocation) const {
    std::vector<int> full(context);
    assemble_into(allocation.levels, full);
    return full;
}

void Scope::assemble_into(std::span<const int> levels, std::span<int> full) const {
    if (levels.size() != optimized.size())
        throw validation_error("allocation has " + std::to_string(levels.size()) + " levels, scope has " +
                               std::to_string(optimized.size()) + " factors");
    for (std::size_t k = 0; k < optimized.size(); ++k) full[optimized[k]] = levels[k];
}

void validate(const Scope& scope) {
    if (scope.optimized.empty()) throw validation_error("scope has no factors");
    std::vector<bool> seen(scope.context.size(), false);
    for (auto j : scope.optimized) {
        if (j >= scope.context.size()) throw validation_error("scope factor index out of range");
        if (seen[j]) throw validation_error("scope lists a factor twice");
        seen[j] = true;
    }
    for (int v : scope.context)
        if (!valid_level(v)) throw validation_error("context level " + std::to_string(v) + " outside {1..9}");
}

int total_cost(const Allocation& allocation) {
    return std::accumulate(allocation.levels.begin(), allocation.levels.end(), 0);
}

double normalized_cost(int cost, std::size_t scope_size) {
    if (scope_size == 0) throw validation_error("normalized cost of an empty scope");
    const int lo = static_cast<int>(scope_size) * kMinLevel;
    const int hi = static_cast<int>(scope_size) * kMaxLevel;
    if (cost < lo || cost > hi)
        throw validation_error("cost " + std::to_string(cost) + " outside [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
    return static_cast<double>(cost - lo) / static_cast<double>(hi - lo);
}

FitnessReport fitness_of(const ProbabilityFn& probability, std::span<const int> levels,
                         const Scope& scope, std::vector<int>& scratch) {
    for (int v : levels)
        if (!valid_level(v)) throw validation_error("level " + std::to_string(v) + " outside {1..9}");
    scratch = scope.context;
    scope.assemble_into(levels, scratch);
    FitnessReport r;
    r.p_agg = probability(scratch);
    r.cost = std::accumulate(levels.begin(), levels.end(), 0);
    r.c_norm = normalized_cost(r.cost, scope.size());
    r.fitness = r.p_agg - r.c_norm;
    return r;
}

FitnessReport fitness(const ProbabilityFn& probability, const Allocation& allocation,
                      const Scope& scope) {
    std::vector<int> scratch;
    return fitness_of(probability, allocation.levels, scope, scratch);
}

}  // namespace factoropt
