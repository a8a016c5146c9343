#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "factoropt/taxonomy.hpp"

namespace factoropt {

/// P(Y=1) for a full-length level vector in catalog order.
using ProbabilityFn = std::function<double(std::span<const int>)>;

/// Levels for the optimized factors of a scope, in scope order.
struct Allocation {
    std::vector<int> levels;

    friend bool operator==(const Allocation&, const Allocation&) = default;
    friend auto operator<=>(const Allocation&, const Allocation&) = default;
};

/// The factors being optimized plus fixed levels for everything else.
///
/// `context` is a full catalog-length vector. Entries at optimized positions
/// are not used for scoring; they hold the scope's baseline allocation.
struct Scope {
    std::vector<std::size_t> optimized;
    std::vector<int> context;

    std::size_t size() const noexcept { return optimized.size(); }
    std::size_t dims() const noexcept { return context.size(); }

    /// All factors optimized; `baseline` doubles as the context.
    static Scope global(std::vector<int> baseline);
    static Scope subset(std::vector<std::size_t> optimized, std::vector<int> context);

    Allocation baseline() const;
    /// Context with the allocation written into the optimized positions.
    std::vector<int> assemble(const Allocation& allocation) const;
    void assemble_into(std::span<const int> levels, std::span<int> full) const;
};

/// Throws validation_error on an empty scope, duplicate/out-of-range indices
/// or invalid context levels.
void validate(const Scope& scope);

struct FitnessReport {
    double p_agg = 0.0;
    int cost = 0;
    double c_norm = 0.0;
    double fitness = 0.0;
};

int total_cost(const Allocation& allocation);

/// (cost - d) / (9d - d) for a scope of d factors. Throws validation_error for
/// d == 0 or a cost outside [d, 9d].
double normalized_cost(int cost, std::size_t scope_size);

/// Scores the assembled full vector; cost terms cover the scope factors only.
FitnessReport fitness(const ProbabilityFn& probability, const Allocation& allocation,
                      const Scope& scope);

/// Same as fitness() for a raw level span, reusing `scratch` as the full vector.
FitnessReport fitness_of(const ProbabilityFn& probability, std::span<const int> levels,
                         const Scope& scope, std::vector<int>& scratch);

}  // namespace factoropt
