#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "factoropt/cost.hpp"

namespace factoropt {

struct GAParams {
    std::size_t population = 100;
    std::size_t generations = 40;
    double crossover = 0.7;
    /// Per-gene resampling probability; 1/d_s when unset.
    std::optional<double> mutation;
    std::size_t tournament = 3;
    std::size_t elites = 1;
    std::uint64_t seed = 0;
    /// Worker threads for fitness evaluation. Results do not depend on it.
    std::size_t threads = 1;

    double mutation_for(std::size_t scope_size) const {
        return mutation ? *mutation : 1.0 / static_cast<double>(scope_size);
    }
};

/// Throws validation_error for population < 2, generations < 1, probabilities
/// outside [0,1], tournament < 1 or elites > population.
void validate(const GAParams& params);

struct GAResult {
    Allocation best;
    FitnessReport best_report;
    /// Best fitness in the population after each generation.
    std::vector<double> trajectory;
    Allocation baseline;
    FitnessReport baseline_report;
    double delta_fitness = 0.0;
    GAParams params;
    std::size_t evaluations = 0;
};

/// Called after each generation with (generation index from 1, best fitness).
using GenerationCallback = std::function<void(std::size_t, double)>;

/// Integer-coded GA over {1..9}^d_s: uniform initialization with the scope
/// baseline injected as the first individual, tournament selection, uniform
/// crossover, per-gene resampling mutation and top-k elitism.
GAResult run_ga(const ProbabilityFn& probability, const Scope& scope, const GAParams& params,
                const GenerationCallback& on_generation = {});

inline constexpr std::size_t kMaxExhaustiveScope = 6;

struct ExhaustiveResult {
    Allocation best;
    FitnessReport report;
    std::size_t evaluated = 0;
};

/// Enumerates all 9^d_s allocations (d_s <= 6). Ties go to the
/// lexicographically smallest level vector.
ExhaustiveResult exhaustive_optimum(const ProbabilityFn& probability, const Scope& scope);

/// Strict ordering used for every tie-break: higher fitness first, then the
/// lexicographically smaller level vector.
bool fitter(double fa, const std::vector<int>& a, double fb, const std::vector<int>& b);

}  // namespace factoropt
