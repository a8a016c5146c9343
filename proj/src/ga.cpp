#include "factoropt/ga.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "factoropt/error.hpp"
#include "factoropt/random.hpp"

namespace factoropt {

void validate(const GAParams& p) {
    if (p.population < 2) throw validation_error("population must be at least 2");
    if (p.generations < 1) throw validation_error("generations must be at least 1");
    if (!(p.crossover >= 0.0 && p.crossover <= 1.0))
        throw validation_error("crossover probability outside [0,1]");
    if (p.mutation && !(*p.mutation >= 0.0 && *p.mutation <= 1.0))
        throw validation_error("mutation probability outside [0,1]");
    if (p.tournament < 1) throw validation_error("tournament size must be at least 1");
    if (p.elites > p.population) throw validation_error("more elites than individuals");
    if (p.threads < 1) throw validation_error("threads must be at least 1");
}

bool fitter(double fa, const std::vector<int>& a, double fb, const std::vector<int>& b) {
    if (fa != fb) return fa > fb;
    return a < b;
}

namespace {

using Chromosome = std::vector<int>;

struct ChromosomeHash {
    std::size_t operator()(const Chromosome& c) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (int v : c) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
        return h;
    }
};

// Memoizing evaluator. Lookups and inserts happen on the driver thread only;
// cache misses of one generation may be scored by several workers.
class Evaluator {
public:
    Evaluator(const ProbabilityFn& probability, const Scope& scope, std::size_t threads)
        : probability_(probability), scope_(scope), threads_(threads) {}

    std::vector<FitnessReport> operator()(const std::vector<Chromosome>& pop) {
        std::vector<FitnessReport> out(pop.size());
        std::vector<std::size_t> misses;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            auto it = cache_.find(pop[i]);
            if (it != cache_.end()) out[i] = it->second;
            else misses.push_back(i);
        }
        // a chromosome may appear several times among the misses; scoring twice is harmless
        auto work = [&](std::size_t begin, std::size_t end) {
            std::vector<int> scratch;
            for (std::size_t k = begin; k < end; ++k)
                out[misses[k]] = fitness_of(probability_, pop[misses[k]], scope_, scratch);
        };
        const std::size_t workers = std::min(threads_, misses.size());
        if (workers <= 1) {
            work(0, misses.size());
        } else {
            std::vector<std::jthread> pool;
            const std::size_t chunk = (misses.size() + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t b = w * chunk;
                const std::size_t e = std::min(misses.size(), b + chunk);
                if (b < e) pool.emplace_back(work, b, e);
            }
        }
        for (auto i : misses)
            if (cache_.emplace(pop[i], out[i]).second) ++evaluations_;
        return out;
    }

    std::size_t evaluations() const { return evaluations_; }

private:
    const ProbabilityFn& probability_;
    const Scope& scope_;
    std::size_t threads_;
    std::unordered_map<Chromosome, FitnessReport, ChromosomeHash> cache_;
    std::size_t evaluations_ = 0;
};

std::size_t best_index(const std::vector<Chromosome>& pop, const std::vector<FitnessReport>& fit) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (fitter(fit[i].fitness, pop[i], fit[best].fitness, pop[best])) best = i;
    return best;
}

}  // namespace

GAResult run_ga(const ProbabilityFn& probability, const Scope& scope, const GAParams& params,
                const GenerationCallback& on_generation) {
    validate(params);
    validate(scope);
    const std::size_t d = scope.size();
    const double p_mut = params.mutation_for(d);
    Rng rng(params.seed);
    Evaluator evaluate(probability, scope, params.threads);

    GAResult result;
    result.params = params;
    result.baseline = scope.baseline();

    std::vector<Chromosome> pop(params.population);
    pop[0] = result.baseline.levels;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        pop[i].resize(d);
        for (auto& g : pop[i]) g = uniform_level(rng);
    }
    auto fit = evaluate(pop);
    result.baseline_report = fit[0];

    Chromosome best = pop[best_index(pop, fit)];
    FitnessReport best_report = fit[best_index(pop, fit)];

    auto tournament = [&]() -> std::size_t {
        std::size_t winner = uniform_index(rng, pop.size());
        for (std::size_t k = 1; k < params.tournament; ++k) {
            const std::size_t c = uniform_index(rng, pop.size());
            if (fitter(fit[c].fitness, pop[c], fit[winner].fitness, pop[winner])) winner = c;
        }
        return winner;
    };
    auto mutate = [&](Chromosome& c) {
        for (auto& g : c)
            if (bernoulli(rng, p_mut)) g = uniform_level(rng);
    };

    std::vector<std::size_t> order(pop.size());
    for (std::size_t gen = 1; gen <= params.generations; ++gen) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(params.elites),
                          order.end(), [&](std::size_t a, std::size_t b) {
                              return fitter(fit[a].fitness, pop[a], fit[b].fitness, pop[b]);
                          });
        std::vector<Chromosome> next;
        next.reserve(pop.size());
        for (std::size_t e = 0; e < params.elites; ++e) next.push_back(pop[order[e]]);

        while (next.size() < pop.size()) {
            Chromosome a = pop[tournament()];
            Chromosome b = pop[tournament()];
            if (bernoulli(rng, params.crossover))
                for (std::size_t j = 0; j < d; ++j)
                    if (bernoulli(rng, 0.5)) std::swap(a[j], b[j]);
            mutate(a);
            mutate(b);
            next.push_back(std::move(a));
            if (next.size() < pop.size()) next.push_back(std::move(b));
        }
        pop = std::move(next);
        fit = evaluate(pop);

        const std::size_t bi = best_index(pop, fit);
        result.trajectory.push_back(fit[bi].fitness);
        if (fitter(fit[bi].fitness, pop[bi], best_report.fitness, best)) {
            best = pop[bi];
            best_report = fit[bi];
        }
        if (on_generation) on_generation(gen, fit[bi].fitness);
    }

    result.best.levels = std::move(best);
    result.best_report = best_report;
    result.delta_fitness = best_report.fitness - result.baseline_report.fitness;
    result.evaluations = evaluate.evaluations();
    return result;
}

ExhaustiveResult exhaustive_optimum(const ProbabilityFn& probability, const Scope& scope) {
    validate(scope);
    const std::size_t d = scope.size();
    if (d > kMaxExhaustiveScope)
        throw validation_error("scope too large for exhaustive search (" + std::to_string(d) + " > " +
                               std::to_string(kMaxExhaustiveScope) + " factors)");
    ExhaustiveResult out;
    std::vector<int> levels(d, kMinLevel);
    std::vector<int> scratch;
    bool first = true;
    for (;;) {
        const auto r = fitness_of(probability, levels, scope, scratch);
        ++out.evaluated;
        // lexicographic enumeration: only a strictly better value replaces the incumbent
        if (first || r.fitness > out.report.fitness) {
            out.best.levels = levels;
            out.report = r;
            first = false;
        }
        std::size_t k = d;
        while (k > 0 && levels[k - 1] == kMaxLevel) levels[--k] = kMinLevel;
        if (k == 0) break;
        ++levels[k - 1];
    }
    return out;
}

}  // namespace factoropt
