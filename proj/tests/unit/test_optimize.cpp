#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "factoropt/error.hpp"
#include "factoropt/optimize.hpp"
#include "test_support.hpp"

using namespace factoropt;

TEST_CASE("baseline rounds column means half up", "[optimize][baseline]") {
    const auto cat = testsupport::flat_catalog(4);
    // column means: 4.5, 4/3, 8.75, 2.5
    const Dataset d(cat,
                    {4, 1, 9, 2,   //
                     5, 1, 8, 3,   //
                     4, 2, 9, 2,   //
                     5, 1, 9, 3},
                    {0, 1, 0, 1}, Provenance::loaded);
    CHECK(baseline_levels(d) == std::vector<int>{5, 1, 9, 3});
    const auto scope = Scope::subset({2, 0}, std::vector<int>(4, 5));
    CHECK(baseline_allocation(d, scope).levels == std::vector<int>{9, 5});
}

TEST_CASE("baseline from effort columns", "[optimize][baseline]") {
    const auto cat = testsupport::flat_catalog(2);
    Dataset d(cat, {1, 1, 2, 2}, {0, 1}, Provenance::loaded);
    CHECK_THROWS_AS(baseline_levels(d, BaselineSource::effort), Error);
    d.set_effort({7, 3, 8, 3});
    CHECK(baseline_levels(d, BaselineSource::effort) == std::vector<int>{8, 3});
    CHECK(baseline_levels(d) == std::vector<int>{2, 2});
}

TEST_CASE("replication baseline equals rounded column means", "[optimize][baseline]") {
    const auto& cat = default_catalog();
    const auto data = synthesize_dataset(cat, replication_synthesis_spec(42));
    const auto rows = descriptive_stats(data);
    const auto base = baseline_levels(data);
    for (std::size_t j = 0; j < 19; ++j) CHECK(base[j] == static_cast<int>(std::floor(rows[j].mean + 0.5)));
}

TEST_CASE("global optimization covers every factor", "[optimize]") {
    Rng rng(6);
    const auto sc = testsupport::random_scorer(19, rng);
    const ProbabilityFn fn = [&](std::span<const int> s) { return sc.probability(s); };
    GAParams p;
    p.seed = 1;
    const auto r = optimize_global(fn, std::vector<int>(19, 5), p);
    CHECK(r.best.levels.size() == 19);
    CHECK(r.baseline_report.cost == 95);
}

TEST_CASE("per-category runs", "[optimize][category]") {
    const auto& cat = default_catalog();
    Rng rng(11);
    const auto sc = testsupport::random_scorer(19, rng);
    const ProbabilityFn fn = [&](std::span<const int> s) { return sc.probability(s); };
    const std::vector<int> base(19, 5);
    GAParams p;
    p.seed = 77;
    const auto r = optimize_per_category(fn, cat, base, p);
    REQUIRE(r.rows.size() == 8);
    REQUIRE(r.runs.size() == 8);

    std::size_t total = 0;
    for (const auto& row : r.rows) {
        total += row.num_factors;
        CHECK(std::abs(row.ga_fitness - (row.ga_p_agg - row.ga_norm_cost)) < 1e-12);
        CHECK(row.delta_fitness >= 0.0);
    }
    CHECK(total == 19);
    CHECK(std::is_sorted(r.rows.begin(), r.rows.end(),
                         [](const auto& a, const auto& b) { return a.delta_fitness > b.delta_fitness; }));

    for (std::size_t i = 0; i < 8; ++i) {
        const auto& run = r.runs[i];
        CHECK(run.category_id == cat.categories()[i].id);
        CHECK(run.scope.optimized == cat.category_members(run.category_id));
        CHECK(run.scope.context == base);
        CHECK(run.result.params.seed == derive_seed(77, i));
        // normalization over the category only
        const auto d = run.scope.size();
        CHECK(run.result.best_report.c_norm ==
              static_cast<double>(run.result.best_report.cost - static_cast<int>(d)) / (8.0 * d));
        const auto ex = exhaustive_optimum(fn, run.scope);
        CHECK(run.result.best_report.fitness <= ex.report.fitness + 1e-12);
    }
}
