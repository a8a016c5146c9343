#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "factoropt/dataset.hpp"
#include "factoropt/random.hpp"
#include "factoropt/scorer.hpp"

namespace testsupport {

using namespace factoropt;

/// d motivator factors f0..f{d-1} in a single category "M1".
inline FactorCatalog flat_catalog(std::size_t d) {
    std::vector<FactorDef> fs;
    for (std::size_t j = 0; j < d; ++j)
        fs.push_back({"f" + std::to_string(j), "Factor " + std::to_string(j), FactorKind::motivator, "M1"});
    return FactorCatalog({{"M1", "All", FactorKind::motivator}}, std::move(fs));
}

inline Dataset random_dataset(const FactorCatalog& catalog, std::size_t n, Rng& rng) {
    const std::size_t d = catalog.size();
    std::vector<int> levels(n * d);
    std::vector<int> y(n);
    for (auto& v : levels) v = uniform_level(rng);
    for (std::size_t i = 0; i < n; ++i) y[i] = i % 3 == 0 ? 0 : 1;
    return Dataset(catalog, std::move(levels), std::move(y), Provenance::synthetic);
}

/// Random gaussian NB + logistic pair with non-trivial structure in every
/// dimension, built directly instead of trained.
inline AggregatedScorer random_scorer(std::size_t d, Rng& rng) {
    NaiveBayesModel nb;
    nb.variant = NbVariant::gaussian;
    const double p1 = 0.2 + 0.6 * uniform01(rng);
    nb.prior = {1.0 - p1, p1};
    for (int c = 0; c < 2; ++c) {
        nb.mean[c].resize(d);
        nb.var[c].resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            nb.mean[c][j] = 1.0 + 8.0 * uniform01(rng);
            nb.var[c][j] = 0.5 + 5.0 * uniform01(rng);
        }
    }
    LogisticModel lr;
    lr.coef.resize(d);
    for (auto& b : lr.coef) b = 1.2 * (uniform01(rng) - 0.5);
    lr.intercept = 2.0 * (uniform01(rng) - 0.5);
    lr.l2 = 1.0;
    lr.converged = true;
    return AggregatedScorer(std::move(nb), std::move(lr));
}

inline std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("factoropt_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string fixture(const std::string& name) { return std::string(FACTOROPT_TEST_DATA) + "/" + name; }

}  // namespace testsupport
