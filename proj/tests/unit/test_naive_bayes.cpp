#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "factoropt/error.hpp"
#include "factoropt/naive_bayes.hpp"
#include "test_support.hpp"

using namespace factoropt;
using Catch::Approx;

namespace {

double normal_pdf(double x, double m, double v) {
    return std::exp(-(x - m) * (x - m) / (2.0 * v)) / std::sqrt(2.0 * std::numbers::pi * v);
}

}  // namespace

TEST_CASE("single feature gaussian posterior matches the closed form", "[nb]") {
    const auto cat = testsupport::flat_catalog(1);
    // class 0: {2, 4}, class 1: {6, 7, 8}
    const Dataset d(cat, {2, 6, 4, 7, 8}, {0, 1, 0, 1, 1}, Provenance::loaded);
    const auto m = fit_naive_bayes(d);
    CHECK(m.prior[0] == Approx(0.4));
    CHECK(m.mean[0][0] == Approx(3.0));
    CHECK(m.mean[1][0] == Approx(7.0));
    CHECK(m.var[0][0] == Approx(1.0));
    CHECK(m.var[1][0] == Approx(2.0 / 3.0));

    for (int s = 1; s <= 9; ++s) {
        const double a = 0.4 * normal_pdf(s, 3.0, 1.0);
        const double b = 0.6 * normal_pdf(s, 7.0, 2.0 / 3.0);
        const std::vector<int> x{s};
        CHECK(nb_class_posteriors(m, x)[1] == Approx(b / (a + b)).epsilon(1e-10));
    }
}

TEST_CASE("posteriors normalize and survive extreme separation", "[nb]") {
    const auto cat = testsupport::flat_catalog(19);
    Rng rng(5);
    const auto d = testsupport::random_dataset(cat, 60, rng);
    const auto m = fit_naive_bayes(d);
    for (int t = 0; t < 500; ++t) {
        std::vector<int> s(19);
        for (auto& v : s) v = uniform_level(rng);
        const auto p = nb_class_posteriors(m, s);
        CHECK(std::abs(p[0] + p[1] - 1.0) < 1e-12);
        const double c = nb_posterior(m, s, 1e-6);
        CHECK(c >= 1e-6);
        CHECK(c <= 1.0 - 1e-6);
    }

    // tiny variances push the linear-space likelihoods to zero
    NaiveBayesModel sharp = m;
    for (int c = 0; c < 2; ++c)
        for (auto& v : sharp.var[c]) v = 1e-6;
    const std::vector<int> s(19, 9);
    const auto p = nb_class_posteriors(sharp, s);
    CHECK(std::isfinite(p[0]));
    CHECK(std::abs(p[0] + p[1] - 1.0) < 1e-12);
}

TEST_CASE("constant columns get the variance floor", "[nb]") {
    const auto cat = testsupport::flat_catalog(2);
    const Dataset d(cat, {5, 1, 5, 9, 5, 2, 5, 8}, {0, 0, 1, 1}, Provenance::loaded);
    const auto m = fit_naive_bayes(d);
    CHECK(m.var_floor > 0.0);
    CHECK(m.var[0][0] == m.var_floor);
    // largest column variance is 12.5 (class-pooled column 1: 1,9,2,8)
    CHECK(m.var_floor == Approx(1e-9 * (12.5 + 1.0)));
    const std::vector<int> s{5, 5};
    CHECK(std::isfinite(nb_posterior(m, s, 1e-6)));
}

TEST_CASE("categorical variant uses Laplace smoothing", "[nb]") {
    const auto cat = testsupport::flat_catalog(1);
    const Dataset d(cat, {1, 1, 2, 9}, {0, 0, 0, 1}, Provenance::loaded);
    NbParams p;
    p.variant = NbVariant::categorical;
    const auto m = fit_naive_bayes(d, p);
    CHECK(m.dims() == 1);
    // class 0: counts 2 at level 1, 1 at level 2 -> (2+1)/(3+9), (1+1)/12, 1/12
    CHECK(m.level_prob[0][0] == Approx(3.0 / 12.0));
    CHECK(m.level_prob[0][1] == Approx(2.0 / 12.0));
    CHECK(m.level_prob[0][5] == Approx(1.0 / 12.0));
    CHECK(m.level_prob[1][8] == Approx(2.0 / 10.0));
    const std::vector<int> s{1};
    const double a = 0.75 * 3.0 / 12.0, b = 0.25 * 1.0 / 10.0;
    CHECK(nb_class_posteriors(m, s)[1] == Approx(b / (a + b)).epsilon(1e-12));
}

TEST_CASE("naive bayes input errors", "[nb][errors]") {
    const auto cat = testsupport::flat_catalog(1);
    const Dataset one_class(cat, {1, 2, 3}, {1, 1, 1}, Provenance::loaded);
    CHECK_THROWS_AS(fit_naive_bayes(one_class), Error);
    const Dataset d(cat, {1, 2, 3, 4}, {0, 1, 0, 1}, Provenance::loaded);
    const auto m = fit_naive_bayes(d);
    const std::vector<int> wrong{1, 2};
    CHECK_THROWS_AS(nb_class_posteriors(m, wrong), Error);
}
