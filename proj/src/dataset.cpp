#include "factoropt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "factoropt/error.hpp"
#include "factoropt/random.hpp"

namespace factoropt {

void validate(const OutcomePolicy& policy) {
    if (policy.threshold < 2 || policy.threshold > kMaxLevel)
        throw validation_error("outcome threshold " + std::to_string(policy.threshold) +
                               " outside {2..9}");
}

Dataset::Dataset(const FactorCatalog& catalog, std::vector<int> levels, std::vector<int> outcome,
                 Provenance provenance)
    : catalog_(&catalog),
      levels_(std::move(levels)),
      outcome_(std::move(outcome)),
      provenance_(provenance) {
    if (levels_.size() != outcome_.size() * catalog.size())
        throw validation_error("level matrix does not match outcome count");
    for (int v : levels_)
        if (!valid_level(v)) throw validation_error("level " + std::to_string(v) + " outside {1..9}");
    for (int y : outcome_)
        if (y != 0 && y != 1) throw validation_error("outcome must be 0 or 1");
}

std::size_t Dataset::positives() const {
    return static_cast<std::size_t>(std::count(outcome_.begin(), outcome_.end(), 1));
}

void Dataset::set_effort(std::vector<int> effort) {
    if (effort.size() != levels_.size()) throw validation_error("effort matrix shape mismatch");
    for (int v : effort)
        if (!valid_level(v)) throw validation_error("effort level outside {1..9}");
    effort_ = std::move(effort);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<int> lv;
    std::vector<int> y;
    std::vector<int> ef;
    lv.reserve(indices.size() * cols());
    for (auto i : indices) {
        auto r = row(i);
        lv.insert(lv.end(), r.begin(), r.end());
        y.push_back(outcome_[i]);
        if (effort_)
            ef.insert(ef.end(), effort_->begin() + static_cast<std::ptrdiff_t>(i * cols()),
                      effort_->begin() + static_cast<std::ptrdiff_t>((i + 1) * cols()));
    }
    Dataset out(*catalog_, std::move(lv), std::move(y), provenance_);
    if (effort_) out.set_effort(std::move(ef));
    return out;
}

Dataset build_dataset(const std::vector<SurveyRecord>& records, const FactorCatalog& catalog,
                      const OutcomePolicy& policy) {
    validate(policy);
    const std::size_t d = catalog.size();
    std::vector<int> levels;
    std::vector<int> y;
    levels.reserve(records.size() * d);
    const bool with_effort =
        !records.empty() && std::all_of(records.begin(), records.end(),
                                        [](const SurveyRecord& r) { return r.effort.has_value(); });
    std::vector<int> effort;
    for (const auto& r : records) {
        if (r.ratings.size() != d)
            throw validation_error("respondent '" + r.respondent_id + "' is missing factor ratings");
        levels.insert(levels.end(), r.ratings.begin(), r.ratings.end());
        if (!valid_level(r.familiarity))
            throw validation_error("respondent '" + r.respondent_id + "' has familiarity outside {1..9}");
        y.push_back(r.familiarity >= policy.threshold ? 1 : 0);
        if (with_effort) {
            if (r.effort->size() != d)
                throw validation_error("respondent '" + r.respondent_id + "' is missing effort ratings");
            effort.insert(effort.end(), r.effort->begin(), r.effort->end());
        }
    }
    Dataset ds(catalog, std::move(levels), std::move(y), Provenance::loaded);
    if (with_effort) ds.set_effort(std::move(effort));
    return ds;
}

std::vector<DescriptiveRow> descriptive_stats(const Dataset& dataset, SdConvention sd) {
    const std::size_t n = dataset.rows();
    if (n < 2) throw validation_error("descriptive statistics need at least 2 rows");
    std::vector<DescriptiveRow> out;
    for (std::size_t j = 0; j < dataset.cols(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += dataset.at(i, j);
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dv = dataset.at(i, j) - mean;
            ss += dv * dv;
        }
        const double denom = sd == SdConvention::sample ? static_cast<double>(n - 1)
                                                        : static_cast<double>(n);
        out.push_back({j, mean, std::sqrt(ss / denom), n});
    }
    return out;
}

// --- synthesis -------------------------------------------------------------

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct Moments {
    double mean;
    double sd;
};

Moments pmf_moments(const std::vector<double>& pmf) {
    double m = 0.0;
    for (int k = 0; k < kNumLevels; ++k) m += pmf[k] * (k + kMinLevel);
    double v = 0.0;
    for (int k = 0; k < kNumLevels; ++k) v += pmf[k] * (k + kMinLevel - m) * (k + kMinLevel - m);
    return {m, std::sqrt(std::max(v, 0.0))};
}

std::vector<double> point_mass(int level) {
    std::vector<double> pmf(kNumLevels, 0.0);
    pmf[level - kMinLevel] = 1.0;
    return pmf;
}

}  // namespace

std::vector<double> discretized_normal_pmf(double location, double scale) {
    if (!(scale > 0.0) || !std::isfinite(location)) throw numeric_error("invalid pmf parameters");
    std::vector<double> pmf(kNumLevels);
    double total = 0.0;
    for (int k = 0; k < kNumLevels; ++k) {
        const double lo = (k + kMinLevel - 0.5 - location) / scale;
        const double hi = (k + kMinLevel + 0.5 - location) / scale;
        // difference on the tail that keeps precision
        pmf[k] = lo > 0 ? normal_cdf(-lo) - normal_cdf(-hi) : normal_cdf(hi) - normal_cdf(lo);
        total += pmf[k];
    }
    if (!(total > 0.0)) {
        const int nearest = static_cast<int>(std::clamp(std::lround(location), 1L, 9L));
        return point_mass(nearest);
    }
    for (auto& p : pmf) p /= total;
    return pmf;
}

std::vector<double> fit_level_pmf(const FactorTarget& target) {
    const double m = target.mean;
    const double s = target.sd;
    if (!std::isfinite(m) || !std::isfinite(s) || s < 0.0)
        throw validation_error("synthesis target must be finite with sd >= 0");
    if (m < kMinLevel || m > kMaxLevel)
        throw validation_error("synthesis target mean outside [1,9]");
    if (s == 0.0) {
        if (m != std::round(m))
            throw validation_error("sd 0 requires an integer mean, got " + std::to_string(m));
        return point_mass(static_cast<int>(m));
    }
    // No distribution on {1..9} has a larger variance than the two-point one at 1 and 9.
    if (s * s > (m - kMinLevel) * (kMaxLevel - m))
        throw validation_error("infeasible synthesis target: sd " + std::to_string(s) +
                               " too large for mean " + std::to_string(m));

    double loc = m;
    double scale = s;
    constexpr double tol = 1e-10;
    for (int it = 0; it < 20000; ++it) {
        const auto pmf = discretized_normal_pmf(loc, scale);
        const auto got = pmf_moments(pmf);
        if (std::abs(got.mean - m) < tol && std::abs(got.sd - s) < tol) return pmf;
        loc += m - got.mean;
        if (got.sd > 0.0) scale *= s / got.sd;
        else scale *= 2.0;
        loc = std::clamp(loc, -50.0, 60.0);
        scale = std::clamp(scale, 1e-6, 1e3);
    }
    throw validation_error("infeasible synthesis target: no discretized bell shape has mean " +
                           std::to_string(m) + " and sd " + std::to_string(s));
}

SynthesisSpec replication_synthesis_spec(std::uint64_t seed) {
    SynthesisSpec spec;
    // Reference per-factor means and standard deviations, default catalog order.
    spec.targets = {
        {5.261, 1.272}, {5.047, 1.349}, {5.023, 1.411}, {5.007, 1.353}, {4.888, 1.415},
        {4.881, 1.542}, {4.746, 1.528}, {4.738, 1.529}, {4.563, 1.597}, {5.373, 1.312},
        {5.265, 1.197}, {5.163, 1.442}, {5.079, 1.371}, {5.071, 1.415}, {5.063, 1.372},
        {5.017, 1.439}, {4.984, 1.379}, {4.825, 1.497}, {4.603, 1.580},
    };
    spec.n_pos = 90;
    spec.n_neg = 36;
    spec.seed = seed;
    return spec;
}

SynthesisSpec load_synthesis_spec(std::string_view json_text, const FactorCatalog& catalog,
                                  std::uint64_t default_seed) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("synthesis spec: ") + e.what());
    }
    try {
        SynthesisSpec spec;
        const auto& targets = doc.at("targets");
        for (const auto& f : catalog.factors()) {
            if (!targets.contains(f.id))
                throw validation_error("synthesis spec has no target for factor '" + f.id + "'");
            const auto& t = targets.at(f.id);
            spec.targets.push_back({t.at("mean").get<double>(), t.at("sd").get<double>()});
        }
        spec.n_pos = doc.at("n_pos").get<std::size_t>();
        spec.n_neg = doc.at("n_neg").get<std::size_t>();
        spec.seed = doc.value("seed", default_seed);
        return spec;
    } catch (const json::exception& e) {
        throw parse_error(std::string("synthesis spec: ") + e.what());
    }
}

namespace {

// Level counts for n draws: floor(n * p_k) plus one each for the largest
// remainders (ties to the lower level) until the counts sum to n.
std::vector<std::size_t> quota_counts(const std::vector<double>& pmf, std::size_t n) {
    std::vector<std::size_t> counts(kNumLevels);
    std::vector<std::pair<double, int>> rema;
    std::size_t total = 0;
    for (int k = 0; k < kNumLevels; ++k) {
        const double exact = pmf[k] * static_cast<double>(n);
        counts[k] = static_cast<std::size_t>(std::floor(exact));
        total += counts[k];
        rema.emplace_back(exact - std::floor(exact), k);
    }
    std::stable_sort(rema.begin(), rema.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; total < n; ++i, ++total) ++counts[rema[i % rema.size()].second];
    return counts;
}

}  // namespace

Dataset synthesize_dataset(const FactorCatalog& catalog, const SynthesisSpec& spec) {
    const std::size_t d = catalog.size();
    const std::size_t n = spec.size();
    if (spec.targets.size() != d)
        throw validation_error("synthesis spec has " + std::to_string(spec.targets.size()) +
                               " targets for " + std::to_string(d) + " factors");
    if (n == 0) throw validation_error("synthesis spec requests zero rows");

    Rng rng(spec.seed);
    std::vector<int> levels(n * d);
    std::vector<int> column(n);
    for (std::size_t j = 0; j < d; ++j) {
        const auto pmf = fit_level_pmf(spec.targets[j]);
        const auto counts = quota_counts(pmf, n);
        std::size_t pos = 0;
        for (int k = 0; k < kNumLevels; ++k)
            for (std::size_t c = 0; c < counts[k]; ++c) column[pos++] = k + kMinLevel;
        shuffle(column.begin(), column.end(), rng);
        for (std::size_t i = 0; i < n; ++i) levels[i * d + j] = column[i];
    }

    std::vector<int> y(n, 0);
    std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(spec.n_pos), 1);
    shuffle(y.begin(), y.end(), rng);
    return Dataset(catalog, std::move(levels), std::move(y), Provenance::synthetic);
}

// --- split -----------------------------------------------------------------

std::pair<std::size_t, std::size_t> stratified_train_counts(std::size_t n_neg, std::size_t n_pos,
                                                            double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw validation_error("split ratio must lie in (0,1)");
    constexpr double eps = 1e-9;
    const std::array<std::size_t, 2> n{n_neg, n_pos};
    std::array<std::size_t, 2> take{};
    std::array<double, 2> rem{};
    for (int c = 0; c < 2; ++c) {
        const double exact = static_cast<double>(n[c]) * ratio;
        take[c] = static_cast<std::size_t>(std::floor(exact + eps));
        rem[c] = std::max(0.0, exact - static_cast<double>(take[c]));
    }
    const auto target =
        static_cast<std::size_t>(std::floor(static_cast<double>(n_neg + n_pos) * ratio + 0.5 + eps));
    std::array<bool, 2> bumped{false, false};
    while (take[0] + take[1] < target) {
        int pick = -1;
        for (int c = 0; c < 2; ++c) {
            if (bumped[c] || take[c] >= n[c]) continue;
            if (pick < 0 || rem[c] > rem[pick] + eps ||
                (std::abs(rem[c] - rem[pick]) <= eps && n[c] > n[pick]))
                pick = c;
        }
        if (pick < 0) break;
        ++take[pick];
        bumped[pick] = true;
    }
    return {take[0], take[1]};
}

Split stratified_split(const Dataset& dataset, double ratio, std::uint64_t seed) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < dataset.rows(); ++i) by_class[dataset.outcome(i)].push_back(i);
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < 2)
            throw validation_error("class " + std::to_string(c) + " has fewer than 2 members");

    const auto [k0, k1] = stratified_train_counts(by_class[0].size(), by_class[1].size(), ratio);
    Rng rng(seed);
    std::vector<std::size_t> train, test;
    const std::array<std::size_t, 2> k{k0, k1};
    for (int c = 0; c < 2; ++c) {
        auto idx = by_class[c];
        shuffle(idx.begin(), idx.end(), rng);
        train.insert(train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k[c]));
        test.insert(test.end(), idx.begin() + static_cast<std::ptrdiff_t>(k[c]), idx.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {dataset.subset(train), dataset.subset(test)};
}

}  // namespace factoropt
