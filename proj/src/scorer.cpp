#include "factoropt/scorer.hpp"

#include <cmath>

#include <json.hpp>

#include "factoropt/error.hpp"

namespace factoropt {

using nlohmann::json;

AggregatedScorer::AggregatedScorer(NaiveBayesModel nb, LogisticModel lr, double clamp)
    : nb_(std::move(nb)), lr_(std::move(lr)), clamp_(clamp) {
    if (!(clamp_ > 0.0 && clamp_ < 0.5)) throw validation_error("probability clamp must lie in (0, 0.5)");
    if (nb_.dims() != lr_.coef.size())
        throw validation_error("naive Bayes and logistic models disagree on feature count");
    if (!(nb_.prior[0] > 0.0 && nb_.prior[1] > 0.0) ||
        std::abs(nb_.prior[0] + nb_.prior[1] - 1.0) > 1e-12)
        throw validation_error("naive Bayes priors must be positive and sum to 1");
}

void AggregatedScorer::check_dims(std::span<const int> s) const {
    if (s.size() != dims())
        throw validation_error("allocation has " + std::to_string(s.size()) + " levels, scorer expects " +
                               std::to_string(dims()));
}

double AggregatedScorer::nb_probability(std::span<const int> s) const {
    check_dims(s);
    return nb_posterior(nb_, s, clamp_);
}

double AggregatedScorer::lr_probability(std::span<const int> s) const {
    check_dims(s);
    return factoropt::lr_probability(lr_, s, clamp_);
}

ProbabilityBreakdown AggregatedScorer::breakdown(std::span<const int> s) const {
    ProbabilityBreakdown b;
    b.p_nb = nb_probability(s);
    b.p_lr = lr_probability(s);
    b.p_agg = (b.p_nb + b.p_lr) / 2.0;
    return b;
}

AggregatedScorer train_scorer(const Dataset& train, const ScorerConfig& config) {
    return AggregatedScorer(fit_naive_bayes(train, config.nb), fit_logistic(train, config.lr),
                            config.clamp);
}

EvaluationReport evaluate(const AggregatedScorer& scorer, const Dataset& test, double threshold) {
    EvaluationReport r;
    r.nb = evaluate_predictions(test, [&](auto s) { return scorer.nb_probability(s); }, threshold);
    r.lr = evaluate_predictions(test, [&](auto s) { return scorer.lr_probability(s); }, threshold);
    r.aggregated = evaluate_predictions(test, [&](auto s) { return scorer.probability(s); }, threshold);
    return r;
}

std::string scorer_to_json(const AggregatedScorer& scorer, const FactorCatalog& catalog) {
    const auto& nb = scorer.nb();
    const auto& lr = scorer.lr();
    json doc;
    doc["format_version"] = kModelFormatVersion;
    doc["factors"] = json::array();
    for (const auto& f : catalog.factors()) doc["factors"].push_back(f.id);
    doc["clamp"] = scorer.clamp();

    json jnb;
    jnb["variant"] = nb.variant == NbVariant::gaussian ? "gaussian" : "categorical";
    jnb["prior"] = nb.prior;
    if (nb.variant == NbVariant::gaussian) {
        jnb["mean"] = nb.mean;
        jnb["var"] = nb.var;
        jnb["var_floor"] = nb.var_floor;
    } else {
        jnb["level_prob"] = nb.level_prob;
        jnb["alpha"] = nb.alpha;
    }
    doc["naive_bayes"] = jnb;

    doc["logistic"] = {{"intercept", lr.intercept},     {"coef", lr.coef},
                       {"l2", lr.l2},                   {"converged", lr.converged},
                       {"iterations", lr.iterations},   {"final_loss", lr.final_loss},
                       {"final_grad_norm", lr.final_grad_norm}};
    return doc.dump(2) + "\n";
}

AggregatedScorer scorer_from_json(std::string_view text, const FactorCatalog& catalog) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("model: ") + e.what());
    }
    try {
        if (doc.at("format_version").get<int>() != kModelFormatVersion)
            throw validation_error("unsupported model format version");
        const auto ids = doc.at("factors").get<std::vector<std::string>>();
        if (ids.size() != catalog.size())
            throw validation_error("model factor count does not match catalog");
        for (std::size_t j = 0; j < ids.size(); ++j)
            if (ids[j] != catalog.factors()[j].id)
                throw validation_error("model factor order does not match catalog at '" + ids[j] + "'");

        NaiveBayesModel nb;
        const auto& jnb = doc.at("naive_bayes");
        const auto variant = jnb.at("variant").get<std::string>();
        nb.prior = jnb.at("prior").get<std::array<double, 2>>();
        if (variant == "gaussian") {
            nb.variant = NbVariant::gaussian;
            nb.mean = jnb.at("mean").get<std::array<std::vector<double>, 2>>();
            nb.var = jnb.at("var").get<std::array<std::vector<double>, 2>>();
            nb.var_floor = jnb.at("var_floor").get<double>();
            for (int c = 0; c < 2; ++c) {
                if (nb.mean[c].size() != ids.size() || nb.var[c].size() != ids.size())
                    throw validation_error("naive Bayes moments have the wrong length");
                for (double v : nb.var[c])
                    if (!(v >= nb.var_floor && nb.var_floor > 0.0))
                        throw validation_error("naive Bayes variance below floor");
            }
        } else if (variant == "categorical") {
            nb.variant = NbVariant::categorical;
            nb.level_prob = jnb.at("level_prob").get<std::array<std::vector<double>, 2>>();
            nb.alpha = jnb.at("alpha").get<double>();
            for (int c = 0; c < 2; ++c)
                if (nb.level_prob[c].size() != ids.size() * kNumLevels)
                    throw validation_error("naive Bayes level table has the wrong size");
        } else {
            throw parse_error("unknown naive Bayes variant '" + variant + "'");
        }

        LogisticModel lr;
        const auto& jlr = doc.at("logistic");
        lr.intercept = jlr.at("intercept").get<double>();
        lr.coef = jlr.at("coef").get<std::vector<double>>();
        lr.l2 = jlr.at("l2").get<double>();
        lr.converged = jlr.at("converged").get<bool>();
        lr.iterations = jlr.at("iterations").get<std::size_t>();
        lr.final_loss = jlr.value("final_loss", 0.0);
        lr.final_grad_norm = jlr.value("final_grad_norm", 0.0);
        if (lr.coef.size() != ids.size()) throw validation_error("logistic coefficient count mismatch");

        return AggregatedScorer(std::move(nb), std::move(lr), doc.at("clamp").get<double>());
    } catch (const json::exception& e) {
        throw parse_error(std::string("model: ") + e.what());
    }
}

}  // namespace factoropt
