#include "factoropt/cli.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "factoropt/csv.hpp"
#include "factoropt/optimize.hpp"
#include "factoropt/report.hpp"
#include "factoropt/scorer.hpp"
#include "factoropt/service.hpp"

namespace factoropt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::validation: return kExitValidation;
        case ErrorKind::io: return kExitIo;
        case ErrorKind::numeric: return kExitNumeric;
        case ErrorKind::parse: return kExitParse;
    }
    return 1;
}

namespace {

struct RunConfig {
    std::string input;
    std::string synthesize;
    std::string catalog;
    int threshold = 7;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::string mode = "both";
    std::size_t pop = 100;
    std::size_t generations = 40;
    std::string model;
    double ratio = 0.8;
    double l2 = 1.0;
    std::string nb_variant = "gaussian";
    double clamp = 1e-6;
    bool population_sd = false;
    bool baseline_from_effort = false;
    std::size_t threads = 1;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t max_jobs = 1;
};

struct LoadedData {
    std::unique_ptr<FactorCatalog> catalog;
    std::optional<Dataset> dataset;
    std::size_t rows_read = 0;
    std::size_t parse_dropped = 0;
    std::size_t no_consent = 0;
    std::size_t straight_lining = 0;
};

std::uint64_t require_seed(const RunConfig& cfg, const char* what) {
    if (!cfg.seed) throw validation_error(std::string("--seed is required ") + what);
    return *cfg.seed;
}

LoadedData load_data(const RunConfig& cfg, std::ostream& out) {
    if (cfg.input.empty() == cfg.synthesize.empty())
        throw validation_error("exactly one of --input and --synthesize is required");
    validate(OutcomePolicy{cfg.threshold});

    LoadedData d;
    d.catalog = std::make_unique<FactorCatalog>(load_catalog_file(cfg.catalog));

    if (!cfg.synthesize.empty()) {
        const auto seed = require_seed(cfg, "with --synthesize");
        SynthesisSpec spec = cfg.synthesize == "replication"
                                 ? replication_synthesis_spec(seed)
                                 : load_synthesis_spec(read_text_file(cfg.synthesize), *d.catalog, seed);
        if (cfg.synthesize == "replication" && d.catalog->size() != spec.targets.size())
            throw validation_error("built-in synthesis targets need the default catalog");
        d.dataset.emplace(synthesize_dataset(*d.catalog, spec));
        d.rows_read = spec.size();
        out << "synthesized " << spec.size() << " rows (" << spec.n_pos << " positive, " << spec.n_neg
            << " negative), seed " << spec.seed << "\n";
        return d;
    }

    auto loaded = load_survey_file(cfg.input, *d.catalog);
    d.rows_read = loaded.report.rows_read;
    d.parse_dropped = loaded.report.dropped.size();
    auto cleaned = clean(loaded.records);
    d.no_consent = cleaned.report.count(kRuleNoConsent);
    d.straight_lining = cleaned.report.count(kRuleStraightLining);
    out << "rows read: " << d.rows_read << "\n";
    out << "rows dropped while parsing: " << d.parse_dropped << "\n";
    for (const auto& issue : loaded.report.dropped)
        out << "  line " << issue.line << " (" << issue.respondent_id << "): " << issue.reason << ", "
            << issue.detail << "\n";
    out << "excluded (" << kRuleNoConsent << "): " << d.no_consent << "\n";
    out << "excluded (" << kRuleStraightLining << "): " << d.straight_lining << "\n";
    out << cleaned.retained.size() << " retained\n";
    if (cleaned.retained.empty()) throw validation_error("no valid responses remain after cleaning (empty dataset)");
    d.dataset.emplace(build_dataset(cleaned.retained, *d.catalog, OutcomePolicy{cfg.threshold}));
    return d;
}

ScorerConfig scorer_config(const RunConfig& cfg, std::uint64_t seed) {
    ScorerConfig sc;
    if (cfg.nb_variant == "gaussian") sc.nb.variant = NbVariant::gaussian;
    else if (cfg.nb_variant == "categorical") sc.nb.variant = NbVariant::categorical;
    else throw validation_error("--nb-variant must be gaussian or categorical");
    sc.lr.l2 = cfg.l2;
    sc.lr.seed = seed;
    sc.clamp = cfg.clamp;
    return sc;
}

json metrics_json(const EvalMetrics& m) {
    return {{"accuracy", m.accuracy}, {"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn},
            {"majority_baseline", m.majority_baseline}};
}

struct Trained {
    AggregatedScorer scorer;
    json metrics;
};

Trained train_pipeline(const Dataset& data, const RunConfig& cfg, std::uint64_t seed, std::ostream& out) {
    const Split split = stratified_split(data, cfg.ratio, seed);
    AggregatedScorer scorer = train_scorer(split.train, scorer_config(cfg, seed));
    const auto eval = evaluate(scorer, split.test);
    json m;
    m["format_version"] = kModelFormatVersion;
    m["split"] = {{"ratio", cfg.ratio},
                  {"seed", seed},
                  {"train_pos", split.train.positives()},
                  {"train_neg", split.train.negatives()},
                  {"test_pos", split.test.positives()},
                  {"test_neg", split.test.negatives()}};
    m["naive_bayes"] = metrics_json(eval.nb);
    m["logistic"] = metrics_json(eval.lr);
    m["aggregated"] = metrics_json(eval.aggregated);
    m["logistic_converged"] = scorer.lr().converged;
    m["logistic_iterations"] = scorer.lr().iterations;
    out << "train " << split.train.positives() << "/" << split.train.negatives() << ", test "
        << split.test.positives() << "/" << split.test.negatives() << " (pos/neg)\n";
    out << "accuracy: nb " << csv::format_fixed(eval.nb.accuracy, 3) << ", lr "
        << csv::format_fixed(eval.lr.accuracy, 3) << ", aggregated "
        << csv::format_fixed(eval.aggregated.accuracy, 3) << "; majority baseline "
        << csv::format_fixed(eval.aggregated.majority_baseline, 3) << "\n";
    if (!scorer.lr().converged)
        out << "warning: logistic regression stopped after " << scorer.lr().iterations
            << " iterations without reaching the gradient tolerance\n";
    return {std::move(scorer), std::move(m)};
}

fs::path ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create '" + dir + "': " + ec.message());
    return dir;
}

AggregatedScorer obtain_scorer(const LoadedData& d, const RunConfig& cfg, std::uint64_t seed,
                               std::ostream& out) {
    if (!cfg.model.empty()) return scorer_from_json(read_text_file(cfg.model), *d.catalog);
    auto t = train_pipeline(*d.dataset, cfg, seed, out);
    const fs::path dir = ensure_dir(cfg.out);
    write_text_file(dir / "scorer.json", scorer_to_json(t.scorer, *d.catalog));
    write_text_file(dir / "metrics.json", t.metrics.dump(2) + "\n");
    return std::move(t.scorer);
}

SdConvention sd_convention(const RunConfig& cfg) {
    return cfg.population_sd ? SdConvention::population : SdConvention::sample;
}

int cmd_describe(const RunConfig& cfg, std::ostream& out) {
    auto d = load_data(cfg, out);
    const auto rows = descriptive_stats(*d.dataset, sd_convention(cfg));
    const fs::path dir = ensure_dir(cfg.out);
    write_text_file(dir / kDescriptivesFile, descriptives_csv(rows, *d.catalog));
    out << "outcome: " << d.dataset->positives() << " positive, " << d.dataset->negatives() << " negative\n";
    out << "wrote " << (dir / kDescriptivesFile).string() << "\n";
    return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
    auto d = load_data(cfg, out);
    const std::uint64_t seed = cfg.seed.value_or(0);
    auto t = train_pipeline(*d.dataset, cfg, seed, out);
    const fs::path dir = ensure_dir(cfg.out);
    write_text_file(dir / "scorer.json", scorer_to_json(t.scorer, *d.catalog));
    write_text_file(dir / "metrics.json", t.metrics.dump(2) + "\n");
    out << "wrote " << (dir / "scorer.json").string() << " and " << (dir / "metrics.json").string() << "\n";
    return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
    if (cfg.mode != "global" && cfg.mode != "categories" && cfg.mode != "both")
        throw validation_error("--mode must be global, categories or both");
    const std::uint64_t seed = require_seed(cfg, "for optimize");
    auto d = load_data(cfg, out);
    const AggregatedScorer scorer = obtain_scorer(d, cfg, seed, out);
    auto fn = [&scorer](std::span<const int> s) { return scorer.probability(s); };

    const auto baseline = baseline_levels(
        *d.dataset, cfg.baseline_from_effort ? BaselineSource::effort : BaselineSource::ratings);
    const auto descriptives = descriptive_stats(*d.dataset, sd_convention(cfg));

    GAParams params;
    params.population = cfg.pop;
    params.generations = cfg.generations;
    params.seed = seed;
    params.threads = cfg.threads;

    ReportBundle bundle;
    bundle.directory = ensure_dir(cfg.out);
    bundle.catalog = d.catalog.get();
    bundle.descriptives = &descriptives;

    std::optional<GAResult> global;
    const Scope global_scope = Scope::global(baseline);
    if (cfg.mode != "categories") {
        global = run_ga(fn, global_scope, params);
        bundle.global = &*global;
        bundle.global_scope = &global_scope;
        out << "global: baseline cost " << global->baseline_report.cost << ", fitness "
            << csv::format_fixed(global->baseline_report.fitness, 4) << " -> best cost "
            << global->best_report.cost << ", fitness " << csv::format_fixed(global->best_report.fitness, 4)
            << " (delta " << csv::format_fixed(global->delta_fitness, 4) << ")\n";
    }
    std::optional<CategoryOptimization> cats;
    if (cfg.mode != "global") {
        cats = optimize_per_category(fn, *d.catalog, baseline, params);
        bundle.categories = &*cats;
        for (const auto& r : cats->rows)
            out << "  " << r.theme << ": fitness " << csv::format_fixed(r.ga_fitness, 3) << ", delta "
                << csv::format_fixed(r.delta_fitness, 3) << "\n";
    }
    for (const auto& name : write_bundle(bundle)) out << "wrote " << (bundle.directory / name).string() << "\n";
    return kExitOk;
}

int cmd_serve(const RunConfig& cfg, std::ostream& out) {
    auto d = load_data(cfg, out);
    const std::uint64_t seed = cfg.seed.value_or(0);
    AggregatedScorer scorer = obtain_scorer(d, cfg, seed, out);
    ServiceOptions opts;
    opts.max_jobs = cfg.max_jobs;
    opts.ga.population = cfg.pop;
    opts.ga.generations = cfg.generations;
    opts.ga.seed = seed;
    Service service(*d.catalog, std::move(scorer), baseline_levels(*d.dataset),
                    descriptive_stats(*d.dataset, sd_convention(cfg)), opts);
    httplib::Server server;
    service.mount(server);
    out << "listening on http://" << cfg.host << ":" << cfg.port << "/api\n" << std::flush;
    if (!server.listen(cfg.host, cfg.port)) throw io_error("cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
    return kExitOk;
}

void add_data_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--input", cfg.input, "Survey CSV file");
    cmd->add_option("--synthesize", cfg.synthesize,
                    "Synthesis spec JSON file, or 'replication' for the built-in targets");
    cmd->add_option("--catalog", cfg.catalog, "Factor catalog JSON (default: built-in taxonomy)");
    cmd->add_option("--threshold", cfg.threshold, "Familiarity level counted as a positive outcome");
    cmd->add_option("--seed", cfg.seed, "Random seed");
    cmd->add_option("--out", cfg.out, "Output directory");
    cmd->add_flag("--population-sd", cfg.population_sd, "Report population (n) instead of sample (n-1) sd");
}

void add_model_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--ratio", cfg.ratio, "Training fraction for the stratified split");
    cmd->add_option("--l2", cfg.l2, "L2 strength for logistic regression");
    cmd->add_option("--nb-variant", cfg.nb_variant, "gaussian or categorical");
    cmd->add_option("--clamp", cfg.clamp, "Probability clamp epsilon");
}

void add_ga_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--model", cfg.model, "Saved scorer JSON (trained inline when omitted)");
    cmd->add_option("--pop", cfg.pop, "GA population size");
    cmd->add_option("--generations", cfg.generations, "GA generations");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cost-aware allocation search over Likert factor levels"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* describe = app.add_subcommand("describe", "Clean the survey data and write descriptive statistics");
    add_data_options(describe, cfg);

    auto* train = app.add_subcommand("train", "Fit naive Bayes + logistic regression and save the scorer");
    add_data_options(train, cfg);
    add_model_options(train, cfg);

    auto* optimize = app.add_subcommand("optimize", "Run the genetic algorithm and write the report bundle");
    add_data_options(optimize, cfg);
    add_model_options(optimize, cfg);
    add_ga_options(optimize, cfg);
    optimize->add_option("--mode", cfg.mode, "global, categories or both");
    optimize->add_flag("--baseline-from-effort", cfg.baseline_from_effort,
                       "Experimental: build the baseline from effort_<id> columns");
    optimize->add_option("--threads", cfg.threads, "Fitness evaluation threads");

    auto* serve = app.add_subcommand("serve", "Serve the JSON API");
    add_data_options(serve, cfg);
    add_model_options(serve, cfg);
    add_ga_options(serve, cfg);
    serve->add_option("--host", cfg.host, "Bind address");
    serve->add_option("--port", cfg.port, "TCP port");
    serve->add_option("--max-jobs", cfg.max_jobs, "Concurrent optimization jobs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int rc = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*describe) return cmd_describe(cfg, out);
        if (*train) return cmd_train(cfg, out);
        if (*optimize) return cmd_optimize(cfg, out);
        if (*serve) return cmd_serve(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}

}  // namespace factoropt::cli
