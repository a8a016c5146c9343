#include <catch_amalgamated.hpp>

#include <filesystem>

#include "factoropt/csv.hpp"
#include "factoropt/error.hpp"
#include "factoropt/report.hpp"
#include "test_support.hpp"

using namespace factoropt;

namespace {

struct Fixture {
    const FactorCatalog& cat = default_catalog();
    Dataset data = synthesize_dataset(cat, replication_synthesis_spec(42));
    AggregatedScorer scorer = train_scorer(stratified_split(data, 0.8, 42).train);
    ProbabilityFn fn = [this](std::span<const int> s) { return scorer.probability(s); };
    std::vector<int> base = baseline_levels(data);
    GAParams params = [] {
        GAParams p;
        p.seed = 42;
        return p;
    }();
};

double cell(const csv::Table& t, std::size_t row, const char* col) { return std::stod(t.rows[row][t.column(col)]); }

}  // namespace

TEST_CASE("global table is sorted by level then name", "[report]") {
    Fixture f;
    const auto scope = Scope::global(f.base);
    const auto r = run_ga(f.fn, scope, f.params);
    const auto t = csv::read(global_table_csv(r, scope, f.cat));
    CHECK(t.header == std::vector<std::string>{"factor", "selected_level", "cost"});
    REQUIRE(t.rows.size() == 19);
    int sum = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(t.rows[i][1] == t.rows[i][2]);
        sum += std::stoi(t.rows[i][2]);
        if (i > 0) {
            const int prev = std::stoi(t.rows[i - 1][1]), cur = std::stoi(t.rows[i][1]);
            CHECK(prev >= cur);
            if (prev == cur) CHECK(t.rows[i - 1][0] < t.rows[i][0]);
        }
    }
    CHECK(sum == r.best_report.cost);
    // quoted name with commas survives
    CHECK(global_table_csv(r, scope, f.cat).find("\"Security, Privacy, and Data Integrity Issues\"") !=
          std::string::npos);
}

TEST_CASE("theme summary keeps the fitness identity at three decimals", "[report]") {
    std::vector<ThemeSummaryRow> rows{{"MC4", "MC4_Collaboration and Peer Learning", 2, 0.76849, 0.25551, 0.0, 0.2444},
                                      {"DC1", "DC1_X", 2, 0.0004, 0.0, 0.0, 0.0}};
    rows[0].ga_fitness = rows[0].ga_p_agg - rows[0].ga_norm_cost;
    rows[1].ga_fitness = rows[1].ga_p_agg;
    const auto text = theme_summary_csv(rows);
    CHECK(text ==
          "theme,num_factors,ga_p_agg,ga_norm_cost,ga_fitness,delta_fitness\n"
          "MC4_Collaboration and Peer Learning,2,0.768,0.256,0.512,0.244\n"
          "DC1_X,2,0.000,0.000,0.000,0.000\n");
}

TEST_CASE("theme summary from a real per-category run", "[report]") {
    Fixture f;
    const auto cats = optimize_per_category(f.fn, f.cat, f.base, f.params);
    const auto t = csv::read(theme_summary_csv(cats.rows));
    REQUIRE(t.rows.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        const long p = std::lround(cell(t, i, "ga_p_agg") * 1000);
        const long c = std::lround(cell(t, i, "ga_norm_cost") * 1000);
        const long g = std::lround(cell(t, i, "ga_fitness") * 1000);
        CHECK(g == p - c);
        CHECK(cell(t, i, "delta_fitness") >= 0.0);
    }
    const auto alloc = csv::read(theme_allocation_csv(cats.runs[1], f.cat));
    CHECK(alloc.header == std::vector<std::string>{"factor", "best_level", "cost"});
    CHECK(alloc.rows.size() == 3);
}

TEST_CASE("descriptives csv", "[report]") {
    Fixture f;
    const auto t = csv::read(descriptives_csv(descriptive_stats(f.data), f.cat));
    CHECK(t.header == std::vector<std::string>{"factor", "kind", "mean", "sd", "n"});
    REQUIRE(t.rows.size() == 19);
    CHECK(t.rows[0][0] == "Programming Assistance and Debugging Support");
    CHECK(t.rows[0][1] == "motivator");
    CHECK(t.rows[18][1] == "demotivator");
    CHECK(t.rows[0][4] == "126");
}

TEST_CASE("manifest replays every run exactly", "[report][manifest]") {
    Fixture f;
    const auto scope = Scope::global(f.base);
    const auto global = run_ga(f.fn, scope, f.params);
    const auto cats = optimize_per_category(f.fn, f.cat, f.base, f.params);
    std::vector<RunRecord> runs{{"global", scope, global}};
    for (const auto& r : cats.runs) runs.push_back({r.category_id, r.scope, r.result});
    const auto text = run_manifest_json(runs, f.cat);
    CHECK(text.find("timestamp") == std::string::npos);

    const auto specs = replay_specs_from_manifest(text, f.cat);
    REQUIRE(specs.size() == 9);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        CHECK(specs[i].name == runs[i].name);
        CHECK(specs[i].scope.optimized == runs[i].scope.optimized);
        CHECK(specs[i].scope.context == runs[i].scope.context);
        const auto again = run_ga(f.fn, specs[i].scope, specs[i].params);
        CHECK(again.best == runs[i].result.best);
        CHECK(again.trajectory == runs[i].result.trajectory);
    }
    CHECK_THROWS_AS(replay_specs_from_manifest("{", f.cat), Error);
}

TEST_CASE("bundle files and byte-identical rewrites", "[report][bundle]") {
    Fixture f;
    const auto scope = Scope::global(f.base);
    const auto global = run_ga(f.fn, scope, f.params);
    const auto cats = optimize_per_category(f.fn, f.cat, f.base, f.params);
    const auto desc = descriptive_stats(f.data);

    auto write = [&](const std::string& name) {
        ReportBundle b;
        b.directory = testsupport::fresh_dir(name);
        b.catalog = &f.cat;
        b.global = &global;
        b.global_scope = &scope;
        b.categories = &cats;
        b.descriptives = &desc;
        return std::pair{b.directory, write_bundle(b)};
    };
    const auto [dir_a, files_a] = write("bundle_a");
    const auto [dir_b, files_b] = write("bundle_b");
    CHECK(files_a == files_b);
    CHECK(files_a.size() == 1 + 1 + 1 + 8 + 1);
    for (const char* name : {kGlobalTableFile, kThemeSummaryFile, kDescriptivesFile, kManifestFile})
        CHECK(std::find(files_a.begin(), files_a.end(), name) != files_a.end());
    for (const auto& c : f.cat.categories())
        CHECK(std::find(files_a.begin(), files_a.end(), theme_allocation_file(c.id)) != files_a.end());
    for (const auto& name : files_a) CHECK(read_text_file(dir_a / name) == read_text_file(dir_b / name));

    CHECK_THROWS_AS(read_text_file(dir_a / "missing.csv"), Error);
    CHECK_THROWS_AS(write_text_file("/nonexistent/dir/file.csv", "x"), Error);
}
