#include "factoropt/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "factoropt/csv.hpp"
#include "factoropt/error.hpp"

namespace factoropt {

using nlohmann::json;

std::string theme_allocation_file(const std::string& category_id) {
    return "theme_best_allocations_" + category_id + ".csv";
}

namespace {

const FactorDef& factor_at(const FactorCatalog& catalog, std::size_t j) {
    return catalog.factors().at(j);
}

// Value in integer thousandths, and back to text. Shared by every cell of the
// summary table so that differences of emitted cells are exact.
long long thousandths(double v) {
    if (!std::isfinite(v)) throw numeric_error("cannot format non-finite value");
    return std::llround(v * 1000.0);
}

std::string format_thousandths(long long k) {
    std::string sign = k < 0 ? "-" : "";
    const long long a = k < 0 ? -k : k;
    std::string frac = std::to_string(a % 1000);
    frac.insert(0, 3 - frac.size(), '0');
    return sign + std::to_string(a / 1000) + "." + frac;
}

}  // namespace

std::string global_table_csv(const GAResult& result, const Scope& scope, const FactorCatalog& catalog) {
    if (result.best.levels.size() != scope.size())
        throw validation_error("result does not match scope");
    struct Row {
        std::string name;
        int level;
    };
    std::vector<Row> rows;
    for (std::size_t k = 0; k < scope.size(); ++k)
        rows.push_back({factor_at(catalog, scope.optimized[k]).name, result.best.levels[k]});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.level != b.level) return a.level > b.level;
        return a.name < b.name;
    });
    std::string out = "factor,selected_level,cost\n";
    for (const auto& r : rows)
        out += csv::join({r.name, std::to_string(r.level), std::to_string(r.level)}) + "\n";
    return out;
}

std::string theme_summary_csv(const std::vector<ThemeSummaryRow>& rows) {
    std::string out = "theme,num_factors,ga_p_agg,ga_norm_cost,ga_fitness,delta_fitness\n";
    for (const auto& r : rows) {
        const long long p = thousandths(r.ga_p_agg);
        const long long c = thousandths(r.ga_norm_cost);
        out += csv::join({r.theme, std::to_string(r.num_factors), format_thousandths(p),
                          format_thousandths(c), format_thousandths(p - c),
                          format_thousandths(thousandths(r.delta_fitness))}) +
               "\n";
    }
    return out;
}

std::string theme_allocation_csv(const CategoryRun& run, const FactorCatalog& catalog) {
    const auto& levels = run.result.best.levels;
    if (levels.size() != run.scope.size()) throw validation_error("result does not match scope");
    std::string out = "factor,best_level,cost\n";
    for (std::size_t k = 0; k < levels.size(); ++k)
        out += csv::join({factor_at(catalog, run.scope.optimized[k]).name, std::to_string(levels[k]),
                          std::to_string(levels[k])}) +
               "\n";
    return out;
}

std::string descriptives_csv(const std::vector<DescriptiveRow>& rows, const FactorCatalog& catalog) {
    std::string out = "factor,kind,mean,sd,n\n";
    for (const auto& r : rows) {
        const auto& f = factor_at(catalog, r.factor);
        out += csv::join({f.name, std::string(to_string(f.kind)), csv::format_fixed(r.mean, 3),
                          csv::format_fixed(r.sd, 3), std::to_string(r.n)}) +
               "\n";
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

json report_json(const FitnessReport& r) {
    return {{"p_agg", r.p_agg}, {"cost", r.cost}, {"c_norm", r.c_norm}, {"fitness", r.fitness}};
}

json ids_json(const std::vector<std::size_t>& idx, const FactorCatalog& catalog) {
    json a = json::array();
    for (auto j : idx) a.push_back(factor_at(catalog, j).id);
    return a;
}

}  // namespace

std::string run_manifest_json(const std::vector<RunRecord>& runs, const FactorCatalog& catalog) {
    json doc;
    doc["format_version"] = kReportFormatVersion;
    doc["factors"] = json::array();
    for (const auto& f : catalog.factors()) doc["factors"].push_back(f.id);
    doc["runs"] = json::array();
    for (const auto& run : runs) {
        const auto& r = run.result;
        const auto& p = r.params;
        json jr;
        jr["name"] = run.name;
        jr["seed"] = p.seed;
        jr["params"] = {{"population", p.population},
                        {"generations", p.generations},
                        {"crossover", p.crossover},
                        {"mutation", p.mutation_for(run.scope.size())},
                        {"tournament", p.tournament},
                        {"elites", p.elites},
                        {"seed", p.seed}};
        jr["scope"] = ids_json(run.scope.optimized, catalog);
        jr["context"] = run.scope.context;
        jr["baseline"] = {{"levels", r.baseline.levels}, {"report", report_json(r.baseline_report)}};
        jr["best"] = {{"levels", r.best.levels}, {"report", report_json(r.best_report)}};
        jr["delta_fitness"] = r.delta_fitness;
        jr["trajectory"] = r.trajectory;
        jr["evaluations"] = r.evaluations;
        doc["runs"].push_back(std::move(jr));
    }
    return doc.dump(2) + "\n";
}

std::vector<ReplaySpec> replay_specs_from_manifest(std::string_view json_text,
                                                   const FactorCatalog& catalog) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("manifest: ") + e.what());
    }
    try {
        if (doc.at("format_version").get<int>() != kReportFormatVersion)
            throw validation_error("unsupported manifest format version");
        std::vector<ReplaySpec> out;
        for (const auto& jr : doc.at("runs")) {
            ReplaySpec s;
            s.name = jr.at("name").get<std::string>();
            for (const auto& id : jr.at("scope")) {
                auto j = catalog.factor_index(id.get<std::string>());
                if (!j) throw validation_error("manifest references unknown factor");
                s.scope.optimized.push_back(*j);
            }
            s.scope.context = jr.at("context").get<std::vector<int>>();
            const auto& jp = jr.at("params");
            s.params.population = jp.at("population").get<std::size_t>();
            s.params.generations = jp.at("generations").get<std::size_t>();
            s.params.crossover = jp.at("crossover").get<double>();
            s.params.mutation = jp.at("mutation").get<double>();
            s.params.tournament = jp.at("tournament").get<std::size_t>();
            s.params.elites = jp.at("elites").get<std::size_t>();
            s.params.seed = jp.at("seed").get<std::uint64_t>();
            validate(s.scope);
            out.push_back(std::move(s));
        }
        return out;
    } catch (const json::exception& e) {
        throw parse_error(std::string("manifest: ") + e.what());
    }
}

std::vector<std::string> write_bundle(const ReportBundle& b) {
    if (!b.catalog) throw validation_error("report bundle needs a catalog");
    std::error_code ec;
    std::filesystem::create_directories(b.directory, ec);
    if (ec) throw io_error("cannot create '" + b.directory.string() + "': " + ec.message());

    std::vector<std::string> written;
    std::vector<RunRecord> runs;
    auto put = [&](const std::string& name, const std::string& content) {
        write_text_file(b.directory / name, content);
        written.push_back(name);
    };
    if (b.descriptives) put(kDescriptivesFile, descriptives_csv(*b.descriptives, *b.catalog));
    if (b.global) {
        if (!b.global_scope) throw validation_error("global result without its scope");
        put(kGlobalTableFile, global_table_csv(*b.global, *b.global_scope, *b.catalog));
        runs.push_back({"global", *b.global_scope, *b.global});
    }
    if (b.categories) {
        put(kThemeSummaryFile, theme_summary_csv(b.categories->rows));
        for (const auto& run : b.categories->runs) {
            put(theme_allocation_file(run.category_id), theme_allocation_csv(run, *b.catalog));
            runs.push_back({run.category_id, run.scope, run.result});
        }
    }
    if (!runs.empty()) put(kManifestFile, run_manifest_json(runs, *b.catalog));
    return written;
}

}  // namespace factoropt
