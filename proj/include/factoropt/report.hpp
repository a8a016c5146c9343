#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "factoropt/dataset.hpp"
#include "factoropt/optimize.hpp"

namespace factoropt {

inline constexpr int kReportFormatVersion = 1;

inline constexpr const char* kGlobalTableFile = "best_solution_table_global_GA.csv";
inline constexpr const char* kThemeSummaryFile = "theme_results_summary.csv";
inline constexpr const char* kDescriptivesFile = "descriptive_stats.csv";
inline constexpr const char* kManifestFile = "run_manifest.json";

std::string theme_allocation_file(const std::string& category_id);

/// factor,selected_level,cost; level descending then factor name ascending.
std::string global_table_csv(const GAResult& result, const Scope& scope,
                             const FactorCatalog& catalog);

/// theme,num_factors,ga_p_agg,ga_norm_cost,ga_fitness,delta_fitness with three
/// decimals. The fitness cell is the difference of the two rounded cells, so
/// each emitted row satisfies the fitness identity exactly.
std::string theme_summary_csv(const std::vector<ThemeSummaryRow>& rows);

/// factor,best_level,cost in scope order.
std::string theme_allocation_csv(const CategoryRun& run, const FactorCatalog& catalog);

/// factor,kind,mean,sd,n with three decimals.
std::string descriptives_csv(const std::vector<DescriptiveRow>& rows,
                             const FactorCatalog& catalog);

/// Writes `content` byte-for-byte. Throws io_error.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

struct RunRecord {
    std::string name;  // "global" or the category id
    Scope scope;
    GAResult result;
};

/// Full-precision JSON record of every run: seed, params, scope, context,
/// baseline, best allocation and trajectory.
std::string run_manifest_json(const std::vector<RunRecord>& runs, const FactorCatalog& catalog);

/// Parameters and scope of a manifest run, enough to call run_ga again.
struct ReplaySpec {
    std::string name;
    Scope scope;
    GAParams params;
};
std::vector<ReplaySpec> replay_specs_from_manifest(std::string_view json_text,
                                                   const FactorCatalog& catalog);

struct ReportBundle {
    std::filesystem::path directory;
    const FactorCatalog* catalog = nullptr;
    const GAResult* global = nullptr;
    const Scope* global_scope = nullptr;
    const CategoryOptimization* categories = nullptr;
    const std::vector<DescriptiveRow>* descriptives = nullptr;
};

/// Writes every present part of the bundle plus the run manifest. Returns the
/// file names written, in write order.
std::vector<std::string> write_bundle(const ReportBundle& bundle);

}  // namespace factoropt
