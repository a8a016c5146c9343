#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "factoropt/taxonomy.hpp"

namespace factoropt {

/// One questionnaire response. `ratings` and `effort` follow catalog order.
struct SurveyRecord {
    std::string respondent_id;
    bool consent = false;
    std::vector<int> ratings;
    int familiarity = kMinLevel;
    /// Optional per-factor effort ratings (experimental, `effort_<id>` columns).
    std::optional<std::vector<int>> effort;
};

struct RowIssue {
    std::size_t line = 0;  // 1-based line number in the source text
    std::string respondent_id;
    std::string reason;    // "out-of-range", "missing-value", "not-an-integer", ...
    std::string detail;
};

struct ParseReport {
    std::size_t rows_read = 0;
    std::size_t rows_accepted = 0;
    std::vector<RowIssue> dropped;
    bool has_effort_columns = false;
};

struct SurveyLoad {
    std::vector<SurveyRecord> records;
    ParseReport report;
};

/// Reads survey CSV: header `respondent_id,consent,<factor_id>...,familiarity`
/// (any column order, optional `effort_<factor_id>` columns). Malformed rows are
/// dropped and listed in the report. Throws parse_error for a missing header or
/// a missing mandatory column.
SurveyLoad load_survey(std::istream& in, const FactorCatalog& catalog);
SurveyLoad load_survey_file(const std::string& path, const FactorCatalog& catalog);

/// Writes records in the canonical column order accepted by load_survey.
void write_survey_csv(std::ostream& out, const std::vector<SurveyRecord>& records,
                      const FactorCatalog& catalog);

inline constexpr const char* kRuleNoConsent = "no-consent";
inline constexpr const char* kRuleStraightLining = "straight-lining";

struct Exclusion {
    std::string respondent_id;
    std::string rule;
};

struct ExclusionReport {
    std::vector<Exclusion> excluded;
    std::size_t count(const std::string& rule) const;
};

struct CleanResult {
    std::vector<SurveyRecord> retained;
    ExclusionReport report;
};

/// Drops non-consenting respondents and respondents who gave the identical
/// rating to every factor. Consent is checked first; each record gets at most
/// one exclusion rule.
CleanResult clean(const std::vector<SurveyRecord>& records);

}  // namespace factoropt
