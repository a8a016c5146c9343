#include "factoropt/survey.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <variant>

#include "factoropt/csv.hpp"
#include "factoropt/error.hpp"

namespace factoropt {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

struct CellError {
    std::string reason;
    std::string detail;
};

// Parses a level cell; returns a CellError description on failure.
std::variant<int, CellError> parse_level(std::string_view cell, const std::string& column) {
    cell = trim(cell);
    if (cell.empty()) return CellError{"missing-value", "empty cell in column '" + column + "'"};
    int v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        return CellError{"not-an-integer", "'" + std::string(cell) + "' in column '" + column + "'"};
    if (!valid_level(v))
        return CellError{"out-of-range", std::to_string(v) + " in column '" + column + "'"};
    return v;
}

std::optional<bool> parse_consent(std::string_view cell) {
    const auto v = lower(trim(cell));
    if (v == "yes" || v == "1" || v == "y" || v == "true") return true;
    if (v == "no" || v == "0" || v == "n" || v == "false") return false;
    return std::nullopt;
}

}  // namespace

SurveyLoad load_survey(std::istream& in, const FactorCatalog& catalog) {
    const csv::Table table = csv::read(in);

    const std::size_t id_col = table.column("respondent_id");
    const std::size_t consent_col = table.column("consent");
    const std::size_t fam_col = table.column("familiarity");
    std::vector<std::size_t> factor_cols;
    std::vector<std::size_t> effort_cols;
    for (const auto& f : catalog.factors()) {
        factor_cols.push_back(table.column(f.id));
        auto it = std::find(table.header.begin(), table.header.end(), "effort_" + f.id);
        if (it != table.header.end())
            effort_cols.push_back(static_cast<std::size_t>(it - table.header.begin()));
    }
    if (!effort_cols.empty() && effort_cols.size() != catalog.size())
        throw parse_error("effort columns present for some factors but not all");

    SurveyLoad out;
    out.report.has_effort_columns = !effort_cols.empty();

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.lines[r];
        ++out.report.rows_read;

        const std::string rid =
            id_col < row.size() ? std::string(trim(row[id_col])) : std::string();
        auto drop = [&](std::string reason, std::string detail) {
            out.report.dropped.push_back({line, rid, std::move(reason), std::move(detail)});
        };

        if (row.size() != table.header.size()) {
            drop("wrong-field-count", "expected " + std::to_string(table.header.size()) +
                                          " fields, got " + std::to_string(row.size()));
            continue;
        }
        if (rid.empty()) {
            drop("missing-value", "empty respondent_id");
            continue;
        }
        const auto consent = parse_consent(row[consent_col]);
        if (!consent) {
            drop("bad-consent", "'" + row[consent_col] + "' is not yes/no/1/0");
            continue;
        }

        SurveyRecord rec;
        rec.respondent_id = rid;
        rec.consent = *consent;
        bool ok = true;
        auto read_level = [&](std::size_t col, int& dst) {
            auto parsed = parse_level(row[col], table.header[col]);
            if (auto* err = std::get_if<CellError>(&parsed)) {
                drop(err->reason, err->detail);
                ok = false;
                return;
            }
            dst = std::get<int>(parsed);
        };

        rec.ratings.resize(catalog.size());
        for (std::size_t j = 0; ok && j < factor_cols.size(); ++j) read_level(factor_cols[j], rec.ratings[j]);
        if (ok) read_level(fam_col, rec.familiarity);
        if (ok && !effort_cols.empty()) {
            std::vector<int> effort(catalog.size());
            for (std::size_t j = 0; ok && j < effort_cols.size(); ++j) read_level(effort_cols[j], effort[j]);
            rec.effort = std::move(effort);
        }
        if (!ok) continue;

        out.records.push_back(std::move(rec));
        ++out.report.rows_accepted;
    }
    return out;
}

SurveyLoad load_survey_file(const std::string& path, const FactorCatalog& catalog) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open survey file '" + path + "'");
    return load_survey(in, catalog);
}

void write_survey_csv(std::ostream& out, const std::vector<SurveyRecord>& records,
                      const FactorCatalog& catalog) {
    const bool with_effort =
        !records.empty() && std::all_of(records.begin(), records.end(),
                                        [](const SurveyRecord& r) { return r.effort.has_value(); });
    std::vector<std::string> header{"respondent_id", "consent"};
    for (const auto& f : catalog.factors()) header.push_back(f.id);
    header.push_back("familiarity");
    if (with_effort)
        for (const auto& f : catalog.factors()) header.push_back("effort_" + f.id);
    out << csv::join(header) << '\n';

    for (const auto& r : records) {
        std::vector<std::string> fields{r.respondent_id, r.consent ? "yes" : "no"};
        for (int v : r.ratings) fields.push_back(std::to_string(v));
        fields.push_back(std::to_string(r.familiarity));
        if (with_effort)
            for (int v : *r.effort) fields.push_back(std::to_string(v));
        out << csv::join(fields) << '\n';
    }
}

std::size_t ExclusionReport::count(const std::string& rule) const {
    return static_cast<std::size_t>(std::count_if(
        excluded.begin(), excluded.end(), [&](const Exclusion& e) { return e.rule == rule; }));
}

CleanResult clean(const std::vector<SurveyRecord>& records) {
    CleanResult out;
    for (const auto& r : records) {
        if (!r.consent) {
            out.report.excluded.push_back({r.respondent_id, kRuleNoConsent});
            continue;
        }
        const bool flat = !r.ratings.empty() &&
                          std::all_of(r.ratings.begin(), r.ratings.end(),
                                      [&](int v) { return v == r.ratings.front(); });
        if (flat) {
            out.report.excluded.push_back({r.respondent_id, kRuleStraightLining});
            continue;
        }
        out.retained.push_back(r);
    }
    return out;
}

}  // namespace factoropt
