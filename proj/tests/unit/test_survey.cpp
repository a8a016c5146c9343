#include <catch_amalgamated.hpp>

#include <sstream>

#include "factoropt/csv.hpp"
#include "factoropt/error.hpp"
#include "factoropt/survey.hpp"
#include "test_support.hpp"

using namespace factoropt;

namespace {

std::string header() {
    std::string h = "respondent_id,consent";
    for (const auto& f : default_catalog().factors()) h += "," + f.id;
    return h + ",familiarity\n";
}

std::string row(const std::string& id, const std::string& consent, const std::vector<std::string>& cells,
                const std::string& fam) {
    std::string r = id + "," + consent;
    for (const auto& c : cells) r += "," + c;
    return r + "," + fam + "\n";
}

std::vector<std::string> cells(int first = 5) {
    std::vector<std::string> c(19, "4");
    c[0] = std::to_string(first);
    return c;
}

SurveyLoad load(const std::string& text) {
    std::istringstream in(text);
    return load_survey(in, default_catalog());
}

}  // namespace

TEST_CASE("csv helpers", "[csv]") {
    CHECK(csv::field("plain") == "plain");
    CHECK(csv::field("a,b") == "\"a,b\"");
    CHECK(csv::field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::split_line("a,\"b,c\",d\r") == std::vector<std::string>{"a", "b,c", "d"});
    CHECK(csv::split_line("x,,") == std::vector<std::string>{"x", "", ""});
    CHECK_THROWS_AS(csv::split_line("\"open"), Error);
    CHECK(csv::format_fixed(5.2614, 3) == "5.261");
    CHECK(csv::format_fixed(-0.0001, 3) == "0.000");
    CHECK(csv::format_fixed(0.0005, 3) == "0.001");

    const auto t = csv::read("\xEF\xBB\xBFh1,h2\n\n1,2\n3,4\n");
    CHECK(t.header == std::vector<std::string>{"h1", "h2"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.lines == std::vector<std::size_t>{3, 4});
    CHECK(t.column("h2") == 1);
    CHECK_THROWS_AS(t.column("h3"), Error);
}

TEST_CASE("fixture: 141 responses, 126 retained", "[survey]") {
    const auto loaded = load_survey_file(testsupport::fixture("survey_141.csv"), default_catalog());
    CHECK(loaded.report.rows_read == 141);
    CHECK(loaded.report.dropped.size() == 7);
    std::map<std::string, int> reasons;
    for (const auto& d : loaded.report.dropped) ++reasons[d.reason];
    CHECK(reasons["out-of-range"] == 3);
    CHECK(reasons["missing-value"] == 2);
    CHECK(reasons["not-an-integer"] == 1);
    CHECK(reasons["wrong-field-count"] == 1);

    const auto cleaned = clean(loaded.records);
    CHECK(cleaned.report.count(kRuleNoConsent) == 5);
    CHECK(cleaned.report.count(kRuleStraightLining) == 3);
    CHECK(cleaned.retained.size() == 126);
}

TEST_CASE("row-level drops carry line numbers and reasons", "[survey]") {
    auto bad = cells();
    bad[2] = "10";
    const auto l = load(header() + row("a", "yes", cells(), "7") + row("b", "yes", bad, "7") +
                        row("c", "maybe", cells(), "7"));
    CHECK(l.records.size() == 1);
    REQUIRE(l.report.dropped.size() == 2);
    CHECK(l.report.dropped[0].line == 3);
    CHECK(l.report.dropped[0].reason == "out-of-range");
    CHECK(l.report.dropped[0].respondent_id == "b");
    CHECK(l.report.dropped[1].reason == "bad-consent");
}

TEST_CASE("familiarity is validated like a factor", "[survey]") {
    const auto l = load(header() + row("a", "yes", cells(), "0") + row("b", "yes", cells(), ""));
    CHECK(l.records.empty());
    CHECK(l.report.dropped.size() == 2);
}

TEST_CASE("columns may appear in any order", "[survey]") {
    std::string h = "familiarity";
    std::string r = "8";
    const auto& fs = default_catalog().factors();
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
        h += "," + it->id;
        r += "," + std::to_string(1 + static_cast<int>(fs.rend() - it - 1) % 9);
    }
    h += ",consent,respondent_id\n";
    r += ",y,z9\n";
    const auto l = load(h + r);
    REQUIRE(l.records.size() == 1);
    CHECK(l.records[0].respondent_id == "z9");
    CHECK(l.records[0].familiarity == 8);
    for (std::size_t j = 0; j < 19; ++j) CHECK(l.records[0].ratings[j] == 1 + static_cast<int>(j) % 9);
}

TEST_CASE("missing header or column is a parse error", "[survey][errors]") {
    CHECK_THROWS_AS(load(""), Error);
    std::string h = header();
    h.replace(h.find(",ethics"), 7, "");
    try {
        load(h);
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(std::string(e.what()).find("ethics") != std::string::npos);
    }
    CHECK_THROWS_AS(load_survey_file("/nonexistent/survey.csv", default_catalog()), Error);
}

TEST_CASE("effort columns are all-or-nothing", "[survey]") {
    std::string h = header();
    h.pop_back();
    std::string r = row("a", "yes", cells(), "7");
    r.pop_back();
    for (const auto& f : default_catalog().factors()) {
        h += ",effort_" + f.id;
        r += ",3";
    }
    const auto l = load(h + "\n" + r + "\n");
    CHECK(l.report.has_effort_columns);
    REQUIRE(l.records.size() == 1);
    REQUIRE(l.records[0].effort);
    CHECK(l.records[0].effort->at(18) == 3);

    CHECK_THROWS_AS(load(header().substr(0, header().size() - 1) + ",effort_ethics\n"), Error);
}

TEST_CASE("write then load reproduces records", "[survey]") {
    const auto loaded = load_survey_file(testsupport::fixture("survey_141.csv"), default_catalog());
    std::ostringstream out;
    write_survey_csv(out, loaded.records, default_catalog());
    const auto again = load(out.str());
    REQUIRE(again.records.size() == loaded.records.size());
    CHECK(again.report.dropped.empty());
    for (std::size_t i = 0; i < again.records.size(); ++i) {
        CHECK(again.records[i].respondent_id == loaded.records[i].respondent_id);
        CHECK(again.records[i].consent == loaded.records[i].consent);
        CHECK(again.records[i].ratings == loaded.records[i].ratings);
        CHECK(again.records[i].familiarity == loaded.records[i].familiarity);
    }
}

TEST_CASE("cleaning rules", "[survey]") {
    SurveyRecord ok{"ok", true, std::vector<int>(19, 4), 7, {}};
    ok.ratings[0] = 5;
    SurveyRecord flat{"flat", true, std::vector<int>(19, 9), 9, {}};
    SurveyRecord both{"both", false, std::vector<int>(19, 3), 2, {}};
    const auto r = clean({ok, flat, both});
    REQUIRE(r.retained.size() == 1);
    CHECK(r.retained[0].respondent_id == "ok");
    // consent is checked first, so "both" counts once, as no-consent
    CHECK(r.report.count(kRuleNoConsent) == 1);
    CHECK(r.report.count(kRuleStraightLining) == 1);
    CHECK(r.report.excluded.size() == 2);
}
