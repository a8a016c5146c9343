#include <catch_amalgamated.hpp>

#include "factoropt/error.hpp"
#include "factoropt/taxonomy.hpp"

using namespace factoropt;

TEST_CASE("default catalog has 19 factors in 8 categories", "[taxonomy]") {
    const auto& cat = default_catalog();
    CHECK(cat.size() == 19);
    CHECK(cat.count(FactorKind::motivator) == 9);
    CHECK(cat.count(FactorKind::demotivator) == 10);
    REQUIRE(cat.categories().size() == 8);

    std::size_t total = 0;
    for (const auto& c : cat.categories()) {
        const auto members = cat.category_members(c.id);
        CHECK_FALSE(members.empty());
        for (auto j : members) CHECK(cat.factors()[j].kind == c.side);
        total += members.size();
    }
    CHECK(total == 19);
}

TEST_CASE("default category membership", "[taxonomy]") {
    const auto& cat = default_catalog();
    auto ids = [&](const char* category) {
        std::vector<std::string> out;
        for (auto j : cat.category_members(category)) out.push_back(cat.factors()[j].id);
        return out;
    };
    CHECK(ids("MC1") == std::vector<std::string>{"prog_assist", "se_process"});
    CHECK(ids("MC2") == std::vector<std::string>{"personalized", "conceptual", "engagement"});
    CHECK(ids("MC3") == std::vector<std::string>{"formative_feedback", "auto_assessment"});
    CHECK(ids("MC4") == std::vector<std::string>{"learning_partner", "project_based"});
    CHECK(ids("DC1") == std::vector<std::string>{"plagiarism", "ethics"});
    CHECK(ids("DC2") == std::vector<std::string>{"over_reliance", "bias_hallucination", "context_limits"});
    CHECK(ids("DC3") == std::vector<std::string>{"critical_thinking", "outcome_evaluation"});
    CHECK(ids("DC4") == std::vector<std::string>{"security_privacy", "compute_costs", "course_redesign"});
    CHECK(cat.categories()[3].label() == "MC4_Collaboration and Peer Learning");
}

TEST_CASE("lookup by id", "[taxonomy]") {
    const auto& cat = default_catalog();
    CHECK(cat.factor_index("prog_assist") == 0u);
    CHECK(cat.factor_index("course_redesign") == 18u);
    CHECK_FALSE(cat.factor_index("nope"));
    CHECK(cat.category_index("DC4") == 7u);
    CHECK(parse_factor_kind("demotivator") == FactorKind::demotivator);
    CHECK_THROWS_AS(parse_factor_kind("neutral"), Error);
}

TEST_CASE("catalog json round trip", "[taxonomy]") {
    const auto& cat = default_catalog();
    const auto back = load_catalog(catalog_to_json(cat));
    REQUIRE(back.size() == cat.size());
    for (std::size_t j = 0; j < cat.size(); ++j) {
        CHECK(back.factors()[j].id == cat.factors()[j].id);
        CHECK(back.factors()[j].name == cat.factors()[j].name);
        CHECK(back.factors()[j].kind == cat.factors()[j].kind);
        CHECK(back.factors()[j].category_id == cat.factors()[j].category_id);
    }
    CHECK(load_catalog_file("").size() == 19);
}

TEST_CASE("catalog validation", "[taxonomy][errors]") {
    const CategoryDef m{"M1", "Motivators", FactorKind::motivator};
    const CategoryDef dm{"D1", "Demotivators", FactorKind::demotivator};
    auto kind_of = [](const auto& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        FAIL("no error thrown");
        return ErrorKind::io;
    };
    CHECK(kind_of([&] { FactorCatalog({m}, {}); }) == ErrorKind::validation);
    CHECK(kind_of([&] {
              FactorCatalog({m}, {{"a", "A", FactorKind::motivator, "M1"}, {"a", "B", FactorKind::motivator, "M1"}});
          }) == ErrorKind::validation);
    CHECK(kind_of([&] { FactorCatalog({m}, {{"a", "A", FactorKind::motivator, "X"}}); }) == ErrorKind::validation);
    CHECK(kind_of([&] { FactorCatalog({m}, {{"a", "A", FactorKind::demotivator, "M1"}}); }) ==
          ErrorKind::validation);
    CHECK(kind_of([&] { FactorCatalog({m, dm}, {{"a", "A", FactorKind::motivator, "M1"}}); }) ==
          ErrorKind::validation);
    CHECK(kind_of([&] { load_catalog("{not json"); }) == ErrorKind::parse);
    CHECK(kind_of([&] { load_catalog(R"({"categories": []})"); }) == ErrorKind::parse);
    CHECK(kind_of([&] { load_catalog_file("/nonexistent/catalog.json"); }) == ErrorKind::io);
}
