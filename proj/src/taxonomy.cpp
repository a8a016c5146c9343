#include "factoropt/taxonomy.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "factoropt/error.hpp"

namespace factoropt {

using nlohmann::json;

std::string_view to_string(FactorKind kind) noexcept {
    return kind == FactorKind::motivator ? "motivator" : "demotivator";
}

FactorKind parse_factor_kind(std::string_view text) {
    if (text == "motivator") return FactorKind::motivator;
    if (text == "demotivator") return FactorKind::demotivator;
    throw parse_error("unknown factor kind '" + std::string(text) + "'");
}

FactorCatalog::FactorCatalog(std::vector<CategoryDef> categories, std::vector<FactorDef> factors)
    : categories_(std::move(categories)), factors_(std::move(factors)) {
    if (factors_.empty()) throw validation_error("catalog has no factors");

    std::set<std::string> seen;
    for (const auto& c : categories_) {
        if (c.id.empty()) throw validation_error("category with empty id");
        if (!seen.insert(c.id).second) throw validation_error("duplicate category id '" + c.id + "'");
    }
    seen.clear();
    for (const auto& f : factors_) {
        if (f.id.empty()) throw validation_error("factor with empty id");
        if (!seen.insert(f.id).second) throw validation_error("duplicate factor id '" + f.id + "'");
        if (f.category_id.empty())
            throw validation_error("factor '" + f.id + "' has no category");
        const auto ci = category_index(f.category_id);
        if (!ci)
            throw validation_error("factor '" + f.id + "' references unknown category '" +
                                   f.category_id + "'");
        if (categories_[*ci].side != f.kind)
            throw validation_error("factor '" + f.id + "' is a " + std::string(to_string(f.kind)) +
                                   " but category '" + f.category_id + "' is not");
    }
    for (const auto& c : categories_)
        if (category_members(c.id).empty())
            throw validation_error("category '" + c.id + "' has no factors");
}

std::optional<std::size_t> FactorCatalog::factor_index(std::string_view id) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> FactorCatalog::category_index(std::string_view id) const {
    for (std::size_t i = 0; i < categories_.size(); ++i)
        if (categories_[i].id == id) return i;
    return std::nullopt;
}

std::vector<std::size_t> FactorCatalog::category_members(std::string_view category_id) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].category_id == category_id) out.push_back(i);
    return out;
}

std::size_t FactorCatalog::count(FactorKind kind) const {
    std::size_t n = 0;
    for (const auto& f : factors_) n += f.kind == kind;
    return n;
}

const FactorCatalog& default_catalog() {
    static const FactorCatalog catalog = [] {
        using K = FactorKind;
        std::vector<CategoryDef> cats{
            {"MC1", "Skill Development in Software Engineering Education", K::motivator},
            {"MC2", "Enhancing Learning Experiences", K::motivator},
            {"MC3", "Assessment and Feedback in Education", K::motivator},
            {"MC4", "Collaboration and Peer Learning", K::motivator},
            {"DC1", "Assessment and Academic Integrity", K::demotivator},
            {"DC2", "Learning and Educational Challenges", K::demotivator},
            {"DC3", "Student Skill Development and Cognitive Load", K::demotivator},
            {"DC4", "Integration and Practical Implementation", K::demotivator},
        };
        // Column order: motivators then demotivators, each by descending mean rating.
        std::vector<FactorDef> facs{
            {"prog_assist", "Programming Assistance and Debugging Support", K::motivator, "MC1"},
            {"personalized", "Personalized and Adaptive Learning", K::motivator, "MC2"},
            {"learning_partner", "AI as a Learning Partner", K::motivator, "MC4"},
            {"se_process", "Software Engineering Process Understanding", K::motivator, "MC1"},
            {"conceptual", "Conceptual Understanding and Problem Solving", K::motivator, "MC2"},
            {"engagement", "Engagement and Motivation", K::motivator, "MC2"},
            {"formative_feedback", "Formative Feedback and Learning Support", K::motivator, "MC3"},
            {"auto_assessment", "Automated Assessment and Grading", K::motivator, "MC3"},
            {"project_based", "Project-Based and Inquiry-Based Learning", K::motivator, "MC4"},
            {"plagiarism", "Plagiarism and Intellectual Property Concerns", K::demotivator, "DC1"},
            {"over_reliance", "Over-Reliance on AI in Learning", K::demotivator, "DC2"},
            {"critical_thinking", "Reduced Critical Thinking and Problem-Solving", K::demotivator, "DC3"},
            {"ethics", "Ethical Concerns in AI-Assisted Learning", K::demotivator, "DC1"},
            {"outcome_evaluation", "Challenges in Evaluating Learning Outcomes", K::demotivator, "DC3"},
            {"security_privacy", "Security, Privacy, and Data Integrity Issues", K::demotivator, "DC4"},
            {"bias_hallucination", "Bias and Hallucination in LLM Outputs", K::demotivator, "DC2"},
            {"context_limits", "Limitations in Understanding and Context", K::demotivator, "DC2"},
            {"compute_costs", "Computational and Resource Costs", K::demotivator, "DC4"},
            {"course_redesign", "Difficulty in Course Redesign and Curriculum Integration", K::demotivator, "DC4"},
        };
        return FactorCatalog(std::move(cats), std::move(facs));
    }();
    return catalog;
}

FactorCatalog load_catalog(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("catalog: ") + e.what());
    }
    try {
        std::vector<CategoryDef> cats;
        for (const auto& c : doc.at("categories")) {
            cats.push_back({c.at("id").get<std::string>(), c.value("name", c.at("id").get<std::string>()),
                            parse_factor_kind(c.at("side").get<std::string>())});
        }
        std::vector<FactorDef> facs;
        for (const auto& f : doc.at("factors")) {
            facs.push_back({f.at("id").get<std::string>(), f.value("name", f.at("id").get<std::string>()),
                            parse_factor_kind(f.at("kind").get<std::string>()),
                            f.at("category").get<std::string>()});
        }
        return FactorCatalog(std::move(cats), std::move(facs));
    } catch (const json::exception& e) {
        throw parse_error(std::string("catalog: ") + e.what());
    }
}

FactorCatalog load_catalog_file(const std::string& path) {
    if (path.empty()) return default_catalog();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open catalog '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_catalog(ss.str());
}

std::string catalog_to_json(const FactorCatalog& catalog) {
    json doc;
    doc["categories"] = json::array();
    for (const auto& c : catalog.categories())
        doc["categories"].push_back({{"id", c.id}, {"name", c.name}, {"side", to_string(c.side)}});
    doc["factors"] = json::array();
    for (const auto& f : catalog.factors())
        doc["factors"].push_back(
            {{"id", f.id}, {"name", f.name}, {"kind", to_string(f.kind)}, {"category", f.category_id}});
    return doc.dump(2) + "\n";
}

}  // namespace factoropt
