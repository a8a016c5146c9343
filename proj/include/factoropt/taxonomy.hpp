#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace factoropt {

/// Lowest and highest intensity on the 9-point scale.
inline constexpr int kMinLevel = 1;
inline constexpr int kMaxLevel = 9;
inline constexpr int kNumLevels = kMaxLevel - kMinLevel + 1;

constexpr bool valid_level(int v) noexcept { return v >= kMinLevel && v <= kMaxLevel; }

enum class FactorKind { motivator, demotivator };

std::string_view to_string(FactorKind kind) noexcept;
/// Accepts "motivator" / "demotivator"; throws parse_error otherwise.
FactorKind parse_factor_kind(std::string_view text);

struct FactorDef {
    std::string id;
    std::string name;
    FactorKind kind = FactorKind::motivator;
    std::string category_id;
};

struct CategoryDef {
    std::string id;
    std::string name;
    FactorKind side = FactorKind::motivator;

    /// "MC4_Collaboration and Peer Learning"
    std::string label() const { return id + "_" + name; }
};

/// Ordered factor taxonomy. Factor order is the column order of every matrix,
/// model and CSV produced from this catalog.
class FactorCatalog {
public:
    /// Validates and builds. Throws validation_error on duplicate ids, unknown
    /// categories, kind/side mismatch or an empty factor list.
    FactorCatalog(std::vector<CategoryDef> categories, std::vector<FactorDef> factors);

    const std::vector<FactorDef>& factors() const noexcept { return factors_; }
    const std::vector<CategoryDef>& categories() const noexcept { return categories_; }
    std::size_t size() const noexcept { return factors_.size(); }

    std::optional<std::size_t> factor_index(std::string_view id) const;
    std::optional<std::size_t> category_index(std::string_view id) const;

    /// Indices (catalog order) of the factors in a category.
    std::vector<std::size_t> category_members(std::string_view category_id) const;

    std::size_t count(FactorKind kind) const;

private:
    std::vector<CategoryDef> categories_;
    std::vector<FactorDef> factors_;
};

/// The built-in 19-factor taxonomy: 9 motivators in 4 categories and
/// 10 demotivators in 4 categories.
const FactorCatalog& default_catalog();

/// Parses a JSON catalog document:
///   { "categories": [ {"id", "name", "side"} ... ],
///     "factors":    [ {"id", "name", "kind", "category"} ... ] }
FactorCatalog load_catalog(std::string_view json_text);

/// load_catalog for a file path, or the default catalog when the path is empty.
FactorCatalog load_catalog_file(const std::string& path);

std::string catalog_to_json(const FactorCatalog& catalog);

}  // namespace factoropt
