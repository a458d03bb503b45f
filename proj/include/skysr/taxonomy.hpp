#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "skysr/graph.hpp"

namespace skysr {

using CategorySequence = std::vector<CategoryId>;

struct Category {
    CategoryId id = kNoCategory;
    CategoryId parent = kNoCategory;  // kNoCategory for roots
    std::string name;
    int depth = 0;  // roots have depth 1
    int tree = -1;  // index of the root's tree
};

enum class MatchKind { perfect, semantic, irrelevant };

/// Forest of category trees. Category ids are dense: 0..size()-1.
class CategoryForest {
public:
    CategoryForest() = default;

    /// `records` may come in any order. Each needs id, parent and name;
    /// depth and tree are derived. Throws InvalidArgument on non-dense ids,
    /// unknown parents or cycles.
    explicit CategoryForest(std::vector<Category> records);

    std::size_t size() const noexcept { return categories_.size(); }
    bool empty() const noexcept { return categories_.empty(); }
    bool contains(CategoryId c) const noexcept { return c >= 0 && static_cast<std::size_t>(c) < size(); }

    /// Throws InvalidArgument for unknown ids.
    const Category& at(CategoryId c) const;

    int depth(CategoryId c) const { return at(c).depth; }
    int tree_of(CategoryId c) const { return at(c).tree; }
    std::size_t num_trees() const noexcept { return roots_.size(); }
    std::span<const CategoryId> roots() const noexcept { return roots_; }
    std::span<const CategoryId> children(CategoryId c) const;
    bool is_leaf(CategoryId c) const { return children(c).empty(); }

    /// a(c): c itself followed by its ancestors up to the root.
    std::vector<CategoryId> ancestors(CategoryId c) const;
    /// True when `ancestor` is `c` or lies on the path from `c` to its root.
    bool is_ancestor_or_self(CategoryId ancestor, CategoryId c) const;
    /// Deepest common ancestor, or kNoCategory across trees.
    CategoryId deepest_common_ancestor(CategoryId a, CategoryId b) const;

    /// Lookup by exact name; kNoCategory if absent.
    CategoryId find(std::string_view name) const;

private:
    std::vector<Category> categories_;
    std::vector<std::vector<CategoryId>> children_;
    std::vector<CategoryId> roots_;
};

/// Wu-Palmer similarity: 2 d(dca) / (d(a) + d(b)) inside one tree, 0 across
/// trees.
double similarity(const CategoryForest& f, CategoryId a, CategoryId b);

/// How a PoI of category `poi_cat` matches the queried `query_cat`. A PoI is
/// associated with every ancestor of its own category, so querying an
/// ancestor is a perfect match.
MatchKind match_kind(const CategoryForest& f, CategoryId poi_cat, CategoryId query_cat);

/// Per-position similarity h used for scoring: 1 for perfect matches, the
/// Wu-Palmer similarity for semantic matches, 0 for irrelevant categories.
double match_similarity(const CategoryForest& f, CategoryId poi_cat, CategoryId query_cat);

/// 1 - prod(sims), multiplied left to right starting from 1.
/// Throws InvalidArgument if any sim is outside (0, 1].
double semantic_score(std::span<const double> sims);

/// Largest match similarity strictly below 1 that any category in `present`
/// achieves against `query_cat`; 0 when there is none.
double best_nonperfect_similarity(const CategoryForest& f, CategoryId query_cat,
                                  std::span<const CategoryId> present);

/// Least possible increase of the semantic score of a route with similarity
/// product `route_product` if any of the `remaining` positions is matched
/// non-perfectly: route_product * (1 - h*), h* the best non-perfect
/// similarity over the remaining positions.
double min_semantic_increment(const CategoryForest& f, double route_product,
                              std::span<const CategoryId> remaining,
                              std::span<const CategoryId> present_categories);

/// All super-category sequences: each position replaced by itself or one of
/// its ancestors. The first element is `seq` itself.
std::vector<CategorySequence> super_sequences(const CategoryForest& f, const CategorySequence& seq);

/// Throws InvalidArgument when empty or containing unknown ids.
void validate_sequence(const CategoryForest& f, const CategorySequence& seq);

/// Reads `category_id parent_id name` records (parent -1 for roots).
CategoryForest load_categories(const std::filesystem::path& file);

}  // namespace skysr
