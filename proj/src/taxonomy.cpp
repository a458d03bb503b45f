#include "skysr/taxonomy.hpp"

#include <algorithm>
#include <string>

#include "skysr/error.hpp"
#include "text_io.hpp"

namespace skysr {

CategoryForest::CategoryForest(std::vector<Category> records) {
    const std::size_t n = records.size();
    categories_.resize(n);
    std::vector<char> defined(n, 0);
    for (Category& c : records) {
        if (c.id < 0 || static_cast<std::size_t>(c.id) >= n) {
            throw InvalidArgument("category ids must be dense 0..n-1; got " + std::to_string(c.id));
        }
        if (defined[static_cast<std::size_t>(c.id)]) throw InvalidArgument("duplicate category id " + std::to_string(c.id));
        defined[static_cast<std::size_t>(c.id)] = 1;
        categories_[static_cast<std::size_t>(c.id)] = std::move(c);
    }

    children_.assign(n, {});
    for (const Category& c : categories_) {
        if (c.parent == kNoCategory) {
            roots_.push_back(c.id);
            continue;
        }
        if (!contains(c.parent)) {
            throw InvalidArgument("category " + std::to_string(c.id) + " has unknown parent " + std::to_string(c.parent));
        }
        if (c.parent == c.id) throw InvalidArgument("category " + std::to_string(c.id) + " is its own parent");
        children_[static_cast<std::size_t>(c.parent)].push_back(c.id);
    }

    // Depth and tree id by walking down from the roots; anything left
    // unassigned sits on a cycle.
    for (std::size_t t = 0; t < roots_.size(); ++t) {
        std::vector<CategoryId> stack{roots_[t]};
        categories_[static_cast<std::size_t>(roots_[t])].depth = 1;
        while (!stack.empty()) {
            CategoryId c = stack.back();
            stack.pop_back();
            Category& cat = categories_[static_cast<std::size_t>(c)];
            cat.tree = static_cast<int>(t);
            for (CategoryId child : children_[static_cast<std::size_t>(c)]) {
                categories_[static_cast<std::size_t>(child)].depth = cat.depth + 1;
                stack.push_back(child);
            }
        }
    }
    for (const Category& c : categories_) {
        if (c.tree < 0) throw InvalidArgument("category " + std::to_string(c.id) + " lies on a parent cycle");
    }
}

const Category& CategoryForest::at(CategoryId c) const {
    if (!contains(c)) throw InvalidArgument("unknown category id " + std::to_string(c));
    return categories_[static_cast<std::size_t>(c)];
}

std::span<const CategoryId> CategoryForest::children(CategoryId c) const {
    at(c);
    return children_[static_cast<std::size_t>(c)];
}

std::vector<CategoryId> CategoryForest::ancestors(CategoryId c) const {
    std::vector<CategoryId> out;
    for (CategoryId cur = at(c).id; cur != kNoCategory; cur = categories_[static_cast<std::size_t>(cur)].parent) {
        out.push_back(cur);
    }
    return out;
}

bool CategoryForest::is_ancestor_or_self(CategoryId ancestor, CategoryId c) const {
    const Category& anc = at(ancestor);
    const Category* cur = &at(c);
    if (anc.tree != cur->tree) return false;
    while (cur->depth > anc.depth) cur = &categories_[static_cast<std::size_t>(cur->parent)];
    return cur->id == anc.id;
}

CategoryId CategoryForest::deepest_common_ancestor(CategoryId a, CategoryId b) const {
    const Category* x = &at(a);
    const Category* y = &at(b);
    if (x->tree != y->tree) return kNoCategory;
    while (x->depth > y->depth) x = &categories_[static_cast<std::size_t>(x->parent)];
    while (y->depth > x->depth) y = &categories_[static_cast<std::size_t>(y->parent)];
    while (x->id != y->id) {
        x = &categories_[static_cast<std::size_t>(x->parent)];
        y = &categories_[static_cast<std::size_t>(y->parent)];
    }
    return x->id;
}

CategoryId CategoryForest::find(std::string_view name) const {
    for (const Category& c : categories_)
        if (c.name == name) return c.id;
    return kNoCategory;
}

double similarity(const CategoryForest& f, CategoryId a, CategoryId b) {
    CategoryId m = f.deepest_common_ancestor(a, b);
    if (m == kNoCategory) return 0.0;
    return 2.0 * f.depth(m) / static_cast<double>(f.depth(a) + f.depth(b));
}

MatchKind match_kind(const CategoryForest& f, CategoryId poi_cat, CategoryId query_cat) {
    if (f.is_ancestor_or_self(query_cat, poi_cat)) return MatchKind::perfect;
    if (f.tree_of(poi_cat) == f.tree_of(query_cat)) return MatchKind::semantic;
    return MatchKind::irrelevant;
}

double match_similarity(const CategoryForest& f, CategoryId poi_cat, CategoryId query_cat) {
    switch (match_kind(f, poi_cat, query_cat)) {
        case MatchKind::perfect: return 1.0;
        case MatchKind::semantic: return similarity(f, poi_cat, query_cat);
        case MatchKind::irrelevant: break;
    }
    return 0.0;
}

double semantic_score(std::span<const double> sims) {
    double product = 1.0;
    for (double h : sims) {
        if (!(h > 0.0) || h > 1.0) throw InvalidArgument("similarity outside (0, 1]: " + std::to_string(h));
        product *= h;
    }
    return 1.0 - product;
}

double best_nonperfect_similarity(const CategoryForest& f, CategoryId query_cat, std::span<const CategoryId> present) {
    double best = 0.0;
    for (CategoryId c : present) {
        double h = match_similarity(f, c, query_cat);
        if (h < 1.0) best = std::max(best, h);
    }
    return best;
}

double min_semantic_increment(const CategoryForest& f, double route_product, std::span<const CategoryId> remaining,
                              std::span<const CategoryId> present_categories) {
    double h_star = 0.0;
    for (CategoryId q : remaining) h_star = std::max(h_star, best_nonperfect_similarity(f, q, present_categories));
    return route_product * (1.0 - h_star);
}

std::vector<CategorySequence> super_sequences(const CategoryForest& f, const CategorySequence& seq) {
    std::vector<std::vector<CategoryId>> choices;
    choices.reserve(seq.size());
    for (CategoryId c : seq) choices.push_back(f.ancestors(c));

    std::vector<CategorySequence> out;
    CategorySequence cur(seq.size());
    // Odometer over the per-position ancestor lists, first position slowest.
    std::vector<std::size_t> idx(seq.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < seq.size(); ++i) cur[i] = choices[i][idx[i]];
        out.push_back(cur);
        std::size_t pos = seq.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < choices[pos].size()) break;
            idx[pos] = 0;
            if (pos == 0) return out;
        }
        if (seq.empty()) return out;
    }
}

void validate_sequence(const CategoryForest& f, const CategorySequence& seq) {
    if (seq.empty()) throw InvalidArgument("category sequence is empty");
    for (CategoryId c : seq) {
        if (!f.contains(c)) throw InvalidArgument("unknown category id " + std::to_string(c));
    }
}

CategoryForest load_categories(const std::filesystem::path& file) {
    detail::RecordReader in(file);
    std::vector<Category> records;
    while (in.next()) {
        if (in.size() < 3) in.fail("expected `category_id parent_id name`");
        Category c;
        c.id = in.number<CategoryId>(0);
        c.parent = in.number<CategoryId>(1);
        if (c.parent < -1) in.fail("parent id must be -1 or a category id");
        c.name = in.rest_from(2);
        records.push_back(std::move(c));
    }
    try {
        return CategoryForest(std::move(records));
    } catch (const InvalidArgument& e) {
        throw LoadError(file.string(), 0, e.what());
    }
}

}  // namespace skysr
