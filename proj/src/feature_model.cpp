#include "dsekit/feature_model.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "dsekit/csv.hpp"

namespace dsekit {

std::size_t FeatureModel::feature_id(const std::string& name) const {
    const auto it = std::find(features.begin(), features.end(), name);
    if (it == features.end()) throw std::invalid_argument("unknown feature: " + name);
    return static_cast<std::size_t>(std::distance(features.begin(), it));
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#') break;
        tokens.push_back(tok);
    }
    return tokens;
}

}  // namespace

FeatureModel parse_feature_model(const std::string& text) {
    FeatureModel model;
    std::map<std::string, std::size_t> ids;
    bool have_root = false;

    // Cross-tree lines are resolved after all features are declared.
    struct PendingCross {
        std::string a, b;
        CrossKind kind;
        int line;
    };
    std::vector<PendingCross> pending;

    const auto declare = [&](const std::string& name, int line) -> std::size_t {
        if (ids.count(name))
            throw parse_error("feature '" + name + "' already has a parent (cycle or duplicate)",
                              line);
        const std::size_t id = model.features.size();
        model.features.push_back(name);
        ids.emplace(name, id);
        return id;
    };
    const auto resolve_parent = [&](const std::string& name, int line) -> std::size_t {
        const auto it = ids.find(name);
        if (it == ids.end())
            throw parse_error("unknown feature reference: '" + name + "'", line);
        return it->second;
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& stmt = tokens[0];
        if (stmt == "root") {
            if (tokens.size() != 2) throw parse_error("root takes exactly one feature name", lineno);
            if (have_root) throw parse_error("multiple roots", lineno);
            model.root = declare(tokens[1], lineno);
            have_root = true;
        } else if (stmt == "mandatory" || stmt == "optional") {
            if (tokens.size() != 3)
                throw parse_error(stmt + " takes a parent and a child", lineno);
            const std::size_t parent = resolve_parent(tokens[1], lineno);
            const std::size_t child = declare(tokens[2], lineno);
            model.edges.push_back(
                {parent, child, stmt == "mandatory" ? EdgeKind::mandatory : EdgeKind::optional_});
        } else if (stmt == "alt" || stmt == "or") {
            if (tokens.size() < 4)
                throw parse_error(stmt + " group needs >= 2 children", lineno);
            FeatureModel::Group group;
            group.parent = resolve_parent(tokens[1], lineno);
            group.kind = stmt == "alt" ? GroupKind::alternative : GroupKind::or_;
            for (std::size_t i = 2; i < tokens.size(); ++i)
                group.children.push_back(declare(tokens[i], lineno));
            model.groups.push_back(std::move(group));
        } else if (stmt == "requires" || stmt == "excludes") {
            if (tokens.size() != 3)
                throw parse_error(stmt + " takes two feature names", lineno);
            pending.push_back({tokens[1], tokens[2],
                               stmt == "requires" ? CrossKind::requires_ : CrossKind::excludes,
                               lineno});
        } else {
            throw parse_error("unknown statement: '" + stmt + "'", lineno);
        }
    }
    if (!have_root) throw parse_error("no root", lineno == 0 ? 1 : lineno);
    for (const auto& pc : pending) {
        const auto a = ids.find(pc.a);
        const auto b = ids.find(pc.b);
        if (a == ids.end())
            throw parse_error("unknown feature reference: '" + pc.a + "'", pc.line);
        if (b == ids.end())
            throw parse_error("unknown feature reference: '" + pc.b + "'", pc.line);
        model.cross_tree.push_back({a->second, b->second, pc.kind});
    }
    return model;
}

int count_violations(const FeatureModel& model, const Product& product) {
    if (product.selected.size() != model.feature_count())
        throw std::invalid_argument("product arity does not match feature count");
    const auto sel = [&](std::size_t f) { return product.selected[f] != 0; };
    int violations = 0;

    if (!sel(model.root)) ++violations;
    for (const auto& e : model.edges) {
        if (e.kind == EdgeKind::mandatory) {
            if (sel(e.child) != sel(e.parent)) ++violations;
        } else if (sel(e.child) && !sel(e.parent)) {
            ++violations;
        }
    }
    for (const auto& g : model.groups) {
        int selected_children = 0;
        for (std::size_t c : g.children) {
            if (sel(c)) ++selected_children;
            if (sel(c) && !sel(g.parent)) ++violations;  // child without parent
        }
        if (sel(g.parent)) {
            if (g.kind == GroupKind::alternative && selected_children != 1) ++violations;
            if (g.kind == GroupKind::or_ && selected_children == 0) ++violations;
        }
    }
    for (const auto& ct : model.cross_tree) {
        if (ct.kind == CrossKind::requires_) {
            if (sel(ct.a) && !sel(ct.b)) ++violations;
        } else if (sel(ct.a) && sel(ct.b)) {
            ++violations;
        }
    }
    return violations;
}

ProductAttributes generate_attributes(const FeatureModel& model, SeededRng& rng) {
    const std::size_t n = model.feature_count();
    ProductAttributes attrs;
    attrs.cost.reserve(n);
    attrs.defects.reserve(n);
    attrs.used_before.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        attrs.cost.push_back(rng.uniform(5.0, 15.0));
        attrs.defects.push_back(rng.uniform_int(0, 10));
        attrs.used_before.push_back(rng.coin() ? 1 : 0);
    }
    return attrs;
}

std::string attributes_to_csv(const FeatureModel& model, const ProductAttributes& attrs) {
    std::string out = "feature,cost,defects,used_before\n";
    for (std::size_t i = 0; i < model.feature_count(); ++i) {
        out += model.features[i];
        out += ',';
        out += format_double(attrs.cost[i]);
        out += ',';
        out += std::to_string(attrs.defects[i]);
        out += ',';
        out += attrs.used_before[i] ? '1' : '0';
        out += '\n';
    }
    return out;
}

ProductAttributes attributes_from_csv(const FeatureModel& model, const std::string& text) {
    const std::size_t n = model.feature_count();
    ProductAttributes attrs;
    attrs.cost.assign(n, -1.0);
    attrs.defects.assign(n, 0);
    attrs.used_before.assign(n, 0);
    std::vector<bool> seen(n, false);

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "feature,cost,defects,used_before")
                throw parse_error("attributes CSV header must be feature,cost,defects,used_before",
                                  1);
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 4) throw parse_error("attributes row needs 4 cells", lineno);
        std::size_t id;
        try {
            id = model.feature_id(cells[0]);
        } catch (const std::invalid_argument& e) {
            throw parse_error(e.what(), lineno);
        }
        if (seen[id]) throw parse_error("duplicate attribute row for '" + cells[0] + "'", lineno);
        seen[id] = true;
        attrs.cost[id] = parse_double(cells[1], lineno);
        attrs.defects[id] = static_cast<long long>(parse_double(cells[2], lineno));
        attrs.used_before[id] = cells[3] == "1" ? 1 : 0;
        if (attrs.cost[id] < 0 || attrs.defects[id] < 0)
            throw parse_error("cost and defects must be >= 0", lineno);
        if (cells[3] != "0" && cells[3] != "1")
            throw parse_error("used_before must be 0 or 1", lineno);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i])
            throw std::invalid_argument("missing attribute record for feature '" +
                                        model.features[i] + "'");
    return attrs;
}

Solution product_to_solution(const Product& p) {
    Solution s;
    s.values.reserve(p.selected.size());
    for (const auto b : p.selected) s.values.emplace_back(b != 0);
    return s;
}

Product solution_to_product(const Solution& s) {
    Product p;
    p.selected.reserve(s.values.size());
    for (const auto& v : s.values) p.selected.push_back(std::get<bool>(v) ? 1 : 0);
    return p;
}

Problem spl_problem(const FeatureModel& model, const ProductAttributes& attrs, std::string name) {
    const std::size_t n = model.feature_count();
    if (attrs.cost.size() != n || attrs.defects.size() != n || attrs.used_before.size() != n)
        throw std::invalid_argument("attributes do not cover all features");
    std::vector<DecisionDescriptor> ds;
    ds.reserve(n);
    for (const auto& f : model.features) ds.push_back({f, BooleanKind{}});
    Problem p{
        std::move(name),
        DecisionSpace(std::move(ds)),
        5,
        {Direction::minimize, Direction::maximize, Direction::minimize, Direction::minimize,
         Direction::maximize},
        {},
        nullptr,
        {},
    };
    // Copies keep the problem self-contained after the model goes away.
    p.raw_evaluate = [model, attrs](const Solution& s) {
        const Product product = solution_to_product(s);
        double selected = 0, defects = 0, cost = 0, used = 0;
        for (std::size_t i = 0; i < product.selected.size(); ++i) {
            if (!product.selected[i]) continue;
            selected += 1;
            defects += static_cast<double>(attrs.defects[i]);
            cost += attrs.cost[i];
            used += attrs.used_before[i] ? 1 : 0;
        }
        return std::vector<double>{static_cast<double>(count_violations(model, product)),
                                   selected, defects, cost, used};
    };
    return p;
}

}  // namespace dsekit
