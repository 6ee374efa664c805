#include "brickplan/scheduler.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "brickplan/errors.hpp"
#include "brickplan/union_find.hpp"

namespace brickplan {

Expression Expression::leaf(int box_id) {
    Expression e;
    e.kind = Kind::leaf;
    e.box_id = box_id;
    return e;
}

Expression Expression::compose(std::vector<Expression> children) {
    if (children.empty()) throw Error("compose needs at least one child");
    if (children.size() == 1) return std::move(children.front());
    Expression e;
    e.kind = Kind::compose;
    for (auto& child : children) {
        if (child.kind == Kind::compose) {
            for (auto& grandchild : child.children) e.children.push_back(std::move(grandchild));
        } else {
            e.children.push_back(std::move(child));
        }
    }
    return e;
}

Expression Expression::tensor(std::vector<Expression> children) {
    if (children.empty()) throw Error("tensor needs at least one child");
    if (children.size() == 1) return std::move(children.front());
    Expression e;
    e.kind = Kind::tensor;
    e.children = std::move(children);
    return e;
}

namespace {

int min_box_id(const Expression& e) {
    if (e.kind == Expression::Kind::leaf) return e.box_id;
    int best = min_box_id(e.children.front());
    for (std::size_t i = 1; i < e.children.size(); ++i)
        best = std::min(best, min_box_id(e.children[i]));
    return best;
}

Expression build_expression(const std::set<int>& subset,
                            const std::vector<std::pair<int, int>>& deps) {
    if (subset.size() == 1) return Expression::leaf(*subset.begin());

    std::vector<int> ids(subset.begin(), subset.end());
    std::map<int, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;

    UnionFind uf(ids.size());
    for (const auto& [from, to] : deps) {
        auto a = index.find(from);
        auto b = index.find(to);
        if (a != index.end() && b != index.end()) uf.unite(a->second, b->second);
    }

    if (uf.count() > 1) {
        std::map<std::size_t, std::set<int>> groups;
        for (std::size_t i = 0; i < ids.size(); ++i) groups[uf.find(i)].insert(ids[i]);
        std::vector<Expression> parts;
        for (const auto& [root, members] : groups) parts.push_back(build_expression(members, deps));
        std::sort(parts.begin(), parts.end(), [](const Expression& a, const Expression& b) {
            return min_box_id(a) < min_box_id(b);
        });
        return Expression::tensor(std::move(parts));
    }

    // Connected with at least two boxes: peel off the source layer. It is a
    // strict subset because a connected DAG of size > 1 has an edge.
    std::set<int> sources = subset;
    for (const auto& [from, to] : deps) {
        if (subset.contains(from) && subset.contains(to)) sources.erase(to);
    }
    std::vector<Expression> source_leaves;
    for (int id : sources) source_leaves.push_back(Expression::leaf(id));
    Expression first = Expression::tensor(std::move(source_leaves));

    std::set<int> rest = subset;
    for (int id : sources) rest.erase(id);
    std::vector<Expression> stages;
    stages.push_back(std::move(first));
    stages.push_back(build_expression(rest, deps));
    return Expression::compose(std::move(stages));
}

}  // namespace

Expression diagram_to_expression(const Plan& plan) {
    if (plan.boxes().empty()) throw PlanningError("plan has no boxes to schedule");
    std::set<int> ids;
    for (const auto& box : plan.boxes()) ids.insert(box.id);
    return build_expression(ids, plan.box_dependencies());
}

namespace {

void linearize_into(const Expression& e, std::vector<int>& out) {
    switch (e.kind) {
        case Expression::Kind::leaf:
            out.push_back(e.box_id);
            return;
        case Expression::Kind::compose:
            for (const auto& child : e.children) linearize_into(child, out);
            return;
        case Expression::Kind::tensor: {
            std::vector<std::vector<int>> lanes;
            for (const auto& child : e.children) {
                lanes.emplace_back();
                linearize_into(child, lanes.back());
            }
            std::size_t longest = 0;
            for (const auto& lane : lanes) longest = std::max(longest, lane.size());
            for (std::size_t k = 0; k < longest; ++k)
                for (const auto& lane : lanes)
                    if (k < lane.size()) out.push_back(lane[k]);
            return;
        }
    }
}

}  // namespace

Schedule linearize(const Expression& expr) {
    Schedule s;
    linearize_into(expr, s.order);
    return s;
}

bool validate_schedule(const Schedule& schedule, const Plan& plan) {
    std::map<int, std::size_t> position;
    for (std::size_t i = 0; i < schedule.order.size(); ++i) {
        if (!position.emplace(schedule.order[i], i).second) return false;
    }
    if (position.size() != plan.boxes().size()) return false;
    for (const auto& box : plan.boxes()) {
        if (!position.contains(box.id)) return false;
    }
    for (const auto& [from, to] : plan.box_dependencies()) {
        if (position.at(from) >= position.at(to)) return false;
    }
    return true;
}

namespace {

void sexpr_into(const Expression& e, std::string& out) {
    switch (e.kind) {
        case Expression::Kind::leaf:
            out += std::to_string(e.box_id);
            return;
        case Expression::Kind::compose:
        case Expression::Kind::tensor:
            out += e.kind == Expression::Kind::compose ? "(seq" : "(par";
            for (const auto& child : e.children) {
                out += ' ';
                sexpr_into(child, out);
            }
            out += ')';
            return;
    }
}

}  // namespace

std::string expression_to_sexpr(const Expression& expr) {
    std::string out;
    sexpr_into(expr, out);
    return out;
}

std::string schedule_to_json(const Schedule& schedule, const std::string& plan_id) {
    nlohmann::ordered_json doc;
    doc["plan_id"] = plan_id;
    doc["order"] = schedule.order;
    return doc.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("schedule: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("order") || !doc["order"].is_array())
        throw ParseError("schedule: expected an object with an \"order\" array");
    Schedule s;
    for (const auto& entry : doc["order"]) {
        if (!entry.is_number_integer()) throw ParseError("schedule: order entries must be integers");
        s.order.push_back(entry.get<int>());
    }
    return s;
}

}  // namespace brickplan
