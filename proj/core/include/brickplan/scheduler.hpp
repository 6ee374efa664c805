#pragma once

#include <string>
#include <vector>

#include "brickplan/wiring.hpp"

namespace brickplan {

// Composition tree over plan boxes: compose sequences its children, tensor
// lays them side by side. Leaves are box ids.
struct Expression {
    enum class Kind { leaf, compose, tensor };
    Kind kind = Kind::leaf;
    int box_id = -1;
    std::vector<Expression> children;

    static Expression leaf(int box_id);
    // Splices nested composes (sequencing is associative); a single child
    // collapses to itself.
    static Expression compose(std::vector<Expression> children);
    static Expression tensor(std::vector<Expression> children);

    friend bool operator==(const Expression&, const Expression&) = default;
};

struct Schedule {
    std::vector<int> order;  // box ids

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Canonical expression for the top-level box DAG of a plan: independent
// parts go into a tensor ordered by smallest box id, a connected part is
// split into its source layer composed before the remainder.
Expression diagram_to_expression(const Plan& plan);

// Leaves left to right; tensor children are interleaved round robin so
// parallel branches alternate in the final order.
Schedule linearize(const Expression& expr);

// True when the order is a permutation of the plan's top-level boxes that
// respects every wire dependency.
bool validate_schedule(const Schedule& schedule, const Plan& plan);

std::string expression_to_sexpr(const Expression& expr);  // "(seq (par 1 3) 2)"

std::string schedule_to_json(const Schedule& schedule, const std::string& plan_id);
Schedule schedule_from_json(const std::string& text);

}  // namespace brickplan
