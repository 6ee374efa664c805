#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "model_builder.hpp"

// Seeded generator of connected stack models: one to three towers of
// jittered 2x4 bricks, adjacent towers bridged by a 2x8 across their tops,
// then random bricks dropped onto existing ones. Every model is a single
// grounded assembly; brick collisions are irrelevant to the support
// predicate and are not avoided.

namespace testsupport {

struct PlacedBrick {
    std::string part;
    int x = 0;
    int z = 0;
    int level = 0;
};

inline std::vector<PlacedBrick> generate_stack_bricks(unsigned seed, int max_extra = 12) {
    std::mt19937 rng(seed);
    const auto pick = [&rng](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };

    const int towers = 1 + pick(3);
    const int height = 2 + pick(5);
    std::vector<PlacedBrick> bricks;
    std::vector<int> top_x(static_cast<std::size_t>(towers), 0);

    // Tower centres 160 apart: bases do not touch, but x-jitter within
    // +-20 keeps every bridge within reach of both tower tops.
    for (int t = 0; t < towers; ++t) {
        const int centre = 160 * t;
        int x = centre;
        for (int level = 0; level < height; ++level) {
            if (level > 0) x = centre + 20 * (pick(3) - 1);
            bricks.push_back({"3001", x, 0, level});
            top_x[static_cast<std::size_t>(t)] = x;
        }
    }
    for (int t = 0; t + 1 < towers; ++t) {
        const int mid = (top_x[static_cast<std::size_t>(t)] +
                         top_x[static_cast<std::size_t>(t + 1)]) / 2;
        bricks.push_back({"3007", mid, 0, height});
    }

    const char* parts[] = {"3001", "3003", "3004"};
    const int extra = pick(max_extra + 1);
    for (int k = 0; k < extra; ++k) {
        const PlacedBrick& base = bricks[static_cast<std::size_t>(pick(static_cast<int>(bricks.size())))];
        PlacedBrick next;
        next.part = parts[pick(3)];
        next.x = base.x + 20 * (pick(3) - 1);
        next.z = base.z;
        next.level = base.level + 1;
        bricks.push_back(next);
    }
    return bricks;
}

inline std::string generate_stack_model(unsigned seed, int max_extra = 12) {
    std::ostringstream out;
    out << "0 generated stack model, seed " << seed << "\n";
    for (const PlacedBrick& b : generate_stack_bricks(seed, max_extra))
        out << brick_at_level(b.part, b.x, b.level, b.z) << "\n";
    return out.str();
}

}  // namespace testsupport
