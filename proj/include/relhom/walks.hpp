#pragma once

#include <limits>
#include <vector>

#include "relhom/structure.hpp"

namespace relhom {

// Distance between elements joined by no walk. Any comparison `INF >= g`
// holds, which makes disconnected pairs vacuously far apart.
constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

// One step of a walk: leave the current element through position `from` of
// tuple `tuple_index` of symbol `symbol`, arriving at position `to`.
// Positions are 0-based internally and rendered 1-based.
struct WalkStep {
    int symbol;
    int tuple_index;
    int from;
    int to;

    bool operator==(const WalkStep&) const = default;
    auto operator<=>(const WalkStep&) const = default;
};

struct Walk {
    int start = -1; // element index
    std::vector<WalkStep> steps;

    int length() const { return static_cast<int>(steps.size()); }
};

// End element of a walk (equals start when there are no steps).
int walk_end(const RelStructure& g, const Walk& w);
bool is_valid_walk(const RelStructure& g, const Walk& w);

// Walk distances from every element of `from` (multi-source BFS over tuple
// incidence: two elements are one step apart when they occupy two different
// positions of a common tuple). Empty `from` yields all-infinite.
std::vector<int> distances_from(const RelStructure& g, const std::vector<int>& from);

// Least walk length between the two sets. Both must be nonempty.
int distance(const RelStructure& g, const std::vector<int>& v, const std::vector<int>& w);

// Elements outside `v` at distance exactly 1 from it.
std::vector<int> boundary(const RelStructure& g, const std::vector<int>& v);

// Connected component ids in canonical order (component 0 contains element 0).
std::vector<int> component_ids(const RelStructure& g);
int component_count(const RelStructure& g);
bool is_connected(const RelStructure& g);

// No cycles in the sense of the incidence multigraph: a loopless forest of
// tuples. A tuple listing the same element twice counts as a cycle.
bool is_forest(const RelStructure& g);

} // namespace relhom
