#include "relhom/walks.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace relhom {

int walk_end(const RelStructure& g, const Walk& w) {
    if (w.steps.empty()) return w.start;
    const auto& last = w.steps.back();
    return g.tuples(last.symbol)[last.tuple_index][last.to];
}

bool is_valid_walk(const RelStructure& g, const Walk& w) {
    if (w.start < 0 || w.start >= g.size()) return false;
    int cur = w.start;
    for (const auto& st : w.steps) {
        if (st.symbol < 0 || st.symbol >= g.signature().size()) return false;
        const auto& rel = g.tuples(st.symbol);
        if (st.tuple_index < 0 || st.tuple_index >= static_cast<int>(rel.size())) return false;
        const Tuple& t = rel[st.tuple_index];
        int k = static_cast<int>(t.size());
        if (st.from < 0 || st.from >= k || st.to < 0 || st.to >= k || st.from == st.to)
            return false;
        if (t[st.from] != cur) return false;
        cur = t[st.to];
    }
    return true;
}

std::vector<int> distances_from(const RelStructure& g, const std::vector<int>& from) {
    std::vector<int> dist(g.size(), kInfiniteDistance);
    std::deque<int> queue;
    for (int e : from) {
        if (e < 0 || e >= g.size()) throw PreconditionError("element out of range");
        if (dist[e] != 0) {
            dist[e] = 0;
            queue.push_back(e);
        }
    }
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (auto [s, ti] : g.occurrences(cur)) {
            const Tuple& t = g.tuples(s)[ti];
            // the tuple must offer two distinct positions, one holding cur
            bool holds_cur = false;
            for (int comp : t)
                if (comp == cur) holds_cur = true;
            if (!holds_cur || t.size() < 2) continue;
            for (int comp : t) {
                if (dist[comp] == kInfiniteDistance) {
                    dist[comp] = dist[cur] + 1;
                    queue.push_back(comp);
                }
            }
        }
    }
    return dist;
}

int distance(const RelStructure& g, const std::vector<int>& v, const std::vector<int>& w) {
    if (v.empty() || w.empty()) throw PreconditionError("distance: empty set");
    auto dist = distances_from(g, v);
    int best = kInfiniteDistance;
    for (int e : w) {
        if (e < 0 || e >= g.size()) throw PreconditionError("element out of range");
        best = std::min(best, dist[e]);
    }
    return best;
}

std::vector<int> boundary(const RelStructure& g, const std::vector<int>& v) {
    auto dist = distances_from(g, v);
    std::vector<int> out;
    for (int e = 0; e < g.size(); ++e)
        if (dist[e] == 1) out.push_back(e);
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // returns false when x and y were already joined
    bool unite(int x, int y) {
        int rx = find(x), ry = find(y);
        if (rx == ry) return false;
        parent[std::max(rx, ry)] = std::min(rx, ry);
        return true;
    }
};

} // namespace

std::vector<int> component_ids(const RelStructure& g) {
    UnionFind uf(g.size());
    for (int s = 0; s < g.signature().size(); ++s)
        for (const auto& t : g.tuples(s))
            for (size_t i = 1; i < t.size(); ++i) uf.unite(t[0], t[i]);
    std::vector<int> ids(g.size(), -1);
    int next = 0;
    for (int e = 0; e < g.size(); ++e) {
        int root = uf.find(e);
        if (ids[root] < 0) ids[root] = next++;
        ids[e] = ids[root];
    }
    return ids;
}

int component_count(const RelStructure& g) {
    auto ids = component_ids(g);
    return ids.empty() ? 0 : 1 + *std::max_element(ids.begin(), ids.end());
}

bool is_connected(const RelStructure& g) { return component_count(g) <= 1; }

bool is_forest(const RelStructure& g) {
    // Union-find over the incidence multigraph: each tuple is a node joined to
    // every position's element; a failed union means a cycle (this counts
    // repeated elements within a tuple and parallel tuples as cycles).
    int n = g.size();
    long long tuple_nodes = g.total_tuples();
    UnionFind uf(n + static_cast<int>(tuple_nodes));
    int tnode = n;
    for (int s = 0; s < g.signature().size(); ++s) {
        for (const auto& t : g.tuples(s)) {
            for (int comp : t)
                if (!uf.unite(tnode, comp)) return false;
            ++tnode;
        }
    }
    return true;
}

} // namespace relhom
