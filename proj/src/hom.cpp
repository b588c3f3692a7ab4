#include "relhom/hom.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "relhom/dismantle.hpp"

namespace relhom {

bool is_homomorphism(const RelStructure& g, const RelStructure& h, const Homomorphism& phi) {
    if (static_cast<int>(phi.map.size()) != g.size()) return false;
    for (int v : phi.map)
        if (v < 0 || v >= h.size()) return false;
    for (int s = 0; s < g.signature().size(); ++s) {
        for (const auto& t : g.tuples(s)) {
            Tuple img(t.size());
            for (size_t i = 0; i < t.size(); ++i) img[i] = phi.map[t[i]];
            if (!h.has_tuple(s, img)) return false;
        }
    }
    return true;
}

bool partial_map_consistent(const RelStructure& g, const RelStructure& h, const PartialMap& p) {
    if (static_cast<int>(p.map.size()) != g.size()) return false;
    for (int v : p.map)
        if (v < -1 || v >= h.size()) return false;
    for (int s = 0; s < g.signature().size(); ++s) {
        for (const auto& t : g.tuples(s)) {
            Tuple img(t.size());
            bool full = true;
            for (size_t i = 0; i < t.size(); ++i) {
                if (p.map[t[i]] < 0) {
                    full = false;
                    break;
                }
                img[i] = p.map[t[i]];
            }
            if (full && !h.has_tuple(s, img)) return false;
        }
    }
    return true;
}

namespace {

struct HomSearch {
    const RelStructure& g;
    const RelStructure& h;
    std::vector<int> order;     // variable order (element indices of g)
    std::vector<int> assigned;  // g element -> h element or -1
    long long cap;
    long long found = 0;
    bool count_only = false;
    bool stop_at_first = false;
    std::vector<Homomorphism>* out = nullptr;

    // Tuples fully assigned once `v` is set must be valid.
    bool consistent_at(int v) const {
        for (auto [s, ti] : g.occurrences(v)) {
            const Tuple& t = g.tuples(s)[ti];
            Tuple img(t.size());
            bool full = true;
            for (size_t i = 0; i < t.size(); ++i) {
                int a = assigned[t[i]];
                if (a < 0) {
                    full = false;
                    break;
                }
                img[i] = a;
            }
            if (full && !h.has_tuple(s, img)) return false;
        }
        return true;
    }

    bool run(size_t pos) { // returns true when the search should stop
        if (pos == order.size()) {
            ++found;
            if (out) out->push_back(Homomorphism{assigned});
            if (stop_at_first) return true;
            if (found > cap) throw CapExceeded("homomorphism cap exceeded", found - 1);
            return false;
        }
        int v = order[pos];
        if (assigned[v] >= 0) // pinned
            return consistent_at(v) ? run(pos + 1) : false;
        for (int a = 0; a < h.size(); ++a) {
            assigned[v] = a;
            if (consistent_at(v) && run(pos + 1)) return true;
            assigned[v] = -1;
        }
        return false;
    }
};

std::vector<int> variable_order(const RelStructure& g, bool degree_order) {
    std::vector<int> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    if (degree_order)
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return g.degree(a) > g.degree(b); });
    return order;
}

} // namespace

std::vector<Homomorphism> enumerate_homs(const RelStructure& g, const RelStructure& h,
                                         const HomEnumOptions& opt) {
    if (!(g.signature() == h.signature()))
        throw PreconditionError("enumerate_homs: signature mismatch");
    if (opt.cap < 1) throw PreconditionError("enumerate_homs: cap must be >= 1");
    std::vector<Homomorphism> result;
    HomSearch srch{g, h, variable_order(g, opt.degree_order),
                   std::vector<int>(g.size(), -1), opt.cap};
    srch.out = &result;
    srch.run(0);
    if (opt.degree_order) std::sort(result.begin(), result.end());
    return result;
}

long long count_homs(const RelStructure& g, const RelStructure& h, long long cap) {
    if (!(g.signature() == h.signature()))
        throw PreconditionError("count_homs: signature mismatch");
    HomSearch srch{g, h, variable_order(g, false), std::vector<int>(g.size(), -1), cap};
    srch.count_only = true;
    srch.run(0);
    return srch.found;
}

std::optional<Homomorphism> extend_partial(const RelStructure& g, const RelStructure& h,
                                           const PartialMap& p) {
    if (static_cast<int>(p.map.size()) != g.size())
        throw PreconditionError("extend_partial: map size mismatch");
    if (!partial_map_consistent(g, h, p)) return std::nullopt;
    std::vector<Homomorphism> result;
    HomSearch srch{g, h, variable_order(g, false), p.map, 1};
    srch.stop_at_first = true;
    srch.out = &result;
    srch.run(0);
    if (result.empty()) return std::nullopt;
    return result.front();
}

bool extendable(const RelStructure& g, const RelStructure& h, const PartialMap& p) {
    return extend_partial(g, h, p).has_value();
}

RigidityResult label_rigidity(const RelStructure& h, const std::vector<int>& protected_set,
                              int depth, long long element_cap) {
    if (depth < 1) throw PreconditionError("label_rigidity: depth must be >= 1");
    if (!is_j_non_foldable(h, protected_set))
        throw PreconditionError("label_rigidity: structure is foldable outside the protected set");

    std::vector<bool> in_j(h.size(), false);
    for (int e : protected_set) in_j[e] = true;

    WalkForest f = walk_forest(h, depth, element_cap);
    RigidityResult res;
    res.forest_size = f.structure.size();

    // Level-by-level: a walk of non-maximal length whose endpoint lies outside
    // the protected set admits no alternative value once all longer walks are
    // pinned, unless some other element dominates its endpoint. Any such
    // dominator yields a genuine one-point witness homomorphism, which we
    // validate in full before reporting failure.
    for (int w = 0; w < f.structure.size(); ++w) {
        if (f.lengths[w] >= depth) continue; // pinned level
        int a = f.labels[w];
        if (in_j[a]) continue; // pinned by the protected part
        for (int b = 0; b < h.size(); ++b) {
            if (b == a || !dominates(h, b, a)) continue;
            Homomorphism witness{f.labels};
            witness.map[w] = b;
            if (is_homomorphism(f.structure, h, witness)) {
                res.rigid = false;
                res.witness = witness;
                return res;
            }
        }
    }
    return res;
}

std::string render_hom(const RelStructure& g, const RelStructure& h, const Homomorphism& phi) {
    std::ostringstream os;
    for (int v = 0; v < g.size(); ++v) {
        if (v < static_cast<int>(phi.map.size()) && phi.map[v] >= 0)
            os << g.element_name(v) << " -> " << h.element_name(phi.map[v]) << '\n';
    }
    return os.str();
}

PartialMap parse_partial_map(const RelStructure& g, const RelStructure& h,
                             const std::string& text) {
    PartialMap p;
    p.map.assign(g.size(), -1);
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto pos = line.find('#');
        if (pos != std::string::npos) line = line.substr(0, pos);
        std::istringstream ls(line);
        std::string src, arrow, dst;
        if (!(ls >> src)) continue;
        if (!(ls >> arrow >> dst) || arrow != "->")
            throw ParseError("expected 'x -> a'", lineno);
        p.map[g.require_element(src)] = h.require_element(dst);
    }
    return p;
}

} // namespace relhom
