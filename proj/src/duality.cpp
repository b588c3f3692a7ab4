#include "relhom/duality.hpp"

#include <algorithm>
#include <set>

#include "relhom/dismantle.hpp"
#include "relhom/iso.hpp"
#include "relhom/walks.hpp"

namespace relhom {

namespace {

long long ipow_capped(long long base, int exp, long long cap) {
    long long v = 1;
    for (int i = 0; i < exp; ++i) {
        v *= base;
        if (v > cap) return cap + 1;
    }
    return v;
}

} // namespace

bool is_core(const RelStructure& h, long long cap) {
    if (ipow_capped(h.size(), h.size(), cap) > cap)
        throw CapExceeded("is_core: endomorphism space exceeds cap");
    // depth-first over all endomorphisms, stopping at the first non-injective
    std::vector<int> map(h.size(), -1);
    auto consistent_at = [&](int v) {
        for (auto [s, ti] : h.occurrences(v)) {
            const Tuple& t = h.tuples(s)[ti];
            Tuple img(t.size());
            bool full = true;
            for (size_t i = 0; i < t.size(); ++i) {
                if (map[t[i]] < 0) {
                    full = false;
                    break;
                }
                img[i] = map[t[i]];
            }
            if (full && !h.has_tuple(s, img)) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, int v) -> bool { // true = found non-injective endo
        if (v == h.size()) {
            std::vector<bool> used(h.size(), false);
            for (int x : map) {
                if (used[x]) return true;
                used[x] = true;
            }
            return false;
        }
        for (int a = 0; a < h.size(); ++a) {
            map[v] = a;
            if (consistent_at(v) && self(self, v + 1)) return true;
        }
        map[v] = -1;
        return false;
    };
    return !rec(rec, 0);
}

namespace {

bool hommable(const RelStructure& g, const RelStructure& h) {
    PartialMap empty;
    empty.map.assign(g.size(), -1);
    return extendable(g, h, empty);
}

RelStructure drop_tuple(const RelStructure& o, int sym, int tuple_index) {
    std::vector<int> all(o.size());
    for (int e = 0; e < o.size(); ++e) all[e] = e;
    RelStructure out(o.signature(), o.universe());
    for (int s = 0; s < o.signature().size(); ++s) {
        const auto& rel = o.tuples(s);
        for (int ti = 0; ti < static_cast<int>(rel.size()); ++ti)
            if (!(s == sym && ti == tuple_index)) out.add_tuple(s, rel[ti]);
    }
    return out;
}

RelStructure drop_element(const RelStructure& o, int elem) {
    std::vector<int> keep;
    for (int e = 0; e < o.size(); ++e)
        if (e != elem) keep.push_back(e);
    return induced_substructure(o, keep);
}

} // namespace

bool is_critical_obstruction(const RelStructure& o, const RelStructure& h, long long) {
    if (!(o.signature() == h.signature()))
        throw PreconditionError("is_critical_obstruction: signature mismatch");
    if (hommable(o, h)) return false;
    for (int s = 0; s < o.signature().size(); ++s)
        for (int ti = 0; ti < static_cast<int>(o.tuples(s).size()); ++ti)
            if (!hommable(drop_tuple(o, s, ti), h)) return false;
    for (int e = 0; e < o.size(); ++e) {
        if (o.size() == 1) break; // empty structure maps trivially
        if (!hommable(drop_element(o, e), h)) return false;
    }
    return true;
}

namespace {

// All tuples of arity k over `old_count` existing elements plus up to k-1
// fresh ones (used in order), containing at least one existing element.
void candidate_tuples(int old_count, int k, int max_total,
                      std::vector<Tuple>& out) {
    Tuple t(k, 0);
    auto rec = [&](auto&& self, int pos, int fresh_used) -> void {
        if (pos == k) {
            for (int c : t)
                if (c < old_count) {
                    out.push_back(t);
                    return;
                }
            return;
        }
        for (int c = 0; c < old_count + fresh_used + 1; ++c) {
            if (c >= old_count + fresh_used) {
                // introduce the next fresh element
                if (old_count + fresh_used + 1 > max_total) continue;
                t[pos] = c;
                self(self, pos + 1, fresh_used + 1);
            } else {
                t[pos] = c;
                self(self, pos + 1, fresh_used);
            }
        }
    };
    rec(rec, 0, 0);
}

RelStructure with_tuple(const RelStructure& s, int sym, const Tuple& t, int new_size) {
    std::vector<std::string> names = s.universe();
    for (int e = s.size(); e < new_size; ++e) names.push_back("n" + std::to_string(e));
    RelStructure out(s.signature(), std::move(names));
    for (int ss = 0; ss < s.signature().size(); ++ss)
        for (const auto& tt : s.tuples(ss)) out.add_tuple(ss, tt);
    out.add_tuple(sym, t);
    return out;
}

} // namespace

ObstructionReport enumerate_critical_obstructions(const RelStructure& h, int max_size,
                                                  bool trees_only, const ObstructionCaps& caps) {
    if (max_size < 1)
        throw PreconditionError("enumerate_critical_obstructions: max_size must be >= 1");
    ObstructionReport rep;
    rep.max_size = max_size;
    rep.trees_only = trees_only;

    long long max_tuples = 0;
    for (const auto& sym : h.signature().symbols())
        max_tuples += static_cast<long long>(sym.arity) * max_size * max_size;

    std::set<std::string> visited;
    std::vector<RelStructure> stack;
    std::vector<std::pair<int, std::string>> found_keys; // (size, key) for ordering

    RelStructure start(h.signature(), std::vector<std::string>{"n0"});
    visited.insert(canonical_key(start));
    stack.push_back(start);
    rep.states_visited = 1;

    while (!stack.empty()) {
        RelStructure cur = stack.back();
        stack.pop_back();
        for (int s = 0; s < h.signature().size(); ++s) {
            int k = h.signature().arity(s);
            std::vector<Tuple> cands;
            candidate_tuples(cur.size(), k, max_size, cands);
            for (const auto& t : cands) {
                int new_size = cur.size();
                for (int c : t) new_size = std::max(new_size, c + 1);
                if (cur.total_tuples() + 1 > max_tuples) continue;
                if (new_size == cur.size() && cur.has_tuple(s, t)) continue;
                RelStructure ext = with_tuple(cur, s, t, new_size);
                if (trees_only && !is_forest(ext)) continue;
                std::string key = canonical_key(ext);
                if (!visited.insert(key).second) continue;
                if (++rep.states_visited > caps.state_cap) {
                    rep.exhausted = false;
                    goto done;
                }
                if (hommable(ext, h)) {
                    stack.push_back(std::move(ext));
                } else if (is_critical_obstruction(ext, h, caps.hom_node_cap)) {
                    found_keys.emplace_back(ext.size(), key);
                    rep.found.push_back(canonical_form(ext));
                }
            }
        }
    }
done:
    // order: by element count, then canonical key
    std::vector<int> idx(rep.found.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return found_keys[a] < found_keys[b]; });
    std::vector<RelStructure> ordered;
    for (int i : idx) ordered.push_back(rep.found[i]);
    rep.found = std::move(ordered);
    return rep;
}

bool finite_duality_via_a1c(const RelStructure& h) {
    if (!is_core(h)) throw PreconditionError("finite_duality_via_a1c: structure is not a core");
    std::vector<int> all(h.size());
    for (int e = 0; e < h.size(); ++e) all[e] = e;
    auto rep = decide_main(h, all);
    // with everything protected, phase 1 folds nothing, so this is exactly
    // "the square dismantles to the full diagonal"
    return rep.holds;
}

RelStructure constants_augmented_instance(const RelStructure& g, const RelStructure& h,
                                          const PartialMap& p) {
    if (!(g.signature() == h.signature()))
        throw PreconditionError("constants_augmented_instance: signature mismatch");
    if (static_cast<int>(p.map.size()) != g.size())
        throw PreconditionError("constants_augmented_instance: partial map size mismatch");
    auto symbols = h.signature().symbols();
    for (int e = 0; e < h.size(); ++e) symbols.push_back(Symbol{"const_" + h.element_name(e), 1});
    RelStructure out(Signature(std::move(symbols)), g.universe());
    for (int s = 0; s < g.signature().size(); ++s)
        for (const auto& t : g.tuples(s)) out.add_tuple(s, t);
    for (int x = 0; x < g.size(); ++x)
        if (p.map[x] >= 0) out.add_tuple(g.signature().size() + p.map[x], Tuple{x});
    return out;
}

bool extension_via_obstructions(const RelStructure& g, const RelStructure& h, const PartialMap& p,
                                const ObstructionReport& obs) {
    if (!obs.exhausted)
        throw PreconditionError("extension_via_obstructions: obstruction list is not exhausted");
    RelStructure instance = constants_augmented_instance(g, h, p);
    bool extends = true;
    for (const auto& o : obs.found) {
        if (!(o.signature() == instance.signature()))
            throw PreconditionError("extension_via_obstructions: obstruction signature mismatch");
        if (hommable(o, instance)) {
            extends = false;
            break;
        }
    }
    bool direct = extend_partial(g, h, p).has_value();
    if (direct != extends)
        throw InternalCheckError(
            "extension_via_obstructions: disagreement with direct extension (obstruction list "
            "incomplete for this instance)");
    return extends;
}

} // namespace relhom
