#include "relhom/mixing.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "relhom/walks.hpp"

namespace relhom {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int x, int y) {
        int rx = find(x), ry = find(y);
        if (rx == ry) return false;
        parent[std::max(rx, ry)] = std::min(rx, ry);
        return true;
    }
};

} // namespace

MixSolver::MixSolver(const RelStructure& g, const RelStructure& h) : g_(&g), h_(&h) {
    if (h.size() > 64) throw PreconditionError("MixSolver: target too large");
    full_mask_ = h.size() == 64 ? ~0ull : ((1ull << h.size()) - 1);
    unary_.assign(g.size(), full_mask_);
    dom_.assign(g.size(), 0);

    bool binary_only = true;
    for (const auto& sym : g.signature().symbols())
        if (sym.arity > 2) binary_only = false;
    if (!binary_only) return;

    // Collapse all binary constraints per unordered node pair; loops and unary
    // tuples become node masks.
    std::map<std::pair<int, int>, std::vector<uint64_t>> compat; // (u<v) -> u-major matrix rows
    auto rows_for = [&](int u, int v) -> std::vector<uint64_t>& {
        auto key = std::minmax(u, v);
        auto it = compat.find(key);
        if (it == compat.end()) {
            it = compat.emplace(key, std::vector<uint64_t>(h.size(), full_mask_)).first;
        }
        return it->second;
    };

    for (int s = 0; s < g.signature().size(); ++s) {
        int k = g.signature().arity(s);
        if (k == 1) {
            uint64_t allowed = 0;
            for (const auto& ht : h.tuples(s)) allowed |= 1ull << ht[0];
            for (const auto& t : g.tuples(s)) unary_[t[0]] &= allowed;
        } else { // k == 2
            uint64_t loop_allowed = 0;
            std::vector<uint64_t> fwd(h.size(), 0), bwd(h.size(), 0);
            for (const auto& ht : h.tuples(s)) {
                fwd[ht[0]] |= 1ull << ht[1];
                bwd[ht[1]] |= 1ull << ht[0];
                if (ht[0] == ht[1]) loop_allowed |= 1ull << ht[0];
            }
            for (const auto& t : g.tuples(s)) {
                if (t[0] == t[1]) {
                    unary_[t[0]] &= loop_allowed;
                } else {
                    auto& rows = rows_for(t[0], t[1]);
                    bool t0_minor = t[0] < t[1];
                    for (int a = 0; a < h.size(); ++a)
                        rows[a] &= t0_minor ? fwd[a] : bwd[a];
                }
            }
        }
    }

    // Fast path only when the collapsed graph is a forest.
    UnionFind uf(g.size());
    bool forest = true;
    for (const auto& [key, rows] : compat)
        if (!uf.unite(key.first, key.second)) forest = false;
    if (!forest) return;

    // Child->parent processing order: root components at their least element,
    // BFS out, then process edges deepest-first.
    std::vector<int> depth(g.size(), -1);
    std::vector<std::vector<std::pair<int, const std::vector<uint64_t>*>>> nbrs(g.size());
    for (const auto& [key, rows] : compat) {
        nbrs[key.first].emplace_back(key.second, &rows);
        nbrs[key.second].emplace_back(key.first, &rows);
    }
    std::vector<std::pair<int, int>> order; // (depth, node)
    std::vector<int> parent_of(g.size(), -1);
    for (int root = 0; root < g.size(); ++root) {
        if (depth[root] >= 0) continue;
        depth[root] = 0;
        std::vector<int> queue{root};
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            order.emplace_back(depth[u], u);
            for (auto [v, rows] : nbrs[u]) {
                if (depth[v] >= 0) continue;
                depth[v] = depth[u] + 1;
                parent_of[v] = u;
                queue.push_back(v);
            }
        }
    }
    std::sort(order.begin(), order.end(), std::greater<>());
    for (auto [d, node] : order) {
        if (parent_of[node] < 0) continue;
        Edge e;
        e.child = node;
        e.parent = parent_of[node];
        const auto& rows = compat.at(std::minmax(e.child, e.parent));
        e.parent_ok.assign(h.size(), 0);
        bool parent_minor = e.parent < e.child;
        for (int a = 0; a < h.size(); ++a) {
            // mask of child values compatible with parent value a
            if (parent_minor) {
                e.parent_ok[a] = rows[a];
            } else {
                uint64_t m = 0;
                for (int b = 0; b < h.size(); ++b)
                    if (rows[b] >> a & 1ull) m |= 1ull << b;
                e.parent_ok[a] = m;
            }
        }
        pass_.push_back(std::move(e));
    }
    fast_ = true;
}

bool MixSolver::feasible_fast(const std::vector<int8_t>& clamp) const {
    auto& dom = dom_;
    for (int x = 0; x < g_->size(); ++x) {
        dom[x] = clamp[x] >= 0 ? (unary_[x] & (1ull << clamp[x])) : unary_[x];
        if (!dom[x]) return false;
    }
    for (const auto& e : pass_) {
        uint64_t child_dom = dom[e.child];
        uint64_t keep = 0;
        uint64_t pd = dom[e.parent];
        while (pd) {
            int a = std::countr_zero(pd);
            pd &= pd - 1;
            if (e.parent_ok[a] & child_dom) keep |= 1ull << a;
        }
        dom[e.parent] = keep;
        if (!keep) return false;
    }
    return true;
}

bool MixSolver::feasible_generic(const std::vector<int8_t>& clamp) const {
    PartialMap p;
    p.map.assign(g_->size(), -1);
    for (int x = 0; x < g_->size(); ++x) p.map[x] = clamp[x];
    return extendable(*g_, *h_, p);
}

bool MixSolver::feasible(const std::vector<int8_t>& clamp) const {
    return fast_ ? feasible_fast(clamp) : feasible_generic(clamp);
}

std::optional<Homomorphism> MixSolver::least(const std::vector<int8_t>& clamp) const {
    if (!fast_) {
        PartialMap p;
        p.map.assign(g_->size(), -1);
        for (int x = 0; x < g_->size(); ++x) p.map[x] = clamp[x];
        return extend_partial(*g_, *h_, p);
    }
    if (!feasible_fast(clamp)) return std::nullopt;
    std::vector<int8_t> cur = clamp;
    for (int x = 0; x < g_->size(); ++x) {
        if (cur[x] >= 0) continue;
        for (int a = 0; a < h_->size(); ++a) {
            cur[x] = static_cast<int8_t>(a);
            if (feasible_fast(cur)) break;
            cur[x] = -1;
        }
        if (cur[x] < 0) throw InternalCheckError("MixSolver: lost feasibility while extending");
    }
    Homomorphism out;
    out.map.assign(cur.begin(), cur.end());
    return out;
}

namespace {

// clamp[x] := v, reporting conflicts with earlier clamps
bool clamp_set(std::vector<int8_t>& clamp, int x, int v) {
    if (clamp[x] >= 0 && clamp[x] != v) return false;
    clamp[x] = static_cast<int8_t>(v);
    return true;
}

std::vector<int8_t> base_pair_clamp(const RelStructure& g, const std::vector<bool>& in_j,
                                    const Homomorphism& phi, const Homomorphism& psi) {
    std::vector<int8_t> clamp(g.size(), -1);
    for (int x = 0; x < g.size(); ++x)
        if (phi.map[x] == psi.map[x] && in_j[phi.map[x]])
            clamp[x] = static_cast<int8_t>(phi.map[x]);
    return clamp;
}

} // namespace

std::optional<Homomorphism> vw_mixing(const RelStructure& g, const RelStructure& h,
                                      const MixingQuery& q) {
    if (!is_homomorphism(g, h, q.phi) || !is_homomorphism(g, h, q.psi))
        throw PreconditionError("vw_mixing: phi/psi are not homomorphisms");
    std::vector<bool> in_j(h.size(), false);
    for (int e : q.protected_set) in_j[e] = true;
    auto clamp = base_pair_clamp(g, in_j, q.phi, q.psi);
    for (int x : q.v)
        if (!clamp_set(clamp, x, q.phi.map[x])) return std::nullopt;
    for (int x : q.w)
        if (!clamp_set(clamp, x, q.psi.map[x])) return std::nullopt;
    MixSolver solver(g, h);
    return solver.least(clamp);
}

std::optional<Homomorphism> tssm_definition_query(const RelStructure& g, const RelStructure& h,
                                                  const MixingQuery& q) {
    for (int x : q.s)
        if (q.phi.map[x] != q.psi.map[x])
            throw PreconditionError("tssm_definition_query: phi and psi differ on S");
    std::vector<int8_t> clamp(g.size(), -1);
    for (int x : q.s) clamp[x] = static_cast<int8_t>(q.phi.map[x]);
    for (int x : q.v)
        if (!clamp_set(clamp, x, q.phi.map[x])) return std::nullopt;
    for (int x : q.w)
        if (!clamp_set(clamp, x, q.psi.map[x])) return std::nullopt;
    MixSolver solver(g, h);
    return solver.least(clamp);
}

std::vector<std::vector<int>> mixing_w_family(const RelStructure& g) {
    std::set<std::vector<int>> family;
    for (int v = 0; v < g.size(); ++v) family.insert({v});
    for (int c = 0; c < g.size(); ++c) {
        auto dist = distances_from(g, {c});
        std::map<int, std::vector<int>> spheres;
        for (int e = 0; e < g.size(); ++e)
            if (dist[e] != kInfiniteDistance && dist[e] > 0) spheres[dist[e]].push_back(e);
        for (auto& [r, members] : spheres) family.insert(members);
    }
    if (g.size() <= 8) {
        for (unsigned mask = 1; mask < (1u << g.size()); ++mask) {
            std::vector<int> members;
            for (int e = 0; e < g.size(); ++e)
                if (mask >> e & 1u) members.push_back(e);
            family.insert(std::move(members));
        }
    }
    return {family.begin(), family.end()};
}

namespace {

struct FamilyScan {
    bool infinite_failure = false;
    int max_finite_failure = -1;
    std::optional<MixingCounterexample> least_counterexample;
    long long queries = 0;

    void record_failure(const std::vector<int>& v, const std::vector<int>& w, int dist,
                        const Homomorphism& phi, const Homomorphism& psi) {
        if (dist == kInfiniteDistance)
            infinite_failure = true;
        else
            max_finite_failure = std::max(max_finite_failure, dist);
        if (!least_counterexample || dist < least_counterexample->dist)
            least_counterexample = MixingCounterexample{v, w, dist, phi, psi};
    }
};

// Shared quantifier loop: all singleton V, family W, all hom pairs, with the
// distance filter `min_dist` (-1 = no filter).
void scan_family(const RelStructure& g, const RelStructure& h,
                 const std::vector<int>& protected_set, int min_dist, const MixingCaps& caps,
                 FamilyScan& out) {
    auto homs = enumerate_homs(g, h, HomEnumOptions{caps.hom_cap, false});
    if (homs.empty()) return; // nothing to merge
    MixSolver solver(g, h);
    std::vector<bool> in_j(h.size(), false);
    for (int e : protected_set) in_j[e] = true;

    auto family = mixing_w_family(g);
    // (V,W) pairs with their distances, V singleton
    std::vector<std::tuple<int, std::vector<int>, int>> combos;
    for (int v = 0; v < g.size(); ++v) {
        auto dist = distances_from(g, {v});
        for (const auto& w : family) {
            int d = kInfiniteDistance;
            for (int e : w) d = std::min(d, dist[e]);
            if (min_dist >= 0 && d < min_dist) continue;
            combos.emplace_back(v, w, d);
        }
    }

    std::vector<int8_t> clamp(g.size(), -1);
    for (size_t i = 0; i < homs.size(); ++i) {
        for (size_t j = 0; j < homs.size(); ++j) {
            auto base = base_pair_clamp(g, in_j, homs[i], homs[j]);
            for (const auto& [v, w, d] : combos) {
                out.queries++;
                if (out.queries > caps.query_cap)
                    throw CapExceeded("mixing query cap exceeded", out.queries - 1);
                clamp = base;
                bool ok = clamp_set(clamp, v, homs[i].map[v]);
                for (int x : w)
                    if (ok) ok = clamp_set(clamp, x, homs[j].map[x]);
                if (!ok || !solver.feasible(clamp))
                    out.record_failure({v}, w, d, homs[i], homs[j]);
            }
        }
    }
}

} // namespace

GapReport gap_search(const RelStructure& g, const RelStructure& h,
                     const std::vector<int>& protected_set, int g_max, const MixingCaps& caps) {
    GapReport rep;
    rep.property = protected_set.empty() ? GapProperty::StrongIrreducibility
                                         : GapProperty::StrongJIrreducibility;
    FamilyScan scan;
    scan_family(g, h, protected_set, -1, caps, scan);
    rep.queries = scan.queries;
    rep.counterexample = scan.least_counterexample;
    if (scan.infinite_failure || scan.max_finite_failure + 1 > g_max)
        rep.gap = std::nullopt;
    else
        rep.gap = scan.max_finite_failure + 1; // -1 + 1 = 0 when nothing failed
    return rep;
}

TssmResult tssm_check(const RelStructure& g, const RelStructure& h, int gap,
                      const MixingCaps& caps) {
    std::vector<int> all(h.size());
    std::iota(all.begin(), all.end(), 0);
    FamilyScan scan;
    scan_family(g, h, all, gap, caps, scan);
    TssmResult res;
    res.queries = scan.queries;
    if (scan.least_counterexample) {
        res.holds = false;
        res.counterexample = scan.least_counterexample;
    }
    return res;
}

Homomorphism omega_map(const RelStructure& g, const Square& sq, const Homomorphism& pair_hom,
                       const std::vector<int>& x_set, const std::vector<Retraction>& rets) {
    int ell = static_cast<int>(rets.size()) - 1;
    if (ell < 0) throw PreconditionError("omega_map: empty retraction list");
    auto dist = distances_from(g, x_set);
    Homomorphism out;
    out.map.resize(g.size());
    for (int x = 0; x < g.size(); ++x) {
        int d = dist[x];
        out.map[x] = (d <= ell) ? rets[ell - d].map[pair_hom.map[x]] : pair_hom.map[x];
    }
    if (!is_homomorphism(g, sq.prod, out))
        throw InternalCheckError("omega_map: output failed homomorphism validation");
    return out;
}

Homomorphism mix_constructive(const RelStructure& g, const RelStructure& h,
                              const std::vector<int>& protected_set, const std::vector<int>& v,
                              const std::vector<int>& w, const Homomorphism& phi,
                              const Homomorphism& psi, const DecisionReport& report) {
    if (!report.holds || !report.square_seq)
        throw PreconditionError("mix_constructive: decision report does not hold");
    if (!is_homomorphism(g, h, phi) || !is_homomorphism(g, h, psi))
        throw PreconditionError("mix_constructive: phi/psi are not homomorphisms");
    int ell = report.square_seq->length();
    if (!v.empty() && !w.empty() && distance(g, v, w) < *report.gap)
        throw PreconditionError("mix_constructive: dist(V,W) below the gap");

    const Square& sq = report.square;
    Homomorphism pair_hom;
    pair_hom.map.resize(g.size());
    for (int x = 0; x < g.size(); ++x)
        pair_hom.map[x] = sq.pair_index(phi.map[x], psi.map[x]);

    std::vector<int> vw = v;
    vw.insert(vw.end(), w.begin(), w.end());
    auto dist_vw = distances_from(g, vw);
    std::vector<int> far;
    for (int x = 0; x < g.size(); ++x)
        if (dist_vw[x] >= ell) far.push_back(x); // infinite counts as far

    Homomorphism om = omega_map(g, sq, pair_hom, far, report.retractions);

    auto dist_v = distances_from(g, v);
    Homomorphism out;
    out.map.resize(g.size());
    for (int x = 0; x < g.size(); ++x)
        out.map[x] = dist_v[x] < ell ? sq.first(om.map[x]) : sq.second(om.map[x]);

    // postconditions
    if (!is_homomorphism(g, h, out))
        throw InternalCheckError("mix_constructive: witness is not a homomorphism");
    for (int x : v)
        if (out.map[x] != phi.map[x])
            throw InternalCheckError("mix_constructive: witness disagrees with phi on V");
    for (int x : w)
        if (out.map[x] != psi.map[x])
            throw InternalCheckError("mix_constructive: witness disagrees with psi on W");
    std::vector<bool> in_j(h.size(), false);
    for (int e : protected_set) in_j[e] = true;
    for (int x = 0; x < g.size(); ++x)
        if (phi.map[x] == psi.map[x] && in_j[phi.map[x]] && out.map[x] != phi.map[x])
            throw InternalCheckError("mix_constructive: witness moves a protected agreement");
    return out;
}

namespace {

// Fold chain of the square sequence as ambient element maps.
std::vector<std::vector<int>> fold_maps(const DecisionReport& report) {
    const RelStructure& amb = report.square.prod;
    std::vector<std::vector<int>> maps;
    for (const auto& f : report.square_seq->folds) {
        std::vector<int> m(amb.size());
        std::iota(m.begin(), m.end(), 0);
        m[*amb.element_index(f.removed)] = *amb.element_index(f.dominator);
        maps.push_back(std::move(m));
    }
    return maps;
}

// Materializes the walk of square maps from pair_hom to the interpolation at
// level `level` with centre set `x_set`, one coordinate change per step.
void build_square_walk(const RelStructure& g, const Homomorphism& pair_hom, int level,
                       const std::vector<int>& x_set, const std::vector<std::vector<int>>& folds,
                       std::vector<std::vector<int>>& out) {
    if (level == 0) {
        out.push_back(pair_hom.map);
        return;
    }
    // expand the centre set by one step of distance
    auto dist = distances_from(g, x_set);
    std::vector<int> wider;
    for (int x = 0; x < g.size(); ++x)
        if (dist[x] <= 1) wider.push_back(x);
    build_square_walk(g, pair_hom, level - 1, wider, folds, out);
    const auto& fold_map = folds[level - 1];
    std::vector<int> cur = out.back();
    for (int x : x_set) {
        int target = fold_map[cur[x]];
        if (target != cur[x]) {
            cur[x] = target;
            out.push_back(cur);
        }
    }
}

} // namespace

JWalk connect_constructive(const RelStructure& g, const RelStructure& h,
                           const std::vector<int>& protected_set, const Homomorphism& phi,
                           const Homomorphism& psi, const DecisionReport& report) {
    if (!report.holds || !report.square_seq)
        throw PreconditionError("connect_constructive: decision report does not hold");
    if (!is_homomorphism(g, h, phi) || !is_homomorphism(g, h, psi))
        throw PreconditionError("connect_constructive: phi/psi are not homomorphisms");
    if (phi == psi) return JWalk{{phi}};

    const Square& sq = report.square;
    Homomorphism pair_hom;
    pair_hom.map.resize(g.size());
    std::vector<int> disagreement;
    for (int x = 0; x < g.size(); ++x) {
        pair_hom.map[x] = sq.pair_index(phi.map[x], psi.map[x]);
        if (phi.map[x] != psi.map[x]) disagreement.push_back(x);
    }

    int ell = report.square_seq->length();
    auto folds = fold_maps(report);
    std::vector<std::vector<int>> square_walk;
    build_square_walk(g, pair_hom, ell, disagreement, folds, square_walk);

    for (const auto& m : square_walk) {
        Homomorphism step{m};
        if (!is_homomorphism(g, sq.prod, step))
            throw InternalCheckError("connect_constructive: square walk step invalid");
    }
    for (int x = 0; x < g.size(); ++x)
        if (!sq.is_diagonal(square_walk.back()[x]))
            throw InternalCheckError("connect_constructive: interpolation missed the diagonal");

    JWalk walk;
    auto push = [&](Homomorphism hm) {
        if (walk.steps.empty() || !(walk.steps.back() == hm)) walk.steps.push_back(std::move(hm));
    };
    for (const auto& m : square_walk) {
        Homomorphism step;
        step.map.resize(g.size());
        for (int x = 0; x < g.size(); ++x) step.map[x] = sq.first(m[x]);
        push(std::move(step));
    }
    for (auto it = square_walk.rbegin(); it != square_walk.rend(); ++it) {
        Homomorphism step;
        step.map.resize(g.size());
        for (int x = 0; x < g.size(); ++x) step.map[x] = sq.second((*it)[x]);
        push(std::move(step));
    }
    if (!validate_j_walk(g, h, walk, protected_set, HomGraphView::Hamming, 1))
        throw InternalCheckError("connect_constructive: walk failed J-walk validation");
    if (!(walk.steps.front() == phi) || !(walk.steps.back() == psi))
        throw InternalCheckError("connect_constructive: walk endpoints are wrong");
    return walk;
}

ForestMixingResult forest_root_mixing(const RelStructure& h,
                                      const std::vector<int>& protected_set, int gap, int depth,
                                      long long element_cap) {
    if (depth <= gap) throw PreconditionError("forest_root_mixing: depth must exceed gap");
    Square sq = make_square(h);
    WalkForest f = walk_forest(sq.prod, depth, element_cap);
    ForestMixingResult res;
    res.forest_size = f.structure.size();

    Homomorphism phi, psi;
    phi.map.resize(f.structure.size());
    psi.map.resize(f.structure.size());
    for (int w = 0; w < f.structure.size(); ++w) {
        phi.map[w] = sq.first(f.labels[w]);
        psi.map[w] = sq.second(f.labels[w]);
    }
    std::vector<int> far;
    for (int w = 0; w < f.structure.size(); ++w)
        if (f.lengths[w] >= gap) far.push_back(w);

    for (int root : f.roots) {
        MixingQuery q1{{root}, far, {}, protected_set, psi, phi};
        MixingQuery q2{{root}, far, {}, protected_set, phi, psi};
        if (!vw_mixing(f.structure, h, q1) || !vw_mixing(f.structure, h, q2)) {
            res.holds = false;
            res.failing_root = sq.prod.element_name(f.labels[root]);
            return res;
        }
    }
    return res;
}

} // namespace relhom
