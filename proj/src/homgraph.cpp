#include "relhom/homgraph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <functional>
#include <numeric>

namespace relhom {

bool cn_adjacent(const Homomorphism& phi, const Homomorphism& psi, int n) {
    if (phi.map.size() != psi.map.size())
        throw PreconditionError("cn_adjacent: source mismatch");
    int diff = 0;
    for (size_t i = 0; i < phi.map.size(); ++i)
        if (phi.map[i] != psi.map[i] && ++diff > n) return false;
    return true;
}

bool l_adjacent(const RelStructure& g, const RelStructure& h, const Homomorphism& phi,
                const Homomorphism& psi) {
    if (phi.map.size() != psi.map.size() || static_cast<int>(phi.map.size()) != g.size())
        throw PreconditionError("l_adjacent: source mismatch");
    for (int s = 0; s < g.signature().size(); ++s) {
        int k = g.signature().arity(s);
        for (const auto& t : g.tuples(s)) {
            // all 2^k selections of phi/psi per position
            for (unsigned mask = 0; mask < (1u << k); ++mask) {
                Tuple img(k);
                for (int i = 0; i < k; ++i)
                    img[i] = (mask >> i & 1u) ? psi.map[t[i]] : phi.map[t[i]];
                if (!h.has_tuple(s, img)) return false;
            }
        }
    }
    return true;
}

bool validate_j_walk(const RelStructure& g, const RelStructure& h, const JWalk& walk,
                     const std::vector<int>& protected_set, HomGraphView view, int hamming_n) {
    if (walk.steps.empty()) return false;
    std::vector<bool> in_j(h.size(), false);
    for (int e : protected_set) in_j[e] = true;
    for (const auto& step : walk.steps)
        if (!is_homomorphism(g, h, step)) return false;
    for (size_t i = 0; i + 1 < walk.steps.size(); ++i) {
        bool adj = view == HomGraphView::Hamming
                       ? cn_adjacent(walk.steps[i], walk.steps[i + 1], hamming_n)
                       : l_adjacent(g, h, walk.steps[i], walk.steps[i + 1]);
        if (!adj) return false;
    }
    const auto& first = walk.steps.front().map;
    const auto& last = walk.steps.back().map;
    for (int x = 0; x < g.size(); ++x) {
        if (first[x] == last[x] && in_j[first[x]]) {
            for (const auto& step : walk.steps)
                if (step.map[x] != first[x]) return false;
        }
    }
    return true;
}

namespace {

// Coordinates every member of a J-walk from `from` to `to` must hold fixed.
std::vector<int> clamp_coords(const Homomorphism& from, const Homomorphism& to,
                              const std::vector<bool>& in_j) {
    std::vector<int> out;
    for (size_t x = 0; x < from.map.size(); ++x)
        if (from.map[x] == to.map[x] && in_j[from.map[x]]) out.push_back(static_cast<int>(x));
    return out;
}

struct Budget {
    long long left;
    void spend(long long n = 1) {
        left -= n;
        if (left < 0) throw CapExceeded("homomorphism graph search budget exceeded");
    }
};

} // namespace

std::optional<JWalk> j_connected(const RelStructure& g, const RelStructure& h,
                                 const std::vector<int>& protected_set, HomGraphView view,
                                 const Homomorphism& from, const Homomorphism& to,
                                 const HomGraphOptions& opt) {
    if (!is_homomorphism(g, h, from) || !is_homomorphism(g, h, to))
        throw PreconditionError("j_connected: endpoints are not homomorphisms");
    if (from == to) return JWalk{{from}};

    std::vector<bool> in_j(h.size(), false);
    for (int e : protected_set) in_j[e] = true;
    auto clamps = clamp_coords(from, to, in_j);

    auto homs = enumerate_homs(g, h, HomEnumOptions{opt.hom_cap, false});
    // restrict to the clamped subspace
    std::vector<Homomorphism> verts;
    for (auto& hm : homs) {
        bool ok = true;
        for (int x : clamps)
            if (hm.map[x] != from.map[x]) {
                ok = false;
                break;
            }
        if (ok) verts.push_back(std::move(hm));
    }
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i].map, static_cast<int>(i));
    auto it_from = index.find(from.map);
    auto it_to = index.find(to.map);
    if (it_from == index.end() || it_to == index.end())
        throw PreconditionError("j_connected: endpoint missing from vertex list");
    int src = it_from->second, dst = it_to->second;

    Budget budget{opt.expansion_cap};
    std::vector<int> parent(verts.size(), -1);
    std::vector<bool> seen(verts.size(), false);
    std::deque<int> queue{src};
    seen[src] = true;

    auto adjacent = [&](int u, int v) {
        budget.spend();
        return view == HomGraphView::Hamming ? cn_adjacent(verts[u], verts[v], opt.hamming_n)
                                             : l_adjacent(g, h, verts[u], verts[v]);
    };

    bool found = false;
    while (!queue.empty() && !found) {
        int u = queue.front();
        queue.pop_front();
        // try the target first so that dense instances resolve immediately
        if (!seen[dst] && adjacent(u, dst)) {
            parent[dst] = u;
            seen[dst] = true;
            found = true;
            break;
        }
        for (int v = 0; v < static_cast<int>(verts.size()) && !found; ++v) {
            if (seen[v] || !adjacent(u, v)) continue;
            parent[v] = u;
            seen[v] = true;
            if (v == dst) {
                found = true;
                break;
            }
            queue.push_back(v);
        }
    }
    if (!found) return std::nullopt;
    std::vector<int> chain;
    for (int v = dst; v != -1; v = parent[v]) chain.push_back(v);
    std::reverse(chain.begin(), chain.end());
    JWalk walk;
    for (int v : chain) walk.steps.push_back(verts[v]);
    if (!validate_j_walk(g, h, walk, protected_set, view, opt.hamming_n))
        throw InternalCheckError("j_connected: constructed walk failed validation");
    return walk;
}

Homomorphism projection_hom(const Square& sq, int coordinate) {
    Homomorphism phi;
    phi.map.resize(sq.prod.size());
    for (int p = 0; p < sq.prod.size(); ++p)
        phi.map[p] = coordinate == 0 ? sq.first(p) : sq.second(p);
    return phi;
}

bool projections_link_connected(const RelStructure& h, const std::vector<int>& protected_set,
                                const HomGraphOptions& opt) {
    Square sq = make_square(h);
    auto pi1 = projection_hom(sq, 0);
    auto pi2 = projection_hom(sq, 1);
    return j_connected(sq.prod, h, protected_set, HomGraphView::Link, pi1, pi2, opt).has_value();
}

std::vector<int> hom_graph_components(const RelStructure& g, const RelStructure& h,
                                      const std::vector<Homomorphism>& homs, HomGraphView view,
                                      int hamming_n) {
    int n = static_cast<int>(homs.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            bool adj = view == HomGraphView::Hamming ? cn_adjacent(homs[i], homs[j], hamming_n)
                                                     : l_adjacent(g, h, homs[i], homs[j]);
            if (adj) {
                int ri = find(i), rj = find(j);
                if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
            }
        }
    }
    std::vector<int> ids(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (ids[r] < 0) ids[r] = next++;
        ids[i] = ids[r];
    }
    return ids;
}

namespace {

// Dense packing of assignment vectors into integers, available whenever
// |H|^|G| fits 63 bits. Makes vertex lookup a hash of one word.
struct HomCodec {
    int n_vars = 0;
    long long radix = 0;
    bool usable = false;

    HomCodec(int vars, int values) : n_vars(vars), radix(values) {
        long double span = 1.0L;
        for (int i = 0; i < vars; ++i) span *= static_cast<long double>(values);
        usable = span < 9.0e18L;
    }
    long long encode(const std::vector<int>& map) const {
        long long code = 0;
        for (int i = n_vars - 1; i >= 0; --i) code = code * radix + map[i];
        return code;
    }
};

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
};

} // namespace

bool square_link_hamming_j_connected(const RelStructure& h,
                                     const std::vector<int>& protected_set,
                                     const AllPairsOptions& opt) {
    RelStructure g = product(link(1, h.signature()), product(h, h));
    auto homs = enumerate_homs(g, h, HomEnumOptions{opt.hom_cap, false});
    int n = static_cast<int>(homs.size());
    if (n == 0) return true;

    Budget budget{opt.search_budget};
    HomCodec codec(g.size(), h.size());
    if (!codec.usable)
        throw CapExceeded("square_link_hamming_j_connected: vertex space too large to index");
    std::unordered_map<long long, int> index;
    index.reserve(static_cast<size_t>(n) * 2);
    for (int i = 0; i < n; ++i) index.emplace(codec.encode(homs[i].map), i);

    // Plain connectivity first: a J-walk is in particular a walk. Mutation
    // neighbours: a one-coordinate change of a homomorphism that is valid is
    // itself in the vertex list, so membership lookup doubles as validity.
    DisjointSets comps(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> probe = homs[i].map;
        for (int x = 0; x < g.size(); ++x) {
            int orig = probe[x];
            for (int a = 0; a < h.size(); ++a) {
                if (a == orig) continue;
                budget.spend();
                probe[x] = a;
                auto it = index.find(codec.encode(probe));
                if (it != index.end()) comps.unite(i, it->second);
            }
            probe[x] = orig;
        }
    }
    for (int i = 1; i < n; ++i)
        if (comps.find(i) != comps.find(0)) return false;

    std::vector<bool> in_j(h.size(), false);
    bool j_empty = true;
    for (int e : protected_set) {
        in_j[e] = true;
        j_empty = false;
    }
    if (j_empty) return true;

    if (n > opt.pair_vertex_cap)
        throw CapExceeded("square_link_hamming_j_connected: too many vertices for the "
                          "all-pairs leg", n);

    // All-pairs J-connectivity. Pairs sharing a clamp pattern share the
    // component structure of the clamped subspace; memoise per clamp. Within
    // a subspace, one-coordinate mutations of members stay in the subspace,
    // so components come from mutation lookups rather than pairwise scans.
    std::map<std::vector<std::pair<int, int>>, std::vector<int>> comp_cache;
    std::vector<bool> member_flag(n, false);
    auto components_for_clamp =
        [&](const std::vector<std::pair<int, int>>& clamp) -> const std::vector<int>& {
        auto it = comp_cache.find(clamp);
        if (it != comp_cache.end()) return it->second;
        if ((comp_cache.size() + 1) * static_cast<size_t>(n) > 20000000)
            throw CapExceeded("square_link_hamming_j_connected: clamp cache too large");
        std::vector<int> members;
        for (int i = 0; i < n; ++i) {
            bool ok = true;
            for (auto [x, v] : clamp)
                if (homs[i].map[x] != v) {
                    ok = false;
                    break;
                }
            if (ok) {
                members.push_back(i);
                member_flag[i] = true;
            }
        }
        budget.spend(n + static_cast<long long>(members.size()) *
                             static_cast<long long>(clamp.size() + 1));
        DisjointSets local(n);
        std::vector<bool> clamped(g.size(), false);
        for (auto [x, v] : clamp) clamped[x] = true;
        for (int i : members) {
            std::vector<int> probe = homs[i].map;
            for (int x = 0; x < g.size(); ++x) {
                if (clamped[x]) continue;
                int orig = probe[x];
                for (int a = 0; a < h.size(); ++a) {
                    if (a == orig) continue;
                    budget.spend();
                    probe[x] = a;
                    auto pit = index.find(codec.encode(probe));
                    if (pit != index.end() && member_flag[pit->second])
                        local.unite(i, pit->second);
                }
                probe[x] = orig;
            }
        }
        std::vector<int> comp(n, -1);
        for (int i : members) {
            comp[i] = local.find(i);
            member_flag[i] = false;
        }
        return comp_cache.emplace(clamp, std::move(comp)).first->second;
    };

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            budget.spend();
            std::vector<std::pair<int, int>> clamp;
            for (int x = 0; x < g.size(); ++x)
                if (homs[i].map[x] == homs[j].map[x] && in_j[homs[i].map[x]])
                    clamp.emplace_back(x, homs[i].map[x]);
            if (clamp.empty()) continue; // plain connectivity already covers it
            const auto& comp = components_for_clamp(clamp);
            if (comp[i] != comp[j]) return false;
        }
    }
    return true;
}

namespace {

// Saturating exact walk count; throws when the count leaves the exact range.
long long count_link_walks(const RelStructure& g, const RelStructure& h,
                           const std::vector<Homomorphism>& homs, int ell) {
    int n = static_cast<int>(homs.size());
    std::vector<std::vector<long long>> adj(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) adj[i][j] = l_adjacent(g, h, homs[i], homs[j]) ? 1 : 0;
    std::vector<long long> vec(n, 1);
    constexpr long long kLimit = 2000000000000000000LL;
    for (int step = 0; step < ell; ++step) {
        std::vector<long long> next(n, 0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (!adj[i][j]) continue;
                next[i] += vec[j];
                if (next[i] > kLimit) throw CapExceeded("link walk count overflow");
            }
        }
        vec = std::move(next);
    }
    long long total = 0;
    for (long long v : vec) {
        total += v;
        if (total > kLimit) throw CapExceeded("link walk count overflow");
    }
    return total;
}

} // namespace

bool link_walk_correspondence(const RelStructure& g, const RelStructure& h, int ell,
                              long long cap) {
    if (ell < 1) throw PreconditionError("link_walk_correspondence: ell must be >= 1");
    RelStructure lg = product(link(ell, g.signature()), g);
    long long lhs = count_homs(lg, h, cap);
    auto homs = enumerate_homs(g, h, HomEnumOptions{cap, false});
    long long rhs = count_link_walks(g, h, homs, ell);
    return lhs == rhs;
}

} // namespace relhom
