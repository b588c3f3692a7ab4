#include "relhom/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relhom/constructions.hpp"
#include "relhom/dismantle.hpp"
#include "relhom/walks.hpp"

namespace relhom {

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ParseError("bad rational '" + text + "'");
    }
}

WeightFunction uniform_weights(const RelStructure& h) {
    WeightFunction w;
    w.weight.assign(h.size(), Rational(1));
    return w;
}

WeightFunction parse_weights(const RelStructure& h, const std::string& text) {
    WeightFunction w = uniform_weights(h);
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("expected name=value in weights");
        int e = h.require_element(item.substr(0, eq));
        Rational val = parse_rational(item.substr(eq + 1));
        if (val <= 0) throw ParseError("weights must be strictly positive");
        w.weight[e] = val;
    }
    return w;
}

namespace {

// Exact enumeration over interior assignments with the exterior clamped.
// Calls `sink(assignment, weight)` for every admissible assignment of v.
template <typename Sink>
void enumerate_interior(const GibbsSpecification& spec, const std::vector<int>& v,
                        const Homomorphism& boundary_hom, const GibbsCaps& caps, Sink&& sink) {
    const RelStructure& g = spec.g;
    const RelStructure& h = spec.h;
    if (static_cast<int>(spec.lambda.weight.size()) != h.size())
        throw PreconditionError("weight function does not cover the target universe");
    for (const auto& wt : spec.lambda.weight)
        if (wt <= 0) throw PreconditionError("weights must be strictly positive");
    if (!is_homomorphism(g, h, boundary_hom))
        throw PreconditionError("boundary condition is not a homomorphism");

    std::vector<bool> interior(g.size(), false);
    for (int x : v) {
        if (x < 0 || x >= g.size()) throw PreconditionError("volume element out of range");
        interior[x] = true;
    }
    std::vector<int> order;
    for (int x = 0; x < g.size(); ++x)
        if (interior[x]) order.push_back(x);

    std::vector<int> cur = boundary_hom.map;
    long long nodes = 0;

    // Only tuples meeting the interior need rechecking.
    std::vector<std::pair<int, int>> active;
    for (int s = 0; s < g.signature().size(); ++s) {
        const auto& rel = g.tuples(s);
        for (int ti = 0; ti < static_cast<int>(rel.size()); ++ti)
            for (int comp : rel[ti])
                if (interior[comp]) {
                    active.emplace_back(s, ti);
                    break;
                }
    }
    // per interior element, the active tuples it occurs in
    std::vector<std::vector<std::pair<int, int>>> touching(g.size());
    for (auto [s, ti] : active)
        for (int comp : g.tuples(s)[ti])
            if (interior[comp]) touching[comp].emplace_back(s, ti);
    for (auto& t : touching) {
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
    }
    // position of an interior element in `order`
    std::vector<int> pos(g.size(), -1);
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);

    auto tuple_ok_at = [&](int x) {
        for (auto [s, ti] : touching[x]) {
            const Tuple& t = g.tuples(s)[ti];
            bool ready = true;
            Tuple img(t.size());
            for (size_t i = 0; i < t.size(); ++i) {
                int comp = t[i];
                if (interior[comp] && pos[comp] > pos[x]) {
                    ready = false;
                    break;
                }
                img[i] = cur[comp];
            }
            if (ready && !h.has_tuple(s, img)) return false;
        }
        return true;
    };

    std::vector<Rational> prefix_weight(order.size() + 1);
    prefix_weight[0] = Rational(1);

    std::vector<int> assignment(order.size(), -1);
    auto rec = [&](auto&& self, size_t depth) -> void {
        if (++nodes > caps.node_cap) throw CapExceeded("gibbs enumeration cap exceeded", nodes);
        if (depth == order.size()) {
            sink(assignment, prefix_weight[depth]);
            return;
        }
        int x = order[depth];
        for (int a = 0; a < h.size(); ++a) {
            cur[x] = a;
            assignment[depth] = a;
            if (tuple_ok_at(x)) {
                prefix_weight[depth + 1] = prefix_weight[depth] * spec.lambda.weight[a];
                self(self, depth + 1);
            }
        }
        cur[x] = boundary_hom.map[x];
        assignment[depth] = -1;
    };
    rec(rec, 0);
}

} // namespace

PartitionResult partition_function(const GibbsSpecification& spec, const std::vector<int>& v,
                                   const Homomorphism& boundary_hom, const GibbsCaps& caps) {
    PartitionResult res;
    res.z = 0;
    enumerate_interior(spec, v, boundary_hom, caps,
                       [&](const std::vector<int>&, const Rational& weight) {
                           res.z += weight;
                           res.support++;
                       });
    return res;
}

std::map<int, Rational> conditional_marginal(const GibbsSpecification& spec,
                                             const std::vector<int>& v,
                                             const Homomorphism& boundary_hom, int x,
                                             const GibbsCaps& caps) {
    int xpos = -1;
    std::vector<int> order;
    {
        std::vector<bool> interior(spec.g.size(), false);
        for (int e : v) interior[e] = true;
        for (int e = 0; e < spec.g.size(); ++e)
            if (interior[e]) order.push_back(e);
        for (size_t i = 0; i < order.size(); ++i)
            if (order[i] == x) xpos = static_cast<int>(i);
    }
    if (xpos < 0) throw PreconditionError("conditional_marginal: x must lie inside V");

    Rational z = 0;
    std::map<int, Rational> sums;
    enumerate_interior(spec, v, boundary_hom, caps,
                       [&](const std::vector<int>& assignment, const Rational& weight) {
                           z += weight;
                           sums[assignment[xpos]] += weight;
                       });
    if (z == 0) throw PreconditionError("conditional_marginal: empty support (Z = 0)");
    std::map<int, Rational> out;
    for (auto& [a, s] : sums) out[a] = s / z;
    return out;
}

std::map<std::vector<int>, Rational> conditional_distribution(const GibbsSpecification& spec,
                                                              const std::vector<int>& v,
                                                              const Homomorphism& boundary_hom,
                                                              const GibbsCaps& caps) {
    Rational z = 0;
    std::map<std::vector<int>, Rational> sums;
    enumerate_interior(spec, v, boundary_hom, caps,
                       [&](const std::vector<int>& assignment, const Rational& weight) {
                           z += weight;
                           sums[assignment] += weight;
                       });
    if (z == 0) throw PreconditionError("conditional_distribution: empty support (Z = 0)");
    for (auto& [k, s] : sums) s /= z;
    return sums;
}

SpatialMixingReport jsm_report(const GibbsSpecification& spec,
                               const std::vector<int>& protected_set,
                               const std::vector<std::vector<int>>& v_family,
                               const GibbsCaps& caps) {
    SpatialMixingReport rep;
    rep.protected_set = protected_set;
    rep.infinite_bucket_max = 0;
    std::vector<bool> in_j(spec.h.size(), false);
    for (int e : protected_set) in_j[e] = true;

    auto homs = enumerate_homs(spec.g, spec.h, HomEnumOptions{caps.hom_cap, false});

    for (const auto& v : v_family) {
        auto bnd = boundary(spec.g, v);
        // marginals depend only on the boundary restriction; group once
        std::map<std::vector<int>, int> patterns;
        std::vector<int> rep_hom;
        for (size_t i = 0; i < homs.size(); ++i) {
            std::vector<int> key;
            for (int b : bnd) key.push_back(homs[i].map[b]);
            if (patterns.emplace(std::move(key), static_cast<int>(patterns.size())).second)
                rep_hom.push_back(static_cast<int>(i));
        }
        // marginal tables per pattern
        std::vector<std::map<int, std::map<int, Rational>>> tables(rep_hom.size());
        for (size_t p = 0; p < rep_hom.size(); ++p)
            for (int x : v)
                tables[p][x] = conditional_marginal(spec, v, homs[rep_hom[p]], x, caps);

        for (size_t p1 = 0; p1 < rep_hom.size(); ++p1) {
            for (size_t p2 = p1 + 1; p2 < rep_hom.size(); ++p2) {
                rep.pairs_tested++;
                const auto& f1 = homs[rep_hom[p1]];
                const auto& f2 = homs[rep_hom[p2]];
                std::vector<int> disagreement;
                for (int b : bnd)
                    if (!(f1.map[b] == f2.map[b] && in_j[f1.map[b]])) disagreement.push_back(b);
                std::vector<int> dist;
                if (disagreement.empty())
                    dist.assign(spec.g.size(), kInfiniteDistance);
                else
                    dist = distances_from(spec.g, disagreement);
                for (int x : v) {
                    for (int a = 0; a < spec.h.size(); ++a) {
                        Rational m1 = 0, m2 = 0;
                        if (auto it = tables[p1][x].find(a); it != tables[p1][x].end())
                            m1 = it->second;
                        if (auto it = tables[p2][x].find(a); it != tables[p2][x].end())
                            m2 = it->second;
                        Rational gap = m1 > m2 ? m1 - m2 : m2 - m1;
                        if (dist[x] == kInfiniteDistance) {
                            if (gap > rep.infinite_bucket_max) rep.infinite_bucket_max = gap;
                        } else {
                            auto& cell = rep.bucket_max[dist[x]];
                            if (gap > cell) cell = gap;
                        }
                        if (gap > 0 && (!rep.worst || gap > rep.worst->gap))
                            rep.worst = JsmWitness{v, f1, f2, x, a, gap, dist[x]};
                    }
                }
            }
        }
    }

    // violation: positive non-decreasing tail at the largest finite distance
    if (rep.bucket_max.size() >= 2) {
        auto last = std::prev(rep.bucket_max.end());
        auto prev = std::prev(last);
        rep.violation = last->second > 0 && last->second >= prev->second;
    }
    // reporting-only least squares fit of log(max) over positive buckets
    {
        std::vector<std::pair<double, double>> pts;
        for (const auto& [d, m] : rep.bucket_max)
            if (m > 0)
                pts.emplace_back(static_cast<double>(d),
                                 std::log(static_cast<double>(m.convert_to<double>())));
        if (pts.size() >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (auto [x, y] : pts) {
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            double n = static_cast<double>(pts.size());
            double denom = n * sxx - sx * sx;
            if (denom != 0) {
                double slope = (n * sxy - sx * sy) / denom;
                double intercept = (sy - slope * sx) / n;
                rep.fit_alpha = -slope;
                rep.fit_c = std::exp(intercept);
                rep.fit_valid = true;
            }
        }
    }
    return rep;
}

BoundaryInfluenceResult boundary_influence(const RelStructure& h,
                                           const std::vector<int>& protected_set, int depth,
                                           const std::optional<WeightFunction>& lambda,
                                           const GibbsCaps& caps) {
    auto [reduced, phase1] = greedy_dismantle(h, protected_set);
    Square isq = make_square(reduced);
    auto [kernel, phase2] = symmetric_pair_dismantle(isq);

    int witness = -1;
    for (int e = 0; e < kernel.size(); ++e) {
        auto parts = split_pair_name(kernel.element_name(e));
        if (parts && parts->first != parts->second) {
            witness = e;
            break;
        }
    }
    if (witness < 0)
        throw PreconditionError("no witness exists: the square dismantles into the diagonal");

    std::vector<bool> in_j(h.size(), false);
    for (int e : protected_set) in_j[e] = true;

    WalkForest f = walk_forest(kernel, depth, 1000000);
    int root = f.roots[witness];

    // boundary conditions: both projections of the label map
    auto pair_of = [&](int kelem) {
        auto parts = split_pair_name(kernel.element_name(kelem));
        return std::make_pair(*h.element_index(parts->first), *h.element_index(parts->second));
    };
    Homomorphism phi1, phi2;
    phi1.map.resize(f.structure.size());
    phi2.map.resize(f.structure.size());
    for (int w = 0; w < f.structure.size(); ++w) {
        auto [a, b] = pair_of(f.labels[w]);
        phi1.map[w] = a;
        phi2.map[w] = b;
    }

    // volume: close walks of the witness tree whose labels are non-diagonal
    // (outside the protected diagonal); everything else is clamped
    auto dist = distances_from(f.structure, {root});
    std::vector<int> volume;
    for (int w = 0; w < f.structure.size(); ++w) {
        if (dist[w] >= depth) continue;
        auto [a, b] = pair_of(f.labels[w]);
        if (a == b && in_j[a]) continue;
        volume.push_back(w);
    }

    GibbsSpecification spec{f.structure, h, lambda ? *lambda : uniform_weights(h)};
    BoundaryInfluenceResult res;
    res.witness_pair = kernel.element_name(witness);
    res.forest_size = f.structure.size();
    res.volume_size = static_cast<int>(volume.size());
    res.p1 = conditional_marginal(spec, volume, phi1, root, caps);
    res.p2 = conditional_marginal(spec, volume, phi2, root, caps);
    res.gap = 0;
    for (int a = 0; a < h.size(); ++a) {
        Rational m1 = 0, m2 = 0;
        if (auto it = res.p1.find(a); it != res.p1.end()) m1 = it->second;
        if (auto it = res.p2.find(a); it != res.p2.end()) m2 = it->second;
        Rational gap = m1 > m2 ? m1 - m2 : m2 - m1;
        if (gap > res.gap) res.gap = gap;
    }
    if (res.gap * h.size() < 1)
        throw InternalCheckError("boundary_influence: gap below 1/|H|");
    return res;
}

Rational hardcore_critical_activity(int degree) {
    if (degree < 3) throw PreconditionError("hardcore_critical_activity: degree must be >= 3");
    BigInt num = 1, den = 1;
    for (int i = 0; i < degree; ++i) {
        num *= degree - 1;
        den *= degree - 2;
    }
    return Rational(num, den);
}

} // namespace relhom
