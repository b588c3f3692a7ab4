#pragma once

#include <optional>
#include <vector>

#include "relhom/dismantle.hpp"
#include "relhom/hom.hpp"
#include "relhom/homgraph.hpp"
#include "relhom/structure.hpp"

namespace relhom {

struct MixingQuery {
    std::vector<int> v;
    std::vector<int> w;
    std::vector<int> s; // only used by the TSSM-definition cross-check
    std::vector<int> protected_set;
    Homomorphism phi;
    Homomorphism psi;
};

// Clamped-extension feasibility for Hom(G,H). Binary signatures whose
// collapsed constraint graph is a forest get an exact linear message pass;
// everything else falls back to backtracking. Requires |H| <= 64.
class MixSolver {
public:
    MixSolver(const RelStructure& g, const RelStructure& h);

    // clamp[x] = forced value or -1
    bool feasible(const std::vector<int8_t>& clamp) const;
    // lexicographically least total extension, or nullopt
    std::optional<Homomorphism> least(const std::vector<int8_t>& clamp) const;

    const RelStructure& source() const { return *g_; }
    const RelStructure& target() const { return *h_; }

private:
    const RelStructure* g_;
    const RelStructure* h_;
    bool fast_ = false;
    uint64_t full_mask_ = 0;
    std::vector<uint64_t> unary_;            // per-node mask from loops/unary tuples
    // collapsed edges in child->parent processing order
    struct Edge {
        int child;
        int parent;
        std::vector<uint64_t> parent_ok; // parent value -> mask of compatible child values
    };
    std::vector<Edge> pass_;
    mutable std::vector<uint64_t> dom_; // scratch

    bool feasible_fast(const std::vector<int8_t>& clamp) const;
    bool feasible_generic(const std::vector<int8_t>& clamp) const;
};

// gamma in Hom(G,H) with gamma|V = phi|V, gamma|W = psi|W, and
// gamma(x) = phi(x) wherever phi(x) = psi(x) lies in the protected set.
// Returns the least such gamma.
std::optional<Homomorphism> vw_mixing(const RelStructure& g, const RelStructure& h,
                                      const MixingQuery& q);

// Direct form of the TSSM requirement for one (V,W,S) triple: gamma agreeing
// with phi on V (and S) and with psi on S and W, given phi, psi agree on S.
std::optional<Homomorphism> tssm_definition_query(const RelStructure& g, const RelStructure& h,
                                                  const MixingQuery& q);

struct MixingCounterexample {
    std::vector<int> v;
    std::vector<int> w;
    int dist = 0; // kInfiniteDistance for disconnected pairs
    Homomorphism phi;
    Homomorphism psi;
};

enum class GapProperty { StrongIrreducibility, StrongJIrreducibility, Tssm };

struct GapReport {
    GapProperty property = GapProperty::StrongIrreducibility;
    std::optional<int> gap; // nullopt = NONE
    std::optional<MixingCounterexample> counterexample;
    long long queries = 0;
};

struct MixingCaps {
    long long hom_cap = 100000;
    long long query_cap = 50000000;
};

// Test family for W: all singletons and all distance spheres, plus every
// nonempty subset when |G| <= 8. V ranges over singletons. The family is a
// documented under-approximation of the full quantifier.
std::vector<std::vector<int>> mixing_w_family(const RelStructure& g);

// Least g such that every tested query with dist(V,W) >= g succeeds, or NONE
// when failures persist past g_max or at infinite distance.
GapReport gap_search(const RelStructure& g, const RelStructure& h,
                     const std::vector<int>& protected_set, int g_max,
                     const MixingCaps& caps = {});

// Strong irreducibility with the whole universe protected, checked over the
// family at the given gap. Equivalent to the TSSM quantifier.
struct TssmResult {
    bool holds = true;
    std::optional<MixingCounterexample> counterexample;
    long long queries = 0;
};

TssmResult tssm_check(const RelStructure& g, const RelStructure& h, int gap,
                      const MixingCaps& caps = {});

// The interpolation map: x at distance d <= ell from X is sent through the
// (ell-d)-th retraction of the square sequence; farther points are untouched.
// Validated as a homomorphism into the square before returning.
Homomorphism omega_map(const RelStructure& g, const Square& sq, const Homomorphism& pair_hom,
                       const std::vector<int>& x_set, const std::vector<Retraction>& rets);

// Constructive merge witness: must be called with a successful report and
// dist(V,W) >= report.gap. The result is validated against all postconditions
// and returned; validation failure signals a bug, not bad input.
Homomorphism mix_constructive(const RelStructure& g, const RelStructure& h,
                              const std::vector<int>& protected_set, const std::vector<int>& v,
                              const std::vector<int>& w, const Homomorphism& phi,
                              const Homomorphism& psi, const DecisionReport& report);

// Constructive single-coordinate walk from phi to psi, validated as a J-walk
// in the Hamming view.
JWalk connect_constructive(const RelStructure& g, const RelStructure& h,
                           const std::vector<int>& protected_set, const Homomorphism& phi,
                           const Homomorphism& psi, const DecisionReport& report);

struct ForestMixingResult {
    bool holds = true;
    std::optional<std::string> failing_root; // square pair name
    int forest_size = 0;
};

// Singleton-vs-far mixing on the truncated forest of walks of H^2: for each
// root, the far set is every walk of length >= gap, and the two projections
// of the label map are merged both ways. depth must exceed gap.
ForestMixingResult forest_root_mixing(const RelStructure& h, const std::vector<int>& protected_set,
                                      int gap, int depth, long long element_cap = 1000000);

} // namespace relhom
