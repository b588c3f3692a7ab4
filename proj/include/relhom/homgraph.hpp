#pragma once

#include <optional>
#include <vector>

#include "relhom/hom.hpp"
#include "relhom/structure.hpp"

namespace relhom {

// Graphs on Hom(G,H). Two vertex relations are used: Hamming adjacency
// ("differ in at most n values", reflexive) and link adjacency (every mixed
// substitution of the two maps into any tuple stays valid).
enum class HomGraphView { Hamming, Link };

bool cn_adjacent(const Homomorphism& phi, const Homomorphism& psi, int n);

bool l_adjacent(const RelStructure& g, const RelStructure& h, const Homomorphism& phi,
                const Homomorphism& psi);

struct HomGraphOptions {
    long long hom_cap = 100000;       // vertex-list enumeration cap
    long long expansion_cap = 50000000; // adjacency probes before giving up
    int hamming_n = 1;                  // n for the Hamming view
};

// A walk in the chosen view whose endpoints agree, on every protected-valued
// coordinate, with both ends (no member moves such a coordinate).
struct JWalk {
    std::vector<Homomorphism> steps;
};

// Verifies view-adjacency of consecutive members and the preservation rule
// independently of how the walk was found.
bool validate_j_walk(const RelStructure& g, const RelStructure& h, const JWalk& walk,
                     const std::vector<int>& protected_set, HomGraphView view, int hamming_n = 1);

// Shortest walk from `from` to `to` among homomorphisms that fix every
// coordinate where the two ends share a protected value. BFS; sound and
// complete for J-walk existence since a J-walk can never move exactly those
// coordinates.
std::optional<JWalk> j_connected(const RelStructure& g, const RelStructure& h,
                                 const std::vector<int>& protected_set, HomGraphView view,
                                 const Homomorphism& from, const Homomorphism& to,
                                 const HomGraphOptions& opt = {});

// The two projections of the square, as homomorphisms square -> base.
Homomorphism projection_hom(const Square& sq, int coordinate);

// Are the two projections joined by a J-walk in the link graph on
// Hom(H^2, H)?
bool projections_link_connected(const RelStructure& h, const std::vector<int>& protected_set,
                                const HomGraphOptions& opt = {});

// Is the Hamming graph on Hom(L x H^2, H) J-connected (all vertex pairs
// joined by J-walks)? Exhaustive over hom pairs; throws CapExceeded when the
// vertex list or the pair/search budget is exceeded.
struct AllPairsOptions {
    long long hom_cap = 100000;        // J = empty only needs components
    long long pair_vertex_cap = 4000;  // all-pairs legwork bound when J != empty
    long long search_budget = 100000000;
};

bool square_link_hamming_j_connected(const RelStructure& h, const std::vector<int>& protected_set,
                                     const AllPairsOptions& opt = {});

// Connected components of a view over an explicit vertex list.
std::vector<int> hom_graph_components(const RelStructure& g, const RelStructure& h,
                                      const std::vector<Homomorphism>& homs, HomGraphView view,
                                      int hamming_n = 1);

// Counts |Hom(L_ell x G, H)| and the number of length-ell walks in the link
// graph on Hom(G,H); true when they agree.
bool link_walk_correspondence(const RelStructure& g, const RelStructure& h, int ell,
                              long long cap = 100000);

} // namespace relhom
