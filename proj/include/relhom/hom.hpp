#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relhom/constructions.hpp"
#include "relhom/structure.hpp"

namespace relhom {

// Total map between two structures' universes (source index -> target index).
struct Homomorphism {
    std::vector<int> map;

    bool operator==(const Homomorphism&) const = default;
    auto operator<=>(const Homomorphism&) const = default;
};

// Partial map: -1 marks unassigned source elements.
struct PartialMap {
    std::vector<int> map;
};

bool is_homomorphism(const RelStructure& g, const RelStructure& h, const Homomorphism& phi);

// True when no tuple lying entirely inside the assigned part is violated.
bool partial_map_consistent(const RelStructure& g, const RelStructure& h, const PartialMap& p);

struct HomEnumOptions {
    long long cap = 100000;
    bool degree_order = false; // branch on high-degree elements first
};

// All homomorphisms G -> H in lexicographic order of assignment vectors.
// Backtracking with forward pruning; throws CapExceeded past opt.cap.
std::vector<Homomorphism> enumerate_homs(const RelStructure& g, const RelStructure& h,
                                         const HomEnumOptions& opt = {});

long long count_homs(const RelStructure& g, const RelStructure& h, long long cap = 100000);

// Least extension of p to a full homomorphism, or nullopt.
std::optional<Homomorphism> extend_partial(const RelStructure& g, const RelStructure& h,
                                           const PartialMap& p);

// True when some extension exists (cheaper than materializing one).
bool extendable(const RelStructure& g, const RelStructure& h, const PartialMap& p);

struct RigidityResult {
    bool rigid = true;
    // On failure: a valid homomorphism from the forest that agrees with the
    // label map on the pinned part but differs somewhere.
    std::optional<Homomorphism> witness;
    int forest_size = 0;
};

// Builds the depth-bounded forest of walks of H and checks that the label map
// is the only homomorphism forest -> H agreeing with it on all walks of
// maximal length and on walks labelled inside protected_set. Works level by
// level from the pinned top layer downwards; requires H to be J-non-foldable
// for J = protected_set.
RigidityResult label_rigidity(const RelStructure& h, const std::vector<int>& protected_set,
                              int depth, long long element_cap = 1000000);

// Text form: lines "x -> a". Unassigned elements are omitted.
std::string render_hom(const RelStructure& g, const RelStructure& h, const Homomorphism& phi);
PartialMap parse_partial_map(const RelStructure& g, const RelStructure& h,
                             const std::string& text);

} // namespace relhom
