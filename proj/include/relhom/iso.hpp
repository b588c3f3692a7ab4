#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relhom/structure.hpp"

namespace relhom {

// Exhaustive isomorphism search (backtracking with occurrence-profile
// pruning). The returned map sends indices of h1 to indices of h2 and is a
// homomorphism both ways. Every element listed in `fixed` (by name) must be
// present in both structures and is mapped to itself.
std::optional<std::vector<int>> find_isomorphism(const RelStructure& h1, const RelStructure& h2,
                                                 const std::vector<std::string>& fixed = {});

bool are_isomorphic(const RelStructure& h1, const RelStructure& h2);

// A string invariant that is equal exactly for isomorphic structures
// (refinement classes first, then exact minimisation over class-respecting
// permutations). Intended for small structures; cost grows with the size of
// unresolved refinement classes.
std::string canonical_key(const RelStructure& h);

// Relabels to the canonical permutation behind canonical_key, naming elements
// e0, e1, ... Used to emit canonical representatives of isomorphism classes.
RelStructure canonical_form(const RelStructure& h);

} // namespace relhom
