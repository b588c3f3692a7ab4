#pragma once

#include <optional>
#include <vector>

#include "relhom/hom.hpp"
#include "relhom/structure.hpp"

namespace relhom {

// Every endomorphism is injective. Errors out when |H|^|H| exceeds the cap.
bool is_core(const RelStructure& h, long long cap = 10000000);

// No homomorphism into h, but every maximal proper substructure (one tuple
// removed, or one element removed with its tuples) has one.
bool is_critical_obstruction(const RelStructure& o, const RelStructure& h,
                             long long node_cap = 10000000);

struct ObstructionReport {
    int max_size = 0;
    bool trees_only = false;
    std::vector<RelStructure> found; // canonical representatives, by size
    bool exhausted = true;
    long long states_visited = 0;
};

struct ObstructionCaps {
    long long state_cap = 2000000;
    long long hom_node_cap = 10000000;
};

// Exhaustive search over connected structures with at most max_size elements
// up to isomorphism. Growth is by single tuples anchored to the existing
// universe; structures with no homomorphism into h are never grown further
// (any proper extension of an obstruction cannot be critical), so the search
// spans exactly the hommable structures plus the frontier.
ObstructionReport enumerate_critical_obstructions(const RelStructure& h, int max_size,
                                                  bool trees_only,
                                                  const ObstructionCaps& caps = {});

// For a core h: does the square dismantle to the full diagonal with the whole
// universe protected (zero first-phase folds by construction)?
bool finite_duality_via_a1c(const RelStructure& h);

// The instance G with a constant relation per target element, holding the
// elements pinned by p. Signature matches add_constants(h).
RelStructure constants_augmented_instance(const RelStructure& g, const RelStructure& h,
                                          const PartialMap& p);

// p extends to a full homomorphism iff no listed obstruction maps into the
// constants-augmented instance. Requires an exhausted report computed against
// add_constants(h); the answer is cross-validated against extend_partial and
// a disagreement raises InternalCheckError.
bool extension_via_obstructions(const RelStructure& g, const RelStructure& h, const PartialMap& p,
                                const ObstructionReport& obs);

} // namespace relhom
