#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relhom/structure.hpp"

namespace relhom {

// Componentwise product. Universe is in lexicographic order of the factor
// orders; element (a,b) is named "(a|b)".
RelStructure product(const RelStructure& h1, const RelStructure& h2);

// Splits a "(left|right)" pair name at the top-level '|'.
std::optional<std::pair<std::string, std::string>> split_pair_name(const std::string& name);

// A square I x I together with coordinate bookkeeping.
struct Square {
    RelStructure base;      // I
    RelStructure prod;      // I x I
    int side = 0;           // |I|

    int pair_index(int a, int b) const { return a * side + b; }
    int first(int p) const { return p / side; }
    int second(int p) const { return p % side; }
    bool is_diagonal(int p) const { return first(p) == second(p); }
    int mirror(int p) const { return pair_index(second(p), first(p)); }
    std::vector<int> diagonal_indices() const;
};

Square make_square(const RelStructure& base);

// Substructure of the square induced by the diagonal pairs.
RelStructure diagonal(const RelStructure& h);

// Path of ell 1-links with endpoints identified: universe {0..ell}, and for
// every k-ary symbol all k-tuples over {i,i+1} for each i.
RelStructure link(int ell, const Signature& sig);

// Adds a fresh unary symbol const_<a> with relation {(a)} per element a.
RelStructure add_constants(const RelStructure& h);

// Bounded-depth forest of walks. Elements are the walks of length <= depth,
// in (length, root, step-sequence) order, so the depth-d forest is a prefix of
// the depth-(d+1) forest. labels[w] is the end element of walk w.
struct WalkForest {
    RelStructure structure;
    int depth = 0;
    std::vector<int> labels; // forest element -> base element
    std::vector<int> roots;  // the |H| length-0 walks
    std::vector<int> lengths;
};

WalkForest walk_forest(const RelStructure& h, int depth, long long element_cap = 1000000);

} // namespace relhom
