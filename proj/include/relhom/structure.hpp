#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relhom/errors.hpp"

namespace relhom {

// A relation symbol: a name and a positive arity.
struct Symbol {
    std::string name;
    int arity = 1;

    bool operator==(const Symbol&) const = default;
};

// An ordered list of relation symbols. Symbol order is fixed by declaration
// order and is part of the canonical order of everything built on top.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Symbol> symbols);

    int size() const { return static_cast<int>(symbols_.size()); }
    const Symbol& symbol(int s) const { return symbols_[s]; }
    const std::vector<Symbol>& symbols() const { return symbols_; }
    int arity(int s) const { return symbols_[s].arity; }
    std::optional<int> index_of(const std::string& name) const;

    bool operator==(const Signature&) const = default;

private:
    std::vector<Symbol> symbols_;
};

using Tuple = std::vector<int>; // element indices into a structure's universe

// A finite relational structure: an ordered universe of named elements plus
// one ordered tuple set per symbol. The universe order is the canonical total
// order used for all deterministic iteration and tie-breaking; tuples are kept
// sorted lexicographically by element index.
class RelStructure {
public:
    RelStructure() = default;
    RelStructure(Signature sig, std::vector<std::string> universe);

    const Signature& signature() const { return sig_; }
    int size() const { return static_cast<int>(universe_.size()); }
    const std::string& element_name(int e) const { return universe_[e]; }
    const std::vector<std::string>& universe() const { return universe_; }
    std::optional<int> element_index(const std::string& name) const;
    // Element index or a ParseError naming the unknown element.
    int require_element(const std::string& name) const;

    const std::vector<Tuple>& tuples(int s) const { return relations_[s]; }
    bool has_tuple(int s, const Tuple& t) const;
    void add_tuple(int s, Tuple t); // validates arity and element range
    long long total_tuples() const;

    // Number of tuples (over all symbols) in which element e occurs.
    int degree(int e) const;
    // (symbol, tuple index) pairs in which e occurs, each listed once.
    const std::vector<std::pair<int, int>>& occurrences(int e) const;

    bool operator==(const RelStructure& o) const {
        return sig_ == o.sig_ && universe_ == o.universe_ && relations_ == o.relations_;
    }

private:
    Signature sig_;
    std::vector<std::string> universe_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<Tuple>> relations_;
    mutable std::vector<std::vector<std::pair<int, int>>> occ_cache_;
    mutable bool occ_dirty_ = true;
};

// Text format (see README): `signature`, `universe`, and `rel` lines.
RelStructure parse_structure(const std::string& text);
std::string render_structure(const RelStructure& h);

// Substructure induced by the element set `subset` (indices into h).
// Keeps tuples lying entirely inside the subset; order is inherited.
RelStructure induced_substructure(const RelStructure& h, const std::vector<int>& subset);

// Name-based convenience used by the CLI.
RelStructure induced_substructure_by_names(const RelStructure& h,
                                           const std::vector<std::string>& names);

std::vector<int> elements_by_name(const RelStructure& h, const std::vector<std::string>& names);

} // namespace relhom
