#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relhom/constructions.hpp"
#include "relhom/structure.hpp"

namespace relhom {

class Rng; // random_gen.hpp

// One fold: `removed` was dominated by `dominator` at the time of the fold.
struct FoldRecord {
    std::string removed;
    std::string dominator;

    bool operator==(const FoldRecord&) const = default;
};

struct DismantleSequence {
    RelStructure start;
    std::vector<FoldRecord> folds;

    int length() const { return static_cast<int>(folds.size()); }
};

// Replays the folds from `start`, checking domination at every step.
// Returns the final structure; throws InternalCheckError on a bad record.
RelStructure replay_dismantle(const DismantleSequence& seq);

// True iff substituting b for a at any single tuple position of any relation
// lands back in the relation. dominates(h, a, a) always holds; an element
// occurring in no tuple is dominated by every other element.
bool dominates(const RelStructure& h, int b, int a);

// All elements of H \ protected_set dominated by some other element, each with
// its tie-break dominator, in canonical order. Empty result means the
// structure is J-non-foldable for J = protected_set.
std::vector<std::pair<int, int>> dominated_elements(const RelStructure& h,
                                                    const std::vector<int>& protected_set);

bool is_j_non_foldable(const RelStructure& h, const std::vector<int>& protected_set);

// Removes `a`, which must be dominated by `b`.
std::pair<RelStructure, FoldRecord> fold(const RelStructure& h, int a, int b);

// Repeatedly folds the canonical-least dominated element outside the protected
// set until none is left. Deterministic.
std::pair<RelStructure, DismantleSequence> greedy_dismantle(const RelStructure& h,
                                                            const std::vector<int>& protected_set);

// Same fixpoint, but the dominated element and its dominator are picked at
// random each step. Used for the confluence checks.
std::pair<RelStructure, DismantleSequence> random_order_dismantle(
    const RelStructure& h, const std::vector<int>& protected_set, Rng& rng);

bool is_dismantlable(const RelStructure& h);

// Folds non-diagonal dominated elements of the square two at a time, (a,b)
// then its mirror (b,a), until every dominated element is diagonal. Returns
// the surviving structure (as an induced substructure of sq.prod) and the
// fold sequence.
std::pair<RelStructure, DismantleSequence> symmetric_pair_dismantle(const Square& sq);

// Prefix composition of folds acting on a fixed ambient universe: map[e] is
// where e has been sent so far (identity on surviving elements).
struct Retraction {
    std::vector<int> map;
};

struct DecisionReport {
    bool holds = false;
    std::vector<std::string> j_names;
    DismantleSequence phase1; // H -> I
    RelStructure reduced;     // I
    DismantleSequence phase2; // I^2 -> K
    RelStructure kernel;      // K
    // Present only when holds: a single dismantling sequence H^2 -> diag(I^2)
    // in which every folded diagonal element has a diagonal dominator, plus
    // the prefix retractions r_0..r_ell over the H^2 universe.
    std::optional<DismantleSequence> square_seq;
    std::vector<Retraction> retractions;
    std::optional<int> gap; // 2 * square_seq length

    // Ambient square of H kept for downstream constructions.
    Square square;
};

// Two-phase greedy decision: fold H down to a J-non-foldable I, then fold
// symmetric non-diagonal pairs of I^2; holds when only diagonal elements
// survive. On success the combined square sequence and retractions are built.
DecisionReport decide_main(const RelStructure& h, const std::vector<int>& protected_set);

// The square sequence/retractions of decide_main as a standalone step.
std::pair<DismantleSequence, std::vector<Retraction>> build_square_sequence(
    const RelStructure& h, const DismantleSequence& phase1, const DismantleSequence& phase2);

} // namespace relhom
