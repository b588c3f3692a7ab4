#pragma once

#include "relhom/structure.hpp"

namespace relhom::fixtures {

// Canonical desk-scale structures used across the tests and the verification
// suite. The same definitions ship as files under fixtures/.

inline constexpr const char* kSft3Text =
    "signature R1/2 R2/2\n"
    "universe a b c\n"
    "rel R1 = (a,a) (a,b) (b,a) (b,b) (b,c) (c,b)\n"
    "rel R2 = (a,a) (a,b) (b,a) (b,b) (b,c) (c,a)\n";

inline constexpr const char* kEdgeText =
    "signature R/2\n"
    "universe 0 1\n"
    "rel R = (0,1)\n";

inline constexpr const char* kTriText =
    "signature R1/2 R2/2 R3/2\n"
    "universe 0 1 2\n"
    "rel R1 = (0,0) (0,1) (1,0)\n"
    "rel R2 = (1,1) (1,2) (2,1)\n"
    "rel R3 = (2,2) (2,0) (0,2)\n";

inline constexpr const char* kC3Text =
    "signature E/2\n"
    "universe 0 1 2\n"
    "rel E = (0,1) (1,2) (2,0)\n";

inline constexpr const char* kK2Text =
    "signature E/2\n"
    "universe 0 1\n"
    "rel E = (0,1) (1,0)\n";

inline constexpr const char* kPt1Text =
    "signature E/2\n"
    "universe e\n"
    "rel E = (e,e)\n";

inline RelStructure sft3() { return parse_structure(kSft3Text); }
inline RelStructure edge() { return parse_structure(kEdgeText); }
inline RelStructure tri() { return parse_structure(kTriText); }
inline RelStructure c3() { return parse_structure(kC3Text); }
inline RelStructure k2() { return parse_structure(kK2Text); }
inline RelStructure pt1() { return parse_structure(kPt1Text); }

// Directed path x0 -> x1 -> ... -> x_len carried by the first symbol of the
// given signature shape; the remaining symbols stay empty.
RelStructure first_symbol_path(const Signature& sig, int len);

inline RelStructure r1_path(int len) { return first_symbol_path(tri().signature(), len); }

} // namespace relhom::fixtures
