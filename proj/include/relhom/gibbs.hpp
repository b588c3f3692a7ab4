#pragma once

#include <map>
#include <optional>
#include <vector>

#include "relhom/hom.hpp"
#include "relhom/rational.hpp"
#include "relhom/structure.hpp"

namespace relhom {

// Strictly positive weight per target element.
struct WeightFunction {
    std::vector<Rational> weight;
};

WeightFunction uniform_weights(const RelStructure& h);
// "a=1,b=3/2"; every element must be covered unless defaulted to 1.
WeightFunction parse_weights(const RelStructure& h, const std::string& text);

struct GibbsSpecification {
    RelStructure g;
    RelStructure h;
    WeightFunction lambda;
};

struct PartitionResult {
    Rational z;
    long long support = 0; // number of admissible interior assignments
};

struct GibbsCaps {
    long long node_cap = 20000000; // search nodes for exact enumeration
    long long hom_cap = 100000;
};

// Exact weighted count of interior assignments on V consistent with the
// exterior clamp boundary_hom|G\V. Z = 0 is reported via support == 0.
PartitionResult partition_function(const GibbsSpecification& spec, const std::vector<int>& v,
                                   const Homomorphism& boundary_hom, const GibbsCaps& caps = {});

// Exact distribution of the value at x under the clamped measure; x must lie
// in V and the support must be nonempty.
std::map<int, Rational> conditional_marginal(const GibbsSpecification& spec,
                                             const std::vector<int>& v,
                                             const Homomorphism& boundary_hom, int x,
                                             const GibbsCaps& caps = {});

// Full conditional distribution over interior assignments (test-sized V only).
std::map<std::vector<int>, Rational> conditional_distribution(const GibbsSpecification& spec,
                                                              const std::vector<int>& v,
                                                              const Homomorphism& boundary_hom,
                                                              const GibbsCaps& caps = {});

struct JsmWitness {
    std::vector<int> v;
    Homomorphism phi1, phi2;
    int x = 0;
    int a = 0;
    Rational gap;
    int dist = 0;
};

struct SpatialMixingReport {
    std::vector<int> protected_set;
    long long pairs_tested = 0;
    std::map<int, Rational> bucket_max; // finite distance -> max marginal gap
    Rational infinite_bucket_max;       // must be exactly 0
    bool violation = false;             // non-decreasing positive tail
    bool fit_valid = false;             // least-squares fit over positive buckets
    double fit_c = 0.0, fit_alpha = 0.0;
    std::optional<JsmWitness> worst;
};

// Exact marginal-gap report against the disagreement set of two boundary
// conditions, bucketed by distance. The exponential fit is reporting-only.
SpatialMixingReport jsm_report(const GibbsSpecification& spec,
                               const std::vector<int>& protected_set,
                               const std::vector<std::vector<int>>& v_family,
                               const GibbsCaps& caps = {});

struct BoundaryInfluenceResult {
    Rational gap;
    std::string witness_pair;       // non-diagonal square element
    std::map<int, Rational> p1, p2; // marginals at the root under both clamps
    int forest_size = 0;
    int volume_size = 0;
};

// Marginal-gap witness at the root of the truncated forest of the stiff
// symmetric square. Errors when the square dismantles into the diagonal (no
// non-diagonal element survives, hence no witness exists).
BoundaryInfluenceResult boundary_influence(const RelStructure& h,
                                           const std::vector<int>& protected_set, int depth,
                                           const std::optional<WeightFunction>& lambda = {},
                                           const GibbsCaps& caps = {});

// (d-1)^d / (d-2)^d, exact.
Rational hardcore_critical_activity(int degree);

} // namespace relhom
