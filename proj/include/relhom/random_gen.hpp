#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "relhom/structure.hpp"

namespace relhom {

// Seeded deterministic RNG. Draws go through below()/percent() rather than
// <random> distributions so that outputs are identical across standard
// library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    uint64_t below(uint64_t n) {
        // modulo bias is irrelevant for test-case generation
        return n == 0 ? 0 : next() % n;
    }

    bool percent(int p) { return static_cast<int>(below(100)) < p; }

private:
    std::mt19937_64 eng_;
};

struct RandomStructureOptions {
    int min_elements = 2;
    int max_elements = 3;
    int symbols = 1;       // binary symbols R1..Rk
    int min_density = 15;  // per-tuple inclusion chance, percent
    int max_density = 60;
};

// Random structure over binary symbols R1..Rk with elements v0..v{n-1}.
RelStructure random_structure(Rng& rng, const RandomStructureOptions& opt);

// Random subset of the universe (possibly empty).
std::vector<int> random_subset(Rng& rng, int universe_size, int percent_each);

} // namespace relhom
