#include "relhom/random_gen.hpp"

namespace relhom {

RelStructure random_structure(Rng& rng, const RandomStructureOptions& opt) {
    int n = opt.min_elements +
            static_cast<int>(rng.below(opt.max_elements - opt.min_elements + 1));
    std::vector<Symbol> symbols;
    for (int s = 0; s < opt.symbols; ++s)
        symbols.push_back(Symbol{"R" + std::to_string(s + 1), 2});
    std::vector<std::string> names;
    for (int e = 0; e < n; ++e) names.push_back("v" + std::to_string(e));
    RelStructure out(Signature(symbols), names);
    int density = opt.min_density +
                  static_cast<int>(rng.below(opt.max_density - opt.min_density + 1));
    for (int s = 0; s < opt.symbols; ++s)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (rng.percent(density)) out.add_tuple(s, Tuple{a, b});
    return out;
}

std::vector<int> random_subset(Rng& rng, int universe_size, int percent_each) {
    std::vector<int> out;
    for (int e = 0; e < universe_size; ++e)
        if (rng.percent(percent_each)) out.push_back(e);
    return out;
}

} // namespace relhom
