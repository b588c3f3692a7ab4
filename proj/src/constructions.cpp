#include "relhom/constructions.hpp"

#include <algorithm>

namespace relhom {

RelStructure product(const RelStructure& h1, const RelStructure& h2) {
    if (!(h1.signature() == h2.signature()))
        throw PreconditionError("product: signature mismatch");
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(h1.size()) * h2.size());
    for (int a = 0; a < h1.size(); ++a)
        for (int b = 0; b < h2.size(); ++b)
            names.push_back("(" + h1.element_name(a) + "|" + h2.element_name(b) + ")");
    RelStructure out(h1.signature(), std::move(names));
    int n2 = h2.size();
    for (int s = 0; s < h1.signature().size(); ++s) {
        for (const auto& t1 : h1.tuples(s)) {
            for (const auto& t2 : h2.tuples(s)) {
                Tuple t(t1.size());
                for (size_t i = 0; i < t1.size(); ++i) t[i] = t1[i] * n2 + t2[i];
                out.add_tuple(s, std::move(t));
            }
        }
    }
    return out;
}

std::optional<std::pair<std::string, std::string>> split_pair_name(const std::string& name) {
    if (name.size() < 3 || name.front() != '(' || name.back() != ')') return std::nullopt;
    int depth = 0;
    for (size_t i = 1; i + 1 < name.size(); ++i) {
        char c = name[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == '|' && depth == 0)
            return std::make_pair(name.substr(1, i - 1), name.substr(i + 1, name.size() - i - 2));
    }
    return std::nullopt;
}

std::vector<int> Square::diagonal_indices() const {
    std::vector<int> out;
    out.reserve(side);
    for (int a = 0; a < side; ++a) out.push_back(pair_index(a, a));
    return out;
}

Square make_square(const RelStructure& base) {
    Square sq;
    sq.base = base;
    sq.prod = product(base, base);
    sq.side = base.size();
    return sq;
}

RelStructure diagonal(const RelStructure& h) {
    Square sq = make_square(h);
    return induced_substructure(sq.prod, sq.diagonal_indices());
}

RelStructure link(int ell, const Signature& sig) {
    if (ell < 1) throw PreconditionError("link: ell must be >= 1");
    std::vector<std::string> names;
    for (int i = 0; i <= ell; ++i) names.push_back(std::to_string(i));
    RelStructure out(sig, std::move(names));
    for (int s = 0; s < sig.size(); ++s) {
        int k = sig.arity(s);
        for (int i = 0; i + 1 <= ell; ++i) {
            // all k-tuples over {i, i+1}
            Tuple t(k, i);
            while (true) {
                out.add_tuple(s, t);
                int pos = k - 1;
                while (pos >= 0 && t[pos] == i + 1) t[pos--] = i;
                if (pos < 0) break;
                t[pos] = i + 1;
            }
        }
    }
    return out;
}

RelStructure add_constants(const RelStructure& h) {
    auto symbols = h.signature().symbols();
    for (int e = 0; e < h.size(); ++e) {
        std::string name = "const_" + h.element_name(e);
        for (const auto& sym : symbols)
            if (sym.name == name)
                throw ParseError("constant symbol name collision: '" + name + "'");
        symbols.push_back(Symbol{name, 1});
    }
    RelStructure out(Signature(std::move(symbols)), h.universe());
    for (int s = 0; s < h.signature().size(); ++s)
        for (const auto& t : h.tuples(s)) out.add_tuple(s, t);
    for (int e = 0; e < h.size(); ++e)
        out.add_tuple(h.signature().size() + e, Tuple{e});
    return out;
}

namespace {

struct WalkNode {
    int parent = -1; // index of the walk this one extends
    int end = 0;     // base element the walk ends at
    int length = 0;
    // extension step (meaningless for roots)
    int symbol = 0, tuple_index = 0, from = 0, to = 0;
};

std::string walk_name(const RelStructure& h, const std::vector<WalkNode>& nodes, int w) {
    if (nodes[w].parent < 0) return h.element_name(nodes[w].end);
    const auto& n = nodes[w];
    return walk_name(h, nodes, n.parent) + ":(" + std::to_string(n.from + 1) + "," +
           h.signature().symbol(n.symbol).name + ",t" + std::to_string(n.tuple_index) + "," +
           std::to_string(n.to + 1) + ")";
}

} // namespace

WalkForest walk_forest(const RelStructure& h, int depth, long long element_cap) {
    if (depth < 0) throw PreconditionError("walk_forest: negative depth");
    std::vector<WalkNode> nodes;
    std::vector<int> level_begin; // first node index of each level

    for (int e = 0; e < h.size(); ++e) {
        WalkNode n;
        n.end = e;
        nodes.push_back(n);
    }
    level_begin.push_back(0);

    // Tuples of the forest are emitted per (base tuple, anchor position, walk
    // ending there): the anchor keeps the walk, every other position holds the
    // one-step extension of it. Only walks of length < depth spawn tuples, so
    // every member stays within the depth bound.
    std::vector<std::pair<int, std::vector<int>>> forest_tuples; // (symbol, tuple of node ids)

    int level_start = 0;
    for (int level = 0; level < depth + 1; ++level) {
        int level_end = static_cast<int>(nodes.size());
        level_begin.push_back(level_end);
        if (level == depth) break;
        for (int w = level_start; w < level_end; ++w) {
            int endpoint = nodes[w].end;
            for (int s = 0; s < h.signature().size(); ++s) {
                const auto& rel = h.tuples(s);
                for (int ti = 0; ti < static_cast<int>(rel.size()); ++ti) {
                    const Tuple& t = rel[ti];
                    for (int i = 0; i < static_cast<int>(t.size()); ++i) {
                        if (t[i] != endpoint) continue;
                        std::vector<int> ft(t.size());
                        ft[i] = w;
                        for (int j = 0; j < static_cast<int>(t.size()); ++j) {
                            if (j == i) continue;
                            WalkNode n;
                            n.parent = w;
                            n.end = t[j];
                            n.length = nodes[w].length + 1;
                            n.symbol = s;
                            n.tuple_index = ti;
                            n.from = i;
                            n.to = j;
                            ft[j] = static_cast<int>(nodes.size());
                            nodes.push_back(n);
                            if (static_cast<long long>(nodes.size()) > element_cap)
                                throw CapExceeded("walk_forest: element cap exceeded",
                                                  static_cast<long long>(nodes.size()));
                        }
                        forest_tuples.emplace_back(s, std::move(ft));
                    }
                }
            }
        }
        level_start = level_end;
    }

    WalkForest f;
    f.depth = depth;
    std::vector<std::string> names;
    names.reserve(nodes.size());
    for (size_t w = 0; w < nodes.size(); ++w)
        names.push_back(walk_name(h, nodes, static_cast<int>(w)));
    f.structure = RelStructure(h.signature(), std::move(names));
    for (auto& [s, ft] : forest_tuples) f.structure.add_tuple(s, ft);
    f.labels.reserve(nodes.size());
    f.lengths.reserve(nodes.size());
    for (const auto& n : nodes) {
        f.labels.push_back(n.end);
        f.lengths.push_back(n.length);
    }
    for (int e = 0; e < h.size(); ++e) f.roots.push_back(e);
    return f;
}

} // namespace relhom
