#include "relhom/structure.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace relhom {

Signature::Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    for (size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i].arity < 1)
            throw ParseError("symbol '" + symbols_[i].name + "' has arity < 1");
        for (size_t j = 0; j < i; ++j)
            if (symbols_[j].name == symbols_[i].name)
                throw ParseError("duplicate symbol '" + symbols_[i].name + "'");
    }
}

std::optional<int> Signature::index_of(const std::string& name) const {
    for (size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

RelStructure::RelStructure(Signature sig, std::vector<std::string> universe)
    : sig_(std::move(sig)), universe_(std::move(universe)) {
    if (universe_.empty()) throw ParseError("empty universe");
    for (size_t i = 0; i < universe_.size(); ++i) {
        auto [it, fresh] = index_.emplace(universe_[i], static_cast<int>(i));
        if (!fresh) throw ParseError("duplicate element '" + universe_[i] + "'");
    }
    relations_.resize(sig_.size());
}

std::optional<int> RelStructure::element_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int RelStructure::require_element(const std::string& name) const {
    auto ix = element_index(name);
    if (!ix) throw ParseError("unknown element '" + name + "'");
    return *ix;
}

bool RelStructure::has_tuple(int s, const Tuple& t) const {
    const auto& rel = relations_[s];
    return std::binary_search(rel.begin(), rel.end(), t);
}

void RelStructure::add_tuple(int s, Tuple t) {
    if (static_cast<int>(t.size()) != sig_.arity(s))
        throw ParseError("arity mismatch for symbol '" + sig_.symbol(s).name + "'");
    for (int e : t)
        if (e < 0 || e >= size()) throw ParseError("tuple component out of range");
    auto& rel = relations_[s];
    auto it = std::lower_bound(rel.begin(), rel.end(), t);
    if (it != rel.end() && *it == t) return;
    rel.insert(it, std::move(t));
    occ_dirty_ = true;
}

long long RelStructure::total_tuples() const {
    long long n = 0;
    for (const auto& rel : relations_) n += static_cast<long long>(rel.size());
    return n;
}

const std::vector<std::pair<int, int>>& RelStructure::occurrences(int e) const {
    if (occ_dirty_) {
        occ_cache_.assign(size(), {});
        for (int s = 0; s < sig_.size(); ++s) {
            const auto& rel = relations_[s];
            for (size_t ti = 0; ti < rel.size(); ++ti) {
                int last = -1;
                for (int comp : rel[ti]) {
                    if (comp != last) occ_cache_[comp].emplace_back(s, static_cast<int>(ti));
                    last = comp;
                }
            }
        }
        // an element may appear at non-adjacent positions of one tuple
        for (auto& v : occ_cache_) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
        occ_dirty_ = false;
    }
    return occ_cache_[e];
}

int RelStructure::degree(int e) const { return static_cast<int>(occurrences(e).size()); }

namespace {

bool is_plain_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

// Composite element names produced by the constructions (pairs "(a|b)", walk
// tokens "a:(1,R,t0,2)") carry balanced parentheses and never contain
// whitespace or top-level commas. Plain names are [A-Za-z0-9_]+.
bool is_valid_element_token(const std::string& s) {
    if (s.empty()) return false;
    int depth = 0;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '#') return false;
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            if (--depth < 0) return false;
        } else if (depth == 0) {
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
                  c == '|'))
                return false;
        }
    }
    return depth == 0;
}

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

// Splits "(a,b,c)" at depth-1 commas, so component names may themselves
// contain parenthesised commas.
std::vector<std::string> split_tuple_body(const std::string& body, int line) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : body) {
        if (c == '(') ++depth;
        if (c == ')') {
            if (--depth < 0) throw ParseError("unbalanced ')' in tuple", line);
        }
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (depth != 0) throw ParseError("unbalanced '(' in tuple", line);
    parts.push_back(cur);
    return parts;
}

} // namespace

RelStructure parse_structure(const std::string& text) {
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;

    std::optional<Signature> sig;
    std::optional<RelStructure> st;
    std::vector<bool> rel_seen;

    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = strip_comment(raw);
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];

        if (kw == "signature") {
            if (sig) throw ParseError("duplicate signature line", lineno);
            std::vector<Symbol> symbols;
            for (size_t i = 1; i < toks.size(); ++i) {
                auto slash = toks[i].find('/');
                if (slash == std::string::npos)
                    throw ParseError("expected NAME/ARITY, got '" + toks[i] + "'", lineno);
                Symbol sym;
                sym.name = toks[i].substr(0, slash);
                if (!is_plain_name(sym.name))
                    throw ParseError("bad symbol name '" + sym.name + "'", lineno);
                try {
                    sym.arity = std::stoi(toks[i].substr(slash + 1));
                } catch (const std::exception&) {
                    throw ParseError("bad arity in '" + toks[i] + "'", lineno);
                }
                if (sym.arity < 1) throw ParseError("arity must be >= 1", lineno);
                symbols.push_back(std::move(sym));
            }
            if (symbols.empty()) throw ParseError("signature declares no symbols", lineno);
            try {
                sig = Signature(std::move(symbols));
            } catch (const ParseError& e) {
                throw ParseError(e.what(), lineno);
            }
        } else if (kw == "universe") {
            if (!sig) throw ParseError("universe before signature", lineno);
            if (st) throw ParseError("duplicate universe line", lineno);
            std::vector<std::string> names(toks.begin() + 1, toks.end());
            if (names.empty()) throw ParseError("empty universe", lineno);
            for (const auto& n : names)
                if (!is_valid_element_token(n))
                    throw ParseError("bad element name '" + n + "'", lineno);
            try {
                st = RelStructure(*sig, std::move(names));
            } catch (const ParseError& e) {
                throw ParseError(e.what(), lineno);
            }
            rel_seen.assign(sig->size(), false);
        } else if (kw == "rel") {
            if (!st) throw ParseError("rel before universe", lineno);
            if (toks.size() < 3 || toks[2] != "=")
                throw ParseError("expected 'rel NAME = ...'", lineno);
            auto symIx = sig->index_of(toks[1]);
            if (!symIx) throw ParseError("unknown symbol '" + toks[1] + "'", lineno);
            if (rel_seen[*symIx])
                throw ParseError("duplicate rel line for '" + toks[1] + "'", lineno);
            rel_seen[*symIx] = true;

            // Re-join the remainder and split into (...) groups; whitespace
            // inside tuples is not significant.
            std::string rest;
            auto eq = line.find('=');
            rest = line.substr(eq + 1);
            std::string compact;
            for (char c : rest)
                if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
            size_t p = 0;
            while (p < compact.size()) {
                if (compact[p] != '(') throw ParseError("expected '(' in tuple list", lineno);
                int depth = 0;
                size_t q = p;
                for (; q < compact.size(); ++q) {
                    if (compact[q] == '(') ++depth;
                    if (compact[q] == ')' && --depth == 0) break;
                }
                if (q == compact.size()) throw ParseError("unbalanced '(' in tuple", lineno);
                std::string body = compact.substr(p + 1, q - p - 1);
                auto parts = split_tuple_body(body, lineno);
                if (static_cast<int>(parts.size()) != sig->arity(*symIx))
                    throw ParseError("arity mismatch for symbol '" + toks[1] + "'", lineno);
                Tuple t;
                for (const auto& part : parts) {
                    auto ix = st->element_index(part);
                    if (!ix) throw ParseError("unknown element '" + part + "' in tuple", lineno);
                    t.push_back(*ix);
                }
                st->add_tuple(*symIx, std::move(t));
                p = q + 1;
            }
        } else {
            throw ParseError("unknown directive '" + kw + "'", lineno);
        }
    }
    if (!st) throw ParseError("missing signature/universe");
    return *st;
}

std::string render_structure(const RelStructure& h) {
    std::ostringstream os;
    os << "signature";
    for (const auto& sym : h.signature().symbols()) os << ' ' << sym.name << '/' << sym.arity;
    os << '\n' << "universe";
    for (const auto& name : h.universe()) os << ' ' << name;
    os << '\n';
    for (int s = 0; s < h.signature().size(); ++s) {
        if (h.tuples(s).empty()) continue;
        os << "rel " << h.signature().symbol(s).name << " =";
        for (const auto& t : h.tuples(s)) {
            os << " (";
            for (size_t i = 0; i < t.size(); ++i) {
                if (i) os << ',';
                os << h.element_name(t[i]);
            }
            os << ')';
        }
        os << '\n';
    }
    return os.str();
}

RelStructure induced_substructure(const RelStructure& h, const std::vector<int>& subset) {
    std::vector<int> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int e : sorted)
        if (e < 0 || e >= h.size()) throw PreconditionError("subset element out of range");

    std::vector<int> remap(h.size(), -1);
    std::vector<std::string> names;
    for (int e : sorted) {
        remap[e] = static_cast<int>(names.size());
        names.push_back(h.element_name(e));
    }
    RelStructure out(h.signature(), std::move(names));
    for (int s = 0; s < h.signature().size(); ++s) {
        for (const auto& t : h.tuples(s)) {
            Tuple nt;
            nt.reserve(t.size());
            bool inside = true;
            for (int comp : t) {
                if (remap[comp] < 0) {
                    inside = false;
                    break;
                }
                nt.push_back(remap[comp]);
            }
            if (inside) out.add_tuple(s, std::move(nt));
        }
    }
    return out;
}

std::vector<int> elements_by_name(const RelStructure& h, const std::vector<std::string>& names) {
    std::vector<int> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(h.require_element(n));
    return out;
}

RelStructure induced_substructure_by_names(const RelStructure& h,
                                           const std::vector<std::string>& names) {
    return induced_substructure(h, elements_by_name(h, names));
}

} // namespace relhom
