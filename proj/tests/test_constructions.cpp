#include <set>

#include "doctest.h"

#include "relhom/constructions.hpp"
#include "relhom/fixtures.hpp"
#include "relhom/hom.hpp"
#include "relhom/iso.hpp"
#include "relhom/random_gen.hpp"
#include "relhom/walks.hpp"

using namespace relhom;

TEST_CASE("products") {
    auto edge = fixtures::edge();
    auto sq = product(edge, edge);
    CHECK(sq.size() == 4);
    REQUIRE(sq.tuples(0).size() == 1);
    CHECK(sq.element_name(sq.tuples(0)[0][0]) == "(0|0)");
    CHECK(sq.element_name(sq.tuples(0)[0][1]) == "(1|1)");

    auto pt1 = fixtures::pt1();
    auto ptsq = product(pt1, pt1);
    CHECK(ptsq.size() == 1);
    CHECK(ptsq.tuples(0).size() == 1);

    auto tri = fixtures::tri();
    CHECK(product(tri, tri).tuples(0).size() == 9);

    CHECK_THROWS_AS(product(edge, fixtures::k2()), PreconditionError);
}

TEST_CASE("product is symmetric up to the coordinate swap") {
    Rng rng(21);
    for (int i = 0; i < 15; ++i) {
        RandomStructureOptions opt;
        opt.max_elements = 3;
        opt.symbols = 1 + static_cast<int>(rng.below(2));
        auto a = random_structure(rng, opt);
        auto b = random_structure(rng, opt);
        CHECK(are_isomorphic(product(a, b), product(b, a)));
    }
}

TEST_CASE("the square is symmetric as a structure") {
    Rng rng(22);
    for (int i = 0; i < 15; ++i) {
        auto h = random_structure(rng, {});
        Square sq = make_square(h);
        // swapping coordinates maps tuples to tuples
        for (int s = 0; s < sq.prod.signature().size(); ++s) {
            for (const auto& t : sq.prod.tuples(s)) {
                Tuple swapped(t.size());
                for (size_t p = 0; p < t.size(); ++p) swapped[p] = sq.mirror(t[p]);
                CHECK(sq.prod.has_tuple(s, swapped));
            }
        }
    }
}

TEST_CASE("diagonals") {
    auto tri = fixtures::tri();
    auto d = diagonal(tri);
    CHECK(d.size() == 3);
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& t : d.tuples(0))
        got.insert({d.element_name(t[0]), d.element_name(t[1])});
    std::set<std::pair<std::string, std::string>> want{
        {"(0|0)", "(0|0)"}, {"(0|0)", "(1|1)"}, {"(1|1)", "(0|0)"}};
    CHECK(got == want);

    CHECK(diagonal(fixtures::pt1()).tuples(0).size() == 1);
    auto de = diagonal(fixtures::edge());
    CHECK(de.size() == 2);
    CHECK(de.tuples(0).size() == 1);
}

TEST_CASE("links") {
    Signature e2({Symbol{"E", 2}});
    auto l1 = link(1, e2);
    CHECK(l1.size() == 2);
    CHECK(l1.tuples(0).size() == 4);
    CHECK(link(2, e2).tuples(0).size() == 7);
    Signature r3({Symbol{"R", 3}});
    CHECK(link(1, r3).tuples(0).size() == 8);
    CHECK_THROWS_AS(link(0, e2), PreconditionError);
}

TEST_CASE("constants augmentation") {
    auto c3 = fixtures::c3();
    auto aug = add_constants(c3);
    REQUIRE(aug.signature().size() == 4);
    CHECK(aug.signature().symbol(1).name == "const_0");
    CHECK(aug.signature().symbol(1).arity == 1);
    CHECK(aug.tuples(1) == std::vector<Tuple>{{0}});

    auto pt = add_constants(fixtures::pt1());
    CHECK(pt.signature().size() == 2);
    CHECK(pt.tuples(1).size() == 1);
}

TEST_CASE("walk forests") {
    auto edge = fixtures::edge();
    auto f1 = walk_forest(edge, 1);
    CHECK(f1.structure.size() == 4);
    CHECK(component_count(f1.structure) == 2);
    CHECK(f1.roots.size() == 2);

    auto f0 = walk_forest(edge, 0);
    CHECK(f0.structure.size() == 2);
    CHECK(f0.structure.total_tuples() == 0);

    auto sft3 = fixtures::sft3();
    auto f2 = walk_forest(sft3, 2);
    CHECK(is_homomorphism(f2.structure, sft3, Homomorphism{f2.labels}));
    CHECK(is_forest(f2.structure));
    CHECK(component_count(f2.structure) == sft3.size());
}

TEST_CASE("forest depth d embeds into depth d+1 as a prefix") {
    Rng rng(23);
    for (int i = 0; i < 10; ++i) {
        RandomStructureOptions opt;
        opt.max_elements = 3;
        opt.min_density = 10;
        opt.max_density = 30;
        auto h = random_structure(rng, opt);
        WalkForest small, big;
        try {
            small = walk_forest(h, 2, 20000);
            big = walk_forest(h, 3, 200000);
        } catch (const CapExceeded&) {
            continue;
        }
        REQUIRE(small.structure.size() <= big.structure.size());
        std::vector<int> prefix(small.structure.size());
        for (int w = 0; w < small.structure.size(); ++w) {
            prefix[w] = w;
            CHECK(small.structure.element_name(w) == big.structure.element_name(w));
            CHECK(small.labels[w] == big.labels[w]);
        }
        CHECK(induced_substructure(big.structure, prefix) == small.structure);
    }
}

TEST_CASE("forest of an induced substructure sits inside the forest") {
    auto sft3 = fixtures::sft3();
    auto inner = induced_substructure_by_names(sft3, {"a", "b"});
    auto fi = walk_forest(inner, 2);
    auto fh = walk_forest(sft3, 2);

    // translate inner walk names to outer walk names by re-indexing each
    // step's tuple inside the bigger relation
    auto translate = [&](const std::string& name) {
        std::string out;
        size_t pos = 0;
        auto next_part = [&]() {
            size_t start = pos;
            int depth = 0;
            while (pos < name.size()) {
                char c = name[pos];
                if (c == '(') ++depth;
                if (c == ')') --depth;
                if (c == ':' && depth == 0) break;
                ++pos;
            }
            return name.substr(start, pos - start);
        };
        out = next_part(); // root element name
        while (pos < name.size()) {
            ++pos; // ':'
            std::string step = next_part(); // "(i,SYM,tK,j)"
            std::string body = step.substr(1, step.size() - 2);
            std::vector<std::string> parts;
            std::string cur;
            for (char c : body) {
                if (c == ',') {
                    parts.push_back(cur);
                    cur.clear();
                } else
                    cur.push_back(c);
            }
            parts.push_back(cur);
            int sym = *inner.signature().index_of(parts[1]);
            int ti = std::stoi(parts[2].substr(1));
            const Tuple& t = inner.tuples(sym)[ti];
            Tuple outer_t;
            for (int comp : t) outer_t.push_back(*sft3.element_index(inner.element_name(comp)));
            const auto& rel = sft3.tuples(sym);
            int outer_ti = -1;
            for (size_t k = 0; k < rel.size(); ++k)
                if (rel[k] == outer_t) outer_ti = static_cast<int>(k);
            REQUIRE(outer_ti >= 0);
            out += ":(" + parts[0] + "," + parts[1] + ",t" + std::to_string(outer_ti) + "," +
                   parts[3] + ")";
        }
        return out;
    };

    std::vector<int> image(fi.structure.size());
    for (int w = 0; w < fi.structure.size(); ++w) {
        auto outer_name = translate(fi.structure.element_name(w));
        auto ix = fh.structure.element_index(outer_name);
        REQUIRE_MESSAGE(ix.has_value(), "missing walk: " << outer_name);
        image[w] = *ix;
        CHECK(fh.structure.element_name(*ix) == outer_name);
    }
    // substructure: every inner forest tuple maps to an outer forest tuple
    for (int s = 0; s < fi.structure.signature().size(); ++s) {
        for (const auto& t : fi.structure.tuples(s)) {
            Tuple mapped;
            for (int comp : t) mapped.push_back(image[comp]);
            CHECK(fh.structure.has_tuple(s, mapped));
        }
    }
}

TEST_CASE("forest element cap fires") {
    auto k2 = fixtures::k2();
    CHECK_THROWS_AS(walk_forest(k2, 30, 100), CapExceeded);
}
