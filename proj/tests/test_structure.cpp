#include "doctest.h"

#include "relhom/fixtures.hpp"
#include "relhom/iso.hpp"
#include "relhom/random_gen.hpp"
#include "relhom/structure.hpp"
#include "relhom/walks.hpp"

using namespace relhom;

TEST_CASE("parsing the fixture files") {
    auto pt1 = fixtures::pt1();
    CHECK(pt1.size() == 1);
    CHECK(pt1.tuples(0).size() == 1);

    auto sft3 = fixtures::sft3();
    CHECK(sft3.size() == 3);
    CHECK(sft3.tuples(0).size() == 6);
    CHECK(sft3.tuples(1).size() == 6);
    CHECK(sft3.element_name(0) == "a");
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_AS(parse_structure("signature R/2\nuniverse a b\nrel R = (a,b,a)\n"),
                    ParseError);
    try {
        parse_structure("signature R/2\nuniverse a b\nrel R = (a,b,a)\n");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("arity mismatch") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_structure("signature R/2\nuniverse a a\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("signature R/2 R/3\nuniverse a\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("signature R/2\nuniverse a\nrel R = (a,q)\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("signature R/2\nuniverse\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("# nothing\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("signature R/0\nuniverse a\n"), ParseError);
}

TEST_CASE("comments and duplicate rel lines") {
    auto s = parse_structure("# header\nsignature R/2 # trailing\nuniverse a b\nrel R = (a,b)\n");
    CHECK(s.tuples(0).size() == 1);
    CHECK_THROWS_AS(
        parse_structure("signature R/2\nuniverse a b\nrel R = (a,b)\nrel R = (b,a)\n"),
        ParseError);
}

TEST_CASE("round trip on fixtures and random structures") {
    for (const char* text : {fixtures::kSft3Text, fixtures::kEdgeText, fixtures::kTriText,
                             fixtures::kC3Text, fixtures::kK2Text, fixtures::kPt1Text}) {
        auto h = parse_structure(text);
        CHECK(parse_structure(render_structure(h)) == h);
    }
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        RandomStructureOptions opt;
        opt.max_elements = 5;
        opt.symbols = 1 + static_cast<int>(rng.below(3));
        auto h = random_structure(rng, opt);
        CHECK(parse_structure(render_structure(h)) == h);
    }
}

TEST_CASE("induced substructures") {
    auto sft3 = fixtures::sft3();
    auto ab = induced_substructure_by_names(sft3, {"a", "b"});
    CHECK(ab.size() == 2);
    std::vector<Tuple> full{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    CHECK(ab.tuples(0) == full);
    CHECK(ab.tuples(1) == full);

    std::vector<int> everything;
    for (int e = 0; e < sft3.size(); ++e) everything.push_back(e);
    CHECK(induced_substructure(sft3, everything) == sft3);

    auto edge0 = induced_substructure_by_names(fixtures::edge(), {"0"});
    CHECK(edge0.size() == 1);
    CHECK(edge0.tuples(0).empty());

    CHECK_THROWS_AS(induced_substructure(sft3, {0, 99}), PreconditionError);

    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        auto h = random_structure(rng, {});
        auto s = random_subset(rng, h.size(), 60);
        if (s.empty()) s.push_back(0); // the universe type has no empty state
        auto once = induced_substructure(h, s);
        std::vector<int> again;
        for (int e = 0; e < once.size(); ++e) again.push_back(e);
        CHECK(induced_substructure(once, again) == once);
    }
}

TEST_CASE("isomorphism search") {
    auto edge = fixtures::edge();
    auto id = find_isomorphism(edge, edge, {"0", "1"});
    REQUIRE(id.has_value());
    CHECK(*id == std::vector<int>{0, 1});

    auto reversed = parse_structure("signature R/2\nuniverse x y\nrel R = (y,x)\n");
    auto iso = find_isomorphism(edge, reversed);
    REQUIRE(iso.has_value());
    CHECK(*iso == std::vector<int>{1, 0}); // 0 -> y, 1 -> x

    auto k2_shape = parse_structure("signature R/2\nuniverse 0 1\nrel R = (0,1) (1,0)\n");
    CHECK(!find_isomorphism(edge, k2_shape).has_value());

    Rng rng(9);
    for (int i = 0; i < 20; ++i) {
        auto h = random_structure(rng, {});
        auto self = find_isomorphism(h, h, h.universe());
        REQUIRE(self.has_value());
        for (int e = 0; e < h.size(); ++e) CHECK((*self)[e] == e);
    }
}

TEST_CASE("canonical key separates and identifies") {
    auto edge = fixtures::edge();
    auto reversed = parse_structure("signature R/2\nuniverse x y\nrel R = (y,x)\n");
    CHECK(canonical_key(edge) == canonical_key(reversed));
    auto k2_shape = parse_structure("signature R/2\nuniverse 0 1\nrel R = (0,1) (1,0)\n");
    CHECK(canonical_key(edge) != canonical_key(k2_shape));
    Rng rng(10);
    for (int i = 0; i < 20; ++i) {
        auto h = random_structure(rng, {});
        CHECK(are_isomorphic(h, canonical_form(h)));
        CHECK(canonical_key(h) == canonical_key(canonical_form(h)));
    }
}

TEST_CASE("walk distance") {
    auto edge = fixtures::edge();
    CHECK(distance(edge, {0}, {1}) == 1);
    CHECK(distance(edge, {0, 1}, {0, 1}) == 0);

    auto loops = parse_structure("signature E/2\nuniverse x y\nrel E = (x,x) (y,y)\n");
    CHECK(distance(loops, {0}, {1}) == kInfiniteDistance);
    CHECK_THROWS_AS(distance(edge, {}, {0}), PreconditionError);

    // triangle inequality on random structures where everything is finite
    Rng rng(11);
    int checked = 0;
    for (int i = 0; i < 40 && checked < 25; ++i) {
        RandomStructureOptions opt;
        opt.max_elements = 5;
        opt.min_density = 35;
        auto h = random_structure(rng, opt);
        int a = static_cast<int>(rng.below(h.size()));
        int b = static_cast<int>(rng.below(h.size()));
        int c = static_cast<int>(rng.below(h.size()));
        int ab = distance(h, {a}, {b});
        int bc = distance(h, {b}, {c});
        int ac = distance(h, {a}, {c});
        if (ab == kInfiniteDistance || bc == kInfiniteDistance || ac == kInfiniteDistance)
            continue;
        CHECK(ac <= ab + bc);
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("boundary") {
    auto edge = fixtures::edge();
    CHECK(boundary(edge, {0}) == std::vector<int>{1});
    CHECK(boundary(edge, {0, 1}).empty());
    auto path = parse_structure("signature E/2\nuniverse x y z\nrel E = (x,y) (y,z)\n");
    CHECK(boundary(path, {1}) == std::vector<int>{0, 2});
}

TEST_CASE("walk validity") {
    auto edge = fixtures::edge();
    Walk w{0, {{0, 0, 0, 1}}};
    CHECK(is_valid_walk(edge, w));
    CHECK(walk_end(edge, w) == 1);
    Walk bad{1, {{0, 0, 0, 1}}};
    CHECK(!is_valid_walk(edge, bad));
}

TEST_CASE("composite element tokens survive the grammar") {
    auto text = "signature E/2\nuniverse (a|b) x:(1,E,t0,2)\nrel E = ((a|b),x:(1,E,t0,2))\n";
    auto s = parse_structure(text);
    CHECK(s.size() == 2);
    CHECK(s.tuples(0).size() == 1);
    CHECK(parse_structure(render_structure(s)) == s);
}
