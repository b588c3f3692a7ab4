#include <algorithm>

#include "doctest.h"

#include "relhom/fixtures.hpp"
#include "relhom/homgraph.hpp"
#include "relhom/random_gen.hpp"

using namespace relhom;

TEST_CASE("hamming adjacency") {
    Homomorphism a{{0, 1, 2}}, b{{0, 1, 0}}, c{{1, 0, 2}};
    CHECK(cn_adjacent(a, a, 1));
    CHECK(cn_adjacent(a, b, 1));
    CHECK(!cn_adjacent(a, c, 1));
    CHECK(cn_adjacent(a, c, 2));
}

TEST_CASE("link adjacency") {
    auto k2 = fixtures::k2();
    auto arc = parse_structure("signature E/2\nuniverse x y\nrel E = (x,y)\n");
    auto homs = enumerate_homs(arc, k2, {});
    REQUIRE(homs.size() == 2);
    CHECK(l_adjacent(arc, k2, homs[0], homs[0]));
    CHECK(!l_adjacent(arc, k2, homs[0], homs[1])); // the mixed pair (0,0) is missing

    auto pt1 = fixtures::pt1();
    auto g = parse_structure("signature E/2\nuniverse u v\nrel E = (u,v)\n");
    auto consts = enumerate_homs(g, pt1, {});
    REQUIRE(consts.size() == 1);
    CHECK(l_adjacent(g, pt1, consts[0], consts[0]));
}

TEST_CASE("hamming graphs nest as n grows") {
    Rng rng(51);
    for (int i = 0; i < 10; ++i) {
        RandomStructureOptions opt;
        opt.max_elements = 3;
        auto g = random_structure(rng, opt);
        auto h = random_structure(rng, opt);
        auto homs = enumerate_homs(g, h, {});
        for (size_t a = 0; a < homs.size(); ++a)
            for (size_t b = 0; b < homs.size(); ++b)
                if (cn_adjacent(homs[a], homs[b], 1)) CHECK(cn_adjacent(homs[a], homs[b], 2));
    }
}

TEST_CASE("restricted walk search") {
    auto k2 = fixtures::k2();
    auto arc = parse_structure("signature E/2\nuniverse x y\nrel E = (x,y)\n");
    auto homs = enumerate_homs(arc, k2, {});
    CHECK(!j_connected(arc, k2, {}, HomGraphView::Hamming, homs[0], homs[1]).has_value());

    auto self = j_connected(arc, k2, {}, HomGraphView::Hamming, homs[0], homs[0]);
    REQUIRE(self.has_value());
    CHECK(self->steps.size() == 1);

    // the first-relation reduct of the three-element fixture is a dismantlable
    // looped graph; every pair of homomorphisms is joined
    auto reduct = parse_structure(
        "signature R1/2\nuniverse a b c\nrel R1 = (a,a) (a,b) (b,a) (b,b) (b,c) (c,b)\n");
    auto g = parse_structure("signature R1/2\nuniverse x y\nrel R1 = (x,y)\n");
    auto rhoms = enumerate_homs(g, reduct, {});
    REQUIRE(rhoms.size() > 2);
    for (size_t i = 0; i < rhoms.size(); ++i) {
        auto walk = j_connected(g, reduct, {}, HomGraphView::Hamming, rhoms[0], rhoms[i]);
        REQUIRE(walk.has_value());
        CHECK(validate_j_walk(g, reduct, *walk, {}, HomGraphView::Hamming));
    }
}

TEST_CASE("walks respect the protected set") {
    // over the reduct above, protect value b: a pair agreeing on b at some
    // coordinate may only be joined by walks pinning that coordinate
    auto reduct = parse_structure(
        "signature R1/2\nuniverse a b c\nrel R1 = (a,a) (a,b) (b,a) (b,b) (b,c) (c,b)\n");
    auto g = parse_structure("signature R1/2\nuniverse x y\nrel R1 = (x,y)\n");
    auto homs = enumerate_homs(g, reduct, {});
    int b = 1;
    for (size_t i = 0; i < homs.size(); ++i) {
        for (size_t j = 0; j < homs.size(); ++j) {
            auto walk = j_connected(g, reduct, {b}, HomGraphView::Hamming, homs[i], homs[j]);
            if (!walk) continue;
            CHECK(validate_j_walk(g, reduct, *walk, {b}, HomGraphView::Hamming));
            for (int x = 0; x < g.size(); ++x)
                if (homs[i].map[x] == homs[j].map[x] && homs[i].map[x] == b)
                    for (const auto& step : walk->steps) CHECK(step.map[x] == b);
        }
    }
}

TEST_CASE("projection connectivity in the link graph") {
    CHECK(projections_link_connected(fixtures::tri(), {0, 1, 2}));
    CHECK(!projections_link_connected(fixtures::k2(), {}));
    CHECK(projections_link_connected(fixtures::pt1(), {0}));
    CHECK(projections_link_connected(fixtures::edge(), {}));
}

TEST_CASE("hamming connectivity over the linked square") {
    CHECK(square_link_hamming_j_connected(fixtures::edge(), {}));
    CHECK(!square_link_hamming_j_connected(fixtures::k2(), {}));
    CHECK(square_link_hamming_j_connected(fixtures::pt1(), {}));
    CHECK(square_link_hamming_j_connected(fixtures::tri(), {0, 1, 2}));
}

TEST_CASE("components of the solution graph") {
    auto k2 = fixtures::k2();
    auto arc = parse_structure("signature E/2\nuniverse x y\nrel E = (x,y)\n");
    auto homs = enumerate_homs(arc, k2, {});
    auto comp = hom_graph_components(arc, k2, homs, HomGraphView::Hamming, 1);
    CHECK(*std::max_element(comp.begin(), comp.end()) == 1); // two components
}

TEST_CASE("link walk counting") {
    auto k2 = fixtures::k2();
    auto arc = parse_structure("signature E/2\nuniverse x y\nrel E = (x,y)\n");
    CHECK(link_walk_correspondence(arc, k2, 1));

    auto pt1 = fixtures::pt1();
    auto loop = parse_structure("signature E/2\nuniverse u\nrel E = (u,u)\n");
    for (int ell : {1, 2, 3}) CHECK(link_walk_correspondence(loop, pt1, ell));

    auto tri_reduct = parse_structure("signature R1/2\nuniverse 0 1 2\nrel R1 = (0,0) (0,1) (1,0)\n");
    auto rarc = parse_structure("signature R1/2\nuniverse x y\nrel R1 = (x,y)\n");
    CHECK(link_walk_correspondence(rarc, tri_reduct, 2));
}
