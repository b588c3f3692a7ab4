#include "doctest.h"

#include "relhom/dismantle.hpp"
#include "relhom/duality.hpp"
#include "relhom/fixtures.hpp"
#include "relhom/hom.hpp"
#include "relhom/random_gen.hpp"

using namespace relhom;

namespace {

// Independent oracle: walk the full |H|^|G| assignment space.
long long brute_force_hom_count(const RelStructure& g, const RelStructure& h) {
    long long total = 0;
    std::vector<int> map(g.size(), 0);
    while (true) {
        if (is_homomorphism(g, h, Homomorphism{map})) ++total;
        int pos = g.size() - 1;
        while (pos >= 0 && map[pos] == h.size() - 1) map[pos--] = 0;
        if (pos < 0) break;
        ++map[pos];
    }
    return total;
}

} // namespace

TEST_CASE("enumeration on the reference instances") {
    auto edge = fixtures::edge();
    auto arc = parse_structure("signature R/2\nuniverse x y\nrel R = (x,y)\n");
    auto homs = enumerate_homs(arc, edge, {});
    REQUIRE(homs.size() == 1);
    CHECK(homs[0].map == std::vector<int>{0, 1});

    auto k2_arc = parse_structure("signature E/2\nuniverse x y\nrel E = (x,y)\n");
    CHECK(enumerate_homs(k2_arc, fixtures::k2(), {}).size() == 2);

    Rng rng(41);
    for (int i = 0; i < 10; ++i) {
        RandomStructureOptions opt;
        opt.symbols = 1;
        opt.max_elements = 4;
        auto g = random_structure(rng, opt);
        // one homomorphism into the single loop, whatever g looks like
        Signature e2({Symbol{"R1", 2}});
        RelStructure loop(e2, {"e"});
        loop.add_tuple(0, Tuple{0, 0});
        CHECK(enumerate_homs(g, loop, {}).size() == 1);
    }
}

TEST_CASE("enumeration matches the brute-force oracle") {
    Rng rng(42);
    for (int i = 0; i < 30; ++i) {
        RandomStructureOptions opt;
        opt.max_elements = 4;
        opt.symbols = 1 + static_cast<int>(rng.below(2));
        auto g = random_structure(rng, opt);
        RandomStructureOptions hopt;
        hopt.max_elements = 3;
        hopt.symbols = opt.symbols;
        hopt.min_density = 30;
        hopt.max_density = 80;
        auto h = random_structure(rng, hopt);
        auto homs = enumerate_homs(g, h, {});
        CHECK(static_cast<long long>(homs.size()) == brute_force_hom_count(g, h));
        for (const auto& f : homs) CHECK(is_homomorphism(g, h, f));
        // lexicographic order, no duplicates
        for (size_t k = 1; k < homs.size(); ++k) CHECK(homs[k - 1] < homs[k]);
        CHECK(count_homs(g, h) == static_cast<long long>(homs.size()));
    }
}

TEST_CASE("degree-ordered search returns the same sorted list") {
    Rng rng(43);
    for (int i = 0; i < 10; ++i) {
        auto g = random_structure(rng, {});
        auto h = random_structure(rng, {});
        auto plain = enumerate_homs(g, h, {});
        auto ordered = enumerate_homs(g, h, HomEnumOptions{100000, true});
        CHECK(plain == ordered);
    }
}

TEST_CASE("enumeration cap") {
    Signature e2({Symbol{"E", 2}});
    RelStructure free3(e2, {"x", "y", "z"});
    RelStructure full2(e2, {"a", "b"});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) full2.add_tuple(0, Tuple{i, j});
    CHECK_THROWS_AS(enumerate_homs(free3, full2, HomEnumOptions{5, false}), CapExceeded);
    try {
        enumerate_homs(free3, full2, HomEnumOptions{5, false});
    } catch (const CapExceeded& e) {
        CHECK(e.partial_count() == 5);
    }
}

TEST_CASE("partial extension") {
    auto c3 = fixtures::c3();
    auto path3 = parse_structure("signature E/2\nuniverse x y z\nrel E = (x,y) (y,z)\n");
    PartialMap p;
    p.map = {0, -1, -1};
    auto ext = extend_partial(path3, c3, p);
    REQUIRE(ext.has_value());
    CHECK(ext->map == std::vector<int>{0, 1, 2});

    PartialMap total;
    total.map = {0, 1, 2};
    auto same = extend_partial(path3, c3, total);
    REQUIRE(same.has_value());
    CHECK(same->map == total.map);

    auto digon = parse_structure("signature E/2\nuniverse x y\nrel E = (x,y) (y,x)\n");
    PartialMap empty;
    empty.map = {-1, -1};
    CHECK(!extend_partial(digon, c3, empty).has_value());
}

TEST_CASE("extension agrees with hom existence of the constants-augmented instance") {
    Rng rng(44);
    for (int i = 0; i < 25; ++i) {
        RandomStructureOptions opt;
        opt.max_elements = 4;
        opt.symbols = 1;
        auto g = random_structure(rng, opt);
        RandomStructureOptions hopt;
        hopt.max_elements = 3;
        hopt.symbols = 1;
        hopt.min_density = 40;
        hopt.max_density = 80;
        auto h = random_structure(rng, hopt);
        PartialMap p;
        p.map.assign(g.size(), -1);
        for (int x = 0; x < g.size(); ++x)
            if (rng.percent(40)) p.map[x] = static_cast<int>(rng.below(h.size()));
        bool direct = extend_partial(g, h, p).has_value();
        auto instance = constants_augmented_instance(g, h, p);
        auto target = add_constants(h);
        PartialMap none;
        none.map.assign(instance.size(), -1);
        CHECK(direct == extend_partial(instance, target, none).has_value());
    }
}

TEST_CASE("label rigidity") {
    CHECK(label_rigidity(fixtures::edge(), {}, 3).rigid);
    CHECK(label_rigidity(fixtures::pt1(), {}, 2).rigid);
    CHECK(label_rigidity(fixtures::k2(), {}, 3).rigid);
    // precondition: the structure must be non-foldable outside the protected set
    CHECK_THROWS_AS(label_rigidity(fixtures::sft3(), {}, 2), PreconditionError);
    CHECK(label_rigidity(fixtures::sft3(), {2}, 2).rigid); // c protected; a,b stay stiff
}

TEST_CASE("label rigidity is monotone in depth") {
    Rng rng(45);
    int tested = 0;
    for (int i = 0; i < 30 && tested < 8; ++i) {
        RandomStructureOptions opt;
        opt.max_elements = 3;
        opt.min_density = 10;
        opt.max_density = 40;
        auto h = random_structure(rng, opt);
        if (!is_j_non_foldable(h, {})) continue;
        RigidityResult deep, shallow;
        try {
            deep = label_rigidity(h, {}, 3, 100000);
            shallow = label_rigidity(h, {}, 2, 100000);
        } catch (const CapExceeded&) {
            continue;
        }
        if (deep.rigid) CHECK(shallow.rigid);
        ++tested;
    }
    CHECK(tested > 0);
}

TEST_CASE("hom text round trip") {
    auto c3 = fixtures::c3();
    auto path3 = parse_structure("signature E/2\nuniverse x y z\nrel E = (x,y) (y,z)\n");
    Homomorphism f{{0, 1, 2}};
    auto text = render_hom(path3, c3, f);
    auto parsed = parse_partial_map(path3, c3, text);
    CHECK(parsed.map == f.map);
    CHECK_THROWS_AS(parse_partial_map(path3, c3, "x => 0\n"), ParseError);
}
