#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nacdens/nac_tree.hpp"

using namespace nac;

TEST_CASE("parse a two-level structure") {
    const NacTree t = parse_structure("G(1.3333; 1, G(2; 2, 3))");
    CHECK(t.dim == 3);
    CHECK(t.depth == 2);
    CHECK(t.root.gen.family == Family::gumbel);
    CHECK(t.root.gen.theta == 1.3333);
    REQUIRE(t.root.children.size() == 2);
    CHECK(is_leaf(t.root.children[0]));
    CHECK(std::get<int>(t.root.children[0]) == 1);
    REQUIRE(!is_leaf(t.root.children[1]));
    const NacNode& inner = std::get<NacNode>(t.root.children[1]);
    CHECK(inner.gen.theta == 2.0);
    REQUIRE(inner.children.size() == 2);
    CHECK(std::get<int>(inner.children[0]) == 2);
    CHECK(std::get<int>(inner.children[1]) == 3);
}

TEST_CASE("canonical formatting round-trips") {
    const char* canon[] = {
        "G(1.3333; 1, G(2; 2, 3))",
        "C(0.5; 1, 2, 3)",
        "F(3; F(4.25; 1, 2), 3)",
        "J(1.5; 4, J(2.5; 2, 3), 1)",
        "A(0.25; 1, A(0.75; 2, 3))",
        "T(1.5, 0.3, E; 1, 2)",
        "T(2, 1, R; T(3, 1, R; 1, 2), 3)",
        "G(1.2; G(1.5; 1, 2), G(1.4; 3, G(2; 4, 5)))",
    };
    for (const char* s : canon) {
        const NacTree t = parse_structure(s);
        CHECK(format_structure(t) == s);
        /* reparse of the canonical form is identity */
        CHECK(format_structure(parse_structure(format_structure(t))) == s);
    }
}

TEST_CASE("whitespace and number forms are tolerated, output is canonical") {
    const NacTree t = parse_structure("  G ( 1.50 ;  2 ,G(2;1,  3 ) ) ");
    CHECK(format_structure(t) == "G(1.5; 2, G(2; 1, 3))");
    CHECK(t.dim == 3);
}

TEST_CASE("tilted outer power parameters parse into the right base") {
    const NacTree te = parse_structure("T(1.5, 0.3, E; 1, 2)");
    CHECK(te.root.gen.family == Family::tilted_outer_power);
    CHECK(te.root.gen.base == TopBase::exp_neg);
    CHECK(te.root.gen.tilt == 0.3);
    const NacTree tr = parse_structure("T(2, 1, R; 1, 2)");
    CHECK(tr.root.gen.base == TopBase::reciprocal);
}

TEST_CASE("depth accounting and the three-level cap") {
    CHECK(parse_structure("G(2; 1, 2)").depth == 1);
    CHECK(parse_structure("G(1.5; 1, G(2; 2, 3))").depth == 2);
    CHECK(parse_structure("G(1.2; G(1.5; 1, 2), G(1.4; 3, G(2; 4, 5)))").depth == 3);
    CHECK_THROWS_AS((void)parse_structure("G(1.1; 1, G(1.2; 2, G(1.3; 3, G(1.4; 4, 5))))"),
                    unsupported_error);
}

TEST_CASE("structures that fail to parse") {
    CHECK_THROWS_AS((void)parse_structure(""), parse_error);
    CHECK_THROWS_AS((void)parse_structure("X(2; 1, 2)"), parse_error);
    CHECK_THROWS_AS((void)parse_structure("G(2; 1, 2"), parse_error);
    CHECK_THROWS_AS((void)parse_structure("G(2)"), parse_error);
    CHECK_THROWS_AS((void)parse_structure("G(; 1, 2)"), parse_error);
    CHECK_THROWS_AS((void)parse_structure("G(2; )"), parse_error);
    CHECK_THROWS_AS((void)parse_structure("G(2; 1, b)"), parse_error);
    CHECK_THROWS_AS((void)parse_structure("G(2; 1, 2) etc"), parse_error);
    CHECK_THROWS_AS((void)parse_structure("T(1.5, 0.3, Q; 1, 2)"), parse_error);
    CHECK_THROWS_AS((void)parse_structure("T(1.5; 1, 2)"), parse_error);
}

TEST_CASE("structures that parse but fail validation") {
    /* leaf cover */
    CHECK_THROWS_AS((void)parse_structure("G(2; 1, 3)"), config_error);
    CHECK_THROWS_AS((void)parse_structure("G(2; 1, 1)"), config_error);
    CHECK_THROWS_AS((void)parse_structure("G(2; 0, 1)"), config_error);
    /* parameter ranges */
    CHECK_THROWS_AS((void)parse_structure("G(0.5; 1, 2)"), config_error);
    CHECK_THROWS_AS((void)parse_structure("A(1.5; 1, 2)"), config_error);
    /* nesting condition */
    CHECK_THROWS_AS((void)parse_structure("G(2; 1, G(1.5; 2, 3))"), unsupported_error);
    CHECK_THROWS_AS((void)parse_structure("G(1.5; 1, C(3; 2, 3))"), unsupported_error);
    CHECK_THROWS_AS((void)parse_structure("T(1.5, 0.3, E; 1, T(2, 0.4, E; 2, 3))"),
                    unsupported_error);
    /* mixed pair that is supported */
    CHECK(parse_structure("A(0.3; 1, C(1.5; 2, 3))").depth == 2);
}

TEST_CASE("programmatic construction mirrors the parser") {
    NacNode inner;
    inner.gen = GeneratorSpec::make(Family::gumbel, 2.0);
    inner.children = {2, 3};
    NacNode root;
    root.gen = GeneratorSpec::make(Family::gumbel, 1.5);
    root.children = {1, inner};
    const NacTree t = make_tree(root);
    CHECK(t.dim == 3);
    CHECK(format_structure(t) == "G(1.5; 1, G(2; 2, 3))");
    /* a custom-base generator cannot be printed */
    auto cb = std::make_shared<TopCustomBase>();
    cb->psi = [](double x) { return std::exp(-x); };
    cb->psi_inv = [](double u) { return -std::log(u); };
    cb->deriv = [](int k, double x) { return SignedLog::from_log(k % 2 ? -1 : 1, -x); };
    NacNode croot;
    croot.gen = GeneratorSpec::top(1.5, 0.0);
    croot.gen.custom = cb;
    croot.children = {1, 2};
    const NacTree ct = make_tree(croot);
    CHECK_THROWS_AS((void)format_structure(ct), argument_error);
}

TEST_CASE("single-leaf sectors are allowed and equivalent in meaning") {
    const NacTree t = parse_structure("G(1.5; G(2; 1), 2)");
    CHECK(t.dim == 2);
    CHECK(t.depth == 2);
}
