#include "doctest.h"

#include <algorithm>
#include <stdexcept>

#include "conc/graph.hpp"
#include "conc/rng.hpp"

using namespace conc;

namespace {

Permutation shuffled(size_t n, uint64_t seed) {
    Permutation p = Permutation::identity(n);
    SplitMix64 rng(seed);
    fisher_yates(p.map, rng);
    return p;
}

}  // namespace

TEST_CASE("Permutation: identity and validity") {
    Permutation p = Permutation::identity(5);
    CHECK(p.size() == 5);
    CHECK(p.valid());
    p.map[2] = 4;  // duplicate entry
    CHECK(!p.valid());
    p.map = {0, 1, 7};  // out of range
    CHECK(!p.valid());
    CHECK(Permutation::identity(0).valid());
}

TEST_CASE("build_graph m=1 s=6: slot count and degree profile") {
    BipartiteGraph g = build_graph(1, 6, Permutation::identity(30));
    CHECK(g.num_inputs == 6);
    CHECK(g.num_outputs == 4);
    CHECK(g.edges.size() == 30);

    auto din = g.in_degrees();
    auto dout = g.out_degrees();
    REQUIRE(din.size() == 6);
    REQUIRE(dout.size() == 4);
    for (int d : din) CHECK(d == 5);          // all 6 inputs degree 5
    CHECK(dout[0] == 8);
    CHECK(dout[1] == 8);                      // 8m - s = 2 outputs of degree 8
    CHECK(dout[2] == 7);
    CHECK(dout[3] == 7);                      // s - 4m = 2 outputs of degree 7
}

TEST_CASE("build_graph: degree profile is permutation independent") {
    for (long s : {0L, 8L, 10L, 12L}) {
        long N = 72 - s;
        auto base = build_graph(2, s, Permutation::identity(N));
        auto din0 = base.in_degrees();
        auto dout0 = base.out_degrees();
        for (uint64_t seed = 1; seed <= 5; ++seed) {
            auto g = build_graph(2, s, shuffled(N, seed));
            CHECK(g.in_degrees() == din0);
            CHECK(g.out_degrees() == dout0);
        }
        if (s == 0) {
            for (int d : din0) CHECK(d == 6);
            for (int d : dout0) CHECK(d == 9);
        }
    }
    // m=2 s=12: every input degree 5; outputs split 8,8,8,8 / 7,7,7,7
    auto g = build_graph(2, 12, Permutation::identity(60));
    for (int d : g.in_degrees()) CHECK(d == 5);
    auto dout = g.out_degrees();
    for (int o = 0; o < 4; ++o) CHECK(dout[o] == 8);
    for (int o = 4; o < 8; ++o) CHECK(dout[o] == 7);
}

TEST_CASE("build_graph: input validation") {
    CHECK_THROWS_AS(build_graph(0, 0, Permutation::identity(0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_graph(1, 3, Permutation::identity(33)),
                    std::invalid_argument);  // 0 < s < 4m
    CHECK_THROWS_AS(build_graph(1, 7, Permutation::identity(29)),
                    std::invalid_argument);  // s > 6m
    CHECK_THROWS_AS(build_graph(1, 6, Permutation::identity(29)),
                    std::invalid_argument);  // wrong perm size
    Permutation bad = Permutation::identity(30);
    bad.map[0] = 1;  // not bijective
    CHECK_THROWS_AS(build_graph(1, 6, bad), std::invalid_argument);
}

TEST_CASE("neighbor_masks: contents and the 64-output limit") {
    BipartiteGraph g = build_graph(1, 6, Permutation::identity(30));
    auto masks = g.neighbor_masks();
    REQUIRE(masks.size() == 6);
    // identity wiring: input i gets slots {i, i+6, i+12, i+18, i+24},
    // outputs are those values mod 4
    for (long i = 0; i < 6; ++i) {
        uint64_t expect = 0;
        for (long x = i; x < 30; x += 6) expect |= 1ull << (x % 4);
        CHECK(masks[i] == expect);
    }

    BipartiteGraph big = build_graph(17, 0, Permutation::identity(36 * 17));
    CHECK(big.num_outputs == 68);
    CHECK_THROWS_AS(big.neighbor_masks(), std::invalid_argument);
}

TEST_CASE("graph JSON roundtrip") {
    BipartiteGraph g = build_graph(2, 9, shuffled(63, 42));
    BipartiteGraph back = BipartiteGraph::from_json(g.to_json());
    CHECK(back.m == g.m);
    CHECK(back.s == g.s);
    CHECK(back.num_inputs == g.num_inputs);
    CHECK(back.num_outputs == g.num_outputs);
    CHECK(back.edges == g.edges);
    CHECK(back.to_json() == g.to_json());

    CHECK_THROWS(BipartiteGraph::from_json("{\"m\": 1}"));
    CHECK_THROWS(BipartiteGraph::from_json("not json"));
}

TEST_CASE("graph edge-list roundtrip") {
    BipartiteGraph g = build_graph(1, 5, shuffled(31, 7));
    std::string text = g.to_edge_list();
    CHECK(text.rfind("p conc 6 4 31\n", 0) == 0);
    CHECK(text.find("c m 1 s 5\n") != std::string::npos);
    BipartiteGraph back = BipartiteGraph::from_edge_list(text);
    CHECK(back.edges == g.edges);
    CHECK(back.m == g.m);
    CHECK(back.s == g.s);

    CHECK_THROWS(BipartiteGraph::from_edge_list("p conc 2 2 1\n"));  // missing edge
    CHECK_THROWS(BipartiteGraph::from_edge_list("garbage\n"));
}
