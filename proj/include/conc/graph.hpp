#pragma once
// The random construction: take N = 36m - s slots, a permutation pi of
// {0..N-1}, and wire slot x as an edge from input (x mod 6m) to output
// (pi(x) mod 4m).  Multi-edges are kept (the edge budget counts slots);
// the concentration property only looks at neighbor sets.  Degree profile
// for 4m <= s <= 6m: 6m-s inputs of degree 6, s of degree 5; s-4m outputs
// of degree 7, 8m-s of degree 8.  s = 0 is the regular degenerate case
// (all inputs degree 6, all outputs degree 9).

#include <cstdint>
#include <string>
#include <vector>

namespace conc {

struct Permutation {
    std::vector<uint32_t> map;

    static Permutation identity(size_t n);
    bool valid() const;  // bijective on {0..n-1}
    size_t size() const { return map.size(); }
};

struct BipartiteGraph {
    long m = 0;
    long s = 0;
    long num_inputs = 0;   // 6m
    long num_outputs = 0;  // 4m
    std::vector<std::pair<uint32_t, uint32_t>> edges;  // multiset, |edges| = N

    std::vector<int> in_degrees() const;
    std::vector<int> out_degrees() const;
    // Neighbor sets as bitmasks; requires num_outputs <= 64.
    std::vector<uint64_t> neighbor_masks() const;

    std::string to_json(int indent = 2) const;
    static BipartiteGraph from_json(const std::string& text);
    // Plain text: header "p conc <inputs> <outputs> <edges>", then one
    // "in out" pair per line.
    std::string to_edge_list() const;
    static BipartiteGraph from_edge_list(const std::string& text);
};

// Requires perm.size() == 36m - s and (s == 0 or 4m <= s <= 6m); the degree
// profile above is asserted after construction.
BipartiteGraph build_graph(long m, long s, const Permutation& perm);

}  // namespace conc
