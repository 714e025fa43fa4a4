#include "conc/graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace conc {

Permutation Permutation::identity(size_t n) {
    Permutation p;
    p.map.resize(n);
    for (size_t i = 0; i < n; ++i) p.map[i] = static_cast<uint32_t>(i);
    return p;
}

bool Permutation::valid() const {
    std::vector<bool> seen(map.size(), false);
    for (uint32_t v : map) {
        if (v >= map.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

std::vector<int> BipartiteGraph::in_degrees() const {
    std::vector<int> d(num_inputs, 0);
    for (auto& e : edges) d.at(e.first)++;
    return d;
}

std::vector<int> BipartiteGraph::out_degrees() const {
    std::vector<int> d(num_outputs, 0);
    for (auto& e : edges) d.at(e.second)++;
    return d;
}

std::vector<uint64_t> BipartiteGraph::neighbor_masks() const {
    if (num_outputs > 64)
        throw std::invalid_argument("neighbor_masks: more than 64 outputs");
    std::vector<uint64_t> masks(num_inputs, 0);
    for (auto& e : edges) masks.at(e.first) |= uint64_t{1} << e.second;
    return masks;
}

std::string BipartiteGraph::to_json(int indent) const {
    nlohmann::json j;
    j["m"] = m;
    j["s"] = s;
    j["inputs"] = num_inputs;
    j["outputs"] = num_outputs;
    nlohmann::json arr = nlohmann::json::array();
    for (auto& e : edges) arr.push_back({e.first, e.second});
    j["edges"] = arr;
    return j.dump(indent);
}

BipartiteGraph BipartiteGraph::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BipartiteGraph g;
    g.m = j.at("m").get<long>();
    g.s = j.at("s").get<long>();
    g.num_inputs = j.at("inputs").get<long>();
    g.num_outputs = j.at("outputs").get<long>();
    for (auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("graph json: edge must be a pair");
        uint32_t a = e[0].get<uint32_t>(), b = e[1].get<uint32_t>();
        if (a >= static_cast<uint32_t>(g.num_inputs) ||
            b >= static_cast<uint32_t>(g.num_outputs))
            throw std::invalid_argument("graph json: edge endpoint out of range");
        g.edges.emplace_back(a, b);
    }
    return g;
}

std::string BipartiteGraph::to_edge_list() const {
    std::ostringstream os;
    os << "p conc " << num_inputs << ' ' << num_outputs << ' ' << edges.size()
       << '\n';
    os << "c m " << m << " s " << s << '\n';
    for (auto& e : edges) os << e.first << ' ' << e.second << '\n';
    return os.str();
}

BipartiteGraph BipartiteGraph::from_edge_list(const std::string& text) {
    std::istringstream is(text);
    BipartiteGraph g;
    std::string line;
    size_t expected = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "c") {
            std::string key;
            while (ls >> key) {
                long v;
                if (!(ls >> v)) break;
                if (key == "m") g.m = v;
                else if (key == "s") g.s = v;
            }
        } else if (tag == "p") {
            std::string kind;
            ls >> kind >> g.num_inputs >> g.num_outputs >> expected;
            if (kind != "conc" || !ls)
                throw std::invalid_argument("edge list: bad header");
            have_header = true;
        } else {
            if (!have_header)
                throw std::invalid_argument("edge list: edge before header");
            uint32_t a, b;
            std::istringstream es(line);
            if (!(es >> a >> b))
                throw std::invalid_argument("edge list: bad edge line");
            if (a >= static_cast<uint32_t>(g.num_inputs) ||
                b >= static_cast<uint32_t>(g.num_outputs))
                throw std::invalid_argument("edge list: endpoint out of range");
            g.edges.emplace_back(a, b);
        }
    }
    if (!have_header) throw std::invalid_argument("edge list: missing header");
    if (g.edges.size() != expected)
        throw std::invalid_argument("edge list: edge count mismatch");
    return g;
}

BipartiteGraph build_graph(long m, long s, const Permutation& perm) {
    if (m < 1) throw std::invalid_argument("build_graph: m must be positive");
    if (!(s == 0 || (4 * m <= s && s <= 6 * m)))
        throw std::invalid_argument("build_graph: s must be 0 or in [4m, 6m]");
    long N = 36 * m - s;
    if (static_cast<long>(perm.size()) != N)
        throw std::invalid_argument("build_graph: permutation size != 36m - s");
    if (!perm.valid())
        throw std::invalid_argument("build_graph: not a permutation");
    BipartiteGraph g;
    g.m = m;
    g.s = s;
    g.num_inputs = 6 * m;
    g.num_outputs = 4 * m;
    g.edges.reserve(N);
    for (long x = 0; x < N; ++x)
        g.edges.emplace_back(static_cast<uint32_t>(x % g.num_inputs),
                             static_cast<uint32_t>(perm.map[x] % g.num_outputs));

    // Degree profile is fully determined by (m, s); verify it.
    auto din = g.in_degrees();
    auto dout = g.out_degrees();
    for (long i = 0; i < g.num_inputs; ++i) {
        int want = s == 0 ? 6 : (i < 6 * m - s ? 6 : 5);
        if (din[i] != want)
            throw std::logic_error("build_graph: input degree profile broken");
    }
    for (long o = 0; o < g.num_outputs; ++o) {
        int want = s == 0 ? 9 : (o < 8 * m - s ? 8 : 7);
        if (dout[o] != want)
            throw std::logic_error("build_graph: output degree profile broken");
    }
    return g;
}

}  // namespace conc
