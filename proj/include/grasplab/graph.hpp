#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace grasplab {

using vertex_id = std::uint32_t;

enum class Direction { InEdges, OutEdges };

// Raw directed edge list. Duplicate edges and self-loops are kept as-is;
// degree statistics depend on them.
struct EdgeList {
    std::uint64_t vertex_count = 0;
    std::vector<std::pair<vertex_id, vertex_id>> edges;

    bool operator==(const EdgeList&) const = default;
};

// Compressed sparse row adjacency in one traversal direction.
// direction == InEdges:  neighbors under v are the sources of v's in-edges.
// direction == OutEdges: neighbors under v are the destinations of v's out-edges.
struct CsrGraph {
    Direction direction = Direction::InEdges;
    std::uint64_t vertex_count = 0;
    std::uint64_t edge_count = 0;
    std::vector<std::uint64_t> offsets;  // length vertex_count+1, offsets[0]=0
    std::vector<vertex_id> neighbors;    // length edge_count

    std::uint64_t degree(vertex_id v) const { return offsets[v + 1] - offsets[v]; }
};

// Hot vertices are those with degree >= average degree in that direction.
struct DegreeSkewReport {
    double avg_in_degree = 0.0;
    double avg_out_degree = 0.0;
    double hot_fraction_in = 0.0;
    double edge_coverage_in = 0.0;
    double hot_fraction_out = 0.0;
    double edge_coverage_out = 0.0;
};

// Recursive-quadrant random graph generator parameters. n = 2^scale vertices,
// n * avg_degree edges. a=b=c=d=0.25 gives a uniform random graph.
struct RmatParams {
    int scale = 20;
    std::uint64_t avg_degree = 16;
    double a = 0.57, b = 0.19, c = 0.19, d = 0.05;
    std::uint64_t seed = 1;
};

// v is hot iff degree(v) >= edge_count / vertex_count, compared exactly
// in integers: degree * n >= m.
inline bool is_hot_degree(std::uint64_t degree, std::uint64_t n, std::uint64_t m) {
    return static_cast<unsigned __int128>(degree) * n >= static_cast<unsigned __int128>(m);
}

inline std::uint64_t hot_vertex_count(const CsrGraph& g) {
    std::uint64_t hot = 0;
    for (std::uint64_t v = 0; v < g.vertex_count; ++v) {
        if (is_hot_degree(g.degree(static_cast<vertex_id>(v)), g.vertex_count, g.edge_count))
            ++hot;
    }
    return hot;
}

namespace detail {

// Uniform double in [0,1) from the top 53 bits; avoids
// std::uniform_real_distribution, whose output is not portable across
// standard libraries.
inline double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Parses whitespace-separated "src dst [weight]" lines; '#' starts a comment
// line. vertex_count is 1 + the largest id seen (0 for an empty file).
inline EdgeList load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list file: " + path);

    EdgeList out;
    std::uint64_t max_id = 0;
    bool any_edge = false;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;

        const auto parse_id = [&](std::size_t& p) -> std::uint64_t {
            std::size_t start = line.find_first_not_of(" \t\r", p);
            if (start == std::string::npos || !std::isdigit(static_cast<unsigned char>(line[start])))
                throw std::runtime_error(path + ": parse error at line " + std::to_string(line_no));
            std::uint64_t value = 0;
            std::size_t i = start;
            for (; i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])); ++i) {
                value = value * 10 + static_cast<std::uint64_t>(line[i] - '0');
                if (value > 0xFFFFFFFFull)
                    throw std::runtime_error(path + ": vertex id out of range at line " +
                                             std::to_string(line_no));
            }
            p = i;
            return value;
        };

        std::size_t p = pos;
        std::uint64_t src = parse_id(p);
        std::uint64_t dst = parse_id(p);
        // Optional weight token, parsed and discarded.
        std::size_t rest = line.find_first_not_of(" \t\r", p);
        if (rest != std::string::npos) {
            std::size_t after = line.find_first_of(" \t\r", rest);
            std::size_t tail = (after == std::string::npos)
                                   ? std::string::npos
                                   : line.find_first_not_of(" \t\r", after);
            if (tail != std::string::npos)
                throw std::runtime_error(path + ": parse error at line " + std::to_string(line_no));
        }

        out.edges.emplace_back(static_cast<vertex_id>(src), static_cast<vertex_id>(dst));
        max_id = std::max({max_id, src, dst});
        any_edge = true;
    }
    if (in.bad()) throw std::runtime_error("I/O error reading " + path);
    out.vertex_count = any_edge ? max_id + 1 : 0;
    return out;
}

// R-MAT style generator: each edge picks one quadrant per scale level with
// probabilities (a,b,c,d). Deterministic for a fixed seed.
inline EdgeList generate_rmat(const RmatParams& params) {
    if (params.scale < 1 || params.scale > 31)
        throw std::invalid_argument("rmat scale must be in [1,31]");
    if (params.avg_degree < 1) throw std::invalid_argument("rmat avg_degree must be >= 1");
    const double sum = params.a + params.b + params.c + params.d;
    if (sum < 1.0 - 1e-9 || sum > 1.0 + 1e-9)
        throw std::invalid_argument("rmat quadrant probabilities must sum to 1");
    if (params.a + 1e-12 < params.b || params.a + 1e-12 < params.c)
        throw std::invalid_argument("rmat requires a >= b and a >= c");

    const std::uint64_t n = std::uint64_t{1} << params.scale;
    const std::uint64_t m = n * params.avg_degree;
    const double ab = params.a + params.b;
    const double abc = ab + params.c;

    std::mt19937_64 rng(params.seed);
    EdgeList out;
    out.vertex_count = n;
    out.edges.reserve(m);
    for (std::uint64_t e = 0; e < m; ++e) {
        std::uint32_t src = 0, dst = 0;
        for (int level = 0; level < params.scale; ++level) {
            const double r = detail::next_unit(rng);
            const std::uint32_t src_bit = r >= ab;          // quadrants c,d
            const std::uint32_t dst_bit = r >= params.a && (r < ab || r >= abc);  // b,d
            src = (src << 1) | src_bit;
            dst = (dst << 1) | dst_bit;
        }
        out.edges.emplace_back(src, dst);
    }
    return out;
}

// Stable counting sort of edges into CSR. Neighbor order within a vertex
// segment follows input edge order.
inline CsrGraph build_csr(const EdgeList& edges, Direction direction) {
    CsrGraph g;
    g.direction = direction;
    g.vertex_count = edges.vertex_count;
    g.edge_count = edges.edges.size();
    g.offsets.assign(g.vertex_count + 1, 0);
    g.neighbors.resize(g.edge_count);

    const bool in_edges = direction == Direction::InEdges;
    for (const auto& [src, dst] : edges.edges) {
        const vertex_id key = in_edges ? dst : src;
        ++g.offsets[key + 1];
    }
    for (std::uint64_t v = 0; v < g.vertex_count; ++v) g.offsets[v + 1] += g.offsets[v];

    std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (const auto& [src, dst] : edges.edges) {
        const vertex_id key = in_edges ? dst : src;
        const vertex_id val = in_edges ? src : dst;
        g.neighbors[cursor[key]++] = val;
    }
    return g;
}

inline DegreeSkewReport degree_skew_report(const CsrGraph& g_in, const CsrGraph& g_out) {
    if (g_in.direction != Direction::InEdges || g_out.direction != Direction::OutEdges)
        throw std::invalid_argument("degree_skew_report: wrong CSR directions");
    if (g_in.vertex_count != g_out.vertex_count || g_in.edge_count != g_out.edge_count)
        throw std::invalid_argument("degree_skew_report: graphs disagree on size");

    DegreeSkewReport rep;
    const std::uint64_t n = g_in.vertex_count;
    const std::uint64_t m = g_in.edge_count;
    if (n == 0) return rep;

    rep.avg_in_degree = static_cast<double>(m) / static_cast<double>(n);
    rep.avg_out_degree = rep.avg_in_degree;

    const auto tally = [&](const CsrGraph& g, double& hot_fraction, double& edge_coverage) {
        std::uint64_t hot = 0, covered = 0;
        for (std::uint64_t v = 0; v < n; ++v) {
            const std::uint64_t deg = g.degree(static_cast<vertex_id>(v));
            if (is_hot_degree(deg, n, m)) {
                ++hot;
                covered += deg;
            }
        }
        hot_fraction = static_cast<double>(hot) / static_cast<double>(n);
        // m == 0 makes every vertex hot; all zero edges are vacuously covered.
        edge_coverage = m == 0 ? 1.0 : static_cast<double>(covered) / static_cast<double>(m);
    };
    tally(g_in, rep.hot_fraction_in, rep.edge_coverage_in);
    tally(g_out, rep.hot_fraction_out, rep.edge_coverage_out);
    return rep;
}

}  // namespace grasplab
