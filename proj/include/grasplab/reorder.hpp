#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "grasplab/graph.hpp"

namespace grasplab {

// Bijective relabeling: new_id[old] is the vertex's id after reordering.
struct VertexPermutation {
    std::vector<vertex_id> new_id;

    std::size_t size() const { return new_id.size(); }
};

enum class ReorderKind { Identity, Sort, HubSort, Dbg };

struct ReorderAlgo {
    ReorderKind kind = ReorderKind::Identity;
    std::uint32_t dbg_group_count = 8;  // Dbg only, >= 2
};

inline const char* reorder_name(ReorderKind kind) {
    switch (kind) {
        case ReorderKind::Identity: return "none";
        case ReorderKind::Sort: return "sort";
        case ReorderKind::HubSort: return "hubsort";
        case ReorderKind::Dbg: return "dbg";
    }
    return "?";
}

namespace detail {

inline std::vector<vertex_id> ids_by_degree_desc(const CsrGraph& g) {
    std::vector<vertex_id> order(g.vertex_count);
    std::iota(order.begin(), order.end(), vertex_id{0});
    std::stable_sort(order.begin(), order.end(), [&](vertex_id lhs, vertex_id rhs) {
        return g.degree(lhs) > g.degree(rhs);  // stable keeps ascending-id ties
    });
    return order;
}

// Ranks old ids listed in placement order into a permutation.
inline VertexPermutation permutation_from_order(const std::vector<vertex_id>& order) {
    VertexPermutation p;
    p.new_id.resize(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        p.new_id[order[pos]] = static_cast<vertex_id>(pos);
    return p;
}

}  // namespace detail

// Produces a permutation that packs high-degree vertices into a contiguous
// range at the start of the id space. Degrees are taken from whichever CSR
// direction the caller supplies (out-degree tracks reuse for pull kernels,
// in-degree for push).
inline VertexPermutation reorder(const CsrGraph& g, const ReorderAlgo& algo) {
    const std::uint64_t n = g.vertex_count;
    const std::uint64_t m = g.edge_count;

    if (algo.kind == ReorderKind::Dbg && algo.dbg_group_count < 2)
        throw std::invalid_argument("dbg_group_count must be >= 2");

    switch (algo.kind) {
        case ReorderKind::Identity: {
            VertexPermutation p;
            p.new_id.resize(n);
            std::iota(p.new_id.begin(), p.new_id.end(), vertex_id{0});
            return p;
        }
        case ReorderKind::Sort:
            return detail::permutation_from_order(detail::ids_by_degree_desc(g));
        case ReorderKind::HubSort: {
            // Hot vertices sorted by descending degree take the front; cold
            // vertices keep their relative order behind them.
            std::vector<vertex_id> order;
            order.reserve(n);
            for (vertex_id v : detail::ids_by_degree_desc(g)) {
                if (is_hot_degree(g.degree(v), n, m)) order.push_back(v);
            }
            for (std::uint64_t v = 0; v < n; ++v) {
                if (!is_hot_degree(g.degree(static_cast<vertex_id>(v)), n, m))
                    order.push_back(static_cast<vertex_id>(v));
            }
            return detail::permutation_from_order(order);
        }
        case ReorderKind::Dbg: {
            // Group k (hottest first) holds degrees in [avg*2^(G-2-k), avg*2^(G-1-k));
            // the last group holds everything below average. Original order is
            // kept inside each group.
            const std::uint32_t groups = algo.dbg_group_count;
            const auto group_of = [&](std::uint64_t deg) -> std::uint32_t {
                if (!is_hot_degree(deg, n, m)) return groups - 1;
                for (std::uint32_t k = 0; k + 1 < groups; ++k) {
                    const unsigned shift = groups - 2 - k;
                    // deg >= avg * 2^shift, i.e. deg * n >= m << shift
                    if (static_cast<unsigned __int128>(deg) * n >=
                        (static_cast<unsigned __int128>(m) << shift))
                        return k;
                }
                return groups - 2;  // hot but under the smallest 2^k threshold
            };

            std::vector<std::uint64_t> group_size(groups, 0);
            std::vector<std::uint32_t> group(n);
            for (std::uint64_t v = 0; v < n; ++v) {
                group[v] = group_of(g.degree(static_cast<vertex_id>(v)));
                ++group_size[group[v]];
            }
            std::vector<std::uint64_t> cursor(groups, 0);
            for (std::uint32_t k = 1; k < groups; ++k)
                cursor[k] = cursor[k - 1] + group_size[k - 1];

            VertexPermutation p;
            p.new_id.resize(n);
            for (std::uint64_t v = 0; v < n; ++v)
                p.new_id[v] = static_cast<vertex_id>(cursor[group[v]]++);
            return p;
        }
    }
    throw std::logic_error("unreachable reorder kind");
}

// Relabels every endpoint; edge order is preserved.
inline EdgeList apply_permutation(const EdgeList& edges, const VertexPermutation& p) {
    if (p.size() != edges.vertex_count)
        throw std::invalid_argument("permutation length does not match vertex count");
    EdgeList out;
    out.vertex_count = edges.vertex_count;
    out.edges.reserve(edges.edges.size());
    for (const auto& [src, dst] : edges.edges)
        out.edges.emplace_back(p.new_id[src], p.new_id[dst]);
    return out;
}

}  // namespace grasplab
