#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grasplab/cachesim.hpp"
#include "grasplab/graph.hpp"
#include "grasplab/reorder.hpp"
#include "grasplab/trace.hpp"

namespace grasplab {

enum class Kernel { PagerankPull, SsspPush };

inline const char* kernel_name(Kernel k) {
    return k == Kernel::PagerankPull ? "pagerank" : "sssp";
}

struct GraphSource {
    enum class Kind { File, Rmat, Uniform };

    Kind kind = Kind::Rmat;
    std::string path;
    RmatParams rmat;

    static GraphSource from_file(std::string p) {
        GraphSource s;
        s.kind = Kind::File;
        s.path = std::move(p);
        return s;
    }
    static GraphSource from_rmat(const RmatParams& p) {
        GraphSource s;
        s.kind = Kind::Rmat;
        s.rmat = p;
        return s;
    }
    static GraphSource from_uniform(int scale, std::uint64_t avg_degree) {
        GraphSource s;
        s.kind = Kind::Uniform;
        s.rmat = RmatParams{scale, avg_degree, 0.25, 0.25, 0.25, 0.25, 1};
        return s;
    }

    std::string label() const {
        switch (kind) {
            case Kind::File: {
                const std::size_t slash = path.find_last_of('/');
                return slash == std::string::npos ? path : path.substr(slash + 1);
            }
            case Kind::Rmat:
                return "rmat_s" + std::to_string(rmat.scale) + "_d" +
                       std::to_string(rmat.avg_degree);
            case Kind::Uniform:
                return "uniform_s" + std::to_string(rmat.scale) + "_d" +
                       std::to_string(rmat.avg_degree);
        }
        return "?";
    }

    EdgeList load(std::uint64_t seed) const {
        if (kind == Kind::File) return load_edge_list(path);
        RmatParams p = rmat;
        p.seed = seed;
        return generate_rmat(p);
    }
};

struct ExperimentConfig {
    GraphSource source;
    Kernel kernel = Kernel::PagerankPull;
    std::uint32_t sssp_rounds = 1;
    ReorderAlgo reorder;
    std::vector<PolicySpec> policies;
    CacheConfig cache;
    std::vector<std::uint64_t> llc_size_sweep;  // bytes; empty = single configured size
    int n_property_arrays = 1;
    std::uint64_t seed = 1;
};

struct ResultRow {
    std::string graph;
    std::string kernel;
    std::string reorder;
    std::string policy;
    std::uint64_t llc_bytes = 0;
    std::uint64_t llc_accesses = 0;
    std::uint64_t llc_misses = 0;
    double miss_elim_over_lru = 0.0;        // percent
    double property_access_fraction = 0.0;  // percent of LLC accesses
    std::array<std::uint64_t, 4> hint_misses{};  // High, Moderate, Low, Default
};

namespace detail {

inline CacheConfig config_for_size(CacheConfig base, std::uint64_t llc_bytes) {
    const std::uint64_t line_bytes = base.block_size * base.llc_ways;
    if (line_bytes == 0 || llc_bytes % line_bytes != 0)
        throw std::invalid_argument("LLC size is not a multiple of block_size * ways");
    base.llc_sets = llc_bytes / line_bytes;
    base.validate();
    return base;
}

inline double property_percent(const SimStats& stats, const MemoryLayout& layout) {
    if (stats.llc.accesses == 0) return 0.0;
    std::uint64_t property = 0;
    for (std::size_t i = 0; i < layout.arrays.size(); ++i)
        if (layout.arrays[i].kind == ArrayKind::PropertyArr)
            property += stats.by_tag[i].accesses;
    return 100.0 * static_cast<double>(property) / static_cast<double>(stats.llc.accesses);
}

}  // namespace detail

// Full pipeline for one configuration: graph -> reorder -> trace -> simulate
// each policy at each swept LLC size. The reuse regions are recomputed from
// every sweep point's capacity. LRU runs at every point as the baseline for
// miss elimination, whether or not it was requested.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.policies.empty()) throw std::invalid_argument("run_experiment: no policies");
    if (cfg.kernel == Kernel::SsspPush && cfg.sssp_rounds < 1)
        throw std::invalid_argument("run_experiment: sssp needs rounds >= 1");

    const EdgeList raw = cfg.source.load(cfg.seed);
    if (raw.vertex_count == 0) throw std::invalid_argument("run_experiment: empty graph");

    // Reuse tracks out-degree under pull and in-degree under push; reorder on
    // the matching direction, then rebuild the CSR the kernel traverses.
    const Direction reuse_dir =
        cfg.kernel == Kernel::PagerankPull ? Direction::OutEdges : Direction::InEdges;
    const VertexPermutation perm = reorder(build_csr(raw, reuse_dir), cfg.reorder);
    const EdgeList ordered = apply_permutation(raw, perm);
    const Direction kernel_dir =
        cfg.kernel == Kernel::PagerankPull ? Direction::InEdges : Direction::OutEdges;
    const CsrGraph g = build_csr(ordered, kernel_dir);

    const MemoryLayout layout =
        build_layout(g.vertex_count, g.edge_count, cfg.n_property_arrays);
    const AccessTrace trace = cfg.kernel == Kernel::PagerankPull
                                  ? trace_pagerank_pull(g, layout)
                                  : trace_sssp_push(g, layout, cfg.sssp_rounds);

    std::vector<std::uint64_t> sizes = cfg.llc_size_sweep;
    if (sizes.empty()) sizes.push_back(cfg.cache.llc_bytes());

    std::vector<ResultRow> rows;
    for (const std::uint64_t llc_bytes : sizes) {
        const CacheConfig cc = detail::config_for_size(cfg.cache, llc_bytes);
        const RegionMap regions = make_region_map(layout, llc_bytes);

        const SimStats lru_stats = run_simulation(trace, cc, PolicySpec::lru(), &regions);
        for (const PolicySpec& policy : cfg.policies) {
            const SimStats stats = policy.kind == PolicyKind::Lru
                                       ? lru_stats
                                       : run_simulation(trace, cc, policy, &regions);
            ResultRow row;
            row.graph = cfg.source.label();
            row.kernel = kernel_name(cfg.kernel);
            row.reorder = reorder_name(cfg.reorder.kind);
            row.policy = policy.name();
            row.llc_bytes = llc_bytes;
            row.llc_accesses = stats.llc.accesses;
            row.llc_misses = stats.llc.misses;
            row.miss_elim_over_lru = miss_elimination_over(lru_stats, stats);
            row.property_access_fraction = detail::property_percent(stats, layout);
            for (std::size_t h = 0; h < 4; ++h) row.hint_misses[h] = stats.by_hint[h].misses;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline void emit_csv(std::span<const ResultRow> rows, std::ostream& out) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
    out << "graph,kernel,reorder,policy,llc_bytes,llc_accesses,llc_misses,"
           "miss_elim_over_lru,property_access_fraction,"
           "misses_hint_high,misses_hint_moderate,misses_hint_low,misses_hint_default\n";
    char buf[64];
    for (const ResultRow& r : rows) {
        out << r.graph << ',' << r.kernel << ',' << r.reorder << ',' << r.policy << ','
            << r.llc_bytes << ',' << r.llc_accesses << ',' << r.llc_misses << ',';
        std::snprintf(buf, sizeof(buf), "%.4f,%.4f", r.miss_elim_over_lru,
                      r.property_access_fraction);
        out << buf;
        for (const std::uint64_t misses : r.hint_misses) out << ',' << misses;
        out << '\n';
    }
    if (!out) throw std::runtime_error("emit_csv: write failed");
}

inline void emit_csv(std::span<const ResultRow> rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    emit_csv(rows, out);
}

inline void report_skew(const DegreeSkewReport& rep, std::ostream& out) {
    char buf[256];
    out << "degree skew (hot = degree >= average)\n";
    std::snprintf(buf, sizeof(buf), "  %-22s %10s %10s\n", "", "in", "out");
    out << buf;
    std::snprintf(buf, sizeof(buf), "  %-22s %10.2f %10.2f\n", "avg degree", rep.avg_in_degree,
                  rep.avg_out_degree);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  %-22s %10.2f %10.2f\n", "hot vertices (%)",
                  100.0 * rep.hot_fraction_in, 100.0 * rep.hot_fraction_out);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  %-22s %10.2f %10.2f\n", "edge coverage (%)",
                  100.0 * rep.edge_coverage_in, 100.0 * rep.edge_coverage_out);
    out << buf;
}

inline DegreeSkewReport report_skew(const EdgeList& edges, std::ostream& out) {
    const DegreeSkewReport rep = degree_skew_report(build_csr(edges, Direction::InEdges),
                                                    build_csr(edges, Direction::OutEdges));
    report_skew(rep, out);
    return rep;
}

}  // namespace grasplab
