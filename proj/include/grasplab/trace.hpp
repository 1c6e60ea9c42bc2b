#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grasplab/graph.hpp"

namespace grasplab {

enum class ArrayKind : std::uint8_t { VertexArr, EdgeArr, PropertyArr };

// Tag value for accesses that fall outside every modeled array.
inline constexpr std::uint8_t kNoArrayTag = 0xFF;

struct ArrayDescriptor {
    std::string name;
    ArrayKind kind = ArrayKind::PropertyArr;
    std::uint64_t base = 0;       // 64-byte aligned
    std::uint32_t elem_size = 8;  // 4 or 8
    std::uint64_t length = 0;     // element count

    std::uint64_t byte_size() const { return elem_size * length; }
    std::uint64_t end() const { return base + byte_size(); }
    std::uint64_t element_address(std::uint64_t i) const { return base + elem_size * i; }
};

// Virtual address space of one vertex-centric application instance:
// Vertex and Edge arrays plus one or two Property arrays, at disjoint bases.
struct MemoryLayout {
    std::vector<ArrayDescriptor> arrays;

    std::vector<std::size_t> property_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < arrays.size(); ++i)
            if (arrays[i].kind == ArrayKind::PropertyArr) out.push_back(i);
        return out;
    }
};

struct MemoryAccess {
    std::uint64_t address = 0;
    bool is_write = false;
    std::uint8_t array_tag = kNoArrayTag;  // index into MemoryLayout::arrays

    bool operator==(const MemoryAccess&) const = default;
};

struct AccessTrace {
    MemoryLayout layout;
    std::vector<MemoryAccess> accesses;
};

// Lays out Vertex (8B x n+1), Edge (4B x m) and the Property arrays
// (8B x n each) at page-aligned bases with a guard gap, so no two arrays
// ever share a cache block.
inline MemoryLayout build_layout(std::uint64_t n, std::uint64_t m, int n_property_arrays) {
    if (n < 1) throw std::invalid_argument("build_layout: vertex count must be >= 1");
    if (n_property_arrays < 1 || n_property_arrays > 2)
        throw std::invalid_argument("build_layout: property array count must be 1 or 2");

    constexpr std::uint64_t kAlign = 4096;
    constexpr std::uint64_t kGuardGap = 4096;
    std::uint64_t cursor = 0x10000;

    MemoryLayout layout;
    const auto place = [&](std::string name, ArrayKind kind, std::uint32_t elem_size,
                           std::uint64_t length) {
        ArrayDescriptor d{std::move(name), kind, cursor, elem_size, length};
        cursor = (d.end() + kGuardGap + kAlign - 1) / kAlign * kAlign;
        layout.arrays.push_back(std::move(d));
    };
    place("vertex", ArrayKind::VertexArr, 8, n + 1);
    place("edge", ArrayKind::EdgeArr, 4, m);
    for (int i = 0; i < n_property_arrays; ++i)
        place("prop" + std::to_string(i), ArrayKind::PropertyArr, 8, n);
    return layout;
}

namespace detail {

inline void check_layout(const CsrGraph& g, const MemoryLayout& layout) {
    const auto props = layout.property_indices();
    if (props.empty()) throw std::invalid_argument("layout has no property array");
    if (layout.arrays[0].kind != ArrayKind::VertexArr ||
        layout.arrays[0].length != g.vertex_count + 1)
        throw std::invalid_argument("layout vertex array does not match graph");
    if (layout.arrays[1].kind != ArrayKind::EdgeArr || layout.arrays[1].length != g.edge_count)
        throw std::invalid_argument("layout edge array does not match graph");
}

struct TraceEmitter {
    AccessTrace& trace;

    void emit(const MemoryLayout& layout, std::size_t array_index, std::uint64_t element,
              bool is_write) {
        trace.accesses.push_back(MemoryAccess{
            layout.arrays[array_index].element_address(element), is_write,
            static_cast<std::uint8_t>(array_index)});
    }
};

}  // namespace detail

// One pull iteration: every destination reads its vertex-array bounds, walks
// its in-edges reading the source property per edge, then writes its own
// property. With two property arrays, reads come from the first and the
// write goes to the second; with one merged array both target it.
inline AccessTrace trace_pagerank_pull(const CsrGraph& g_in, const MemoryLayout& layout) {
    if (g_in.direction != Direction::InEdges)
        throw std::invalid_argument("trace_pagerank_pull needs an in-edge CSR");
    detail::check_layout(g_in, layout);

    const auto props = layout.property_indices();
    const std::size_t src_prop = props.front();
    const std::size_t dst_prop = props.back();

    AccessTrace trace{layout, {}};
    trace.accesses.reserve(3 * g_in.vertex_count + 2 * g_in.edge_count);
    detail::TraceEmitter out{trace};
    for (std::uint64_t d = 0; d < g_in.vertex_count; ++d) {
        out.emit(layout, 0, d, false);
        out.emit(layout, 0, d + 1, false);
        for (std::uint64_t e = g_in.offsets[d]; e < g_in.offsets[d + 1]; ++e) {
            out.emit(layout, 1, e, false);
            out.emit(layout, src_prop, g_in.neighbors[e], false);
        }
        out.emit(layout, dst_prop, d, true);
    }
    return trace;
}

// Bellman-Ford style push rounds over all vertices: every source reads its
// vertex-array bounds and own property, then per out-edge reads the edge
// entry and read-modify-writes the destination property.
inline AccessTrace trace_sssp_push(const CsrGraph& g_out, const MemoryLayout& layout,
                                   std::uint32_t rounds) {
    if (g_out.direction != Direction::OutEdges)
        throw std::invalid_argument("trace_sssp_push needs an out-edge CSR");
    if (rounds < 1) throw std::invalid_argument("trace_sssp_push: rounds must be >= 1");
    detail::check_layout(g_out, layout);

    const auto props = layout.property_indices();
    const std::size_t src_prop = props.front();
    const std::size_t dst_prop = props.back();

    AccessTrace trace{layout, {}};
    trace.accesses.reserve(rounds * (3 * g_out.vertex_count + 3 * g_out.edge_count));
    detail::TraceEmitter out{trace};
    for (std::uint32_t r = 0; r < rounds; ++r) {
        for (std::uint64_t s = 0; s < g_out.vertex_count; ++s) {
            out.emit(layout, 0, s, false);
            out.emit(layout, 0, s + 1, false);
            out.emit(layout, src_prop, s, false);
            for (std::uint64_t e = g_out.offsets[s]; e < g_out.offsets[s + 1]; ++e) {
                out.emit(layout, 1, e, false);
                out.emit(layout, dst_prop, g_out.neighbors[e], false);
                out.emit(layout, dst_prop, g_out.neighbors[e], true);
            }
        }
    }
    return trace;
}

struct TraceBreakdown {
    std::uint64_t total = 0;
    std::uint64_t vertex = 0;
    std::uint64_t edge = 0;
    std::uint64_t property = 0;
    std::uint64_t untagged = 0;

    double property_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(property) / static_cast<double>(total);
    }
    double vertex_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(vertex) / static_cast<double>(total);
    }
    double edge_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(edge) / static_cast<double>(total);
    }
};

inline TraceBreakdown trace_breakdown(const AccessTrace& trace) {
    TraceBreakdown b;
    b.total = trace.accesses.size();
    for (const MemoryAccess& a : trace.accesses) {
        if (a.array_tag == kNoArrayTag || a.array_tag >= trace.layout.arrays.size()) {
            ++b.untagged;
            continue;
        }
        switch (trace.layout.arrays[a.array_tag].kind) {
            case ArrayKind::VertexArr: ++b.vertex; break;
            case ArrayKind::EdgeArr: ++b.edge; break;
            case ArrayKind::PropertyArr: ++b.property; break;
        }
    }
    return b;
}

// Binary dump record: address (8 bytes little-endian), flags (1 byte,
// bit0 = write), array tag (1 byte, 0xFF = untagged).
inline void write_trace(const AccessTrace& trace, std::ostream& out) {
    for (const MemoryAccess& a : trace.accesses) {
        unsigned char rec[10];
        for (int i = 0; i < 8; ++i) rec[i] = static_cast<unsigned char>(a.address >> (8 * i));
        rec[8] = a.is_write ? 1 : 0;
        rec[9] = a.array_tag;
        out.write(reinterpret_cast<const char*>(rec), sizeof(rec));
    }
    if (!out) throw std::runtime_error("trace dump write failed");
}

inline void write_trace(const AccessTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open trace dump for writing: " + path);
    write_trace(trace, out);
}

inline std::vector<MemoryAccess> read_trace(std::istream& in) {
    std::vector<MemoryAccess> accesses;
    unsigned char rec[10];
    while (in.read(reinterpret_cast<char*>(rec), sizeof(rec))) {
        MemoryAccess a;
        a.address = 0;
        for (int i = 0; i < 8; ++i) a.address |= std::uint64_t{rec[i]} << (8 * i);
        a.is_write = (rec[8] & 1) != 0;
        a.array_tag = rec[9];
        accesses.push_back(a);
    }
    if (in.gcount() != 0) throw std::runtime_error("trace dump truncated mid-record");
    return accesses;
}

inline std::vector<MemoryAccess> read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace dump: " + path);
    return read_trace(in);
}

}  // namespace grasplab
