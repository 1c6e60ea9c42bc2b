#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "grasplab/trace.hpp"

namespace grasplab {

// 2-bit classification attached to every LLC access. Default means no
// address bounds were configured and region-aware policies are disabled.
enum class ReuseHint : std::uint8_t { High = 0, Moderate = 1, Low = 2, Default = 3 };

inline const char* hint_name(ReuseHint h) {
    switch (h) {
        case ReuseHint::High: return "high";
        case ReuseHint::Moderate: return "moderate";
        case ReuseHint::Low: return "low";
        case ReuseHint::Default: return "default";
    }
    return "?";
}

// Start/end (exclusive) virtual-address bounds of one Property array,
// as software would program them at application start-up.
struct AbrPair {
    std::uint64_t start = 0;
    std::uint64_t end = 0;
};

// Reuse regions carved out of one Property array: a cache-sized span at the
// start is High, the next cache-sized span Moderate, both clipped to the
// array end.
struct ReuseRegions {
    std::uint64_t high_begin = 0, high_end = 0;
    std::uint64_t moderate_begin = 0, moderate_end = 0;
};

struct RegionMap {
    std::vector<ReuseRegions> regions;
};

// When several Property arrays are registered, each gets an equal share of
// the cache capacity for its High/Moderate spans.
inline RegionMap make_region_map(std::span<const AbrPair> abrs, std::uint64_t llc_bytes) {
    if (abrs.empty()) throw std::invalid_argument("make_region_map: no address bounds");
    const std::uint64_t share = llc_bytes / abrs.size();
    if (share == 0) throw std::invalid_argument("make_region_map: cache share is zero");

    RegionMap map;
    for (const AbrPair& abr : abrs) {
        if (abr.start >= abr.end)
            throw std::invalid_argument("make_region_map: empty address bound pair");
        ReuseRegions r;
        r.high_begin = abr.start;
        r.high_end = std::min(abr.start + share, abr.end);
        r.moderate_begin = r.high_end;
        r.moderate_end = std::min(abr.start + 2 * share, abr.end);
        map.regions.push_back(r);
    }
    return map;
}

inline RegionMap make_region_map(const MemoryLayout& layout, std::uint64_t llc_bytes) {
    std::vector<AbrPair> abrs;
    for (const ArrayDescriptor& d : layout.arrays)
        if (d.kind == ArrayKind::PropertyArr) abrs.push_back({d.base, d.end()});
    return make_region_map(abrs, llc_bytes);
}

inline ReuseHint classify(std::uint64_t address, const RegionMap* regions) {
    if (regions == nullptr) return ReuseHint::Default;
    for (const ReuseRegions& r : regions->regions)
        if (address >= r.high_begin && address < r.high_end) return ReuseHint::High;
    for (const ReuseRegions& r : regions->regions)
        if (address >= r.moderate_begin && address < r.moderate_end) return ReuseHint::Moderate;
    return ReuseHint::Low;
}

struct CacheConfig {
    std::uint64_t block_size = 64;
    std::uint64_t llc_sets = 1024;  // 1MB with 16 ways of 64B blocks
    std::uint32_t llc_ways = 16;
    bool l1_enabled = true;
    std::uint64_t l1_sets = 64;  // 32KB with 8 ways of 64B blocks
    std::uint32_t l1_ways = 8;

    std::uint64_t llc_bytes() const { return block_size * llc_sets * llc_ways; }
    std::uint64_t l1_bytes() const { return block_size * l1_sets * l1_ways; }

    void validate() const {
        if (!std::has_single_bit(block_size) || block_size < 8)
            throw std::invalid_argument("block_size must be a power of two >= 8");
        if (!std::has_single_bit(llc_sets))
            throw std::invalid_argument("llc_sets must be a power of two");
        if (llc_ways < 1) throw std::invalid_argument("llc_ways must be >= 1");
        if (l1_enabled) {
            if (!std::has_single_bit(l1_sets))
                throw std::invalid_argument("l1_sets must be a power of two");
            if (l1_ways < 1) throw std::invalid_argument("l1_ways must be >= 1");
            if (l1_bytes() >= llc_bytes())
                throw std::invalid_argument("L1 must be smaller than the LLC");
        }
    }
};

enum class PolicyKind { Lru, Drrip, Grasp, ShipMem, Pin, Opt };

struct PolicySpec {
    PolicyKind kind = PolicyKind::Lru;
    int pin_percent = 100;  // Pin only: share of total lines reservable

    static PolicySpec lru() { return {PolicyKind::Lru}; }
    static PolicySpec drrip() { return {PolicyKind::Drrip}; }
    static PolicySpec grasp() { return {PolicyKind::Grasp}; }
    static PolicySpec ship_mem() { return {PolicyKind::ShipMem}; }
    static PolicySpec pin(int percent) { return {PolicyKind::Pin, percent}; }
    static PolicySpec opt() { return {PolicyKind::Opt}; }

    std::string name() const {
        switch (kind) {
            case PolicyKind::Lru: return "lru";
            case PolicyKind::Drrip: return "drrip";
            case PolicyKind::Grasp: return "grasp";
            case PolicyKind::ShipMem: return "ship";
            case PolicyKind::Pin: return "pin" + std::to_string(pin_percent);
            case PolicyKind::Opt: return "opt";
        }
        return "?";
    }
};

struct CacheLine {
    bool valid = false;
    bool pinned = false;
    bool reused = false;  // ShipMem: saw a hit since fill
    std::uint8_t rrpv = 0;
    std::uint64_t tag = 0;  // block address
    std::uint64_t lru_stamp = 0;
    std::uint64_t ship_sig = 0;
    std::uint64_t next_use = 0;  // OPT: trace index of this block's next reference
};

enum class AccessOutcome { Hit, Miss };

struct AccessResult {
    AccessOutcome outcome = AccessOutcome::Miss;
    bool bypassed = false;  // miss that allocated nothing (fully pinned set)
    bool evicted = false;   // miss that replaced a valid line

    bool hit() const { return outcome == AccessOutcome::Hit; }
};

inline constexpr std::uint64_t kNeverUsed = std::numeric_limits<std::uint64_t>::max();

// next_use[i] = smallest j > i whose access touches the same cache block,
// or kNeverUsed. Blocks are address / block_size.
inline std::vector<std::uint64_t> precompute_next_use(std::span<const MemoryAccess> accesses,
                                                      std::uint64_t block_size) {
    std::vector<std::uint64_t> next_use(accesses.size(), kNeverUsed);
    std::unordered_map<std::uint64_t, std::uint64_t> last_seen;
    last_seen.reserve(accesses.size() / 4 + 16);
    for (std::uint64_t i = accesses.size(); i-- > 0;) {
        const std::uint64_t block = accesses[i].address / block_size;
        auto [it, inserted] = last_seen.try_emplace(block, i);
        if (!inserted) {
            next_use[i] = it->second;
            it->second = i;
        }
    }
    return next_use;
}

// One set-associative cache level with a pluggable replacement policy.
//
// RRIP-family state is a 3-bit re-reference prediction value per line
// (7 = evict first, 0 = most protected). The region-aware policy maps hints
// to RRPV updates as:
//
//   hint       insertion    hit
//   High       0            0
//   Moderate   6            rrpv-- if rrpv > 0
//   Low        7            rrpv-- if rrpv > 0
//   Default    base scheme  0
//
// Victim selection never looks at hints: the first line at RRPV 7 by way
// index wins, ageing everything until one gets there. Pinned lines are
// excluded; a set with every way pinned bypasses the fill.
class SetAssocCache {
public:
    static constexpr std::uint8_t kMaxRrpv = 7;
    static constexpr std::uint8_t kLongRrpv = 6;
    static constexpr std::uint32_t kPselMax = 1023;   // 10-bit selector
    static constexpr std::uint32_t kPselInit = 512;
    static constexpr std::uint32_t kLeaderTarget = 32;  // leader sets per policy
    static constexpr std::uint32_t kBimodalPeriod = 32;
    static constexpr std::uint64_t kShipRegionBytes = 16384;

    SetAssocCache(std::uint64_t sets, std::uint32_t ways, std::uint64_t block_size,
                  PolicySpec policy)
        : sets_(sets),
          ways_(ways),
          block_size_(block_size),
          policy_(policy),
          lines_(sets * ways),
          psel_(kPselInit),
          pin_budget_(sets * ways * static_cast<std::uint64_t>(policy.pin_percent) / 100) {
        if (sets_ == 0 || ways_ == 0) throw std::invalid_argument("cache needs sets and ways");
        if (policy_.kind == PolicyKind::Pin && (policy_.pin_percent < 0 || policy_.pin_percent > 100))
            throw std::invalid_argument("pin percent must be in [0,100]");
    }

    // next-use table for OPT; indices must match the access sequence this
    // cache will observe.
    void bind_next_use(const std::vector<std::uint64_t>* table) { next_use_table_ = table; }

    AccessResult access(std::uint64_t address, bool is_write, ReuseHint hint) {
        (void)is_write;  // writes allocate and age exactly like reads
        if (policy_.kind == PolicyKind::Opt && next_use_table_ == nullptr)
            throw std::logic_error("OPT policy requires a bound next-use table");

        const std::uint64_t block = address / block_size_;
        const std::uint64_t set = block % sets_;
        const std::uint64_t access_index = access_count_++;
        CacheLine* row = &lines_[set * ways_];

        for (std::uint32_t w = 0; w < ways_; ++w) {
            if (row[w].valid && row[w].tag == block) {
                on_hit(row[w], hint, access_index);
                return {AccessOutcome::Hit, false, false};
            }
        }

        if (duels() && set_role(set) != SetRole::Follower) record_leader_miss(set);

        const int victim = pick_victim(row, access_index);
        if (victim < 0) return {AccessOutcome::Miss, true, false};

        CacheLine& line = row[victim];
        const bool evicted = line.valid;
        if (evicted) on_evict(line);
        fill(line, block, address, set, hint, access_index);
        return {AccessOutcome::Miss, false, evicted};
    }

    std::uint64_t pinned_count() const { return pinned_count_; }
    std::uint64_t pinned_peak() const { return pinned_peak_; }
    std::uint64_t set_count() const { return sets_; }
    std::uint32_t way_count() const { return ways_; }
    const std::vector<CacheLine>& lines() const { return lines_; }

private:
    enum class SetRole { Follower, SrripLeader, BrripLeader };

    bool duels() const {
        return policy_.kind == PolicyKind::Drrip || policy_.kind == PolicyKind::Grasp ||
               policy_.kind == PolicyKind::Pin;
    }

    SetRole set_role(std::uint64_t set) const {
        const std::uint64_t stride = std::max<std::uint64_t>(2, sets_ / kLeaderTarget);
        if (set % stride == 0) return SetRole::SrripLeader;
        if (set % stride == 1) return SetRole::BrripLeader;
        return SetRole::Follower;
    }

    void record_leader_miss(std::uint64_t set) {
        if (set_role(set) == SetRole::SrripLeader) {
            if (psel_ < kPselMax) ++psel_;
        } else {
            if (psel_ > 0) --psel_;
        }
    }

    // Long interval with a 1/32 chance bias toward near-long; the fill
    // counter stands in for a random draw so runs stay reproducible.
    std::uint8_t brrip_insert_rrpv() {
        return (brrip_fill_count_++ % kBimodalPeriod == 0) ? kLongRrpv : kMaxRrpv;
    }

    std::uint8_t drrip_insert_rrpv(std::uint64_t set) {
        switch (set_role(set)) {
            case SetRole::SrripLeader: return kLongRrpv;
            case SetRole::BrripLeader: return brrip_insert_rrpv();
            case SetRole::Follower:
                return psel_ >= kPselInit ? brrip_insert_rrpv() : kLongRrpv;
        }
        return kLongRrpv;
    }

    std::uint8_t ship_counter(std::uint64_t sig) const {
        const auto it = shct_.find(sig);
        return it == shct_.end() ? kShipInit : it->second;
    }

    void on_hit(CacheLine& line, ReuseHint hint, std::uint64_t access_index) {
        switch (policy_.kind) {
            case PolicyKind::Lru:
                line.lru_stamp = ++lru_clock_;
                break;
            case PolicyKind::Drrip:
                line.rrpv = 0;
                break;
            case PolicyKind::Grasp:
                if (hint == ReuseHint::Moderate || hint == ReuseHint::Low) {
                    if (line.rrpv > 0) --line.rrpv;
                } else {
                    line.rrpv = 0;
                }
                break;
            case PolicyKind::ShipMem: {
                line.rrpv = 0;
                line.reused = true;
                std::uint8_t& ctr = shct_.try_emplace(line.ship_sig, kShipInit).first->second;
                if (ctr < kShipMax) ++ctr;
                break;
            }
            case PolicyKind::Pin:
                line.rrpv = 0;
                break;
            case PolicyKind::Opt:
                line.next_use = (*next_use_table_)[access_index];
                break;
        }
    }

    void on_evict(CacheLine& line) {
        if (policy_.kind == PolicyKind::ShipMem && !line.reused) {
            std::uint8_t& ctr = shct_.try_emplace(line.ship_sig, kShipInit).first->second;
            if (ctr > 0) --ctr;
        }
        if (line.pinned) {
            line.pinned = false;
            --pinned_count_;
        }
    }

    // Way of the victim, preferring invalid ways, or -1 to bypass.
    int pick_victim(CacheLine* row, std::uint64_t access_index) {
        (void)access_index;
        for (std::uint32_t w = 0; w < ways_; ++w)
            if (!row[w].valid) return static_cast<int>(w);

        switch (policy_.kind) {
            case PolicyKind::Lru: {
                std::uint32_t victim = 0;
                for (std::uint32_t w = 1; w < ways_; ++w)
                    if (row[w].lru_stamp < row[victim].lru_stamp) victim = w;
                return static_cast<int>(victim);
            }
            case PolicyKind::Opt: {
                std::uint32_t victim = 0;
                for (std::uint32_t w = 1; w < ways_; ++w)
                    if (row[w].next_use > row[victim].next_use) victim = w;
                return static_cast<int>(victim);
            }
            default: {
                // RRIP scan: first way at max RRPV; otherwise age everything
                // (pinned lines excluded) and rescan. Terminates in at most
                // kMaxRrpv rounds.
                bool any_unpinned = false;
                for (std::uint32_t w = 0; w < ways_; ++w)
                    if (!row[w].pinned) any_unpinned = true;
                if (!any_unpinned) return -1;
                for (;;) {
                    for (std::uint32_t w = 0; w < ways_; ++w)
                        if (!row[w].pinned && row[w].rrpv == kMaxRrpv) return static_cast<int>(w);
                    for (std::uint32_t w = 0; w < ways_; ++w)
                        if (!row[w].pinned && row[w].rrpv < kMaxRrpv) ++row[w].rrpv;
                }
            }
        }
    }

    void fill(CacheLine& line, std::uint64_t block, std::uint64_t address, std::uint64_t set,
              ReuseHint hint, std::uint64_t access_index) {
        line.valid = true;
        line.tag = block;
        line.pinned = false;
        line.reused = false;

        switch (policy_.kind) {
            case PolicyKind::Lru:
                line.lru_stamp = ++lru_clock_;
                break;
            case PolicyKind::Drrip:
                line.rrpv = drrip_insert_rrpv(set);
                break;
            case PolicyKind::Grasp:
                switch (hint) {
                    case ReuseHint::High: line.rrpv = 0; break;
                    case ReuseHint::Moderate: line.rrpv = kLongRrpv; break;
                    case ReuseHint::Low: line.rrpv = kMaxRrpv; break;
                    case ReuseHint::Default: line.rrpv = drrip_insert_rrpv(set); break;
                }
                break;
            case PolicyKind::ShipMem:
                line.ship_sig = address / kShipRegionBytes;
                line.rrpv = ship_counter(line.ship_sig) == 0 ? kMaxRrpv : kLongRrpv;
                break;
            case PolicyKind::Pin:
                if (hint == ReuseHint::High && pinned_count_ < pin_budget_) {
                    line.rrpv = 0;
                    line.pinned = true;
                    ++pinned_count_;
                    pinned_peak_ = std::max(pinned_peak_, pinned_count_);
                } else {
                    line.rrpv = drrip_insert_rrpv(set);
                }
                break;
            case PolicyKind::Opt:
                line.next_use = (*next_use_table_)[access_index];
                break;
        }
    }

    static constexpr std::uint8_t kShipInit = 3;
    static constexpr std::uint8_t kShipMax = 7;

    std::uint64_t sets_;
    std::uint32_t ways_;
    std::uint64_t block_size_;
    PolicySpec policy_;
    std::vector<CacheLine> lines_;
    std::uint32_t psel_;
    std::uint64_t brrip_fill_count_ = 0;
    std::uint64_t lru_clock_ = 0;
    std::uint64_t access_count_ = 0;
    std::uint64_t pin_budget_;
    std::uint64_t pinned_count_ = 0;
    std::uint64_t pinned_peak_ = 0;
    std::unordered_map<std::uint64_t, std::uint8_t> shct_;
    const std::vector<std::uint64_t>* next_use_table_ = nullptr;
};

struct LevelStats {
    std::uint64_t accesses = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
};

struct HitMissCount {
    std::uint64_t accesses = 0;
    std::uint64_t misses = 0;
};

struct SimStats {
    LevelStats l1;
    LevelStats llc;
    std::array<HitMissCount, 256> by_tag{};  // LLC accesses, indexed by array tag
    std::array<HitMissCount, 4> by_hint{};   // LLC accesses, indexed by ReuseHint
    std::uint64_t evictions = 0;             // LLC replacements of valid lines
    std::uint64_t bypasses = 0;              // LLC misses that allocated nothing
    std::uint64_t pinned_peak = 0;

    const HitMissCount& hint(ReuseHint h) const { return by_hint[static_cast<std::size_t>(h)]; }
};

// Replays a word-granular access stream: every access probes the L1 first
// (when enabled); only L1 misses reach the LLC, each classified against the
// region map. OPT runs on the same post-L1 stream with next-use indices
// computed over it.
inline SimStats run_simulation(std::span<const MemoryAccess> accesses, const CacheConfig& cfg,
                               const PolicySpec& policy, const RegionMap* regions = nullptr) {
    cfg.validate();
    SimStats stats;

    std::vector<MemoryAccess> filtered;
    std::span<const MemoryAccess> llc_stream = accesses;
    if (cfg.l1_enabled) {
        SetAssocCache l1(cfg.l1_sets, cfg.l1_ways, cfg.block_size, PolicySpec::lru());
        filtered.reserve(accesses.size() / 2 + 16);
        for (const MemoryAccess& a : accesses) {
            ++stats.l1.accesses;
            if (l1.access(a.address, a.is_write, ReuseHint::Default).hit()) {
                ++stats.l1.hits;
            } else {
                ++stats.l1.misses;
                filtered.push_back(a);
            }
        }
        llc_stream = filtered;
    }

    std::vector<std::uint64_t> next_use;
    SetAssocCache llc(cfg.llc_sets, cfg.llc_ways, cfg.block_size, policy);
    if (policy.kind == PolicyKind::Opt) {
        next_use = precompute_next_use(llc_stream, cfg.block_size);
        llc.bind_next_use(&next_use);
    }

    for (const MemoryAccess& a : llc_stream) {
        const ReuseHint hint = classify(a.address, regions);
        const AccessResult r = llc.access(a.address, a.is_write, hint);

        ++stats.llc.accesses;
        ++stats.by_tag[a.array_tag].accesses;
        ++stats.by_hint[static_cast<std::size_t>(hint)].accesses;
        if (r.hit()) {
            ++stats.llc.hits;
        } else {
            ++stats.llc.misses;
            ++stats.by_tag[a.array_tag].misses;
            ++stats.by_hint[static_cast<std::size_t>(hint)].misses;
            if (r.bypassed) ++stats.bypasses;
            if (r.evicted) ++stats.evictions;
        }
    }
    stats.pinned_peak = llc.pinned_peak();
    return stats;
}

inline SimStats run_simulation(const AccessTrace& trace, const CacheConfig& cfg,
                               const PolicySpec& policy, const RegionMap* regions = nullptr) {
    return run_simulation(std::span<const MemoryAccess>(trace.accesses), cfg, policy, regions);
}

// Percentage of baseline misses the candidate removed; 0 when the baseline
// had none.
inline double miss_elimination_over(const SimStats& baseline, const SimStats& candidate) {
    if (baseline.llc.misses == 0) return 0.0;
    return 100.0 *
           (static_cast<double>(baseline.llc.misses) - static_cast<double>(candidate.llc.misses)) /
           static_cast<double>(baseline.llc.misses);
}

}  // namespace grasplab
