#pragma once

// Machine-independent work counters. The unit is roughly one 64-bit word
// operation; multi-limb operations charge proportionally to limbs touched.
// Counts are deterministic for a fixed seed (no wall-clock input), which is
// what the scaling benchmarks compare.

#include <atomic>
#include <cstdint>

namespace spmul::instrument {

enum class Bucket { structural = 0, stage1 = 1, stage2 = 2 };

struct Counters {
    std::atomic<std::uint64_t> total{0};
    std::atomic<std::uint64_t> structural{0};
    std::atomic<std::uint64_t> stage1{0};
    std::atomic<std::uint64_t> stage2{0};
};

inline Counters& counters() {
    static Counters c;
    return c;
}

inline thread_local Bucket current_bucket = Bucket::structural;

inline void add(std::uint64_t n) {
    auto& c = counters();
    c.total.fetch_add(n, std::memory_order_relaxed);
    switch (current_bucket) {
    case Bucket::structural: c.structural.fetch_add(n, std::memory_order_relaxed); break;
    case Bucket::stage1: c.stage1.fetch_add(n, std::memory_order_relaxed); break;
    case Bucket::stage2: c.stage2.fetch_add(n, std::memory_order_relaxed); break;
    }
}

// Routes subsequent charges on this thread into a bucket for the scope's
// lifetime. Used by sparse_mult_zz to expose its stage-1/stage-2 cost split.
class BucketScope {
    Bucket prev_;
public:
    explicit BucketScope(Bucket b) : prev_(current_bucket) { current_bucket = b; }
    ~BucketScope() { current_bucket = prev_; }
    BucketScope(const BucketScope&) = delete;
    BucketScope& operator=(const BucketScope&) = delete;
};

struct Snapshot {
    std::uint64_t total = 0, structural = 0, stage1 = 0, stage2 = 0;
};

inline Snapshot snapshot() {
    auto& c = counters();
    return {c.total.load(std::memory_order_relaxed),
            c.structural.load(std::memory_order_relaxed),
            c.stage1.load(std::memory_order_relaxed),
            c.stage2.load(std::memory_order_relaxed)};
}

inline void reset() {
    auto& c = counters();
    c.total.store(0, std::memory_order_relaxed);
    c.structural.store(0, std::memory_order_relaxed);
    c.stage1.store(0, std::memory_order_relaxed);
    c.stage2.store(0, std::memory_order_relaxed);
}

} // namespace spmul::instrument
