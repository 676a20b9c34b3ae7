#pragma once

// Exhaustive scan kernels over prime fields. They filter with a cheap exact
// test and hand every survivor back as a model for re-checking.

#include <vector>

#include "ssp/models.hpp"

namespace ssp {

struct KernelChunk {
    u64 candidates = 0;              // box tuples covered by the chunk
    u64 inseparable = 0;             // of those, rejected wholesale without a Frobenius test
    std::vector<CurveModel> hits;    // first-row (or first-target) survivors, unvalidated
};

// gen_hyper_reduced(g, F_p) with c = 1. Hits have vanishing first Cartier-Manin
// row; every hit is also returned with c = eps, so candidates counts both c.
class HyperScan {
public:
    HyperScan(int g, const Field& K);
    u64 chunks() const { return chunks_; }
    KernelChunk run(u64 chunk) const;
    KernelChunk tally(u64 chunk) const;  // counts of run(chunk) without the hits

private:
    int g_;
    const Field* K_;
    u32 p_, m_;
    int t0_, L_, J_;
    u64 chunks_;
};

// one canonical box over F_5; hits have all sixteen Hasse-Witt entries zero
class CanonicalScan {
public:
    explicit CanonicalScan(const ModelBox& box, u64 chunk_size = 1u << 18);
    u64 chunks() const { return chunks_; }
    KernelChunk run(u64 chunk) const;
    KernelChunk tally(u64 chunk) const;
    bool affine() const { return affine_; }

private:
    const ModelBox* box_;
    u64 chunk_size_, chunks_;
    bool affine_ = false;
    std::vector<int> P0_;                                  // dense cubic, 20 entries
    std::vector<std::vector<std::vector<int>>> slot_add_;  // slot -> value -> dense contribution
    std::vector<std::array<int, 3>> qp_terms_;             // (deg-5 index, cubic index, coefficient)
    std::vector<std::array<int, 3>> sq_terms_;             // (deg-10 index, i, j) for i <= j, weight in sq_w_
    std::vector<int> sq_w_;
    std::vector<std::vector<std::array<int, 3>>> targets_;  // (a, b, weight) over degree-10 indices
};

}  // namespace ssp
