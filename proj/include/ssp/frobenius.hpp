#pragma once

// Cartier-Manin and Hasse-Witt matrices, and point counts over extensions.

#include <array>
#include <vector>

#include "ssp/models.hpp"

namespace ssp {

struct FrobeniusMatrix {
    int g = 0;
    std::vector<std::vector<Fe>> M;  // empty entries when aborted
    struct Entry {
        int row, col;
        std::array<int, 4> target;  // exponent tuple (univariate targets use slot 0)
    };
    std::vector<Entry> provenance;  // entries actually evaluated, in evaluation order
    bool aborted = false;

    bool is_zero() const;  // requires !aborted
};

FrobeniusMatrix cm_hyperelliptic(const HyperModel& m, bool early_abort = false);
bool hyper_cm_vanishes(const HyperModel& m);  // early-abort predicate
bool is_supersingular_elliptic(const EllipticModel& m);
bool is_supersingular_cubic(const Poly& f);  // y^2 = f, deg 3 or 4

FrobeniusMatrix hw_canonical_g4(const CanonicalModel& m, bool early_abort = false);
bool canonical_hw_vanishes(const CanonicalModel& m);
FrobeniusMatrix hw_trigonal_g5(const TrigonalModel& m, bool early_abort = false);
bool trigonal_hw_vanishes(const TrigonalModel& m);

// the 16 genus-4 and 25 genus-5 target monomials in evaluation order
std::vector<Mono> canonical_targets(u32 p);
std::vector<Mono> trigonal_targets(u32 p);

// coefficient of x^{p-1} in ((x - b) f)^m as a polynomial in b, m = (p-1)/2
Poly shifted_power_root_poly(const Poly& f);

// --- point counts on smooth models over F_{p^k} containing the model's field

u64 count_points_hyper(const HyperModel& m, const Field& L);
u64 count_points_canonical(const CanonicalModel& m, const Field& L);
// points of the normalization of the plane quintic
u64 count_points_trigonal(const TrigonalModel& m, const Field& L);
u64 count_points_howe(const HoweModel& m, const Field& L);

}  // namespace ssp
