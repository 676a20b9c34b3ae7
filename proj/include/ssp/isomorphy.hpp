#pragma once

// Isomorphism tests over F_q and over the algebraic closure, and invariant
// keys used to deduplicate genus-2 classes.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ssp/models.hpp"

namespace ssp {

// ---------------------------------------------------------------- P^1

// (x : z), normalized to (x : 1) or (1 : 0)
struct P1Pt {
    Fe x, z;
    bool is_inf() const { return z.is_zero(); }
    bool operator==(const P1Pt& o) const { return x == o.x && z == o.z; }
    bool operator<(const P1Pt& o) const;
};
P1Pt p1_normalize(const Fe& x, const Fe& z);
P1Pt p1_finite(const Fe& x);
P1Pt p1_infinity(const Field& F);

// (x : z) -> (a x + b z : c x + d z)
struct Mobius {
    Fe a, b, c, d;
    P1Pt operator()(const P1Pt& p) const;
    Mobius inverse() const;
    Mobius after(const Mobius& inner) const;  // this o inner
    Mobius normalized() const;                 // first nonzero entry 1
    bool descends_to(const Field& K) const;    // after normalization
};

// the map 0 -> p0, infinity -> p1, 1 -> p2
Mobius mobius_from_std(const P1Pt& p0, const P1Pt& p1, const P1Pt& p2);

// smallest supported degree over F_p divisible by every entry
std::optional<int> common_degree(const std::vector<int>& degrees);

// distinct roots in L of a binary form with coefficients in a subfield of L
std::vector<P1Pt> binform_roots(const BinForm& F, const Field& L);

// ---------------------------------------------------------------- hyperelliptic

struct BinIsoWitness {
    Mobius h;  // F1(h(x, z)) = mu F2(x, z)
    Fe mu;
};

// Over K the witness is defined over K and mu c2 / c1 is a square there.
std::optional<BinIsoWitness> binary_form_iso(const HyperModel& m1, const HyperModel& m2, bool closure);

// reference search over all of PGL2(K), K small
std::optional<BinIsoWitness> binary_form_iso_exhaustive(const HyperModel& m1, const HyperModel& m2);

// checks F1 o h = mu F2 and, unless closure, the twist condition over K
bool verify_bin_witness(const HyperModel& m1, const HyperModel& m2, const BinIsoWitness& w, bool closure);

struct Genus2Key {
    int kind = 0;  // number of leading invariants that vanish
    std::vector<Fe> v;
    bool operator==(const Genus2Key& o) const { return kind == o.kind && v == o.v; }
    bool operator<(const Genus2Key& o) const;
    std::string str() const;
};

// (I2, I4, I6, I10) computed from the roots, over the field of m
std::array<Fe, 4> igusa_clebsch(const HyperModel& m);
Genus2Key igusa_key(const HyperModel& m);

// ---------------------------------------------------------------- Howe triples

// C: y^2 = f1 f2 with the blocks given by the roots of the cubics f1, f2
struct HoweTriple {
    Poly f1, f2;
    std::optional<Fe> marked;  // nullopt is the point at infinity
};

struct HoweKey {
    std::vector<Fe> v;  // over F_{p^12}
    bool operator==(const HoweKey& o) const { return v == o.v; }
    bool operator<(const HoweKey& o) const { return v < o.v; }
};

HoweKey howe_key(const HoweTriple& t);
bool howe_triple_iso(const HoweTriple& t1, const HoweTriple& t2, bool closure);
HyperModel howe_curve(const HoweTriple& t);

// ---------------------------------------------------------------- genus 4 canonical

// For Dege models: after completing the cube, P = x^3 + R(y,z,w) x + S(y,z,w),
// and on the cone (y, z, w) = (s^2, s t, -t^2/2) these become binary forms.
struct DegeForms {
    BinForm R4, S6;  // index i = coefficient of s^i t^{n-i}
};
DegeForms dege_binary_forms(const CanonicalModel& m);

// closure_degree d: test over F_{q^d}; 0 means the algebraic closure
bool canonical_g4_iso(const CanonicalModel& m1, const CanonicalModel& m2, int closure_degree);

// ---------------------------------------------------------------- genus 5 trigonal

struct TrigonalWitness {
    std::vector<std::vector<Fe>> M;  // F1(M v) = lambda F2(v)
    Fe lambda;
};

std::optional<TrigonalWitness> trigonal_iso_witness(const TrigonalModel& m1, const TrigonalModel& m2,
                                                    int closure_degree);
bool trigonal_iso(const TrigonalModel& m1, const TrigonalModel& m2, int closure_degree);
// exact geometric test for node models
bool trigonal_geometric_iso(const TrigonalModel& m1, const TrigonalModel& m2);
// smallest d with an isomorphism over F_{q^d}, among supported field degrees
std::optional<int> trigonal_min_degree(const TrigonalModel& m1, const TrigonalModel& m2);

}  // namespace ssp
