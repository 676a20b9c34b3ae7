#pragma once

// Buchberger's algorithm for ideals in at most 3 variables over small fields
// (q <= 256), grevlex order, table arithmetic.

#include <array>
#include <cstdint>
#include <vector>

#include "ssp/field.hpp"

namespace ssp {

class SmallField {
public:
    static const SmallField& get(const Field& F);

    u32 q() const { return q_; }
    const Field& field() const { return *F_; }
    std::uint16_t add(std::uint16_t a, std::uint16_t b) const { return add_[a * q_ + b]; }
    std::uint16_t mul(std::uint16_t a, std::uint16_t b) const { return mul_[a * q_ + b]; }
    std::uint16_t neg(std::uint16_t a) const { return neg_[a]; }
    std::uint16_t sub(std::uint16_t a, std::uint16_t b) const { return add(a, neg(b)); }
    std::uint16_t inv(std::uint16_t a) const;
    // labels are element codes with 1 and the code of one() swapped, so label 1 is the unit
    std::uint16_t from(const Fe& x) const { return relabel(static_cast<std::uint16_t>(x.code())); }
    Fe to(std::uint16_t a) const { return F_->from_code(relabel(a)); }

    explicit SmallField(const Field& F);

private:
    std::uint16_t relabel(std::uint16_t a) const { return a == 1 ? one_ : a == one_ ? 1 : a; }
    const Field* F_;
    u32 q_;
    std::uint16_t one_;
    std::vector<std::uint16_t> add_, mul_, neg_, inv_;
};

struct Exp {
    std::array<std::uint8_t, 3> e{};
    int deg() const { return e[0] + e[1] + e[2]; }
    // grevlex as an integer key
    u32 key() const {
        return (static_cast<u32>(deg()) << 24) | (static_cast<u32>(255 - e[2]) << 16) |
               (static_cast<u32>(255 - e[1]) << 8) | e[0];
    }
    bool operator==(const Exp& o) const { return e == o.e; }
};

struct Term {
    Exp m;
    std::uint16_t c;
};

// terms sorted by decreasing grevlex key, no zero coefficients
struct MPoly {
    std::vector<Term> t;
    bool is_zero() const { return t.empty(); }
    bool is_constant() const { return t.size() == 1 && t[0].m.deg() == 0; }
    const Exp& lm() const { return t.front().m; }
};

MPoly mpoly_normalize(const SmallField& K, std::vector<Term> terms);
MPoly mpoly_add(const SmallField& K, const MPoly& a, const MPoly& b);
MPoly mpoly_scale_shift(const SmallField& K, const MPoly& a, std::uint16_t c, const Exp& m);

struct GroebnerLimits {
    size_t max_basis = 4000;
    int max_degree = 48;
    size_t max_pairs = 200000;
};

struct GroebnerIdeal {
    const SmallField* K = nullptr;
    int nvars = 3;
    std::vector<MPoly> gens;
};

// reduced, monic Groebner basis; throws overload-error past the limits
GroebnerIdeal buchberger(const GroebnerIdeal& I, const GroebnerLimits& lim = {});
MPoly normal_form(const SmallField& K, const MPoly& f, const std::vector<MPoly>& G);
bool contains_one(const GroebnerIdeal& basis);
// every S-polynomial reduces to zero
bool satisfies_buchberger_criterion(const GroebnerIdeal& basis);

}  // namespace ssp
