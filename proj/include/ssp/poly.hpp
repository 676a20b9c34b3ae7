#pragma once

// Dense univariate polynomials over a Field, lowest degree first.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssp/field.hpp"

namespace ssp {

class Poly {
public:
    Poly() = default;
    explicit Poly(const Field& F) : F_(&F) {}
    Poly(const Field& F, std::vector<Fe> coeffs);

    static Poly constant(const Fe& a);
    static Poly x(const Field& F);
    static Poly monomial(const Fe& a, size_t n);
    static Poly from_ints(const Field& F, const std::vector<i64>& cs);
    static Poly from_roots(const Field& F, const std::vector<Fe>& roots);

    const Field& field() const { return *F_; }
    const std::vector<Fe>& coeffs() const { return c_; }

    // nullopt stands for deg 0 = -infinity
    std::optional<size_t> degree() const {
        if (c_.empty()) return std::nullopt;
        return c_.size() - 1;
    }
    size_t deg_or_zero() const { return c_.empty() ? 0 : c_.size() - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    Fe coeff(size_t i) const { return i < c_.size() ? c_[i] : F_->zero(); }
    Fe lead() const;
    size_t valuation() const;

    Fe operator()(const Fe& x) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Fe& s) const;
    bool operator==(const Poly& o) const { return F_ == o.F_ && c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }
    bool operator<(const Poly& o) const;  // degree, then coefficients low first

    Poly monic() const;
    Poly derivative() const;
    Poly shift(size_t n) const;           // times x^n
    Poly truncate(size_t n) const;        // mod x^n
    Poly map_to(const Field& G) const;    // embed coefficients
    std::optional<Poly> descend(const Field& sub) const;
    Poly frob_coeffs() const;             // sigma on every coefficient
    Poly compose_affine(const Fe& a, const Fe& b) const;  // f(a x + b)

    std::string str() const;

private:
    void trim();
    const Field* F_ = nullptr;
    std::vector<Fe> c_;
};

Poly pow(const Poly& f, u64 m);
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);  // monic, gcd(0,0) = 0
bool is_separable(const Poly& f);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Poly& a, u64 e, const Poly& m);
Poly frobmod(const Poly& a, const Poly& m);  // a^p mod m

struct Factor {
    Poly f;
    int mult;
};

std::vector<Factor> squarefree(const Poly& f);
std::vector<Factor> factor(const Poly& f, u64 seed = 0);
bool is_irreducible(const Poly& f);
std::vector<Fe> roots(const Poly& f, u64 seed = 0);  // distinct, sorted

// smallest supported extension degree of F_p containing all roots of f
int splitting_degree(const Poly& f, u64 seed = 0);

struct Targeted {
    bool aborted = false;
    size_t abort_at = 0;     // index into targets
    std::vector<Fe> values;  // filled when not aborted
};

// Coefficients of x^t in f^m for ascending targets t.
Targeted targeted_power_coeffs(const Poly& f, u64 m, const std::vector<size_t>& targets, bool early_abort);

// Homogeneous binary forms are kept as coefficient vectors of fixed degree n
// (index i = coefficient of x^i z^{n-i}).
using BinForm = std::vector<Fe>;
BinForm binform_from_poly(const Poly& f, size_t n);
// F(a x + b z, c x + d z)
BinForm binform_subst(const BinForm& F, const Fe& a, const Fe& b, const Fe& c, const Fe& d);

}  // namespace ssp
