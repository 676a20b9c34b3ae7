#pragma once

// Finite fields F_p and F_{p^k} as quotient rings F_p[t]/(m(t)).
// Contexts live in a process-wide registry; elements carry a pointer to theirs.

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ssp/error.hpp"

namespace ssp {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr int kMaxExt = 12;

using Rng = std::mt19937_64;

struct Barrett {
    u32 p = 0;
    u64 m = 0;  // floor(2^64 / p)

    Barrett() = default;
    explicit Barrett(u32 p_) : p(p_), m(~u64(0) / p_) {}

    u32 reduce(u64 x) const {
        u64 q = static_cast<u64>((static_cast<u128>(x) * m) >> 64);
        u64 r = x - q * p;
        return r >= p ? static_cast<u32>(r - p) : static_cast<u32>(r);
    }
    u32 mul(u32 a, u32 b) const { return reduce(static_cast<u64>(a) * b); }
    u32 add(u32 a, u32 b) const {
        u32 s = a + b;
        return s >= p ? s - p : s;
    }
    u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + p - b; }
    u32 neg(u32 a) const { return a ? p - a : 0; }
};

bool is_prime_u64(u64 n);
std::vector<u64> prime_factors(u64 n);  // distinct, ascending

class Field;

struct Fe {
    const Field* F = nullptr;
    std::array<u32, kMaxExt> c{};

    bool is_zero() const;
    bool is_one() const;
    bool in_prime_field() const;

    Fe operator+(const Fe& o) const;
    Fe operator-(const Fe& o) const;
    Fe operator-() const;
    Fe operator*(const Fe& o) const;
    Fe operator/(const Fe& o) const;
    Fe& operator+=(const Fe& o) { return *this = *this + o; }
    Fe& operator-=(const Fe& o) { return *this = *this - o; }
    Fe& operator*=(const Fe& o) { return *this = *this * o; }
    bool operator==(const Fe& o) const { return F == o.F && c == o.c; }
    bool operator!=(const Fe& o) const { return !(*this == o); }
    // lexicographic on (c0, c1, ...)
    bool operator<(const Fe& o) const { return c < o.c; }

    Fe inv() const;
    Fe pow(u64 e) const;
    Fe frob() const;  // x -> x^p
    Fe scale(u32 s) const;

    u64 code() const;  // c0 p^{k-1} + c1 p^{k-2} + ... (lex order)
    std::string str() const;
};

class Field {
public:
    static const Field& get(u32 p, int k = 1);

    u32 p() const { return p_; }
    int k() const { return k_; }
    const Barrett& bar() const { return bar_; }
    const std::vector<u32>& modulus() const { return mod_; }  // monic, low first
    u32 eps() const { return eps_; }
    bool order_fits() const { return order_fits_; }
    u64 order() const;  // p^k, requires order_fits()

    Fe zero() const;
    Fe one() const;
    Fe from_int(i64 v) const;
    Fe from_coeffs(const std::vector<u32>& cs) const;
    Fe gen() const;  // the class of t
    Fe from_code(u64 code) const;
    Fe random(Rng& rng) const;

    // F_{p^2} sits inside every even-degree field as F_p(sqrt eps).
    const Fe& sqrt_eps() const;
    Fe embed(const Fe& x) const;                // from F_p or F_{p^2}
    std::optional<Fe> descend(const Fe& x, const Field& sub) const;

    // multiplicative structure
    u32 norm(const Fe& x) const;  // to F_p
    int legendre(const Fe& x) const;  // -1, 0, 1
    bool is_square(const Fe& x) const { return legendre(x) >= 0; }
    std::optional<Fe> sqrt(const Fe& x) const;
    const Fe& zeta() const;  // least primitive element (lex), requires order_fits()
    u64 mult_order(const Fe& x) const;
    std::optional<u64> dlog(const Fe& x) const;  // base zeta; nullopt for x = 0

    // prime-field helpers
    u32 inv_p(u32 a) const;
    u32 pow_p(u32 a, u64 e) const;
    int legendre_p(u32 a) const;

    const std::vector<std::array<u32, kMaxExt>>& frob_matrix() const { return frob_; }

    std::string name() const;

    Field(u32 p, int k);
    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

private:
    void find_modulus();
    void build_frobenius();
    void find_sqrt_eps();
    void find_zeta() const;

    u32 p_;
    int k_;
    Barrett bar_;
    std::vector<u32> mod_;
    u32 eps_ = 0;
    bool order_fits_ = false;
    u64 order_ = 0;
    std::vector<std::array<u32, kMaxExt>> frob_;  // frob_[j] = t^{jp}
    Fe sqrt_eps_;
    mutable std::once_flag zeta_once_;
    mutable Fe zeta_;
    mutable std::vector<u64> order_factors_;
};

inline Fe operator*(i64 s, const Fe& x) { return x.F->from_int(s) * x; }

// elements of a field with order_fits(), in code order
std::vector<Fe> all_elements(const Field& F);

}  // namespace ssp
