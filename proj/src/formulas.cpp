#include "ssp/formulas.hpp"

#include <cmath>
#include <cstdio>

namespace ssp {

namespace {

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

u64 as_count(const Rational& r, const char* what) {
    if (r.denominator() != 1 || r.numerator() < 0) fail(ErrorKind::internal, std::string(what) + " is not a count");
    return static_cast<u64>(r.numerator());
}

}  // namespace

int kronecker(i64 a, u64 p) {
    if (p < 3 || !is_prime_u64(p)) fail(ErrorKind::argument, "kronecker needs an odd prime");
    i64 r = a % static_cast<i64>(p);
    if (r < 0) r += static_cast<i64>(p);
    if (r == 0) return 0;
    u64 acc = 1, b = static_cast<u64>(r), e = (p - 1) / 2;
    while (e) {
        if (e & 1) acc = acc * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return acc == 1 ? 1 : -1;
}

u64 eichler_h(u64 p) {
    if (!is_prime_u64(p)) fail(ErrorKind::argument, "p must be prime");
    if (p <= 3) return 1;
    const i64 P = static_cast<i64>(p);
    Rational h = Rational(P - 1, 12) + Rational(1 - kronecker(-1, p), 4) + Rational(1 - kronecker(-3, p), 3);
    return as_count(h, "eichler_h");
}

u64 genus2_count(u64 p) {
    if (!is_prime_u64(p)) fail(ErrorKind::argument, "p must be prime");
    if (p <= 3) return 0;
    if (p == 5) return 1;
    const i64 P = static_cast<i64>(p);
    Rational n = Rational(P * P * P + 24 * P * P + 141 * P - 166, 2880) - Rational(1 - kronecker(-1, p), 32) +
                 Rational(1 - kronecker(-2, p), 8) + Rational(1 - kronecker(-3, p), 18);
    if (p % 5 == 4) n += Rational(4, 5);
    return as_count(n, "genus2_count");
}

Rational howe_heuristic(u64 p) {
    const i64 P = static_cast<i64>(p);
    return Rational(P * P * P, 1152);
}

std::string howe_ratio(u64 n, u64 p) {
    Rational r = Rational(static_cast<i64>(n)) / howe_heuristic(p);
    // round half up at the third decimal
    i64 scaled = (r.numerator() * 2000 + r.denominator()) / (2 * r.denominator());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%lld.%03lld", static_cast<long long>(scaled / 1000),
                  static_cast<long long>(scaled % 1000));
    return buf;
}

std::pair<i64, i64> hasse_weil(int g, u64 q, bool exact) {
    if (g < 0) fail(ErrorKind::argument, "negative genus");
    u64 s = isqrt(q);
    i64 w;
    if (s * s == q) {
        w = 2 * g * static_cast<i64>(s);
    } else {
        if (exact) fail(ErrorKind::argument, "exact Hasse-Weil bound needs a square q");
        w = static_cast<i64>(std::floor(2.0L * g * std::sqrt(static_cast<long double>(q))));
    }
    const i64 Q = static_cast<i64>(q);
    return {Q + 1 - w, Q + 1 + w};
}

}  // namespace ssp
