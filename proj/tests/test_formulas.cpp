#include <doctest.h>

#include <tuple>
#include <vector>

#include "ssp/formulas.hpp"

using namespace ssp;

namespace {

bool prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// classical closed form by residue class mod 12
u64 oracle_h(u64 p) {
    if (p <= 3) return 1;
    const u64 base = p / 12;
    switch (p % 12) {
        case 1: return base;
        case 5:
        case 7: return base + 1;
        default: return base + 2;
    }
}

// Euler's criterion by repeated multiplication, for small p only
int oracle_legendre(long long a, long long p) {
    a = ((a % p) + p) % p;
    if (a == 0) return 0;
    long long r = 1;
    for (long long i = 0; i < (p - 1) / 2; ++i) r = r * a % p;
    return r == 1 ? 1 : -1;
}

// the mass formula with everything over the common denominator 14400
long long oracle_genus2_numerator(long long p) {
    long long n = 5 * (p * p * p + 24 * p * p + 141 * p - 166) - 450 * (1 - oracle_legendre(-1, p)) +
                  1800 * (1 - oracle_legendre(-2, p)) + 800 * (1 - oracle_legendre(-3, p));
    if (p % 5 == 4) n += 11520;
    return n;
}

}  // namespace

TEST_CASE("eichler_h") {
    CHECK(eichler_h(2) == 1);
    CHECK(eichler_h(3) == 1);
    CHECK(eichler_h(5) == 1);
    CHECK(eichler_h(11) == 2);
    CHECK(eichler_h(13) == 1);
    for (u64 p = 2; p <= 1999; ++p)
        if (prime(p)) CHECK(eichler_h(p) == oracle_h(p));
    CHECK_THROWS_AS(eichler_h(15), Error);
}

TEST_CASE("genus2_count") {
    CHECK(genus2_count(2) == 0);
    CHECK(genus2_count(3) == 0);
    CHECK(genus2_count(5) == 1);
    CHECK(genus2_count(7) == 1);
    CHECK(genus2_count(11) == 2);
    CHECK(genus2_count(13) == 3);
    for (u64 p = 7; p <= 1999; ++p) {
        if (!prime(p)) continue;
        CAPTURE(p);
        const long long num = oracle_genus2_numerator(static_cast<long long>(p));
        REQUIRE(num % 14400 == 0);
        CHECK(genus2_count(p) == static_cast<u64>(num / 14400));
    }
}

TEST_CASE("kronecker") {
    for (u64 p : {3ull, 5ull, 7ull, 11ull, 13ull, 101ull})
        for (i64 a = -20; a <= 20; ++a) CHECK(kronecker(a, p) == oracle_legendre(a, static_cast<long long>(p)));
    CHECK_THROWS_AS(kronecker(3, 2), Error);
}

TEST_CASE("Howe heuristic ratios") {
    CHECK(howe_heuristic(11) == Rational(1331, 1152));
    // (p, n(p), ratio) rows of the published table
    const std::vector<std::tuple<u64, u64, const char*>> table = {
        {11, 4, "3.462"},     {13, 3, "1.573"},     {17, 10, "2.345"},    {19, 4, "0.672"},
        {23, 33, "3.125"},    {29, 45, "2.126"},    {31, 59, "2.281"},    {37, 41, "0.932"},
        {41, 105, "1.755"},   {43, 79, "1.145"},    {47, 235, "2.608"},   {53, 167, "1.292"},
        {59, 259, "1.453"},   {61, 243, "1.233"},   {67, 260, "0.996"},   {71, 742, "2.388"},
        {73, 316, "0.936"},   {79, 595, "1.390"},   {83, 655, "1.320"},   {89, 863, "1.410"},
        {97, 802, "1.012"},   {101, 1207, "1.350"}, {103, 1151, "1.213"}, {107, 1237, "1.163"},
        {109, 1193, "1.061"}, {113, 1323, "1.056"}, {127, 2013, "1.132"}, {131, 2606, "1.335"},
        {137, 2430, "1.089"}, {139, 2447, "1.050"}, {149, 3082, "1.073"}, {151, 3553, "1.189"},
        {157, 3427, "1.020"}, {163, 3518, "0.936"}, {167, 6268, "1.550"}, {173, 4780, "1.064"},
        {179, 5771, "1.159"}, {181, 5419, "1.053"}, {191, 9610, "1.589"}, {193, 6298, "1.009"},
        {197, 6839, "1.030"}, {199, 8351, "1.221"},
    };
    for (const auto& [p, n, r] : table) {
        CAPTURE(p);
        CHECK(howe_ratio(n, p) == std::string(r));
    }
}

TEST_CASE("hasse_weil") {
    CHECK(hasse_weil(1, 25) == std::pair<i64, i64>{16, 36});
    CHECK(hasse_weil(2, 49) == std::pair<i64, i64>{22, 78});
    CHECK(hasse_weil(4, 121) == std::pair<i64, i64>{34, 210});
    CHECK_THROWS_AS(hasse_weil(2, 7), Error);
    // floor(4 sqrt 7) = 10
    CHECK(hasse_weil(2, 7, false) == std::pair<i64, i64>{-2, 18});
    for (u64 s = 2; s <= 60; ++s)
        for (int g = 1; g <= 5; ++g) {
            auto [lo, hi] = hasse_weil(g, s * s);
            CHECK(hi - lo == 4 * g * static_cast<i64>(s));
            CHECK(lo + hi == 2 * static_cast<i64>(s * s + 1));
        }
}
