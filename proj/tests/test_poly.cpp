#include "doctest.h"

#include "ssp/poly.hpp"

using namespace ssp;

namespace {

Poly random_poly(const Field& F, size_t deg, Rng& rng, bool monic = false) {
    std::vector<Fe> c;
    for (size_t i = 0; i <= deg; ++i) c.push_back(F.random(rng));
    if (monic) c.back() = F.one();
    else if (c.back().is_zero()) c.back() = F.one();
    return Poly(F, c);
}

// schoolbook power used only as an oracle
Poly naive_pow(const Poly& f, u64 m) {
    Poly r = Poly::constant(f.field().one());
    for (u64 i = 0; i < m; ++i) r = r * f;
    return r;
}

}  // namespace

TEST_CASE("products and powers") {
    const Field& F5 = Field::get(5);
    Poly x1 = Poly::from_ints(F5, {1, 1});
    CHECK(pow(x1, 2) == Poly::from_ints(F5, {1, 2, 1}));
    Poly f = Poly::from_ints(F5, {0, -1, 0, 0, 0, 1});
    CHECK(pow(f, 2) == Poly::from_ints(F5, {0, 0, 1, 0, 0, 0, 3, 0, 0, 0, 1}));
    CHECK_FALSE(Poly(F5).degree().has_value());

    Rng rng(1);
    const Field& F = Field::get(11, 2);
    for (int i = 0; i < 50; ++i) {
        Poly g = random_poly(F, 1 + rng() % 6, rng);
        u64 m = rng() % 9;
        Poly h = pow(g, m);
        REQUIRE(*h.degree() == m * *g.degree());
        REQUIRE(h == naive_pow(g, m));
    }
    CHECK_THROWS_AS(x1 * Poly::x(Field::get(7)), Error);
}

TEST_CASE("targeted coefficients") {
    const Field& F5 = Field::get(5);
    for (i64 b = 0; b < 5; ++b) {
        Poly f = Poly::from_ints(F5, {-b, 1, 0, -b, 1});
        auto t = targeted_power_coeffs(f, 2, {4}, false);
        REQUIRE(t.values.size() == 1);
        CHECK(t.values[0] == F5.from_int(b));
    }
    Poly g = Poly::from_ints(F5, {0, -1, 0, 0, 0, 1});
    auto t = targeted_power_coeffs(g, 2, {3, 4, 8, 9}, true);
    CHECK_FALSE(t.aborted);
    for (auto& v : t.values) CHECK(v.is_zero());

    auto big = targeted_power_coeffs(g, 2, {100}, false);
    CHECK(big.values[0].is_zero());
}

TEST_CASE("targeted agrees with full power on every small polynomial over F_5") {
    const Field& F5 = Field::get(5);
    // all polynomials of degree <= 6 with nonzero constant or not, 5^7 of them
    std::vector<size_t> targets;
    for (size_t i = 0; i <= 18; i += 1) targets.push_back(i);
    for (u64 code = 0; code < 78125; ++code) {
        std::vector<i64> cs(7);
        u64 c = code;
        for (int i = 0; i < 7; ++i) {
            cs[i] = c % 5;
            c /= 5;
        }
        Poly f = Poly::from_ints(F5, cs);
        if (f.is_zero()) continue;
        u64 m = 1 + code % 3;
        Poly full = naive_pow(f, m);
        auto t = targeted_power_coeffs(f, m, targets, false);
        for (size_t i = 0; i < targets.size(); ++i) REQUIRE(t.values[i] == full.coeff(targets[i]));
        auto e = targeted_power_coeffs(f, m, targets, true);
        size_t first = targets.size();
        for (size_t i = 0; i < targets.size(); ++i)
            if (!full.coeff(targets[i]).is_zero()) {
                first = i;
                break;
            }
        REQUIRE(e.aborted == (first < targets.size()));
        if (e.aborted) REQUIRE(e.abort_at == first);
    }
}

TEST_CASE("targeted on random larger cases") {
    Rng rng(2);
    for (u32 p : {7u, 11u, 13u, 17u}) {
        const Field& F = Field::get(p, 2);
        for (int i = 0; i < 50; ++i) {
            Poly f = random_poly(F, 3 + rng() % 8, rng);
            if (rng() % 3 == 0) f = f.shift(rng() % 3);
            u64 m = 1 + rng() % p;
            Poly full = pow(f, m);
            std::vector<size_t> tg;
            for (size_t t = 0; t <= full.deg_or_zero() + 2; t += 1 + rng() % 3) tg.push_back(t);
            auto r = targeted_power_coeffs(f, m, tg, false);
            for (size_t j = 0; j < tg.size(); ++j) REQUIRE(r.values[j] == full.coeff(tg[j]));
        }
    }
}

TEST_CASE("gcd and separability") {
    const Field& F7 = Field::get(7);
    CHECK(gcd(Poly::from_ints(F7, {-1, 0, 1}), Poly::from_ints(F7, {-1, 1})) == Poly::from_ints(F7, {-1, 1}));
    const Field& F5 = Field::get(5);
    CHECK(is_separable(Poly::from_ints(F5, {0, -1, 0, 0, 0, 1})));
    Poly sq = Poly::from_roots(F7, {F7.one(), F7.one(), -F7.one()});
    CHECK_FALSE(is_separable(sq));
    CHECK(gcd(Poly(F7), Poly(F7)).is_zero());
}

TEST_CASE("factorization") {
    CHECK(is_irreducible(Poly::from_ints(Field::get(7), {1, 0, 1})));
    CHECK(is_irreducible(Poly::from_ints(Field::get(5), {-2, 0, 1})));
    CHECK_FALSE(is_irreducible(Poly::from_ints(Field::get(5), {1, 0, 1})));

    Rng rng(4);
    const Field& F = Field::get(11, 2);
    for (int i = 0; i < 100; ++i) {
        Poly f = random_poly(F, 6, rng, true);
        if (i % 4 == 0) f = f * random_poly(F, 1, rng, true);  // repeated factors sometimes
        auto fs = factor(f, i);
        Poly r = Poly::constant(f.lead());
        for (const auto& fa : fs) {
            REQUIRE(is_irreducible(fa.f));
            REQUIRE(fa.f.lead().is_one());
            r = r * pow(fa.f, fa.mult);
        }
        REQUIRE(r == f);
        // order is deterministic regardless of seed
        auto fs2 = factor(f, i + 1000);
        REQUIRE(fs.size() == fs2.size());
        for (size_t j = 0; j < fs.size(); ++j) REQUIRE(fs[j].f == fs2[j].f);
    }
}

TEST_CASE("roots and splitting degree") {
    const Field& F = Field::get(11, 2);
    Rng rng(8);
    for (int i = 0; i < 30; ++i) {
        std::vector<Fe> rs;
        for (int j = 0; j < 4; ++j) rs.push_back(F.random(rng));
        Poly f = Poly::from_roots(F, rs) * Poly::from_ints(F, {1, 0, 1});
        auto got = roots(f);
        for (const Fe& r : rs) CHECK(std::find(got.begin(), got.end(), r) != got.end());
        for (const Fe& r : got) CHECK(f(r).is_zero());
    }
    // 3 is not a cube mod 7, so the roots of x^3 - 3 live in F_{7^3}
    const Field& F7 = Field::get(7);
    CHECK(splitting_degree(Poly::from_ints(F7, {-3, 0, 0, 1})) == 6);
    CHECK(splitting_degree(Poly::from_ints(F7, {1, 0, 1})) == 2);
    CHECK(splitting_degree(Poly::from_ints(F7, {-1, 0, 1})) == 1);
}

TEST_CASE("binary form substitution matches polynomial composition") {
    const Field& F = Field::get(7, 2);
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        Poly f = random_poly(F, 6, rng);
        Fe b = F.random(rng);
        BinForm B = binform_from_poly(f, 6);
        BinForm S = binform_subst(B, F.one(), b, F.zero(), F.one());
        REQUIRE(S == binform_from_poly(f.compose_affine(F.one(), b), 6));
    }
}
