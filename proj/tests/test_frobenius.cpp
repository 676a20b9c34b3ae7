#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ssp/frobenius.hpp"

using namespace ssp;

namespace {

Mono mo(int a, int b, int c, int d = 0) {
    return Mono{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c),
                static_cast<std::uint8_t>(d)};
}

Form form(const Field& F, int n, const std::vector<std::pair<Mono, i64>>& t) { return Form::from_terms(F, n, t); }

bool all_zero(const FrobeniusMatrix& m) {
    for (auto& r : m.M)
        for (auto& x : r)
            if (!x.is_zero()) return false;
    return true;
}

// naive sparse power over F_p with integer coefficients
oracle::IForm ipow(const oracle::IForm& f, int m, oracle::i64 p) {
    oracle::IForm r{{oracle::Exps(f.begin()->first.size(), 0), 1}};
    for (int s = 0; s < m; ++s) {
        oracle::IForm n;
        for (auto& [a, ca] : r)
            for (auto& [b, cb] : f) {
                oracle::Exps e(a.size());
                for (size_t i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
                n[e] = (n[e] + ca * cb) % p;
            }
        r.clear();
        for (auto& [e, c] : n)
            if (c) r[e] = c;
    }
    return r;
}

oracle::IForm to_iform(const Form& f) {
    oracle::IForm r;
    for (const auto& [m, c] : f.terms()) {
        oracle::Exps e(m.begin(), m.begin() + f.nvars());
        r[e] = static_cast<oracle::i64>(c.code());
    }
    return r;
}

Form random_form(const Field& K, int n, int d, std::mt19937_64& rng, int density = 10) {
    Form F(K, n, d);
    for (const Mono& m : MonoIndex::get(n, d).monos())
        if (static_cast<int>(rng() % 10) < density) F.add_term(m, K.from_code(rng() % K.order()));
    return F;
}

}  // namespace

TEST_CASE("Cartier-Manin examples") {
    const Field& F5 = Field::get(5, 1);
    HyperModel h{F5.one(), Poly::from_ints(F5, {0, -1, 0, 0, 0, 1}), 2};
    auto M = cm_hyperelliptic(h);
    CHECK_FALSE(M.aborted);
    CHECK(M.is_zero());
    CHECK(M.provenance.size() == 4);
    std::vector<int> ts;
    for (auto& e : M.provenance) ts.push_back(e.target[0]);
    CHECK(ts == std::vector<int>{3, 4, 8, 9});

    HyperModel e1{F5.one(), Poly::from_ints(F5, {1, 1, 0, 1}), 1};
    auto M1 = cm_hyperelliptic(e1);
    CHECK(M1.M[0][0].code() == 2);
    CHECK(cm_hyperelliptic(e1, true).aborted);

    CHECK(is_supersingular_elliptic({F5.zero(), F5.one()}));
    CHECK_FALSE(is_supersingular_elliptic({F5.one(), F5.one()}));
    const Field& F7 = Field::get(7, 1);
    CHECK(is_supersingular_elliptic({F7.one(), F7.zero()}));
}

TEST_CASE("early abort agrees with the full matrix on all F_5 curves of genus <= 2") {
    const Field& F5 = Field::get(5, 1);
    for (int g = 1; g <= 2; ++g) {
        int n = 2 * g + 3;  // coefficients of a degree 2g+2 polynomial
        u64 total = 1;
        for (int i = 0; i < n; ++i) total *= 5;
        u64 zeros = 0;
        for (u64 code = 0; code < total; ++code) {
            std::vector<i64> c(n);
            u64 t = code;
            for (int i = 0; i < n; ++i) {
                c[i] = static_cast<i64>(t % 5);
                t /= 5;
            }
            Poly f = Poly::from_ints(F5, c);
            if (f.deg_or_zero() < static_cast<size_t>(2 * g + 1) || !is_separable(f)) continue;
            HyperModel h{F5.one(), f, g};
            auto full = cm_hyperelliptic(h);
            bool z = all_zero(full);
            CHECK(hyper_cm_vanishes(h) == z);
            // the twist by a non-square has the same pattern
            HyperModel tw{F5.from_int(2), f, g};
            CHECK(cm_hyperelliptic(tw).M == full.M);
            zeros += z;
        }
        CHECK(zeros > 0);
    }
}

TEST_CASE("Cartier-Manin matrix vs naive expansion and translation covariance") {
    std::mt19937_64 rng(99);
    for (u32 p : {7u, 11u, 13u}) {
        const Field& K = Field::get(p, 2);
        int found_ss = 0;
        for (int it = 0; it < 40; ++it) {
            int g = 2 + static_cast<int>(rng() % 3);
            std::vector<Fe> c(2 * g + 3);
            for (auto& x : c) x = K.from_code(rng() % K.order());
            c.back() = K.one();
            Poly f(K, c);
            if (!is_separable(f)) continue;
            HyperModel h{K.one(), f, g};
            auto M = cm_hyperelliptic(h);
            Poly fm = pow(f, (p - 1) / 2);
            for (int i = 1; i <= g; ++i)
                for (int j = 1; j <= g; ++j) CHECK(M.M[i - 1][j - 1] == fm.coeff(p * i - j));
            Fe t = K.from_code(rng() % K.order());
            HyperModel sh{K.one(), f.compose_affine(K.one(), t), g};
            CHECK(all_zero(cm_hyperelliptic(sh)) == all_zero(M));
            found_ss += all_zero(M);
        }
        (void)found_ss;
    }
    // a supersingular example survives translation
    const Field& F5 = Field::get(5, 1);
    Poly f = Poly::from_ints(F5, {0, -1, 0, 0, 0, 1});
    for (i64 t = 0; t < 5; ++t) {
        HyperModel sh{F5.one(), f.compose_affine(F5.one(), F5.from_int(t)), 2};
        CHECK(cm_hyperelliptic(sh).is_zero());
    }
}

TEST_CASE("genus-4 targets and the superspecial Dege example") {
    for (u32 p : {5u, 7u, 11u}) {
        auto ts = canonical_targets(p);
        REQUIRE(ts.size() == 16);
        for (auto& t : ts) CHECK(mono_deg(t) == static_cast<int>(5 * p - 5));
        CHECK(std::is_sorted(ts.begin(), ts.end()));
        auto tt = trigonal_targets(p);
        REQUIRE(tt.size() == 25);
        for (auto& t : tt) CHECK(mono_deg(t) == static_cast<int>(5 * p - 5));
    }
    const Field& F25 = Field::get(5, 2);
    CanonicalModel m{QType::Dege, form(F25, 4, {{mo(3, 0, 0, 0), 1}, {mo(0, 3, 0, 0), 1}, {mo(0, 0, 0, 3), 1}})};
    auto M = hw_canonical_g4(m);
    CHECK_FALSE(M.aborted);
    CHECK(M.is_zero());
    CHECK(M.provenance.size() == 16);
    CHECK(canonical_hw_vanishes(m));
}

TEST_CASE("Hasse-Witt entries match a naive expansion") {
    std::mt19937_64 rng(5);
    const Field& F5 = Field::get(5, 1);
    for (int it = 0; it < 15; ++it) {
        CanonicalModel m{static_cast<QType>(it % 3), random_form(F5, 4, 3, rng, 4)};
        if (m.P.is_zero()) continue;
        auto M = hw_canonical_g4(m);
        auto big = ipow(to_iform(m.Q() * m.P), 4, 5);
        for (auto& e : M.provenance) {
            oracle::Exps t(e.target.begin(), e.target.end());
            i64 want = big.count(t) ? big[t] : 0;
            CHECK(static_cast<i64>(M.M[e.row][e.col].code()) == want);
        }
    }
    const Field& F7 = Field::get(7, 1);
    for (int it = 0; it < 10; ++it) {
        TrigonalModel m{TriCase::SplitNode, random_form(F7, 3, 5, rng, 5)};
        if (m.F.is_zero()) continue;
        auto M = hw_trigonal_g5(m);
        auto big = ipow(to_iform(m.F), 6, 7);
        for (auto& e : M.provenance) {
            oracle::Exps t(e.target.begin(), e.target.begin() + 3);
            i64 want = big.count(t) ? big[t] : 0;
            CHECK(static_cast<i64>(M.M[e.row][e.col].code()) == want);
        }
    }
}

TEST_CASE("superspecial trigonal representatives over F_11") {
    const Field& F11 = Field::get(11, 1);
    TrigonalModel f1{TriCase::SplitNode, form(F11, 3, {{mo(1, 1, 3), 1}, {mo(5, 0, 0), 1}, {mo(0, 5, 0), 1}})};
    CHECK(hw_trigonal_g5(f1).is_zero());
    TrigonalModel f4{TriCase::NonSplitNode,
                     form(F11, 3, {{mo(2, 0, 3), 1}, {mo(0, 2, 3), -2}, {mo(5, 0, 0), 1}, {mo(3, 2, 0), 9}, {mo(1, 4, 0), 9}})};
    CHECK(hw_trigonal_g5(f4).is_zero());
    CHECK(trigonal_hw_vanishes(f4));
}

TEST_CASE("early abort agrees with the full matrix on random forms") {
    std::mt19937_64 rng(11);
    const Field& F5 = Field::get(5, 1);
    const Field& F11 = Field::get(11, 1);
    for (int it = 0; it < 1000; ++it) {
        CanonicalModel m{static_cast<QType>(it % 3), random_form(F5, 4, 3, rng, 2 + it % 7)};
        if (m.P.is_zero()) continue;
        CHECK(canonical_hw_vanishes(m) == hw_canonical_g4(m).is_zero());
    }
    for (int it = 0; it < 1000; ++it) {
        TrigonalModel m{TriCase::SplitNode, random_form(F11, 3, 5, rng, 1 + it % 5)};
        if (m.F.is_zero()) continue;
        auto full = hw_trigonal_g5(m);
        auto ab = hw_trigonal_g5(m, true);
        CHECK(ab.aborted != full.is_zero());
        if (ab.aborted) {
            // aborted at the first nonzero entry in evaluation order
            auto& last = ab.provenance.back();
            CHECK_FALSE(full.M[last.row][last.col].is_zero());
            for (size_t i = 0; i + 1 < ab.provenance.size(); ++i)
                CHECK(full.M[ab.provenance[i].row][ab.provenance[i].col].is_zero());
        }
    }
}

TEST_CASE("no superspecial smooth canonical curves among random F_49 models") {
    std::mt19937_64 rng(49);
    const Field& F49 = Field::get(7, 2);
    int tested = 0;
    while (tested < 15) {
        CanonicalModel m{static_cast<QType>(rng() % 3), random_form(F49, 4, 3, rng)};
        if (check_canonical(m)) continue;
        ++tested;
        CHECK_FALSE(canonical_hw_vanishes(m));
    }
}

TEST_CASE("no superspecial reduced trigonal forms in a sample over F_13") {
    std::mt19937_64 rng(13);
    const Field& F13 = Field::get(13, 1);
    for (const auto& box : gen_trigonal_reduced(F13)) {
        int tested = 0;
        while (tested < 5) {
            auto m = box.at(rng() % box.size());
            if (check_trigonal(std::get<TrigonalModel>(m))) continue;
            ++tested;
            CHECK_FALSE(trigonal_hw_vanishes(std::get<TrigonalModel>(m)));
        }
    }
}

TEST_CASE("shifted power root polynomial") {
    const Field& F5 = Field::get(5, 1);
    Poly B = shifted_power_root_poly(Poly::from_ints(F5, {1, 0, 0, 1}));
    CHECK(B == Poly::from_ints(F5, {0, 1}));

    std::mt19937_64 rng(3);
    const Field& K = Field::get(11, 2);
    for (int it = 0; it < 8; ++it) {
        std::vector<Fe> c{K.from_code(rng() % 121), K.from_code(rng() % 121), K.from_code(rng() % 121), K.one()};
        Poly f(K, c);
        if (!is_separable(f)) continue;
        Poly Bf = shifted_power_root_poly(f);
        CHECK(Bf.deg_or_zero() <= 5);
        std::vector<Fe> direct;
        for (const Fe& b : all_elements(K)) {
            Poly g = Poly::from_roots(K, {b}) * f;
            Poly g5 = pow(g, 5);
            if (g5.coeff(10).is_zero()) direct.push_back(b);
        }
        std::vector<Fe> rts = Bf.is_zero() ? all_elements(K) : roots(Bf);
        CHECK(rts == direct);
    }
}

TEST_CASE("point counts agree with direct enumeration") {
    std::mt19937_64 rng(17);
    for (u32 p : {5u, 7u}) {
        const Field& K = Field::get(p, 1);
        const Field& L = Field::get(p, 2);
        oracle::GF G(p, 2);
        for (int it = 0; it < 10; ++it) {
            int g = 1 + static_cast<int>(rng() % 2);
            int deg = 2 * g + 1 + static_cast<int>(rng() % 2);
            std::vector<i64> c(deg + 1);
            for (auto& x : c) x = static_cast<i64>(rng() % p);
            c[deg] = 1 + static_cast<i64>(rng() % (p - 1));
            Poly f = Poly::from_ints(K, c);
            if (!is_separable(f)) continue;
            i64 cc = 1 + static_cast<i64>(rng() % (p - 1));
            HyperModel h{K.from_int(cc), f, g};
            // affine solutions of cc y^2 = f(x) plus points at infinity
            u64 n = 0;
            for (oracle::i64 xc = 0; xc < G.q; ++xc) {
                auto x = G.elem(xc);
                oracle::GF::E fx = G.zero();
                for (int i = deg; i >= 0; --i) fx = G.add(G.mul(fx, x), G.from(c[i]));
                for (oracle::i64 yc = 0; yc < G.q; ++yc) {
                    auto y = G.elem(yc);
                    auto lhs = G.mul(G.from(cc), G.mul(y, y));
                    if (lhs == fx) ++n;
                }
            }
            if (deg % 2) n += 1;
            else n += G.is_square(G.from(cc * c[deg])) ? 2 : 0;
            CHECK(count_points_hyper(h, L) == n);
        }
    }

    // canonical curves over F_5 against a scan of P^3
    const Field& F5 = Field::get(5, 1);
    oracle::GF G5(5, 1);
    int done = 0;
    while (done < 10) {
        CanonicalModel m{static_cast<QType>(rng() % 3), random_form(F5, 4, 3, rng)};
        if (check_canonical(m)) continue;
        ++done;
        auto Q = to_iform(m.Q()), P = to_iform(m.P);
        u64 n = 0;
        oracle::for_each_projective(G5, 4, [&](const std::vector<oracle::GF::E>& v) {
            if (G5.is_zero(oracle::eval(G5, Q, v)) && G5.is_zero(oracle::eval(G5, P, v))) ++n;
        });
        CHECK(count_points_canonical(m, F5) == n);
    }

    // trigonal F1 over F_11: plane points, the node replaced by two branches
    const Field& F11 = Field::get(11, 1);
    TrigonalModel f1{TriCase::SplitNode, form(F11, 3, {{mo(1, 1, 3), 1}, {mo(5, 0, 0), 1}, {mo(0, 5, 0), 1}})};
    oracle::GF G11(11, 1);
    auto I = to_iform(f1.F);
    u64 n = 0;
    oracle::for_each_projective(G11, 3, [&](const std::vector<oracle::GF::E>& v) {
        if (G11.is_zero(oracle::eval(G11, I, v))) ++n;
    });
    CHECK(count_points_trigonal(f1, F11) == n + 1);
}

TEST_CASE("superspecial curves have point counts with trace divisible by p") {
    const Field& F25 = Field::get(5, 2);
    HyperModel h{Field::get(5, 1).one(), Poly::from_ints(Field::get(5, 1), {0, -1, 0, 0, 0, 1}), 2};
    u64 n = count_points_hyper(h, F25);
    i64 t = 26 - static_cast<i64>(n);
    CHECK(t % 5 == 0);
    CHECK(std::abs(t) <= 2 * 2 * 5);
    const Field& F121 = Field::get(11, 2);
    TrigonalModel f1{TriCase::SplitNode,
                     form(Field::get(11, 1), 3, {{mo(1, 1, 3), 1}, {mo(5, 0, 0), 1}, {mo(0, 5, 0), 1}})};
    i64 t1 = 122 - static_cast<i64>(count_points_trigonal(f1, F121));
    CHECK(t1 % 11 == 0);
    CHECK(std::abs(t1) <= 2 * 5 * 11);
}
