#include "doctest.h"

#include "ssp/form.hpp"

using namespace ssp;

namespace {

Form naive_pow(const Form& f, u64 m) {
    Form r(f.field(), f.nvars(), 0);
    r.add_term(Mono{}, f.field().one());
    for (u64 i = 0; i < m; ++i) r = r * f;
    return r;
}

Form random_form(const Field& F, int n, int d, Rng& rng, int terms) {
    const MonoIndex& I = MonoIndex::get(n, d);
    Form f(F, n, d);
    for (int t = 0; t < terms; ++t) f.add_term(I.mono(rng() % I.size()), F.random(rng));
    return f;
}

}  // namespace

TEST_CASE("small targeted form powers") {
    const Field& F5 = Field::get(5);
    Form f = Form::from_terms(F5, 3, {{{1, 0, 0, 0}, 1}, {{0, 1, 0, 0}, 1}});
    auto r = form_pow_targeted(f, 2, {{1, 1, 0, 0}}, false);
    CHECK(r.values[0] == F5.from_int(2));
    CHECK_THROWS_AS(form_pow_targeted(f, 2, {{1, 0, 0, 0}}, false), Error);
    CHECK_THROWS_AS(form_pow_targeted(f, 2, {{0, 0, 0, 2}}, false), Error);
}

TEST_CASE("monomial index ranks are a bijection") {
    for (int n : {3, 4})
        for (int d : {0, 1, 3, 5, 12}) {
            const MonoIndex& I = MonoIndex::get(n, d);
            for (size_t i = 0; i < I.size(); ++i) REQUIRE(I.rank(I.mono(i)) == i);
        }
    CHECK(MonoIndex::get(4, 3).size() == 20);
    CHECK(MonoIndex::get(3, 5).size() == 21);
}

TEST_CASE("targeted agrees with full expansion on random quaternary quintics") {
    const Field& F5 = Field::get(5);
    Rng rng(21);
    const MonoIndex& I = MonoIndex::get(4, 20);
    for (int i = 0; i < 50; ++i) {
        Form f = random_form(F5, 4, 5, rng, 12);
        Form full = naive_pow(f, 4);
        auto r = form_pow_targeted(f, 4, I.monos(), false);
        for (size_t j = 0; j < I.size(); ++j) REQUIRE(r.values[j] == full.coeff(I.mono(j)));
        auto dense = form_pow_dense(f, 4);
        for (size_t j = 0; j < I.size(); ++j) REQUIRE(dense[j] == full.coeff(I.mono(j)));
    }
}

TEST_CASE("substitution is a ring action") {
    const Field& F = Field::get(7, 2);
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        Form a = random_form(F, 3, 2, rng, 5), b = random_form(F, 3, 3, rng, 6);
        std::vector<std::vector<Fe>> M(3, std::vector<Fe>(3));
        for (auto& row : M)
            for (auto& e : row) e = F.random(rng);
        REQUIRE((a * b).subst(M) == a.subst(M) * b.subst(M));
        std::vector<Fe> v{F.random(rng), F.random(rng), F.random(rng)};
        std::vector<Fe> Mv(3, F.zero());
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) Mv[r] += M[r][c] * v[c];
        REQUIRE(b.subst(M).eval(v) == b.eval(Mv));
    }
}

TEST_CASE("partials") {
    const Field& F5 = Field::get(5);
    Form f = Form::from_terms(F5, 3, {{{5, 0, 0, 0}, 1}, {{1, 1, 3, 0}, 1}});
    Form fx = f.partial(0);
    CHECK(fx == Form::from_terms(F5, 3, {{{0, 1, 3, 0}, 1}}));
}
