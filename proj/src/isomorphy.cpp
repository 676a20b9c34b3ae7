#include "ssp/isomorphy.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ssp {

namespace {

constexpr int kDegrees[] = {1, 2, 4, 6, 8, 10, 12};

bool allowed_degree(int k) {
    for (int d : kDegrees)
        if (d == k) return true;
    return false;
}

Fe lift(const Fe& x, const Field& L) { return x.F == &L ? x : L.embed(x); }

Fe drop(const Fe& x, const Field& K) {
    auto r = x.F->descend(x, K);
    if (!r) fail(ErrorKind::internal, "value expected in subfield");
    return *r;
}

BinForm lift_form(const BinForm& F, const Field& L) {
    BinForm r;
    for (const Fe& c : F) r.push_back(lift(c, L));
    return r;
}

// mu with G = mu F, if any
std::optional<Fe> proportional(const BinForm& G, const BinForm& F) {
    std::optional<Fe> mu;
    for (size_t i = 0; i < F.size(); ++i) {
        if (F[i].is_zero()) {
            if (!G[i].is_zero()) return std::nullopt;
            continue;
        }
        Fe r = G[i] / F[i];
        if (mu && *mu != r) return std::nullopt;
        mu = r;
    }
    if (mu && mu->is_zero()) return std::nullopt;
    return mu;
}

BinForm act(const BinForm& F, const Mobius& h) { return binform_subst(F, h.a, h.b, h.c, h.d); }

Poly dehomogenize(const BinForm& F) {
    const Field& K = *F.front().F;
    return Poly(K, F);
}

// degrees of the irreducible factors of F over its field, z counted as linear
std::vector<int> factor_pattern(const BinForm& F) {
    std::vector<int> out;
    Poly f = dehomogenize(F);
    for (const Factor& fa : factor(f))
        for (int i = 0; i < fa.mult; ++i) out.push_back(static_cast<int>(fa.f.deg_or_zero()));
    for (size_t i = f.deg_or_zero() + 1; i < F.size(); ++i) out.push_back(1);
    std::sort(out.begin(), out.end());
    return out;
}

int pattern_lcm(const std::vector<int>& pat) {
    int l = 1;
    for (int d : pat) l = std::lcm(l, d);
    return l;
}

std::optional<Mobius> descend_mobius(const Mobius& h, const Field& K) {
    Mobius n = h.normalized();
    auto a = n.a.F->descend(n.a, K), b = n.b.F->descend(n.b, K);
    auto c = n.c.F->descend(n.c, K), d = n.d.F->descend(n.d, K);
    if (!a || !b || !c || !d) return std::nullopt;
    return Mobius{*a, *b, *c, *d};
}

// all normalized elements of PGL2(K)
template <class Fn>
bool for_each_pgl2(const Field& K, Fn&& fn) {
    auto el = all_elements(K);
    Fe one = K.one(), zero = K.zero();
    for (const Fe& b : el)
        for (const Fe& c : el)
            for (const Fe& d : el)
                if (!(d - b * c).is_zero() && fn(Mobius{one, b, c, d})) return true;
    for (const Fe& c : el)
        for (const Fe& d : el)
            if (!c.is_zero() && fn(Mobius{zero, one, c, d})) return true;
    return false;
}

const Field& model_field(const HyperModel& m) { return m.f.field(); }

}  // namespace

// ---------------------------------------------------------------- P^1

bool P1Pt::operator<(const P1Pt& o) const {
    if (is_inf() != o.is_inf()) return !is_inf();
    return x < o.x;
}

P1Pt p1_normalize(const Fe& x, const Fe& z) {
    if (z.is_zero()) {
        if (x.is_zero()) fail(ErrorKind::argument, "(0 : 0) is not a point");
        return {x.F->one(), z};
    }
    return {x / z, x.F->one()};
}

P1Pt p1_finite(const Fe& x) { return {x, x.F->one()}; }
P1Pt p1_infinity(const Field& F) { return {F.one(), F.zero()}; }

P1Pt Mobius::operator()(const P1Pt& p) const { return p1_normalize(a * p.x + b * p.z, c * p.x + d * p.z); }

Mobius Mobius::inverse() const { return Mobius{d, -b, -c, a}; }

Mobius Mobius::after(const Mobius& o) const {
    return Mobius{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mobius Mobius::normalized() const {
    for (const Fe* e : {&a, &b, &c, &d}) {
        if (e->is_zero()) continue;
        Fe s = e->inv();
        return Mobius{a * s, b * s, c * s, d * s};
    }
    fail(ErrorKind::argument, "zero matrix");
}

bool Mobius::descends_to(const Field& K) const { return descend_mobius(*this, K).has_value(); }

Mobius mobius_from_std(const P1Pt& p0, const P1Pt& p1, const P1Pt& p2) {
    Fe det = p1.x * p0.z - p0.x * p1.z;
    if (det.is_zero()) fail(ErrorKind::argument, "Mobius: points not distinct");
    Fe al = (p2.x * p0.z - p0.x * p2.z) / det;
    Fe be = (p1.x * p2.z - p2.x * p1.z) / det;
    if (al.is_zero() || be.is_zero()) fail(ErrorKind::argument, "Mobius: points not distinct");
    return Mobius{al * p1.x, be * p0.x, al * p1.z, be * p0.z};
}

std::optional<int> common_degree(const std::vector<int>& degrees) {
    int l = 1;
    for (int d : degrees) l = std::lcm(l, d);
    for (int k : kDegrees)
        if (k % l == 0) return k;
    return std::nullopt;
}

std::vector<P1Pt> binform_roots(const BinForm& F, const Field& L) {
    BinForm G = lift_form(F, L);
    Poly f(L, G);
    if (f.is_zero()) fail(ErrorKind::argument, "roots of the zero form");
    std::vector<P1Pt> out;
    for (const Fe& r : roots(f)) out.push_back(p1_finite(r));
    if (G.back().is_zero()) out.push_back(p1_infinity(L));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- hyperelliptic

bool verify_bin_witness(const HyperModel& m1, const HyperModel& m2, const BinIsoWitness& w, bool closure) {
    const Field& L = *w.h.a.F;
    const size_t n = static_cast<size_t>(2 * m1.g + 2);
    BinForm F1 = lift_form(binform_from_poly(m1.f, n), L);
    BinForm F2 = lift_form(binform_from_poly(m2.f, n), L);
    if ((w.h.a * w.h.d - w.h.b * w.h.c).is_zero()) return false;
    auto mu = proportional(act(F1, w.h), F2);
    if (!mu || *mu != w.mu) return false;
    if (closure) return true;
    const Field& K = model_field(m1);
    if (&L != &K) return false;
    return K.is_square(w.mu * m2.c / m1.c);
}

std::optional<BinIsoWitness> binary_form_iso_exhaustive(const HyperModel& m1, const HyperModel& m2) {
    if (m1.g != m2.g) fail(ErrorKind::argument, "genus mismatch");
    const Field& K = model_field(m1);
    const size_t n = static_cast<size_t>(2 * m1.g + 2);
    BinForm F1 = binform_from_poly(m1.f, n), F2 = binform_from_poly(m2.f, n);
    std::optional<BinIsoWitness> out;
    for_each_pgl2(K, [&](const Mobius& h) {
        auto mu = proportional(act(F1, h), F2);
        if (!mu || !K.is_square(*mu * m2.c / m1.c)) return false;
        out = BinIsoWitness{h, *mu};
        return true;
    });
    return out;
}

std::optional<BinIsoWitness> binary_form_iso(const HyperModel& m1, const HyperModel& m2, bool closure) {
    if (m1.g != m2.g) fail(ErrorKind::argument, "genus mismatch");
    if (&model_field(m1) != &model_field(m2)) fail(ErrorKind::argument, "field mismatch");
    if (check_hyper(m1) || check_hyper(m2)) fail(ErrorKind::invalid_model, "binary_form_iso needs separable forms");
    const Field& K = model_field(m1);
    const size_t n = static_cast<size_t>(2 * m1.g + 2);
    BinForm F1 = binform_from_poly(m1.f, n), F2 = binform_from_poly(m2.f, n);

    auto pat1 = factor_pattern(F1), pat2 = factor_pattern(F2);
    if (!closure && pat1 != pat2) return std::nullopt;
    auto kL = common_degree({pattern_lcm(pat1) * K.k(), pattern_lcm(pat2) * K.k()});
    if (!kL) {
        if (!closure) return binary_form_iso_exhaustive(m1, m2);
        if (m1.g == 2 && K.p() >= 7 && !(igusa_key(m1) == igusa_key(m2))) return std::nullopt;
        fail(ErrorKind::unsupported, "splitting field beyond degree 12");
    }
    const Field& L = Field::get(K.p(), *kL);
    auto R1 = binform_roots(F1, L), R2 = binform_roots(F2, L);
    if (R1.size() != n || R2.size() != n) fail(ErrorKind::internal, "separable form with missing roots");
    BinForm F1L = lift_form(F1, L), F2L = lift_form(F2, L);

    const Mobius T1 = mobius_from_std(R1[0], R1[1], R1[2]);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                Mobius h = T1.after(mobius_from_std(R2[i], R2[j], R2[k]).inverse());
                std::vector<P1Pt> img;
                for (const P1Pt& r : R2) img.push_back(h(r));
                std::sort(img.begin(), img.end());
                if (img != R1) continue;
                if (closure) {
                    auto mu = proportional(act(F1L, h), F2L);
                    if (!mu) fail(ErrorKind::internal, "root map without form identity");
                    return BinIsoWitness{h, *mu};
                }
                auto hk = descend_mobius(h, K);
                if (!hk) continue;
                auto mu = proportional(act(F1, *hk), F2);
                if (!mu) fail(ErrorKind::internal, "root map without form identity");
                if (K.is_square(*mu * m2.c / m1.c)) return BinIsoWitness{*hk, *mu};
            }
    return std::nullopt;
}

bool Genus2Key::operator<(const Genus2Key& o) const {
    if (kind != o.kind) return kind < o.kind;
    return v < o.v;
}

std::string Genus2Key::str() const {
    std::ostringstream os;
    os << kind;
    for (const Fe& x : v) os << ":" << x.code();
    return os.str();
}

std::array<Fe, 4> igusa_clebsch(const HyperModel& m) {
    if (m.g != 2) fail(ErrorKind::argument, "igusa_clebsch needs genus 2");
    const Field& K = model_field(m);
    if (K.p() < 7) fail(ErrorKind::unsupported, "Igusa-Clebsch keys need p >= 7");
    if (check_hyper(m)) fail(ErrorKind::invalid_model, "igusa_clebsch needs a separable form");
    BinForm F = binform_from_poly(m.f, 6);
    if (F[6].is_zero()) {
        // move a non-root to infinity: F(x, t x + z)
        for (i64 t = 1;; ++t) {
            BinForm G = binform_subst(F, K.one(), K.zero(), K.from_int(t), K.one());
            if (!G[6].is_zero()) {
                F = G;
                break;
            }
        }
    }
    Poly f(K, F);
    const Field& L = Field::get(K.p(), splitting_degree(f));
    std::vector<Fe> r = roots(f.map_to(L));
    if (r.size() != 6) fail(ErrorKind::internal, "sextic without six roots");
    Fe a = lift(F[6], L);
    Fe D[6][6];
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) D[i][j] = (r[i] - r[j]) * (r[i] - r[j]);

    Fe I2 = L.zero(), I4 = L.zero(), I6 = L.zero(), I10 = L.one();
    // pairings of {0..5}
    for (int j = 1; j < 6; ++j) {
        std::vector<int> rest;
        for (int t = 1; t < 6; ++t)
            if (t != j) rest.push_back(t);
        for (int l = 1; l < 4; ++l) {
            std::vector<int> rr;
            for (int t = 1; t < 4; ++t)
                if (t != l) rr.push_back(rest[t]);
            I2 += D[0][j] * D[rest[0]][rest[l]] * D[rr[0]][rr[1]];
        }
    }
    // splittings {T, T^c} with 0 in T
    for (int b = 1; b < 6; ++b)
        for (int c = b + 1; c < 6; ++c) {
            std::array<int, 3> T{0, b, c}, U{};
            int u = 0;
            for (int t = 1; t < 6; ++t)
                if (t != b && t != c) U[u++] = t;
            Fe base = D[T[0]][T[1]] * D[T[1]][T[2]] * D[T[2]][T[0]] * D[U[0]][U[1]] * D[U[1]][U[2]] * D[U[2]][U[0]];
            I4 += base;
            std::array<int, 3> s{0, 1, 2};
            do {
                I6 += base * D[T[0]][U[s[0]]] * D[T[1]][U[s[1]]] * D[T[2]][U[s[2]]];
            } while (std::next_permutation(s.begin(), s.end()));
        }
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) I10 *= D[i][j];
    Fe a2 = a * a;
    I2 *= a2;
    I4 *= a2 * a2;
    I6 *= a2 * a2 * a2;
    I10 *= a2.pow(5);
    return {drop(I2, K), drop(I4, K), drop(I6, K), drop(I10, K)};
}

Genus2Key igusa_key(const HyperModel& m) {
    auto [I2, I4, I6, I10] = igusa_clebsch(m);
    if (I10.is_zero()) fail(ErrorKind::internal, "vanishing discriminant on a separable sextic");
    Genus2Key k;
    if (!I2.is_zero()) {
        Fe s = I2.inv();
        k.kind = 0;
        k.v = {I4 * s.pow(2), I6 * s.pow(3), I10 * s.pow(5)};
    } else if (!I4.is_zero()) {
        Fe s = I4.inv();
        k.kind = 1;
        k.v = {I6 * I6 * s.pow(3), I10 * I10 * s.pow(5), I6 * I10 * s.pow(4)};
    } else if (!I6.is_zero()) {
        k.kind = 2;
        k.v = {I10.pow(3) / I6.pow(5)};
    } else {
        k.kind = 3;
    }
    return k;
}

// ---------------------------------------------------------------- Howe triples

namespace {

struct Normalization {
    std::vector<Fe> config;
    Mobius T;  // sends the marked point to infinity
};

std::vector<Normalization> howe_normalizations(const HoweTriple& t) {
    const Field& K = t.f1.field();
    const Field& L = Field::get(K.p(), 12);
    std::vector<P1Pt> W[2];
    W[0] = binform_roots(binform_from_poly(t.f1, 3), L);
    W[1] = binform_roots(binform_from_poly(t.f2, 3), L);
    if (W[0].size() != 3 || W[1].size() != 3) fail(ErrorKind::invalid_model, "Howe triple needs separable cubics");
    P1Pt m = t.marked ? p1_finite(lift(*t.marked, L)) : p1_infinity(L);
    std::vector<Normalization> out;
    for (int blk = 0; blk < 2; ++blk) {
        const auto& B = W[blk];
        const auto& O = W[1 - blk];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                Mobius T = mobius_from_std(B[i], m, B[j]).inverse();
                Normalization nz{{}, T};
                nz.config.push_back(T(B[3 - i - j]).x);
                std::vector<Fe> rest;
                for (const P1Pt& o : O) rest.push_back(T(o).x);
                std::sort(rest.begin(), rest.end());
                nz.config.insert(nz.config.end(), rest.begin(), rest.end());
                out.push_back(std::move(nz));
            }
    }
    return out;
}

}  // namespace

HyperModel howe_curve(const HoweTriple& t) { return HyperModel{t.f1.field().one(), t.f1 * t.f2, 2}; }

HoweKey howe_key(const HoweTriple& t) {
    auto nz = howe_normalizations(t);
    HoweKey k{nz.front().config};
    for (const auto& n : nz) k.v = std::min(k.v, n.config);
    return k;
}

bool howe_triple_iso(const HoweTriple& t1, const HoweTriple& t2, bool closure) {
    if (closure) return howe_key(t1) == howe_key(t2);
    const Field& K = t1.f1.field();
    auto A = howe_normalizations(t1), B = howe_normalizations(t2);
    HyperModel c1 = howe_curve(t1), c2 = howe_curve(t2);
    for (const auto& a : A)
        for (const auto& b : B) {
            if (a.config != b.config) continue;
            // sends the points of t1 to those of t2
            auto h = descend_mobius(b.T.inverse().after(a.T), K);
            if (!h) continue;
            auto mu = proportional(act(binform_from_poly(c2.f, 6), *h), binform_from_poly(c1.f, 6));
            if (!mu) fail(ErrorKind::internal, "Howe point map without form identity");
            if (K.is_square(*mu)) return true;
        }
    return false;
}

// ---------------------------------------------------------------- genus 4 canonical

namespace {

Mono mono4(int a, int b, int c, int d) {
    return Mono{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c),
                static_cast<std::uint8_t>(d)};
}

using Mat = std::vector<std::vector<Fe>>;

Mat identity(const Field& F, int n) {
    Mat M(n, std::vector<Fe>(n, F.zero()));
    for (int i = 0; i < n; ++i) M[i][i] = F.one();
    return M;
}

Mat matmul(const Mat& A, const Mat& B) {
    const size_t n = A.size();
    Mat C(n, std::vector<Fe>(n, A[0][0].F->zero()));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (A[i][k].is_zero()) continue;
            for (size_t j = 0; j < n; ++j) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

bool is_cube(const Fe& v, const Field& K) {
    u64 q1 = K.order() - 1;
    u64 g = std::gcd<u64>(3, q1);
    return v.pow(q1 / g).is_one();
}

bool dege_iso(const CanonicalModel& m1, const CanonicalModel& m2, int d) {
    const Field& K = m1.P.field();
    DegeForms A = dege_binary_forms(m1), B = dege_binary_forms(m2);
    auto is_zero_form = [](const BinForm& F) {
        return std::all_of(F.begin(), F.end(), [](const Fe& c) { return c.is_zero(); });
    };
    const bool R1z = is_zero_form(A.R4), R2z = is_zero_form(B.R4);
    if (R1z != R2z) return false;
    if (is_zero_form(A.S6) || is_zero_form(B.S6)) fail(ErrorKind::invalid_model, "reducible Dege curve");

    const Field* Kd = nullptr;
    if (d > 0) {
        int kd = K.k() * d;
        if (kd > 2) fail(ErrorKind::unsupported, "Dege isomorphism over degree > 2");
        Kd = &Field::get(K.p(), kd);
    }
    // work over Kd where possible: a Kd-isomorphism preserves factor patterns there
    auto base = [&](const BinForm& F) { return Kd ? lift_form(F, *Kd) : F; };
    const BinForm bS1 = base(A.S6), bS2 = base(B.S6), bR1 = base(A.R4), bR2 = base(B.R4);
    const int kb = Kd ? Kd->k() : K.k();
    auto distinct_roots = [](const BinForm& F) {
        size_t n = F.back().is_zero() ? 1 : 0;
        for (const Factor& fa : factor(dehomogenize(F))) n += fa.f.deg_or_zero();
        return n;
    };
    const size_t nS = distinct_roots(bS1);
    if (nS != distinct_roots(bS2)) return false;
    const bool useR = nS < 3 && !R1z;
    auto pS1 = factor_pattern(bS1), pS2 = factor_pattern(bS2);
    if (Kd && pS1 != pS2) return false;
    std::vector<int> degs{kb, pattern_lcm(pS1) * kb, pattern_lcm(pS2) * kb};
    if (useR) {
        auto pR1 = factor_pattern(bR1), pR2 = factor_pattern(bR2);
        if (Kd && pR1 != pR2) return false;
        degs.push_back(pattern_lcm(pR1) * kb);
        degs.push_back(pattern_lcm(pR2) * kb);
    }

    // test one candidate map given over some field containing the forms
    auto accept = [&](const Mobius& h, const BinForm& S1, const BinForm& R1, const BinForm& S2, const BinForm& R2) {
        auto v = proportional(act(S1, h), S2);
        if (!v) return false;
        Fe u;
        if (!R1z) {
            auto uu = proportional(act(R1, h), R2);
            if (!uu) return false;
            u = *uu;
        }
        if (!Kd) return R1z || u.pow(3) == v->pow(2);
        if (R1z) return is_cube(*v, *Kd);
        return u.pow(3) == v->pow(2);
    };

    auto kL = common_degree(degs);
    if (!kL) fail(ErrorKind::unsupported, "Dege forms split beyond degree 12");
    const Field& L = Field::get(K.p(), *kL);
    BinForm S1 = lift_form(A.S6, L), S2 = lift_form(B.S6, L);
    BinForm R1 = lift_form(A.R4, L), R2 = lift_form(B.R4, L);

    auto labeled = [&](const BinForm& S, const BinForm& R) {
        std::vector<std::pair<P1Pt, int>> pts;
        auto rs = binform_roots(S, L);
        if (!useR) {
            for (auto& p : rs) pts.push_back({p, 1});
            return pts;
        }
        auto rr = binform_roots(R, L);
        std::vector<P1Pt> all = rs;
        all.insert(all.end(), rr.begin(), rr.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        for (auto& p : all) {
            int lab = (std::binary_search(rs.begin(), rs.end(), p) ? 1 : 0) |
                      (std::binary_search(rr.begin(), rr.end(), p) ? 2 : 0);
            pts.push_back({p, lab});
        }
        return pts;
    };
    auto P1 = labeled(S1, R1), P2 = labeled(S2, R2);
    if (P1.size() != P2.size()) return false;
    if (P1.size() < 3) {
        if (!Kd || Kd->order() > 25) fail(ErrorKind::unsupported, "degenerate Dege forms over a large field");
        BinForm s1 = lift_form(A.S6, *Kd), s2 = lift_form(B.S6, *Kd);
        BinForm r1 = lift_form(A.R4, *Kd), r2 = lift_form(B.R4, *Kd);
        return for_each_pgl2(*Kd, [&](const Mobius& h) { return accept(h, s1, r1, s2, r2); });
    }
    // h sends the labeled points of form 2 onto those of form 1
    const size_t n = P1.size();
    std::vector<P1Pt> tgt;
    for (auto& p : P1) tgt.push_back(p.first);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                if (P1[i].second != P2[0].second || P1[j].second != P2[1].second || P1[k].second != P2[2].second)
                    continue;
                Mobius h = mobius_from_std(P1[i].first, P1[j].first, P1[k].first)
                               .after(mobius_from_std(P2[0].first, P2[1].first, P2[2].first).inverse());
                std::vector<P1Pt> img;
                for (auto& p : P2) img.push_back(h(p.first));
                std::sort(img.begin(), img.end());
                if (img != tgt) continue;
                if (Kd) {
                    auto hk = descend_mobius(h, *Kd);
                    if (!hk) continue;
                    if (accept(*hk, lift_form(A.S6, *Kd), lift_form(A.R4, *Kd), lift_form(B.S6, *Kd),
                               lift_form(B.R4, *Kd)))
                        return true;
                } else if (accept(h, S1, R1, S2, R2)) {
                    return true;
                }
            }
    return false;
}

// F1 o M = lambda F2 modulo Q, by column backtracking over similitudes of Q
bool quadric_iso(const CanonicalModel& m1, const CanonicalModel& m2) {
    const Field& K = m1.P.field();
    if (K.order() > 25) fail(ErrorKind::unsupported, "similitude search over a large field");
    const Form Q = m1.Q();
    auto el = all_elements(K);
    std::vector<std::vector<Fe>> vecs;
    for (const Fe& a : el)
        for (const Fe& b : el)
            for (const Fe& c : el)
                for (const Fe& d : el) {
                    std::vector<Fe> v{a, b, c, d};
                    if (a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero()) continue;
                    vecs.push_back(v);
                }
    std::vector<Fe> Qv, P1v;
    for (const auto& v : vecs) {
        Qv.push_back(Q.eval(v));
        P1v.push_back(m1.P.eval(v));
    }
    auto bil = [&](const std::vector<Fe>& u, const std::vector<Fe>& v) {
        std::vector<Fe> s(4);
        for (int i = 0; i < 4; ++i) s[i] = u[i] + v[i];
        return Q.eval(s) - Q.eval(u) - Q.eval(v);
    };
    std::vector<std::vector<Fe>> E(4, std::vector<Fe>(4, K.zero()));
    for (int i = 0; i < 4; ++i) E[i][i] = K.one();
    Fe Qe[4], Pe[4], Be[4][4];
    for (int i = 0; i < 4; ++i) {
        Qe[i] = Q.eval(E[i]);
        Pe[i] = m2.P.eval(E[i]);
        for (int j = 0; j < 4; ++j) Be[i][j] = bil(E[i], E[j]);
    }
    const Form R2 = reduce_mod_quadric(m2.P, m2.qtype);

    for (const Fe& c : {K.one(), field_nonsquare(K)}) {
        std::vector<size_t> col(4);
        std::optional<Fe> lam;
        auto rec = [&](auto&& self, int j) -> bool {
            if (j == 4) {
                Mat M(4, std::vector<Fe>(4));
                for (int i = 0; i < 4; ++i)
                    for (int k = 0; k < 4; ++k) M[i][k] = vecs[col[k]][i];
                Form R1 = reduce_mod_quadric(m1.P.subst(M), m1.qtype);
                if (lam) return R1 == R2 * *lam;
                for (const auto& [mo, co] : R2.terms()) return R1 == R2 * (R1.coeff(mo) / co);
                return false;
            }
            for (size_t t = 0; t < vecs.size(); ++t) {
                if (Qv[t] != c * Qe[j]) continue;
                bool ok = true;
                for (int i = 0; i < j && ok; ++i) ok = bil(vecs[col[i]], vecs[t]) == c * Be[i][j];
                if (!ok) continue;
                std::optional<Fe> saved = lam;
                if (Qe[j].is_zero()) {
                    if (Pe[j].is_zero()) {
                        if (!P1v[t].is_zero()) continue;
                    } else if (lam) {
                        if (P1v[t] != *lam * Pe[j]) continue;
                    } else {
                        if (P1v[t].is_zero()) continue;
                        lam = P1v[t] / Pe[j];
                    }
                }
                col[j] = t;
                if (self(self, j + 1)) return true;
                lam = saved;
            }
            return false;
        };
        if (rec(rec, 0)) return true;
    }
    return false;
}

}  // namespace

DegeForms dege_binary_forms(const CanonicalModel& m) {
    if (m.qtype != QType::Dege) fail(ErrorKind::argument, "dege_binary_forms needs a Dege model");
    const Form& P = m.P;
    const Field& K = P.field();
    Fe a0 = P.coeff(mono4(3, 0, 0, 0));
    if (a0.is_zero()) fail(ErrorKind::invalid_model, "cone vertex lies on the curve");
    Fe s = (a0 * K.from_int(3)).inv();
    Mat M = identity(K, 4);
    M[0][1] = -P.coeff(mono4(2, 1, 0, 0)) * s;
    M[0][2] = -P.coeff(mono4(2, 0, 1, 0)) * s;
    M[0][3] = -P.coeff(mono4(2, 0, 0, 1)) * s;
    Form Pn = P.subst(M) * a0.inv();
    DegeForms out{BinForm(5, K.zero()), BinForm(7, K.zero())};
    Fe mhalf = -K.from_int(2).inv();
    for (const auto& [mo, c] : Pn.terms()) {
        if (mo[0] >= 2) continue;
        Fe v = c * mhalf.pow(mo[3]);
        size_t i = 2 * mo[1] + mo[2];
        (mo[0] == 1 ? out.R4 : out.S6)[i] += v;
    }
    return out;
}

bool canonical_g4_iso(const CanonicalModel& m1, const CanonicalModel& m2, int closure_degree) {
    if (m1.qtype != m2.qtype) fail(ErrorKind::not_comparable, "quadric types differ");
    if (&m1.P.field() != &m2.P.field()) fail(ErrorKind::argument, "field mismatch");
    if (closure_degree < 0) fail(ErrorKind::argument, "negative extension degree");
    if (m1.qtype == QType::Dege) return dege_iso(m1, m2, closure_degree);
    if (closure_degree != 1) fail(ErrorKind::unsupported, "non-degenerate quadrics are compared over the base field only");
    return quadric_iso(m1, m2);
}

// ---------------------------------------------------------------- genus 5 trigonal

namespace {

Mono mono3(int a, int b, int c) {
    return Mono{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c), 0};
}

struct Cone {
    Fe a, b, c;  // a x^2 + b x y + c y^2, coefficient of z^3
};

Cone cone_of(const Form& F) {
    return {F.coeff(mono3(2, 0, 3)), F.coeff(mono3(1, 1, 3)), F.coeff(mono3(0, 2, 3))};
}

// -1 nonsplit, 0 cusp, 1 split, over the field of F
int cone_kind(const Form& F) {
    Cone k = cone_of(F);
    Fe disc = k.b * k.b - k.a * k.c * F.field().from_int(4);
    return F.field().legendre(disc);
}

Form lift_form3(const Form& F, const Field& W) { return &F.field() == &W ? F : F.map_to(W); }

bool verify_trigonal(const Form& F1, const Form& F2, const Mat& M, const Fe& lam) {
    return F1.subst(M) == F2 * lam;
}

// brute force over cone-preserving blocks and translations, W small
std::optional<TrigonalWitness> trigonal_brute(const Form& F1, const Form& F2) {
    const Field& W = F1.field();
    if (W.order() > 169) fail(ErrorKind::unsupported, "trigonal brute force over a large field");
    auto el = all_elements(W);
    Cone k1 = cone_of(F1), k2 = cone_of(F2);
    // cubic z^2 coefficients, index by power of x
    auto cubic = [](const Form& F) {
        std::array<Fe, 4> r;
        for (int i = 0; i < 4; ++i) r[i] = F.coeff(mono3(i, 3 - i, 2));
        return r;
    };
    auto C3_2 = cubic(F2);
    Fe three = W.from_int(3);
    for (const Fe& p : el)
        for (const Fe& q : el)
            for (const Fe& r : el)
                for (const Fe& s : el) {
                    Fe det = p * s - q * r;
                    if (det.is_zero()) continue;
                    // x -> p x + q y, y -> r x + s y
                    BinForm C{k1.c, k1.b, k1.a};  // index = power of x
                    BinForm Cb = binform_subst(C, p, q, r, s);
                    BinForm C2{k2.c, k2.b, k2.a};
                    auto lam = proportional(Cb, C2);
                    if (!lam) continue;
                    Mat M = identity(W, 3);
                    M[0][0] = p, M[0][1] = q, M[1][0] = r, M[1][1] = s;
                    Form G = F1.subst(M);
                    auto C3 = cubic(G);
                    // z -> z + e x + f y adds 3 (C o B)(e x + f y) to the z^2 coefficient
                    for (const Fe& e : el)
                        for (const Fe& f : el) {
                            bool ok = true;
                            for (int i = 0; i < 4 && ok; ++i) {
                                Fe add = W.zero();
                                if (i >= 1 && i - 1 < 3) add += Cb[i - 1] * e;
                                if (i < 3) add += Cb[i] * f;
                                ok = C3[i] + three * add == *lam * C3_2[i];
                            }
                            if (!ok) continue;
                            Mat N = M;
                            N[2][0] = e, N[2][1] = f;
                            if (verify_trigonal(F1, F2, N, *lam)) return TrigonalWitness{N, *lam};
                        }
                }
    return std::nullopt;
}

// coordinates making the (split) cone u v, then z translated so that the z^2
// coefficient has no u^2 v, u v^2 terms; returns (N, F o N)
std::pair<Mat, Form> trigonal_normal_form(const Form& F) {
    const Field& W = F.field();
    Cone k = cone_of(F);
    // rows of A give u, v in terms of x, y
    Fe A00, A01, A10, A11;
    if (!k.a.is_zero()) {
        Poly q(W, {k.c, k.b, k.a});
        auto rs = roots(q);
        if (rs.size() != 2) fail(ErrorKind::internal, "cone expected to split");
        A00 = W.one(), A01 = -rs[0], A10 = W.one(), A11 = -rs[1];
    } else {
        A00 = W.zero(), A01 = W.one(), A10 = k.b, A11 = k.c;
    }
    Fe det = A00 * A11 - A01 * A10;
    Mat N = identity(W, 3);
    N[0][0] = A11 / det, N[0][1] = -A01 / det, N[1][0] = -A10 / det, N[1][1] = A00 / det;
    Form G = F.subst(N);
    Fe kk = G.coeff(mono3(1, 1, 3));
    Fe t = (W.from_int(3) * kk).inv();
    Mat T = identity(W, 3);
    T[2][0] = -G.coeff(mono3(2, 1, 2)) * t;
    T[2][1] = -G.coeff(mono3(1, 2, 2)) * t;
    Mat NT = matmul(N, T);
    return {NT, F.subst(NT)};
}

Mat inverse3(const Mat& A) {
    const Field& W = *A[0][0].F;
    Mat I(3, std::vector<Fe>(3, W.zero()));
    auto m = [&](int i, int j) { return A[i][j]; };
    Fe det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    if (det.is_zero()) fail(ErrorKind::internal, "singular matrix");
    Fe di = det.inv();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            I[i][j] = (m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0)) * di;
        }
    return I;
}

// U A V = D with U, V unimodular and D diagonal
struct Diag {
    std::vector<std::vector<i64>> U, V;
    std::vector<i64> d;
    int rank = 0;
};

Diag diagonalize(std::vector<std::vector<i64>> A) {
    const int m = static_cast<int>(A.size()), n = static_cast<int>(A[0].size());
    Diag r;
    r.U.assign(m, std::vector<i64>(m, 0));
    r.V.assign(n, std::vector<i64>(n, 0));
    for (int i = 0; i < m; ++i) r.U[i][i] = 1;
    for (int i = 0; i < n; ++i) r.V[i][i] = 1;
    auto row_op = [&](int dst, int src, i64 q) {  // row dst -= q row src
        for (int j = 0; j < n; ++j) A[dst][j] -= q * A[src][j];
        for (int j = 0; j < m; ++j) r.U[dst][j] -= q * r.U[src][j];
    };
    auto col_op = [&](int dst, int src, i64 q) {
        for (int i = 0; i < m; ++i) A[i][dst] -= q * A[i][src];
        for (int i = 0; i < n; ++i) r.V[i][dst] -= q * r.V[i][src];
    };
    auto swap_rows = [&](int a, int b) {
        std::swap(A[a], A[b]);
        std::swap(r.U[a], r.U[b]);
    };
    auto swap_cols = [&](int a, int b) {
        for (auto& row : A) std::swap(row[a], row[b]);
        for (auto& row : r.V) std::swap(row[a], row[b]);
    };
    int t = 0;
    for (; t < std::min(m, n); ++t) {
        for (;;) {
            int bi = -1, bj = -1;
            for (int i = t; i < m; ++i)
                for (int j = t; j < n; ++j)
                    if (A[i][j] && (bi < 0 || std::llabs(A[i][j]) < std::llabs(A[bi][bj]))) bi = i, bj = j;
            if (bi < 0) goto done;
            swap_rows(t, bi);
            swap_cols(t, bj);
            bool clean = true;
            for (int i = t + 1; i < m; ++i) {
                row_op(i, t, A[i][t] / A[t][t]);
                if (A[i][t]) clean = false;
            }
            for (int j = t + 1; j < n; ++j) {
                col_op(j, t, A[t][j] / A[t][t]);
                if (A[t][j]) clean = false;
            }
            if (clean) break;
        }
    }
done:
    r.rank = t;
    for (int i = 0; i < std::min(m, n); ++i) r.d.push_back(A[i][i]);
    return r;
}

i64 mod(i64 a, i64 n) {
    a %= n;
    return a < 0 ? a + n : a;
}

i64 inv_mod(i64 a, i64 n) {
    i64 g = n, x = 0, x1 = 1, aa = mod(a, n);
    while (aa) {
        i64 q = g / aa;
        std::tie(g, aa) = std::make_pair(aa, g - q * aa);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    return mod(x, n);
}

Fe pow_signed(const Fe& x, i64 e) { return e >= 0 ? x.pow(static_cast<u64>(e)) : x.inv().pow(static_cast<u64>(-e)); }

struct TorusSystem {
    std::vector<std::vector<i64>> A;  // rows (i, j, k, -1)
    std::vector<Fe> rhs;              // c2 / c1
};

// G1(alpha u, beta v, gamma z) = lambda G2; nullopt when supports differ
std::optional<TorusSystem> torus_system(const Form& G1, const Form& G2) {
    if (G1.terms().size() != G2.terms().size()) return std::nullopt;
    TorusSystem s;
    for (const auto& [mo, c1] : G1.terms()) {
        Fe c2 = G2.coeff(mo);
        if (c2.is_zero()) return std::nullopt;
        s.A.push_back({mo[0], mo[1], mo[2], -1});
        s.rhs.push_back(c2 / c1);
    }
    return s;
}

bool torus_closure_solvable(const TorusSystem& s) {
    Diag D = diagonalize(s.A);
    const Field& W = *s.rhs[0].F;
    for (size_t i = D.rank; i < s.A.size(); ++i) {
        Fe prod = W.one();
        for (size_t mI = 0; mI < s.A.size(); ++mI)
            if (D.U[i][mI]) prod *= pow_signed(s.rhs[mI], D.U[i][mI]);
        if (!prod.is_one()) return false;
    }
    return true;
}

std::optional<std::array<Fe, 4>> torus_solve(const TorusSystem& s) {
    const Field& W = *s.rhs[0].F;
    const i64 N = static_cast<i64>(W.order() - 1);
    std::vector<i64> e;
    for (const Fe& r : s.rhs) e.push_back(static_cast<i64>(*W.dlog(r)));
    Diag D = diagonalize(s.A);
    const size_t m = s.A.size();
    std::vector<i64> ue(m, 0);
    for (size_t i = 0; i < m; ++i) {
        __int128 acc = 0;
        for (size_t j = 0; j < m; ++j) acc += static_cast<__int128>(mod(D.U[i][j], N)) * e[j];
        ue[i] = static_cast<i64>(acc % N);
    }
    for (size_t i = D.rank; i < m; ++i)
        if (ue[i] != 0) return std::nullopt;
    std::vector<i64> y(4, 0);
    for (int i = 0; i < D.rank; ++i) {
        i64 d = mod(D.d[i], N);
        i64 g = std::gcd(d, N);
        if (ue[i] % g) return std::nullopt;
        i64 Ng = N / g;
        y[i] = static_cast<i64>(static_cast<__int128>(ue[i] / g) * inv_mod(d / g, Ng) % Ng);
    }
    std::array<Fe, 4> out;
    for (int j = 0; j < 4; ++j) {
        __int128 acc = 0;
        for (int i = 0; i < 4; ++i) acc += static_cast<__int128>(mod(D.V[j][i], N)) * y[i];
        out[j] = W.zeta().pow(static_cast<u64>(acc % N));
    }
    return out;
}

Mat swap_uv(const Field& W) {
    Mat P(3, std::vector<Fe>(3, W.zero()));
    P[0][1] = P[1][0] = P[2][2] = W.one();
    return P;
}

// W-rational isomorphism for split cones
std::optional<TrigonalWitness> trigonal_torus(const Form& F1, const Form& F2) {
    const Field& W = F1.field();
    auto [N1, G1] = trigonal_normal_form(F1);
    auto [N2, G2] = trigonal_normal_form(F2);
    Mat N2i = inverse3(N2);
    for (int sw = 0; sw < 2; ++sw) {
        Mat S = sw ? swap_uv(W) : identity(W, 3);
        Form H = sw ? G1.subst(S) : G1;
        auto sys = torus_system(H, G2);
        if (!sys) continue;
        auto sol = torus_solve(*sys);
        if (!sol) continue;
        Mat Dm(3, std::vector<Fe>(3, W.zero()));
        for (int i = 0; i < 3; ++i) Dm[i][i] = (*sol)[i];
        Mat M = matmul(matmul(matmul(N1, S), Dm), N2i);
        if (!verify_trigonal(F1, F2, M, (*sol)[3])) fail(ErrorKind::internal, "torus witness fails verification");
        return TrigonalWitness{M, (*sol)[3]};
    }
    return std::nullopt;
}

}  // namespace

std::optional<TrigonalWitness> trigonal_iso_witness(const TrigonalModel& m1, const TrigonalModel& m2,
                                                    int closure_degree) {
    const Field& K = m1.F.field();
    if (&m2.F.field() != &K) fail(ErrorKind::argument, "field mismatch");
    if (closure_degree < 1) fail(ErrorKind::argument, "witness search needs a finite extension degree");
    const int kd = K.k() * closure_degree;
    if (!allowed_degree(kd)) fail(ErrorKind::unsupported, "extension degree not supported");
    const Field& W = Field::get(K.p(), kd);
    Form F1 = lift_form3(m1.F, W), F2 = lift_form3(m2.F, W);
    int t1 = cone_kind(F1), t2 = cone_kind(F2);
    if (t1 != t2) return std::nullopt;
    if (t1 == 1) return trigonal_torus(F1, F2);
    return trigonal_brute(F1, F2);
}

bool trigonal_geometric_iso(const TrigonalModel& m1, const TrigonalModel& m2) {
    const Field& K = m1.F.field();
    int t1 = cone_kind(m1.F), t2 = cone_kind(m2.F);
    if ((t1 == 0) != (t2 == 0)) return false;
    if (t1 == 0) fail(ErrorKind::unsupported, "geometric test for cusp models");
    const Field& W = (t1 == 1 && t2 == 1) ? K : Field::get(K.p(), 2 * K.k());
    auto [N1, G1] = trigonal_normal_form(lift_form3(m1.F, W));
    auto [N2, G2] = trigonal_normal_form(lift_form3(m2.F, W));
    for (int sw = 0; sw < 2; ++sw) {
        Form H = sw ? G1.subst(swap_uv(W)) : G1;
        auto sys = torus_system(H, G2);
        if (sys && torus_closure_solvable(*sys)) return true;
    }
    return false;
}

bool trigonal_iso(const TrigonalModel& m1, const TrigonalModel& m2, int closure_degree) {
    if (closure_degree == 0) return trigonal_geometric_iso(m1, m2);
    return trigonal_iso_witness(m1, m2, closure_degree).has_value();
}

std::optional<int> trigonal_min_degree(const TrigonalModel& m1, const TrigonalModel& m2) {
    const int k = m1.F.field().k();
    const bool cusp = cone_kind(m1.F) == 0;
    if (!cusp && !trigonal_geometric_iso(m1, m2)) return std::nullopt;
    for (int kd : kDegrees) {
        if (kd % k) continue;
        if (cusp && Field::get(m1.F.field().p(), kd).order() > 169) break;
        if (trigonal_iso_witness(m1, m2, kd / k)) return kd / k;
    }
    return std::nullopt;
}

}  // namespace ssp
