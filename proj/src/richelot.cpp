#include "ssp/richelot.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "ssp/formulas.hpp"
#include "ssp/frobenius.hpp"

namespace ssp {

namespace {

Fe lift(const Fe& x, const Field& L) { return x.F == &L ? x : L.embed(x); }

// G as a binary quadratic (index = power of x)
BinForm quad_form(const Poly& G) { return {G.coeff(0), G.coeff(1), G.coeff(2)}; }

Poly quad_poly(const P1Pt& a, const P1Pt& b, const Field& L) {
    // (x - a)(x - b), a point at infinity contributes 1
    auto lin = [&](const P1Pt& r) { return r.is_inf() ? Poly(L, {L.one()}) : Poly(L, {-r.x, L.one()}); };
    return lin(a) * lin(b);
}

std::optional<Fe> try_drop(const Fe& x, const Field& K) { return x.F->descend(x, K); }

Fe binomial_mod(u32 n, u32 k, u32 p) {
    const Field& F = Field::get(p, 1);
    Fe r = F.one();
    for (u32 i = 0; i < k; ++i) r = r * F.from_int(n - i) / F.from_int(i + 1);
    return r;
}

}  // namespace

// ---------------------------------------------------------------- splittings

std::vector<Splitting> splittings(const HyperModel& m) {
    if (m.g != 2) fail(ErrorKind::argument, "Richelot splittings need genus 2");
    if (check_hyper(m)) fail(ErrorKind::invalid_model, "splittings need a separable sextic");
    const Field& K = m.f.field();
    auto kL = common_degree({K.k(), splitting_degree(m.f)});
    if (!kL) fail(ErrorKind::unsupported, "splitting field beyond degree 12");
    const Field& L = Field::get(K.p(), *kL);
    std::vector<P1Pt> R = binform_roots(binform_from_poly(m.f, 6), L);
    if (R.size() != 6) fail(ErrorKind::internal, "sextic without six roots");
    // Frobenius of K on the roots
    std::vector<int> sigma(6);
    for (int i = 0; i < 6; ++i) {
        P1Pt img = R[i];
        if (!img.is_inf())
            for (int t = 0; t < K.k(); ++t) img.x = img.x.frob();
        auto it = std::find(R.begin(), R.end(), img);
        if (it == R.end()) fail(ErrorKind::internal, "Frobenius does not permute the roots");
        sigma[i] = static_cast<int>(it - R.begin());
    }
    const Fe lead = lift(m.f.lead() / m.c, L);
    std::vector<Splitting> out;
    // pairings of {0..5}, {0, j} first
    for (int j = 1; j < 6; ++j) {
        std::vector<int> rest;
        for (int t = 1; t < 6; ++t)
            if (t != j) rest.push_back(t);
        for (int l = 1; l < 4; ++l) {
            std::vector<int> rr;
            for (int t = 1; t < 4; ++t)
                if (t != l) rr.push_back(rest[t]);
            std::array<std::array<int, 2>, 3> pr{{{0, j}, {rest[0], rest[l]}, {rr[0], rr[1]}}};
            // stable: sigma sends every pair onto a pair
            auto pair_of = [&](int a) {
                for (int q = 0; q < 3; ++q)
                    if (pr[q][0] == a || pr[q][1] == a) return q;
                return -1;
            };
            bool stable = true;
            for (int q = 0; q < 3 && stable; ++q) stable = pair_of(sigma[pr[q][0]]) == pair_of(sigma[pr[q][1]]);
            if (!stable) continue;
            Splitting s{m, pr, R, {}, L.zero()};
            for (int q = 0; q < 3; ++q) s.G[q] = quad_poly(R[pr[q][0]], R[pr[q][1]], L);
            s.G[0] = s.G[0] * lead;
            Fe g[3][3];
            for (int q = 0; q < 3; ++q)
                for (int c = 0; c < 3; ++c) g[q][c] = s.G[q].coeff(c);
            s.delta = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                      g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                      g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
            out.push_back(std::move(s));
        }
    }
    return out;
}

// ---------------------------------------------------------------- elliptic helpers

Fe j_of_cubic(const Poly& f) {
    if (f.deg_or_zero() != 3) fail(ErrorKind::argument, "j_of_cubic needs a cubic");
    const Field& F = f.field();
    if (F.p() == 3) fail(ErrorKind::unsupported, "j via the depressed cubic needs p != 3");
    Fe c3 = f.coeff(3), c2 = f.coeff(2), c1 = f.coeff(1), c0 = f.coeff(0);
    // scaled to monic: V^3 + a V^2 + b V + c with V = c3 U
    Fe a = c2, b = c1 * c3, c = c0 * c3 * c3;
    Fe third = F.from_int(3).inv();
    Fe A = b - a * a * third;
    Fe B = a * a * a * F.from_int(2) * F.from_int(27).inv() - a * b * third + c;
    Fe A3 = A * A * A * F.from_int(4);
    Fe den = A3 + F.from_int(27) * B * B;
    if (den.is_zero()) fail(ErrorKind::invalid_model, "singular cubic");
    return F.from_int(1728) * A3 / den;
}

Fe legendre_j(const Fe& l) {
    const Field& F = *l.F;
    Fe t = l * l - l + F.one();
    Fe d = l * l * (l - F.one()) * (l - F.one());
    return F.from_int(256) * t * t * t / d;
}

std::vector<Fe> supersingular_lambdas(u32 p) {
    if (p < 5) fail(ErrorKind::unsupported, "supersingular Legendre parameters need p >= 5");
    const Field& K = Field::get(p, 2);
    const u32 m = (p - 1) / 2;
    std::vector<Fe> c;
    for (u32 i = 0; i <= m; ++i) {
        Fe b = K.embed(binomial_mod(m, i, p));
        c.push_back(b * b);
    }
    return roots(Poly(K, c));
}

std::vector<Fe> supersingular_js(u32 p) {
    std::vector<Fe> js;
    for (const Fe& l : supersingular_lambdas(p)) js.push_back(legendre_j(l));
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    return js;
}

// ---------------------------------------------------------------- codomain

namespace {

std::array<Fe, 2> product_js(const Splitting& s, const Field& K) {
    const Field& L = s.G[0].field();
    auto coeffs = [](const Poly& G) { return std::array<Fe, 3>{G.coeff(2), G.coeff(1), G.coeff(0)}; };
    auto [a1, b1, c1] = coeffs(s.G[0]);
    auto [a2, b2, c2] = coeffs(s.G[1]);
    // disc(l G1 + m G2) as a quadratic form in (l : m), index = power of l
    Fe four = L.from_int(4);
    BinForm D{b2 * b2 - four * a2 * c2, Fe(b1 * b2 * L.from_int(2) - four * (a1 * c2 + a2 * c1)), b1 * b1 - four * a1 * c1};
    const Field* W = &L;
    Poly dq(L, D);
    if (dq.is_zero()) fail(ErrorKind::internal, "degenerate pencil");
    if (splitting_degree(dq) > L.k() || L.k() % splitting_degree(dq) != 0) {
        auto k2 = common_degree({L.k() * 2});
        if (!k2) fail(ErrorKind::unsupported, "double points of the pencil beyond degree 12");
        W = &Field::get(L.p(), *k2);
    }
    auto members = binform_roots(D, *W);
    if (members.size() != 2) fail(ErrorKind::internal, "pencil without two square members");
    std::vector<P1Pt> dbl;
    for (const P1Pt& lm : members) {
        // l G1 + m G2 with (l : m) = (x : z)
        Fe l = lm.x, mm = lm.z;
        Fe A = l * lift(a1, *W) + mm * lift(a2, *W), B = l * lift(b1, *W) + mm * lift(b2, *W);
        if (A.is_zero()) {
            dbl.push_back(p1_infinity(*W));
        } else {
            dbl.push_back(p1_finite(-B / (A * W->from_int(2))));
        }
    }
    P1Pt third = p1_finite(W->zero());
    for (i64 t = 0; third == dbl[0] || third == dbl[1]; ++t) third = p1_finite(W->from_int(t + 1));
    Mobius T = mobius_from_std(dbl[0], dbl[1], third);
    std::vector<Fe> A(3), B(3);
    for (int q = 0; q < 3; ++q) {
        BinForm Gq = quad_form(s.G[q]);
        for (auto& x : Gq) x = lift(x, *W);
        BinForm E = binform_subst(Gq, T.a, T.b, T.c, T.d);
        if (!E[1].is_zero()) fail(ErrorKind::internal, "pencil normalization failed");
        A[q] = E[2];
        B[q] = E[0];
    }
    Poly e1(*W, {W->one()}), e2(*W, {W->one()});
    for (int q = 0; q < 3; ++q) {
        e1 = e1 * Poly(*W, {B[q], A[q]});
        e2 = e2 * Poly(*W, {A[q], B[q]});
    }
    std::array<Fe, 2> js;
    int i = 0;
    for (const Poly& e : {e1, e2}) {
        auto j = try_drop(j_of_cubic(e), K);
        if (!j) fail(ErrorKind::internal, "quotient j-invariant outside F_{p^2}");
        js[i++] = *j;
    }
    std::sort(js.begin(), js.end());
    return js;
}

}  // namespace

GraphNode codomain(const Splitting& s) {
    const Field& K = s.base.f.field();
    GraphNode n;
    if (s.delta.is_zero()) {
        n.kind = GraphNode::Kind::product;
        n.js = product_js(s, K);
        return n;
    }
    const Poly& G1 = s.G[0];
    const Poly& G2 = s.G[1];
    const Poly& G3 = s.G[2];
    Poly H1 = G2.derivative() * G3 - G2 * G3.derivative();
    Poly H2 = G3.derivative() * G1 - G3 * G1.derivative();
    Poly H3 = G1.derivative() * G2 - G1 * G2.derivative();
    Poly f = H1 * H2 * H3 * s.delta.inv();
    auto fk = f.descend(K);
    if (!fk) fail(ErrorKind::internal, "codomain coefficients outside the base field");
    n.kind = GraphNode::Kind::curve;
    n.model = HyperModel{K.one(), *fk, 2};
    if (check_hyper(n.model)) fail(ErrorKind::internal, "codomain is not a genus-2 curve");
    n.key = igusa_key(n.model);
    return n;
}

// ---------------------------------------------------------------- gluing

std::vector<Glued> glue_scan(u32 p, const std::vector<std::array<Fe, 2>>* pairs, size_t limit) {
    if (p < 5) fail(ErrorKind::unsupported, "gluing needs p >= 5");
    const Field& K = Field::get(p, 2);
    const auto ts = all_elements(K);
    std::vector<Glued> out;
    for (const Fe& lam : supersingular_lambdas(p)) {
        const Fe jE = legendre_j(lam);
        for (const Fe& s : {K.one(), field_nonsquare(K)}) {
            for (const Fe& t : ts) {
                std::array<Fe, 3> e{s * t, s * (K.one() + t), s * (lam + t)};
                bool ok = true;
                for (const Fe& x : e) ok = ok && !x.is_zero() && K.is_square(x);
                if (!ok) continue;
                Poly E = Poly::from_roots(K, {e[0], e[1], e[2]});
                Fe a = E.coeff(2), b = E.coeff(1), c = E.coeff(0);
                Poly Ep(K, {c * c, a * c, b, K.one()});
                if (!is_separable(Ep) || !is_supersingular_cubic(Ep)) continue;
                std::array<Fe, 2> js{jE, j_of_cubic(Ep)};
                std::sort(js.begin(), js.end());
                if (pairs && std::find(pairs->begin(), pairs->end(), js) == pairs->end()) continue;
                Poly f(K, {c, K.zero(), b, K.zero(), a, K.zero(), K.one()});
                HyperModel C{K.one(), f, 2};
                if (check_hyper(C)) continue;
                if (!hyper_cm_vanishes(C)) fail(ErrorKind::internal, "glued curve is not superspecial");
                out.push_back({C, js});
                if (limit && out.size() >= limit) return out;
            }
        }
    }
    return out;
}

HyperModel glue_seed(u32 p) {
    auto hits = glue_scan(p, nullptr, 1);
    if (hits.empty()) fail(ErrorKind::seed_failure, "no glued superspecial curve found");
    return hits.front().curve;
}

// ---------------------------------------------------------------- walk

WalkResult walk(u32 p, const std::function<bool(const GraphNode&)>& visit) {
    if (p < 7) fail(ErrorKind::unsupported, "the walk needs p >= 7");
    const u64 expected = genus2_count(p);
    WalkResult res;
    std::map<Genus2Key, size_t> index;
    std::deque<size_t> queue;

    auto insert = [&](const HyperModel& m, const Genus2Key& key) {
        auto it = index.find(key);
        if (it != index.end()) {
            try {
                if (!binary_form_iso(res.curves[it->second].model, m, true))
                    fail(ErrorKind::internal, "equal Igusa keys without an isomorphism");
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::unsupported) throw;
            }
            return;
        }
        if (!hyper_cm_vanishes(m)) fail(ErrorKind::internal, "walk reached a curve that is not superspecial");
        GraphNode n;
        n.model = m;
        n.key = key;
        index.emplace(key, res.curves.size());
        queue.push_back(res.curves.size());
        res.curves.push_back(std::move(n));
        if (visit && !visit(res.curves.back())) res.stopped = true;
    };
    auto run = [&] {
        while (!queue.empty() && !res.stopped) {
            size_t i = queue.front();
            queue.pop_front();
            HyperModel m = res.curves[i].model;
            auto sp = splittings(m);
            if (sp.size() < 15) ++res.partial_splittings;
            for (const Splitting& s : sp) {
                if (res.stopped) return;
                GraphNode n = codomain(s);
                ++res.edges;
                if (n.kind == GraphNode::Kind::product) {
                    if (std::find(res.products.begin(), res.products.end(), n.js) == res.products.end())
                        res.products.push_back(n.js);
                } else {
                    insert(n.model, n.key);
                }
            }
        }
    };
    HyperModel seed = glue_seed(p);
    insert(seed, igusa_key(seed));
    run();
    if (res.stopped) return res;
    if (res.curves.size() < expected) {
        res.used_fallback = true;
        for (const Glued& g : glue_scan(p, &res.products)) {
            insert(g.curve, igusa_key(g.curve));
            if (res.stopped) return res;
        }
        run();
        if (res.stopped) return res;
    }
    std::sort(res.products.begin(), res.products.end());
    if (res.curves.size() != expected)
        fail(ErrorKind::census_incomplete, "walk found " + std::to_string(res.curves.size()) + " classes, expected " +
                                               std::to_string(expected));
    return res;
}

}  // namespace ssp
