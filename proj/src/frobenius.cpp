#include "ssp/frobenius.hpp"

#include <algorithm>

namespace ssp {

bool FrobeniusMatrix::is_zero() const {
    if (aborted) fail(ErrorKind::internal, "aborted matrix has no entries");
    for (const auto& row : M)
        for (const Fe& x : row)
            if (!x.is_zero()) return false;
    return true;
}

namespace {

u32 require_odd_p(const Field& F) {
    if (F.p() == 2) fail(ErrorKind::unsupported, "characteristic 2");
    return F.p();
}

}  // namespace

FrobeniusMatrix cm_hyperelliptic(const HyperModel& m, bool early_abort) {
    const Field& F = m.f.field();
    const u32 p = require_odd_p(F);
    const int g = m.g;
    struct T {
        size_t t;
        int i, j;
    };
    std::vector<T> ts;
    for (int i = 1; i <= g; ++i)
        for (int j = 1; j <= g; ++j) ts.push_back({static_cast<size_t>(p) * i - j, i, j});
    std::sort(ts.begin(), ts.end(), [](const T& a, const T& b) { return a.t < b.t; });
    std::vector<size_t> targets;
    for (auto& t : ts) targets.push_back(t.t);
    auto r = targeted_power_coeffs(m.f, (p - 1) / 2, targets, early_abort);
    FrobeniusMatrix out;
    out.g = g;
    out.aborted = r.aborted;
    size_t evaluated = r.aborted ? r.abort_at + 1 : ts.size();
    for (size_t k = 0; k < evaluated; ++k)
        out.provenance.push_back({ts[k].i - 1, ts[k].j - 1, {static_cast<int>(ts[k].t), 0, 0, 0}});
    if (!r.aborted) {
        out.M.assign(g, std::vector<Fe>(g, F.zero()));
        for (size_t k = 0; k < ts.size(); ++k) out.M[ts[k].i - 1][ts[k].j - 1] = r.values[k];
    }
    return out;
}

bool hyper_cm_vanishes(const HyperModel& m) { return !cm_hyperelliptic(m, true).aborted; }

bool is_supersingular_cubic(const Poly& f) {
    const u32 p = require_odd_p(f.field());
    auto r = targeted_power_coeffs(f, (p - 1) / 2, {static_cast<size_t>(p - 1)}, false);
    return r.values[0].is_zero();
}

bool is_supersingular_elliptic(const EllipticModel& m) {
    const Field& F = *m.A.F;
    return is_supersingular_cubic(Poly(F, {m.B, m.A, F.zero(), F.one()}));
}

namespace {

const std::array<std::array<int, 4>, 4> kComp4 = {{{2, 1, 1, 1}, {1, 2, 1, 1}, {1, 1, 2, 1}, {1, 1, 1, 2}}};
const std::array<std::array<int, 3>, 5> kComp3 = {{{3, 1, 1}, {1, 3, 1}, {2, 2, 1}, {2, 1, 2}, {1, 2, 2}}};

struct FormTarget {
    Mono m;
    int row, col;
};

std::vector<FormTarget> canonical_target_list(u32 p) {
    std::vector<FormTarget> ts;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            Mono m{};
            for (int v = 0; v < 4; ++v) m[v] = static_cast<std::uint8_t>(p * kComp4[r][v] - kComp4[c][v]);
            ts.push_back({m, r, c});
        }
    std::sort(ts.begin(), ts.end(), [](const FormTarget& a, const FormTarget& b) { return a.m < b.m; });
    return ts;
}

std::vector<FormTarget> trigonal_target_list(u32 p) {
    std::vector<FormTarget> ts;
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) {
            Mono m{};
            for (int v = 0; v < 3; ++v) m[v] = static_cast<std::uint8_t>(p * kComp3[r][v] - kComp3[c][v]);
            ts.push_back({m, r, c});
        }
    std::sort(ts.begin(), ts.end(), [](const FormTarget& a, const FormTarget& b) { return a.m < b.m; });
    return ts;
}

FrobeniusMatrix form_matrix(const Form& base, u32 p, int g, const std::vector<FormTarget>& ts, bool early_abort) {
    if (static_cast<u64>(p) * 5 > 255) fail(ErrorKind::unsupported, "exponents exceed the form storage");
    std::vector<Mono> targets;
    for (auto& t : ts) targets.push_back(t.m);
    auto r = form_pow_targeted(base, p - 1, targets, early_abort);
    FrobeniusMatrix out;
    out.g = g;
    out.aborted = r.aborted;
    size_t evaluated = r.aborted ? r.abort_at + 1 : ts.size();
    for (size_t k = 0; k < evaluated; ++k)
        out.provenance.push_back({ts[k].row, ts[k].col, {ts[k].m[0], ts[k].m[1], ts[k].m[2], ts[k].m[3]}});
    if (!r.aborted) {
        out.M.assign(g, std::vector<Fe>(g, base.field().zero()));
        for (size_t k = 0; k < ts.size(); ++k) out.M[ts[k].row][ts[k].col] = r.values[k];
    }
    return out;
}

}  // namespace

std::vector<Mono> canonical_targets(u32 p) {
    std::vector<Mono> out;
    for (auto& t : canonical_target_list(p)) out.push_back(t.m);
    return out;
}

std::vector<Mono> trigonal_targets(u32 p) {
    std::vector<Mono> out;
    for (auto& t : trigonal_target_list(p)) out.push_back(t.m);
    return out;
}

FrobeniusMatrix hw_canonical_g4(const CanonicalModel& m, bool early_abort) {
    const u32 p = require_odd_p(m.P.field());
    if (p < 5) fail(ErrorKind::unsupported, "genus-4 criterion needs p >= 5");
    return form_matrix(m.Q() * m.P, p, 4, canonical_target_list(p), early_abort);
}

bool canonical_hw_vanishes(const CanonicalModel& m) { return !hw_canonical_g4(m, true).aborted; }

FrobeniusMatrix hw_trigonal_g5(const TrigonalModel& m, bool early_abort) {
    const u32 p = require_odd_p(m.F.field());
    if (p < 5) fail(ErrorKind::unsupported, "genus-5 criterion needs p >= 5");
    return form_matrix(m.F, p, 5, trigonal_target_list(p), early_abort);
}

bool trigonal_hw_vanishes(const TrigonalModel& m) { return !hw_trigonal_g5(m, true).aborted; }

Poly shifted_power_root_poly(const Poly& f) {
    const Field& F = f.field();
    const u32 p = require_odd_p(F);
    const u64 m = (p - 1) / 2;
    std::vector<size_t> targets;
    for (u64 k = 0; k <= m; ++k) targets.push_back(p - 1 - m + k);  // ascending in x-degree
    auto r = targeted_power_coeffs(f, m, targets, false);
    // r.values[i] = [x^{p-1-(m-i)}] f^m, i.e. k = m - i ... reindex below
    std::vector<Fe> coeffs(m + 1, F.zero());
    Fe binom = F.one();  // C(m, k)
    for (u64 k = 0; k <= m; ++k) {
        if (k > 0) binom = binom * F.from_int(static_cast<i64>(m - k + 1)) / F.from_int(static_cast<i64>(k));
        Fe c = r.values[m - k];  // [x^{p-1-k}] f^m
        if ((m - k) % 2) c = -c;
        coeffs[m - k] += binom * c;
    }
    return Poly(F, coeffs);
}

// ---------------------------------------------------------------- point counts

u64 count_points_hyper(const HyperModel& m, const Field& L) {
    Poly f = m.f.map_to(L);
    Fe c = L.embed(m.c);
    u64 n = 0;
    for (const Fe& x : all_elements(L)) n += static_cast<u64>(1 + L.legendre(c * f(x)));
    size_t d = f.deg_or_zero();
    if (d % 2) n += 1;
    else n += static_cast<u64>(1 + L.legendre(c * f.lead()));
    return n;
}

u64 count_points_canonical(const CanonicalModel& m, const Field& L) {
    Form P = m.P.map_to(L);
    const auto els = all_elements(L);
    u64 n = 0;
    auto on = [&](const std::vector<Fe>& v) { return P.eval(v).is_zero(); };
    if (m.qtype == QType::Dege) {
        // vertex plus the lines (x : s^2 : st : -t^2/2)
        if (on({L.one(), L.zero(), L.zero(), L.zero()})) ++n;
        Fe mhalf = -(L.from_int(2).inv());
        std::vector<std::pair<Fe, Fe>> pts{{L.zero(), L.one()}};
        for (const Fe& s : els) pts.push_back({L.one(), s});
        for (auto& [s, t] : pts) {
            std::vector<Fe> v{L.zero(), s * s, s * t, mhalf * t * t};
            for (const Fe& x : els) {
                v[0] = x;
                if (on(v)) ++n;
            }
        }
        return n;
    }
    // Q = 2xw + Q'(y, z): on w = 1 solve x, on w = 0 scan
    Form Q = m.Q().map_to(L);
    Fe half = L.from_int(2).inv();
    for (const Fe& y : els)
        for (const Fe& z : els) {
            Fe qp = Q.eval({L.zero(), y, z, L.zero()});
            std::vector<Fe> v{-(qp * half), y, z, L.one()};
            if (on(v)) ++n;
        }
    // w = 0: points (x : y : z : 0) in P^2
    std::vector<std::vector<Fe>> plane{{L.one(), L.zero(), L.zero(), L.zero()}};
    for (const Fe& x : els) plane.push_back({x, L.one(), L.zero(), L.zero()});
    for (const Fe& x : els)
        for (const Fe& y : els) plane.push_back({x, y, L.one(), L.zero()});
    for (auto& v : plane)
        if (Q.eval(v).is_zero() && on(v)) ++n;
    return n;
}

u64 count_points_trigonal(const TrigonalModel& m, const Field& L) {
    Form F = m.F.map_to(L);
    const auto els = all_elements(L);
    u64 n = 0;
    auto on = [&](const std::vector<Fe>& v) { return F.eval(v).is_zero(); };
    if (on({L.one(), L.zero(), L.zero()})) ++n;
    for (const Fe& x : els)
        if (on({x, L.one(), L.zero()})) ++n;
    for (const Fe& x : els)
        for (const Fe& y : els)
            if (on({x, y, L.one()})) ++n;
    // replace the singular point by its rational branches
    auto t = node_type_at_origin(F);
    if (!t) fail(ErrorKind::invalid_model, "no node or cusp at (0:0:1)");
    n -= 1;
    if (*t == TriCase::SplitNode) n += 2;
    else if (*t == TriCase::Cusp) n += 1;
    return n;
}

u64 count_points_howe(const HoweModel& m, const Field& L) {
    // Jac(H) is isogenous to E1 x E2 x Jac(C)
    const Field& K = *m.A1.F;
    HyperModel e1{K.one(), m.f1(), 1}, e2{K.one(), m.f2(), 1}, c{K.one(), m.f1() * m.f2(), 2};
    const u64 q1 = L.order() + 1;
    return count_points_hyper(e1, L) + count_points_hyper(e2, L) + count_points_hyper(c, L) - 2 * q1;
}

}  // namespace ssp
