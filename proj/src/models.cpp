#include "ssp/models.hpp"

#include <algorithm>
#include <numeric>

#include "ssp/groebner.hpp"

namespace ssp {

const char* to_string(QType t) {
    switch (t) {
        case QType::N1: return "N1";
        case QType::N2: return "N2";
        case QType::Dege: return "Dege";
    }
    return "?";
}

const char* to_string(TriCase t) {
    switch (t) {
        case TriCase::SplitNode: return "split-node";
        case TriCase::NonSplitNode: return "non-split-node";
        case TriCase::Cusp: return "cusp";
    }
    return "?";
}

const char* to_string(Reject r) {
    switch (r) {
        case Reject::inseparable: return "inseparable";
        case Reject::reducible: return "reducible";
        case Reject::wrong_singularity: return "wrong-singularity";
        case Reject::not_howe_type: return "not-howe-type";
        case Reject::degenerate_discriminant: return "degenerate-discriminant";
    }
    return "?";
}

const char* to_string(SingVerdict v) {
    switch (v) {
        case SingVerdict::valid_unique_singularity: return "valid-unique-singularity";
        case SingVerdict::extra_singularity: return "extra-singularity";
        case SingVerdict::wrong_type: return "wrong-type";
    }
    return "?";
}

namespace {

Mono mono(int a, int b, int c, int d = 0) {
    return Mono{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c),
                static_cast<std::uint8_t>(d)};
}

}  // namespace

Fe field_nonsquare(const Field& F) {
    if (F.k() == 1) return F.from_int(F.eps());
    for (u64 code = 1;; ++code) {
        Fe x = F.from_code(code);
        if (F.legendre(x) == -1) return x;
    }
}

Form quadric(const Field& F, QType t) {
    Form Q(F, 4, 2);
    switch (t) {
        case QType::N1:
            Q.add_term(mono(1, 0, 0, 1), F.from_int(2));
            Q.add_term(mono(0, 1, 1, 0), F.from_int(2));
            break;
        case QType::N2:
            Q.add_term(mono(1, 0, 0, 1), F.from_int(2));
            Q.add_term(mono(0, 2, 0, 0), F.one());
            Q.add_term(mono(0, 0, 2, 0), -field_nonsquare(F));
            break;
        case QType::Dege:
            Q.add_term(mono(0, 1, 0, 1), F.from_int(2));
            Q.add_term(mono(0, 0, 2, 0), F.one());
            break;
    }
    return Q;
}

Form CanonicalModel::Q() const { return quadric(P.field(), qtype); }

Poly HoweModel::f1() const {
    const Field& F = *A1.F;
    return Poly(F, {B1 * mu * mu * mu, A1 * mu * mu, F.zero(), F.one()});
}

Poly HoweModel::f2() const {
    const Field& F = *A1.F;
    Poly u = Poly(F, {-lambda, F.one()});
    return pow(u, 3) + u * (A2 * nu * nu) + Poly::constant(B2 * nu * nu * nu);
}

// ---------------------------------------------------------------- checks

std::optional<Reject> check_elliptic(const EllipticModel& m) {
    Fe d = 4 * m.A * m.A * m.A + 27 * m.B * m.B;
    if (d.is_zero()) return Reject::degenerate_discriminant;
    return std::nullopt;
}

std::optional<Reject> check_hyper(const HyperModel& m) {
    if (m.c.is_zero()) return Reject::degenerate_discriminant;
    auto d = m.f.degree();
    if (!d || (*d != static_cast<size_t>(2 * m.g + 1) && *d != static_cast<size_t>(2 * m.g + 2)))
        return Reject::degenerate_discriminant;
    if (!is_separable(m.f)) return Reject::inseparable;
    return std::nullopt;
}

// the rewrite of Q's distinguished monomial terminates because it lowers a weight
Form reduce_mod_quadric(const Form& P, QType t) {
    const Field& F = P.field();
    Form Q = quadric(F, t);
    Mono lead = t == QType::Dege ? mono(0, 1, 0, 1) : mono(1, 0, 0, 1);
    Fe lc_inv = Q.coeff(lead).inv();
    Form R = P;
    for (;;) {
        bool changed = false;
        for (const auto& [m, c] : R.terms()) {
            bool div = true;
            for (int i = 0; i < 4; ++i)
                if (m[i] < lead[i]) div = false;
            if (!div) continue;
            Form shift(F, 4, P.degree() - 2);
            Mono q{};
            for (int i = 0; i < 4; ++i) q[i] = static_cast<std::uint8_t>(m[i] - lead[i]);
            shift.add_term(q, c * lc_inv);
            R = R - shift * Q;
            changed = true;
            break;
        }
        if (!changed) return R;
    }
}

namespace {

// dehomogenize a form on the stratum x_0 = .. = x_{s-1} = 0, x_s = 1
MPoly stratum_poly(const SmallField& K, const Form& f, int s) {
    std::vector<Term> ts;
    for (const auto& [m, c] : f.terms()) {
        bool skip = false;
        for (int i = 0; i < s; ++i)
            if (m[i]) skip = true;
        if (skip) continue;
        Exp e;
        int k = 0;
        for (int i = s + 1; i < f.nvars(); ++i) e.e[k++] = m[i];
        ts.push_back({e, K.from(c)});
    }
    return mpoly_normalize(K, std::move(ts));
}

bool variable_divides(const Form& F) {
    for (int i = 0; i < F.nvars(); ++i) {
        bool all = true;
        for (const auto& [m, c] : F.terms())
            if (!m[i]) all = false;
        if (all && !F.is_zero()) return true;
    }
    return false;
}

}  // namespace

bool is_smooth_ci_g4(const CanonicalModel& m) {
    const Field& F = m.P.field();
    const SmallField& K = SmallField::get(F);
    Form Q = m.Q();
    std::vector<Form> gens{Q, m.P};
    std::array<Form, 4> dQ, dP;
    for (int i = 0; i < 4; ++i) {
        dQ[i] = Q.partial(i);
        dP[i] = m.P.partial(i);
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) gens.push_back(dQ[i] * dP[j] - dQ[j] * dP[i]);
    // P^3 is the disjoint union of the strata {x_0 = .. = x_{s-1} = 0, x_s = 1}
    for (int s = 0; s < 4; ++s) {
        GroebnerIdeal I{&K, 3, {}};
        for (const Form& g : gens) I.gens.push_back(stratum_poly(K, g, s));
        if (!contains_one(buchberger(I))) return false;
    }
    return true;
}

std::optional<TriCase> node_type_at_origin(const Form& F) {
    const Field& K = F.field();
    Fe t20 = F.coeff(mono(2, 0, 3)), t11 = F.coeff(mono(1, 1, 3)), t02 = F.coeff(mono(0, 2, 3));
    if (t20.is_zero() && t11.is_zero() && t02.is_zero()) return std::nullopt;
    Fe disc = t11 * t11 - 4 * t20 * t02;
    int l = K.legendre(disc);
    if (l == 1) return TriCase::SplitNode;
    if (l == -1) return TriCase::NonSplitNode;
    // double tangent line
    return TriCase::Cusp;
}

SingVerdict quintic_singularities(const TrigonalModel& m) {
    const Form& F = m.F;
    const Field& Fd = F.field();
    if (!F.coeff(mono(0, 0, 5)).is_zero() || !F.coeff(mono(1, 0, 4)).is_zero() || !F.coeff(mono(0, 1, 4)).is_zero())
        return SingVerdict::wrong_type;
    auto t = node_type_at_origin(F);
    if (!t || *t != m.tcase) return SingVerdict::wrong_type;

    const SmallField& K = SmallField::get(Fd);
    std::vector<Form> gens{F, F.partial(0), F.partial(1), F.partial(2)};
    // chart z = 1: the singular scheme must be supported at the origin only
    {
        GroebnerIdeal I{&K, 3, {}};
        for (const Form& g : gens) {
            std::vector<Term> ts;
            for (const auto& [mo, c] : g.terms()) ts.push_back({Exp{{mo[0], mo[1], 0}}, K.from(c)});
            I.gens.push_back(mpoly_normalize(K, ts));
        }
        auto G = buchberger(I);
        const int N = 8;
        MPoly xn{{{Exp{{N, 0, 0}}, 1}}}, yn{{{Exp{{0, N, 0}}, 1}}};
        if (!normal_form(K, xn, G.gens).is_zero() || !normal_form(K, yn, G.gens).is_zero())
            return SingVerdict::extra_singularity;
    }
    // line z = 0 with x = 1
    {
        GroebnerIdeal I{&K, 3, {}};
        for (const Form& g : gens) {
            std::vector<Term> ts;
            for (const auto& [mo, c] : g.terms())
                if (mo[2] == 0) ts.push_back({Exp{{mo[1], 0, 0}}, K.from(c)});
            I.gens.push_back(mpoly_normalize(K, ts));
        }
        if (!contains_one(buchberger(I))) return SingVerdict::extra_singularity;
    }
    // the point (0:1:0)
    {
        std::vector<Fe> pt{Fd.zero(), Fd.one(), Fd.zero()};
        bool sing = true;
        for (const Form& g : gens)
            if (!g.eval(pt).is_zero()) sing = false;
        if (sing) return SingVerdict::extra_singularity;
    }
    return SingVerdict::valid_unique_singularity;
}

std::optional<Reject> check_canonical(const CanonicalModel& m) {
    if (m.P.degree() != 3 || m.P.nvars() != 4) return Reject::reducible;
    if (reduce_mod_quadric(m.P, m.qtype).is_zero()) return Reject::reducible;
    if (!is_smooth_ci_g4(m)) return Reject::wrong_singularity;
    return std::nullopt;
}

std::optional<Reject> check_trigonal(const TrigonalModel& m) {
    if (m.F.degree() != 5 || m.F.nvars() != 3) return Reject::reducible;
    if (variable_divides(m.F)) return Reject::reducible;
    if (quintic_singularities(m) != SingVerdict::valid_unique_singularity) return Reject::wrong_singularity;
    return std::nullopt;
}

std::optional<Reject> check_howe(const HoweModel& m) {
    if (m.mu.is_zero() || m.nu.is_zero()) return Reject::not_howe_type;
    if (check_elliptic({m.A1, m.B1}) || check_elliptic({m.A2, m.B2})) return Reject::degenerate_discriminant;
    if (!gcd(m.f1(), m.f2()).is_one()) return Reject::not_howe_type;
    return std::nullopt;
}

CurveModel mk_model(CurveModel m) {
    std::optional<Reject> r = std::visit(
        [](const auto& x) -> std::optional<Reject> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, EllipticModel>) return check_elliptic(x);
            else if constexpr (std::is_same_v<T, HyperModel>) return check_hyper(x);
            else if constexpr (std::is_same_v<T, CanonicalModel>) return check_canonical(x);
            else if constexpr (std::is_same_v<T, TrigonalModel>) return check_trigonal(x);
            else return check_howe(x);
        },
        m);
    if (r) fail(ErrorKind::invalid_model, to_string(*r));
    return m;
}

// ---------------------------------------------------------------- boxes

FilterCounts& FilterCounts::operator+=(const FilterCounts& o) {
    yielded += o.yielded;
    filtered += o.filtered;
    for (const auto& [k, v] : o.by_reason) by_reason[k] += v;
    return *this;
}

u64 ModelBox::size() const {
    u64 n = 1;
    for (const Slot& s : slots) n *= s.values.size();
    return n;
}

std::vector<Fe> ModelBox::params(u64 idx) const {
    std::vector<size_t> pick(slots.size());
    for (size_t i = slots.size(); i-- > 0;) {
        u64 n = slots[i].values.size();
        pick[i] = idx % n;
        idx /= n;
    }
    std::vector<Fe> out;
    for (size_t i = 0; i < slots.size(); ++i)
        for (const Fe& v : slots[i].values[pick[i]]) out.push_back(v);
    return out;
}

FilterCounts ModelBox::for_each(u64 start, u64 end, const std::function<void(u64, const CurveModel&)>& fn) const {
    FilterCounts fc;
    end = std::min(end, size());
    for (u64 i = start; i < end; ++i) {
        CurveModel m = at(i);
        std::optional<Reject> r = std::visit(
            [](const auto& x) -> std::optional<Reject> {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, EllipticModel>) return check_elliptic(x);
                else if constexpr (std::is_same_v<T, HyperModel>) return check_hyper(x);
                else if constexpr (std::is_same_v<T, CanonicalModel>) return check_canonical(x);
                else if constexpr (std::is_same_v<T, TrigonalModel>) return check_trigonal(x);
                else return check_howe(x);
            },
            m);
        if (r) {
            ++fc.filtered;
            ++fc.by_reason[to_string(*r)];
            continue;
        }
        ++fc.yielded;
        fn(i, m);
    }
    return fc;
}

namespace {

Slot full_slot(const std::string& name, const Field& K) {
    Slot s{name, {}};
    for (const Fe& x : all_elements(K)) s.values.push_back({x});
    return s;
}

Slot units_slot(const std::string& name, const Field& K) {
    Slot s{name, {}};
    for (const Fe& x : all_elements(K))
        if (!x.is_zero()) s.values.push_back({x});
    return s;
}

Slot list_slot(const std::string& name, const std::vector<Fe>& vals) {
    Slot s{name, {}};
    for (const Fe& v : vals) s.values.push_back({v});
    return s;
}

// a_1, ..., a_n as separate slots, a_1 most significant
void push_a(std::vector<Slot>& slots, const Field& K, int from, int to) {
    for (int i = from; i <= to; ++i) slots.push_back(full_slot("a" + std::to_string(i), K));
}

}  // namespace

ModelBox gen_hyper_reduced(int g, const Field& K) {
    if (std::gcd<u64, u64>(K.p(), 2 * g + 2) != 1) fail(ErrorKind::unsupported, "p divides 2g+2");
    ModelBox box;
    box.name = "hyper" + std::to_string(g);
    box.K = &K;
    Fe eps = field_nonsquare(K);
    box.slots.push_back(list_slot("c", {K.one(), eps}));
    box.slots.push_back(list_slot("b", {K.zero(), K.one(), eps}));
    for (int i = 2 * g - 1; i >= 0; --i) box.slots.push_back(full_slot("a" + std::to_string(i), K));
    box.build = [g, &K](const std::vector<Fe>& v) -> CurveModel {
        std::vector<Fe> c(2 * g + 3, K.zero());
        c[2 * g + 2] = K.one();
        c[2 * g] = v[1];
        for (int i = 0; i < 2 * g; ++i) c[2 * g - 1 - i] = v[2 + i];
        return HyperModel{v[0], Poly(K, c), g};
    };
    return box;
}

std::vector<ModelBox> gen_canonical_reduced(const Field& K) {
    std::vector<ModelBox> out;
    Fe eps = field_nonsquare(K);
    const Fe one = K.one(), zero = K.zero();
    {
        ModelBox b;
        b.name = "N1";
        b.K = &K;
        b.slots.push_back(list_slot("b1", {zero, one, eps}));
        b.slots.push_back(list_slot("b2", {zero, one}));
        push_a(b.slots, K, 1, 10);
        b.build = [&K](const std::vector<Fe>& v) -> CurveModel {
            Form P(K, 4, 3);
            const Fe &b1 = v[0], &b2 = v[1];
            const Fe* a = &v[2] - 1;  // a[1..10]
            P.add_term(mono(2, 1, 0, 0), K.one());
            P.add_term(mono(2, 0, 1, 0), b1);
            P.add_term(mono(1, 0, 2, 0), b2);
            P.add_term(mono(0, 3, 0, 0), a[1]);
            P.add_term(mono(0, 2, 1, 0), a[2]);
            P.add_term(mono(0, 1, 2, 0), a[3]);
            P.add_term(mono(0, 0, 3, 0), a[4]);
            P.add_term(mono(0, 2, 0, 1), a[5]);
            P.add_term(mono(0, 1, 1, 1), a[6]);
            P.add_term(mono(0, 0, 2, 1), a[7]);
            P.add_term(mono(0, 1, 0, 2), a[8]);
            P.add_term(mono(0, 0, 1, 2), a[9]);
            P.add_term(mono(0, 0, 0, 3), a[10]);
            return CanonicalModel{QType::N1, P};
        };
        out.push_back(std::move(b));
    }
    {
        ModelBox b;
        b.name = "N2";
        b.K = &K;
        b.slots.push_back(list_slot("b1", {zero, one}));
        b.slots.push_back(list_slot("b2", {zero, one}));
        Slot a12{"a1a2", {}};
        for (const Fe& x : all_elements(K))
            for (const Fe& y : all_elements(K))
                if (!x.is_zero() || !y.is_zero()) a12.values.push_back({x, y});
        b.slots.push_back(a12);
        push_a(b.slots, K, 3, 10);
        b.build = [&K, eps](const std::vector<Fe>& v) -> CurveModel {
            Form P(K, 4, 3);
            const Fe &b1 = v[0], &b2 = v[1];
            const Fe* a = &v[2] - 1;  // a[1..10]
            P.add_term(mono(2, 1, 0, 0), a[1]);
            P.add_term(mono(2, 0, 1, 0), a[2]);
            P.add_term(mono(1, 2, 0, 0), a[3]);
            P.add_term(mono(1, 0, 2, 0), -(a[3] * eps));
            // b1 y (y^2 - eps z^2) + a4 y (y^2 + 3 eps z^2) + a5 z (3 y^2 + eps z^2)
            P.add_term(mono(0, 3, 0, 0), b1 + a[4]);
            P.add_term(mono(0, 1, 2, 0), -(b1 * eps) + 3 * a[4] * eps);
            P.add_term(mono(0, 2, 1, 0), 3 * a[5]);
            P.add_term(mono(0, 0, 3, 0), a[5] * eps);
            P.add_term(mono(0, 2, 0, 1), a[6]);
            P.add_term(mono(0, 1, 1, 1), a[7]);
            P.add_term(mono(0, 0, 2, 1), b2);
            P.add_term(mono(0, 1, 0, 2), a[8]);
            P.add_term(mono(0, 0, 1, 2), a[9]);
            P.add_term(mono(0, 0, 0, 3), a[10]);
            return CanonicalModel{QType::N2, P};
        };
        out.push_back(std::move(b));
    }
    {
        ModelBox b;
        b.name = "Dege";
        b.K = &K;
        b.slots.push_back(list_slot("b1", {zero, one}));
        b.slots.push_back(list_slot("b2", {zero, one}));
        b.slots.push_back(units_slot("a0", K));
        // R = a1 y^2 + a2 z^2 + a3 w^2 + a4 yz + a5 zw with first nonzero coefficient 1
        Slot R{"a1..a5", {}};
        const auto els = all_elements(K);
        const u64 q = els.size();
        u64 total = 1;
        for (int i = 0; i < 5; ++i) total *= q;
        for (u64 code = 0; code < total; ++code) {
            std::vector<Fe> t(5);
            u64 c = code;
            for (int i = 4; i >= 0; --i) {
                t[i] = els[c % q];
                c /= q;
            }
            auto it = std::find_if(t.begin(), t.end(), [](const Fe& x) { return !x.is_zero(); });
            if (it != t.end() && !it->is_one()) continue;
            R.values.push_back(t);
        }
        b.slots.push_back(R);
        b.slots.push_back(units_slot("a6", K));
        push_a(b.slots, K, 7, 9);
        b.build = [&K](const std::vector<Fe>& v) -> CurveModel {
            Form P(K, 4, 3);
            const Fe &b1 = v[0], &b2 = v[1], &a0 = v[2];
            const Fe* r = &v[3];
            const Fe &a6 = v[8], &a7 = v[9], &a8 = v[10], &a9 = v[11];
            P.add_term(mono(3, 0, 0, 0), a0);
            P.add_term(mono(1, 2, 0, 0), r[0]);
            P.add_term(mono(1, 0, 2, 0), r[1]);
            P.add_term(mono(1, 0, 0, 2), r[2]);
            P.add_term(mono(1, 1, 1, 0), r[3]);
            P.add_term(mono(1, 0, 1, 1), r[4]);
            P.add_term(mono(0, 3, 0, 0), a6);
            P.add_term(mono(0, 0, 3, 0), a7);
            P.add_term(mono(0, 0, 0, 3), a8);
            P.add_term(mono(0, 1, 2, 0), a9);
            P.add_term(mono(0, 0, 2, 1), b1);
            P.add_term(mono(0, 0, 1, 2), b2);
            return CanonicalModel{QType::Dege, P};
        };
        out.push_back(std::move(b));
    }
    if (K.order_fits() && K.order() == 5) {
        ModelBox b;
        b.name = "Dege5";
        b.K = &K;
        b.slots.push_back(list_slot("b1", {zero, one}));
        push_a(b.slots, K, 1, 4);
        b.build = [&K](const std::vector<Fe>& v) -> CurveModel {
            Form P(K, 4, 3);
            const Fe& b1 = v[0];
            const Fe* a = &v[1] - 1;
            P.add_term(mono(3, 0, 0, 0), K.one());
            P.add_term(mono(1, 2, 0, 0), a[1]);
            P.add_term(mono(1, 0, 2, 0), a[2]);
            P.add_term(mono(1, 0, 0, 2), a[3]);
            P.add_term(mono(1, 1, 1, 0), a[4]);
            P.add_term(mono(1, 0, 1, 1), b1);
            P.add_term(mono(0, 2, 1, 0), K.one());
            P.add_term(mono(0, 0, 1, 2), K.one());
            return CanonicalModel{QType::Dege, P};
        };
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<Fe> nonsplit_b_values(const Field& K) {
    if (!K.order_fits()) fail(ErrorKind::unsupported, "field too large");
    if (K.order() % 3 != 2) return {K.zero()};
    // K = F_p here; the group of matrices [[r, eps s], [s, r]] is F_{p^2}^* via r + s t
    const Field& L = Field::get(K.p(), 2);
    const Fe eps = K.from_int(K.eps());
    std::vector<Fe> out;
    Fe rep = L.one();
    for (int i = 0; i < 3; ++i) {
        Fe a = rep;
        if (a.c[0] == 0) {
            // move to another representative of the same coset of cubes
            for (u64 code = 2;; ++code) {
                Fe u = L.from_code(code);
                Fe cand = rep * u * u * u;
                if (cand.c[0] != 0) {
                    a = cand;
                    break;
                }
            }
        }
        Fe r = K.from_int(a.c[0]), s = K.from_int(a.c[1]);
        out.push_back(eps * s / r);
        rep = rep * L.zeta();
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ModelBox> gen_trigonal_reduced(const Field& K) {
    if (K.p() < 5) fail(ErrorKind::unsupported, "trigonal forms need p >= 5");
    std::vector<ModelBox> out;
    const Fe one = K.one(), zero = K.zero();
    const Fe zeta = K.zeta();
    const Fe eps = field_nonsquare(K);
    const bool q1 = K.order() % 3 == 1;

    auto add_tail = [&K](Form& F, const Fe* a6_to_a11) {
        for (int i = 0; i < 6; ++i) F.add_term(mono(5 - i, i, 0), a6_to_a11[i]);
    };
    auto add_quartic = [](Form& F, const Fe* a1_to_a5) {
        for (int i = 0; i < 5; ++i) F.add_term(mono(4 - i, i, 1), a1_to_a5[i]);
    };

    {
        ModelBox b;
        b.name = "split1";
        b.K = &K;
        std::vector<Fe> b1{zero, one};
        if (q1) b1.push_back(zeta);
        b.slots.push_back(list_slot("b1", b1));
        push_a(b.slots, K, 1, 11);
        b.build = [&K, add_tail, add_quartic](const std::vector<Fe>& v) -> CurveModel {
            Form F(K, 3, 5);
            F.add_term(mono(1, 1, 3), K.one());
            F.add_term(mono(3, 0, 2), K.one());
            F.add_term(mono(0, 3, 2), v[0]);
            add_quartic(F, &v[1]);
            add_tail(F, &v[6]);
            return TrigonalModel{TriCase::SplitNode, F};
        };
        out.push_back(std::move(b));
    }
    {
        ModelBox b;
        b.name = "split2";
        b.K = &K;
        Slot c{"c1c2", {{zero, zero}, {one, zero}, {zero, one}, {one, one}, {one, zeta}}};
        b.slots.push_back(c);
        push_a(b.slots, K, 3, 11);
        b.build = [&K, add_tail](const std::vector<Fe>& v) -> CurveModel {
            Form F(K, 3, 5);
            F.add_term(mono(1, 1, 3), K.one());
            F.add_term(mono(4, 0, 1), v[0]);
            F.add_term(mono(3, 1, 1), v[1]);
            F.add_term(mono(2, 2, 1), v[2]);
            F.add_term(mono(1, 3, 1), v[3]);
            F.add_term(mono(0, 4, 1), v[4]);
            add_tail(F, &v[5]);
            return TrigonalModel{TriCase::SplitNode, F};
        };
        out.push_back(std::move(b));
    }
    auto nonsplit_head = [&K, eps](Form& F) {
        F.add_term(mono(2, 0, 3), K.one());
        F.add_term(mono(0, 2, 3), -eps);
    };
    {
        ModelBox b;
        b.name = "nonsplit1";
        b.K = &K;
        b.slots.push_back(list_slot("b", nonsplit_b_values(K)));
        push_a(b.slots, K, 1, 11);
        b.build = [&K, eps, nonsplit_head, add_tail, add_quartic](const std::vector<Fe>& v) -> CurveModel {
            Form F(K, 3, 5);
            nonsplit_head(F);
            // x (x^2 + 3 eps y^2) + b y (3 x^2 + eps y^2)
            const Fe& bb = v[0];
            F.add_term(mono(3, 0, 2), K.one());
            F.add_term(mono(1, 2, 2), 3 * eps);
            F.add_term(mono(2, 1, 2), 3 * bb);
            F.add_term(mono(0, 3, 2), bb * eps);
            add_quartic(F, &v[1]);
            add_tail(F, &v[6]);
            return TrigonalModel{TriCase::NonSplitNode, F};
        };
        out.push_back(std::move(b));
    }
    {
        ModelBox b;
        b.name = "nonsplit2";
        b.K = &K;
        b.slots.push_back(list_slot("c", {one, zeta}));
        push_a(b.slots, K, 2, 11);
        b.build = [&K, nonsplit_head, add_tail](const std::vector<Fe>& v) -> CurveModel {
            Form F(K, 3, 5);
            nonsplit_head(F);
            for (int i = 0; i < 5; ++i) F.add_term(mono(4 - i, i, 1), v[i]);
            add_tail(F, &v[5]);
            return TrigonalModel{TriCase::NonSplitNode, F};
        };
        out.push_back(std::move(b));
    }
    {
        ModelBox b;
        b.name = "nonsplit3";
        b.K = &K;
        push_a(b.slots, K, 6, 11);
        b.build = [&K, nonsplit_head, add_tail](const std::vector<Fe>& v) -> CurveModel {
            Form F(K, 3, 5);
            nonsplit_head(F);
            add_tail(F, &v[0]);
            return TrigonalModel{TriCase::NonSplitNode, F};
        };
        out.push_back(std::move(b));
    }
    {
        ModelBox b;
        b.name = "cusp";
        b.K = &K;
        b.slots.push_back(list_slot("b1", {zero, one}));
        b.slots.push_back(list_slot("b2", {zero, one}));
        b.slots.push_back(units_slot("a1", K));
        push_a(b.slots, K, 2, 10);
        b.build = [&K](const std::vector<Fe>& v) -> CurveModel {
            Form F(K, 3, 5);
            const Fe &b1 = v[0], &b2 = v[1];
            const Fe* a = &v[2] - 1;  // a[1..10]
            F.add_term(mono(2, 0, 3), K.one());
            F.add_term(mono(0, 3, 2), a[1]);
            F.add_term(mono(4, 0, 1), a[2]);
            F.add_term(mono(3, 1, 1), a[3]);
            F.add_term(mono(2, 2, 1), a[4]);
            F.add_term(mono(1, 3, 1), b1);
            F.add_term(mono(0, 4, 1), a[5]);
            F.add_term(mono(5, 0, 0), a[6]);
            F.add_term(mono(4, 1, 0), a[7]);
            F.add_term(mono(3, 2, 0), a[8]);
            F.add_term(mono(2, 3, 0), a[9]);
            F.add_term(mono(1, 4, 0), b2);
            F.add_term(mono(0, 5, 0), a[10]);
            return TrigonalModel{TriCase::Cusp, F};
        };
        out.push_back(std::move(b));
    }
    return out;
}

// ---------------------------------------------------------------- bounds

bool ekedahl_feasible(int g, u64 p, bool hyperelliptic) {
    const u64 g2 = 2 * static_cast<u64>(g);
    if (g2 > p * p - p) return false;
    if (hyperelliptic && !(g == 1 && p == 2) && g2 > p - 1) return false;
    return true;
}

bool ft_maximal_feasible(int g, u64 p) {
    const u64 gg = static_cast<u64>(g);
    return 4 * gg <= (p - 1) * (p - 1) || 2 * gg == p * p - p;
}

// ---------------------------------------------------------------- serialization

namespace {

std::vector<std::string> form_coeffs(const Form& f) {
    const MonoIndex& I = MonoIndex::get(f.nvars(), f.degree());
    std::vector<std::string> out;
    // descending lex: x^d first
    for (size_t i = I.size(); i-- > 0;) out.push_back(std::to_string(f.coeff(I.mono(i)).code()));
    return out;
}

std::string code(const Fe& x) { return std::to_string(x.code()); }

}  // namespace

std::vector<std::string> serialize(const CurveModel& m) {
    return std::visit(
        [](const auto& x) -> std::vector<std::string> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, EllipticModel>) {
                return {code(x.A), code(x.B)};
            } else if constexpr (std::is_same_v<T, HyperModel>) {
                std::vector<std::string> out{code(x.c)};
                for (size_t i = 0; i <= x.f.deg_or_zero(); ++i) out.push_back(code(x.f.coeff(i)));
                return out;
            } else if constexpr (std::is_same_v<T, CanonicalModel>) {
                std::vector<std::string> out{to_string(x.qtype)};
                for (auto& s : form_coeffs(x.P)) out.push_back(s);
                return out;
            } else if constexpr (std::is_same_v<T, TrigonalModel>) {
                std::vector<std::string> out{to_string(x.tcase)};
                for (auto& s : form_coeffs(x.F)) out.push_back(s);
                return out;
            } else {
                return {code(x.A1), code(x.B1), code(x.A2), code(x.B2), code(x.lambda), code(x.mu), code(x.nu)};
            }
        },
        m);
}

std::string family_tag(const CurveModel& m) {
    static const char* names[] = {"elliptic", "hyperelliptic", "canonical4", "trigonal5", "howe"};
    return names[m.index()];
}

namespace {

Fe parse_fe(const std::string& s, const Field& K) {
    size_t used = 0;
    u64 v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || v >= K.order()) fail(ErrorKind::argument, "bad field element '" + s + "'");
    return K.from_code(v);
}

Form parse_form(const std::vector<std::string>& f, size_t from, int n, int d, const Field& K) {
    const MonoIndex& I = MonoIndex::get(n, d);
    if (f.size() - from != I.size()) fail(ErrorKind::argument, "wrong number of form coefficients");
    Form F(K, n, d);
    for (size_t i = 0; i < I.size(); ++i) {
        Fe c = parse_fe(f[from + i], K);
        if (!c.is_zero()) F.add_term(I.mono(I.size() - 1 - i), c);
    }
    return F;
}

}  // namespace

CurveModel deserialize(const std::string& tag, const std::vector<std::string>& f, const Field& K) {
    if (tag == "elliptic" && f.size() == 2) return EllipticModel{parse_fe(f[0], K), parse_fe(f[1], K)};
    if (tag == "hyperelliptic" && f.size() >= 4) {
        std::vector<Fe> cs;
        for (size_t i = 1; i < f.size(); ++i) cs.push_back(parse_fe(f[i], K));
        const int g = static_cast<int>(f.size() - 3) / 2;
        return HyperModel{parse_fe(f[0], K), Poly(K, cs), g};
    }
    if (tag == "canonical4" && !f.empty()) {
        for (QType t : {QType::N1, QType::N2, QType::Dege})
            if (f[0] == to_string(t)) return CanonicalModel{t, parse_form(f, 1, 4, 3, K)};
    }
    if (tag == "trigonal5" && !f.empty()) {
        for (TriCase t : {TriCase::SplitNode, TriCase::NonSplitNode, TriCase::Cusp})
            if (f[0] == to_string(t)) return TrigonalModel{t, parse_form(f, 1, 3, 5, K)};
    }
    if (tag == "howe" && f.size() == 7) {
        std::vector<Fe> v;
        for (const auto& s : f) v.push_back(parse_fe(s, K));
        return HoweModel{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
    }
    fail(ErrorKind::argument, "cannot parse a " + tag + " model");
}

}  // namespace ssp
