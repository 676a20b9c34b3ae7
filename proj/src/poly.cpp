#include "ssp/poly.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace ssp {

Poly::Poly(const Field& F, std::vector<Fe> coeffs) : F_(&F), c_(std::move(coeffs)) {
    for (const Fe& a : c_)
        if (a.F != F_) fail(ErrorKind::argument, "poly coefficient field mismatch");
    trim();
}

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::constant(const Fe& a) { return Poly(*a.F, {a}); }

Poly Poly::x(const Field& F) { return Poly(F, {F.zero(), F.one()}); }

Poly Poly::monomial(const Fe& a, size_t n) {
    std::vector<Fe> c(n + 1, a.F->zero());
    c[n] = a;
    return Poly(*a.F, std::move(c));
}

Poly Poly::from_ints(const Field& F, const std::vector<i64>& cs) {
    std::vector<Fe> c;
    c.reserve(cs.size());
    for (i64 v : cs) c.push_back(F.from_int(v));
    return Poly(F, std::move(c));
}

Poly Poly::from_roots(const Field& F, const std::vector<Fe>& rs) {
    Poly r = constant(F.one());
    for (const Fe& a : rs) r = r * Poly(F, {-a, F.one()});
    return r;
}

Fe Poly::lead() const {
    if (c_.empty()) return F_->zero();
    return c_.back();
}

size_t Poly::valuation() const {
    for (size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero()) return i;
    return 0;
}

Fe Poly::operator()(const Fe& x) const {
    Fe r = F_->zero();
    for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    if (F_ != o.F_) fail(ErrorKind::argument, "poly field mismatch");
    std::vector<Fe> r(std::max(c_.size(), o.c_.size()), F_->zero());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] + o.c_[i];
    return Poly(*F_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    std::vector<Fe> r = c_;
    for (auto& a : r) a = -a;
    return Poly(*F_, std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (F_ != o.F_) fail(ErrorKind::argument, "poly field mismatch");
    if (c_.empty() || o.c_.empty()) return Poly(*F_);
    std::vector<Fe> r(c_.size() + o.c_.size() - 1, F_->zero());
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return Poly(*F_, std::move(r));
}

Poly Poly::operator*(const Fe& s) const {
    std::vector<Fe> r = c_;
    for (auto& a : r) a = a * s;
    return Poly(*F_, std::move(r));
}

bool Poly::operator<(const Poly& o) const {
    if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
    return c_ < o.c_;
}

Poly Poly::monic() const {
    if (c_.empty()) return *this;
    return *this * lead().inv();
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly(*F_);
    std::vector<Fe> r(c_.size() - 1, F_->zero());
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i].scale(static_cast<u32>(i % F_->p()));
    return Poly(*F_, std::move(r));
}

Poly Poly::shift(size_t n) const {
    if (c_.empty()) return *this;
    std::vector<Fe> r(n, F_->zero());
    r.insert(r.end(), c_.begin(), c_.end());
    return Poly(*F_, std::move(r));
}

Poly Poly::truncate(size_t n) const {
    std::vector<Fe> r(c_.begin(), c_.begin() + std::min(n, c_.size()));
    return Poly(*F_, std::move(r));
}

Poly Poly::map_to(const Field& G) const {
    std::vector<Fe> r;
    r.reserve(c_.size());
    for (const Fe& a : c_) r.push_back(G.embed(a));
    return Poly(G, std::move(r));
}

std::optional<Poly> Poly::descend(const Field& sub) const {
    std::vector<Fe> r;
    r.reserve(c_.size());
    for (const Fe& a : c_) {
        auto d = F_->descend(a, sub);
        if (!d) return std::nullopt;
        r.push_back(*d);
    }
    return Poly(sub, std::move(r));
}

Poly Poly::frob_coeffs() const {
    std::vector<Fe> r = c_;
    for (auto& a : r) a = a.frob();
    return Poly(*F_, std::move(r));
}

Poly Poly::compose_affine(const Fe& a, const Fe& b) const {
    // Horner in the ring: f(ax+b)
    Poly lin(*F_, {b, a});
    Poly r(*F_);
    for (size_t i = c_.size(); i-- > 0;) r = r * lin + constant(c_[i]);
    return r;
}

std::string Poly::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i].str();
        if (i) os << "*x^" << i;
    }
    return os.str();
}

Poly pow(const Poly& f, u64 m) {
    Poly r = Poly::constant(f.field().one());
    Poly b = f;
    while (m) {
        if (m & 1) r = r * b;
        m >>= 1;
        if (m) b = b * b;
    }
    return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) fail(ErrorKind::division, "polynomial division by zero");
    const Field& F = a.field();
    if (&F != &b.field()) fail(ErrorKind::argument, "poly field mismatch");
    const size_t db = *b.degree();
    if (a.is_zero() || *a.degree() < db) return {Poly(F), a};
    std::vector<Fe> r = a.coeffs();
    std::vector<Fe> q(r.size() - db, F.zero());
    Fe li = b.lead().inv();
    const auto& bc = b.coeffs();
    for (size_t i = r.size(); i-- > db;) {
        if (r[i].is_zero()) continue;
        Fe t = r[i] * li;
        q[i - db] = t;
        for (size_t j = 0; j <= db; ++j) r[i - db + j] -= t * bc[j];
    }
    r.resize(db);
    return {Poly(F, std::move(q)), Poly(F, std::move(r))};
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }
Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }

Poly gcd(const Poly& a0, const Poly& b0) {
    Poly a = a0, b = b0;
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

bool is_separable(const Poly& f) {
    if (f.is_zero()) return false;
    if (*f.degree() == 0) return true;
    return gcd(f, f.derivative()).is_one();
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

Poly powmod(const Poly& a, u64 e, const Poly& m) {
    Poly r = Poly::constant(m.field().one()) % m;
    Poly b = a % m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        e >>= 1;
        if (e) b = mulmod(b, b, m);
    }
    return r;
}

Poly frobmod(const Poly& a, const Poly& m) { return powmod(a, a.field().p(), m); }

namespace {

// a^{q} mod m with q = p^k of the coefficient field
Poly qpowmod(const Poly& a, const Poly& m) {
    Poly r = a % m;
    for (int i = 0; i < a.field().k(); ++i) r = frobmod(r, m);
    return r;
}

Poly pth_root(const Poly& f) {
    const Field& F = f.field();
    const u32 p = F.p();
    const auto& c = f.coeffs();
    std::vector<Fe> r;
    for (size_t i = 0; i < c.size(); i += p) {
        Fe a = c[i];
        for (int j = 0; j < F.k() - 1; ++j) a = a.frob();
        r.push_back(a);
    }
    return Poly(F, std::move(r));
}

std::vector<std::pair<int, Poly>> ddf(Poly f) {
    std::vector<std::pair<int, Poly>> out;
    const Field& F = f.field();
    Poly X = Poly::x(F);
    Poly h = X % f;
    int d = 0;
    while (f.deg_or_zero() >= 2 * static_cast<size_t>(d + 1)) {
        ++d;
        h = qpowmod(h, f);
        Poly g = gcd(f, h - X);
        if (!g.is_one()) {
            out.emplace_back(d, g);
            f = f / g;
            h = h % f;
        }
    }
    if (f.deg_or_zero() > 0) out.emplace_back(static_cast<int>(f.deg_or_zero()), f.monic());
    return out;
}

void edf(const Poly& g, int d, Rng& rng, std::vector<Poly>& out) {
    const size_t n = g.deg_or_zero();
    if (n == static_cast<size_t>(d)) {
        out.push_back(g.monic());
        return;
    }
    const Field& F = g.field();
    const int kd = F.k() * d;
    for (;;) {
        std::vector<Fe> ac(n);
        for (auto& a : ac) a = F.random(rng);
        Poly a(F, ac);
        if (a.deg_or_zero() == 0) continue;
        // a^((q^d - 1)/2) = (prod_{i < kd} a^{p^i})^((p-1)/2)
        Poly prod = a % g;
        Poly cur = prod;
        for (int i = 1; i < kd; ++i) {
            cur = frobmod(cur, g);
            prod = mulmod(prod, cur, g);
        }
        Poly b = powmod(prod, (F.p() - 1) / 2, g);
        Poly u = gcd(g, b - Poly::constant(F.one()));
        size_t du = u.deg_or_zero();
        if (du > 0 && du < n) {
            edf(u, d, rng, out);
            edf(g / u, d, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<Factor> squarefree(const Poly& f0) {
    std::vector<Factor> res;
    Poly f = f0.monic();
    if (f.deg_or_zero() == 0) return res;
    Poly fp = f.derivative();
    const int p = static_cast<int>(f.field().p());
    if (!fp.is_zero()) {
        Poly c = gcd(f, fp);
        Poly w = f / c;
        int i = 1;
        while (!w.is_one()) {
            Poly y = gcd(w, c);
            Poly z = w / y;
            if (z.deg_or_zero() > 0) res.push_back({z.monic(), i});
            ++i;
            w = y;
            c = c / y;
        }
        if (!c.is_one() && c.deg_or_zero() > 0) {
            for (auto& fa : squarefree(pth_root(c.monic()))) res.push_back({fa.f, fa.mult * p});
        }
    } else {
        for (auto& fa : squarefree(pth_root(f))) res.push_back({fa.f, fa.mult * p});
    }
    return res;
}

std::vector<Factor> factor(const Poly& f, u64 seed) {
    if (f.is_zero()) fail(ErrorKind::argument, "factor of zero");
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::map<std::vector<u64>, Factor> acc;
    auto key = [](const Poly& g) {
        std::vector<u64> k{g.deg_or_zero()};
        for (const Fe& a : g.coeffs()) k.push_back(a.code());
        return k;
    };
    for (const Factor& sq : squarefree(f)) {
        for (auto& [d, part] : ddf(sq.f)) {
            std::vector<Poly> irr;
            edf(part, d, rng, irr);
            for (Poly& g : irr) {
                auto k = key(g);
                auto it = acc.find(k);
                if (it == acc.end())
                    acc.emplace(k, Factor{g, sq.mult});
                else
                    it->second.mult += sq.mult;
            }
        }
    }
    std::vector<Factor> out;
    for (auto& [k, fa] : acc) out.push_back(fa);
    return out;
}

bool is_irreducible(const Poly& f0) {
    if (f0.is_zero() || f0.deg_or_zero() == 0) return false;
    Poly f = f0.monic();
    const size_t d = f.deg_or_zero();
    if (d == 1) return true;
    Poly X = Poly::x(f.field());
    auto iter = [&](size_t times) {
        Poly h = X % f;
        for (size_t i = 0; i < times; ++i) h = qpowmod(h, f);
        return h;
    };
    if (iter(d) != X % f) return false;
    for (u64 r : prime_factors(d)) {
        if (!gcd(f, iter(d / r) - X).is_one()) return false;
    }
    return true;
}

std::vector<Fe> roots(const Poly& f0, u64 seed) {
    if (f0.is_zero()) fail(ErrorKind::argument, "roots of zero");
    std::vector<Fe> out;
    if (f0.deg_or_zero() == 0) return out;
    Poly f = f0.monic();
    const Field& F = f.field();
    Poly X = Poly::x(F);
    Poly g = gcd(f, qpowmod(X, f) - X);
    if (g.deg_or_zero() == 0) return out;
    Rng rng(seed ^ 0x243f6a8885a308d3ull);
    std::vector<Poly> lin;
    edf(g, 1, rng, lin);
    for (const Poly& l : lin) out.push_back(-l.coeff(0));
    std::sort(out.begin(), out.end());
    return out;
}

int splitting_degree(const Poly& f, u64 seed) {
    const int k = f.field().k();
    u64 l = 1;
    for (const Factor& fa : factor(f, seed)) l = std::lcm(l, static_cast<u64>(fa.f.deg_or_zero()));
    const u64 need = l * static_cast<u64>(k);
    for (int K : {1, 2, 4, 6, 8, 10, 12})
        if (K % need == 0) return K;
    fail(ErrorKind::unsupported, "splitting field beyond degree 12");
}

Targeted targeted_power_coeffs(const Poly& f, u64 m, const std::vector<size_t>& targets, bool early_abort) {
    const Field& F = f.field();
    if (m < 1) fail(ErrorKind::argument, "power must be positive");
    if (!std::is_sorted(targets.begin(), targets.end())) fail(ErrorKind::argument, "targets must ascend");
    Targeted res;
    res.values.assign(targets.size(), F.zero());
    if (f.is_zero()) return res;
    const size_t v = f.valuation();
    const auto& fc = f.coeffs();
    std::vector<Fe> g(fc.begin() + v, fc.end());
    const size_t d = g.size() - 1;
    const u64 vm = v * m;
    const u64 top = d * m;
    const u32 p = F.p();

    // index of first target needing the slow path
    size_t i = 0;
    std::vector<Fe> h;
    {
        u64 need = 0;
        bool any = false;
        for (size_t t : targets) {
            if (t < vm) continue;
            u64 s = t - vm;
            if (s >= p || s > top) break;
            need = s;
            any = true;
        }
        if (any) {
            h.reserve(need + 1);
            h.push_back(g[0].pow(m));
            Fe ig0 = g[0].inv();
            for (u64 n = 1; n <= need; ++n) {
                Fe s = F.zero();
                for (u64 j = 1; j <= std::min<u64>(n, d); ++j) {
                    if (g[j].is_zero()) continue;
                    i64 coef = static_cast<i64>(((m + 1) % p) * j % p) - static_cast<i64>(n % p);
                    s += (g[j] * h[n - j]) * F.from_int(coef);
                }
                h.push_back(s * F.from_int(static_cast<i64>(F.inv_p(static_cast<u32>(n % p)))) * ig0);
            }
        }
    }
    for (; i < targets.size(); ++i) {
        size_t t = targets[i];
        if (t < vm) continue;
        u64 s = t - vm;
        if (s > top) continue;
        if (s < h.size()) {
            res.values[i] = h[s];
            if (early_abort && !h[s].is_zero()) {
                res.aborted = true;
                res.abort_at = i;
                res.values.clear();
                return res;
            }
            continue;
        }
        break;
    }
    if (i == targets.size()) return res;
    // slow path: truncated powering of g
    u64 maxs = 0;
    for (size_t t : targets)
        if (t >= vm) maxs = std::max<u64>(maxs, t - vm);
    maxs = std::min(maxs, top);
    const size_t N = maxs + 1;
    Poly G(F, g);
    G = G.truncate(N);
    Poly R = Poly::constant(F.one());
    u64 e = m;
    while (e) {
        if (e & 1) R = (R * G).truncate(N);
        e >>= 1;
        if (e) G = (G * G).truncate(N);
    }
    for (; i < targets.size(); ++i) {
        size_t t = targets[i];
        if (t < vm) continue;
        u64 s = t - vm;
        if (s > top) continue;
        res.values[i] = R.coeff(s);
        if (early_abort && !res.values[i].is_zero()) {
            res.aborted = true;
            res.abort_at = i;
            res.values.clear();
            return res;
        }
    }
    return res;
}

BinForm binform_from_poly(const Poly& f, size_t n) {
    if (!f.is_zero() && f.deg_or_zero() > n) fail(ErrorKind::argument, "binary form degree too small");
    BinForm F(n + 1, f.field().zero());
    for (size_t i = 0; i <= n; ++i) F[i] = f.coeff(i);
    return F;
}

BinForm binform_subst(const BinForm& F, const Fe& a, const Fe& b, const Fe& c, const Fe& d) {
    const size_t n = F.size() - 1;
    const Field& K = *a.F;
    // powers of L1 = a x + b z and L2 = c x + d z as coefficient vectors in x
    auto powers = [&](const Fe& u, const Fe& v) {
        std::vector<std::vector<Fe>> P(n + 1);
        P[0] = {K.one()};
        for (size_t i = 1; i <= n; ++i) {
            std::vector<Fe> r(i + 1, K.zero());
            for (size_t j = 0; j < i; ++j) {
                r[j + 1] += P[i - 1][j] * u;  // x part
                r[j] += P[i - 1][j] * v;      // z part
            }
            P[i] = std::move(r);
        }
        return P;
    };
    auto P1 = powers(a, b), P2 = powers(c, d);
    BinForm out(n + 1, K.zero());
    for (size_t i = 0; i <= n; ++i) {
        if (F[i].is_zero()) continue;
        const auto& A = P1[i];
        const auto& B = P2[n - i];
        for (size_t s = 0; s < A.size(); ++s) {
            if (A[s].is_zero()) continue;
            Fe t = F[i] * A[s];
            for (size_t r = 0; r < B.size(); ++r) out[s + r] += t * B[r];
        }
    }
    return out;
}

}  // namespace ssp
