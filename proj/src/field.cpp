#include "ssp/field.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace ssp {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::argument: return "argument-error";
        case ErrorKind::division: return "division-error";
        case ErrorKind::internal: return "internal-error";
        case ErrorKind::invalid_model: return "invalid-model";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::overload: return "overload-error";
        case ErrorKind::seed_failure: return "seed-failure";
        case ErrorKind::census_incomplete: return "census-incomplete";
        case ErrorKind::not_comparable: return "not-comparable";
    }
    return "error";
}

namespace {

u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod64(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
            factor_into(n, out);
            return;
        }
    }
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

// --- dense polynomials over F_p as u32 vectors, low degree first ---

using PV = std::vector<u32>;

void trim(PV& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PV pv_mod(PV a, const PV& m, const Barrett& B) {
    trim(a);
    const size_t dm = m.size() - 1;  // m is monic
    while (a.size() > dm) {
        u32 c = a.back();
        size_t sh = a.size() - 1 - dm;
        for (size_t i = 0; i <= dm; ++i) a[sh + i] = B.sub(a[sh + i], B.mul(c, m[i]));
        trim(a);
    }
    return a;
}

PV pv_mulmod(const PV& a, const PV& b, const PV& m, const Barrett& B) {
    if (a.empty() || b.empty()) return {};
    PV r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = B.add(r[i + j], B.mul(a[i], b[j]));
    return pv_mod(std::move(r), m, B);
}

PV pv_powmod(PV a, u64 e, const PV& m, const Barrett& B) {
    PV r{1};
    a = pv_mod(a, m, B);
    while (e) {
        if (e & 1) r = pv_mulmod(r, a, m, B);
        a = pv_mulmod(a, a, m, B);
        e >>= 1;
    }
    return r;
}

u32 inv_mod_p(u32 a, u32 p) {
    i64 t = 0, nt = 1, r = p, nr = a;
    while (nr) {
        i64 q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (r != 1) fail(ErrorKind::division, "inverse of zero");
    return static_cast<u32>(t < 0 ? t + p : t);
}

PV pv_gcd(PV a, PV b, const Barrett& B) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        u32 li = inv_mod_p(b.back(), B.p);
        PV mb = b;
        for (auto& x : mb) x = B.mul(x, li);
        a = pv_mod(a, mb, B);
        std::swap(a, b);
    }
    return a;
}

bool rabin_irreducible(const PV& m, const Barrett& B) {
    const int k = static_cast<int>(m.size()) - 1;
    auto frob_iter = [&](int times) {
        PV x{0, 1};
        for (int i = 0; i < times; ++i) x = pv_powmod(x, B.p, m, B);
        return x;
    };
    PV xk = frob_iter(k);
    if (!(xk.size() == 2 && xk[0] == 0 && xk[1] == 1)) return false;
    for (u64 r : prime_factors(static_cast<u64>(k))) {
        PV y = frob_iter(k / static_cast<int>(r));
        y.resize(std::max<size_t>(y.size(), 2), 0);
        y[1] = B.sub(y[1], 1);
        trim(y);
        PV g = pv_gcd(m, y, B);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    factor_into(n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------- Field

const Field& Field::get(u32 p, int k) {
    // recursive: building F_{p^k} consults F_p
    static std::recursive_mutex mu;
    static std::map<std::pair<u32, int>, std::unique_ptr<Field>> registry;
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto key = std::make_pair(p, k);
    auto it = registry.find(key);
    if (it != registry.end()) return *it->second;
    auto f = std::make_unique<Field>(p, k);
    const Field& ref = *f;
    registry.emplace(key, std::move(f));
    return ref;
}

Field::Field(u32 p, int k) : p_(p), k_(k) {
    if (p < 3 || p >= (1u << 20) || !is_prime_u64(p)) fail(ErrorKind::argument, "p must be an odd prime below 2^20");
    if (!(k == 1 || k == 2 || k == 4 || k == 6 || k == 8 || k == 10 || k == 12))
        fail(ErrorKind::argument, "unsupported extension degree");
    bar_ = Barrett(p);
    for (u32 a = 2; a < p; ++a) {
        if (legendre_p(a) == -1) {
            eps_ = a;
            break;
        }
    }
    u128 q = 1;
    order_fits_ = true;
    for (int i = 0; i < k; ++i) {
        q *= p;
        if (q >= (u128(1) << 63)) order_fits_ = false;
    }
    if (order_fits_) order_ = static_cast<u64>(q);
    find_modulus();
    build_frobenius();
    if (k % 2 == 0) find_sqrt_eps();
}

u64 Field::order() const {
    if (!order_fits_) fail(ErrorKind::unsupported, "field order exceeds 63 bits");
    return order_;
}

void Field::find_modulus() {
    if (k_ == 1) {
        mod_ = {0, 1};
        return;
    }
    if (k_ == 2) {
        mod_ = {p_ - eps_, 0, 1};
        return;
    }
    // trinomials t^k + a t + b first, in (a, b) order
    for (u32 a = 0; a < p_; ++a) {
        for (u32 b = 1; b < p_; ++b) {
            PV m(k_ + 1, 0);
            m[0] = b;
            m[1] = a;
            m[k_] = 1;
            if (rabin_irreducible(m, bar_)) {
                mod_ = m;
                return;
            }
        }
    }
    // general monic tails in counter order
    PV m(k_ + 1, 0);
    m[k_] = 1;
    for (u64 n = 0; n < 10000000ull; ++n) {
        u64 v = n;
        for (int i = 0; i < k_; ++i) {
            m[i] = static_cast<u32>(v % p_);
            v /= p_;
        }
        if (m[0] != 0 && rabin_irreducible(m, bar_)) {
            mod_ = m;
            return;
        }
    }
    fail(ErrorKind::internal, "irreducible modulus search failed");
}

void Field::build_frobenius() {
    frob_.assign(k_, {});
    if (k_ == 1) {
        frob_[0][0] = 1;
        return;
    }
    PV tp = pv_powmod(PV{0, 1}, p_, mod_, bar_);
    PV cur{1};
    for (int j = 0; j < k_; ++j) {
        std::array<u32, kMaxExt> col{};
        for (size_t i = 0; i < cur.size(); ++i) col[i] = cur[i];
        frob_[j] = col;
        cur = pv_mulmod(cur, tp, mod_, bar_);
    }
}

void Field::find_sqrt_eps() {
    if (k_ == 2) {
        sqrt_eps_ = gen();
        Fe m = -sqrt_eps_;
        if (m < sqrt_eps_) sqrt_eps_ = m;
        return;
    }
    // z = sum of sigma^{2i}(y) lies in F_{p^2}; (z - sigma z) squared is in F_p
    for (int j = 1; j < 4 * k_; ++j) {
        Fe y = gen().pow(j);
        Fe z = zero();
        Fe cur = y;
        for (int i = 0; i < k_ / 2; ++i) {
            z += cur;
            cur = cur.frob().frob();
        }
        Fe d = z - z.frob();
        if (d.is_zero()) continue;
        Fe d2 = d * d;
        if (!d2.in_prime_field()) fail(ErrorKind::internal, "trace not in F_p2");
        u32 r = bar_.mul(d2.c[0], inv_p(eps_));
        // r must be a square in F_p
        std::optional<Fe> s = Field::get(p_, 1).sqrt(Field::get(p_, 1).from_int(r));
        if (!s) fail(ErrorKind::internal, "sqrt eps search");
        Fe root = d.scale(inv_p(s->c[0]));
        Fe m = -root;
        sqrt_eps_ = (m < root) ? m : root;
        if (!(sqrt_eps_ * sqrt_eps_ == from_int(eps_))) fail(ErrorKind::internal, "sqrt eps check");
        return;
    }
    fail(ErrorKind::internal, "sqrt eps not found");
}

const Fe& Field::sqrt_eps() const {
    if (k_ % 2) fail(ErrorKind::argument, "odd degree field has no sqrt(eps)");
    return sqrt_eps_;
}

Fe Field::zero() const {
    Fe z;
    z.F = this;
    return z;
}

Fe Field::one() const {
    Fe z = zero();
    z.c[0] = 1;
    return z;
}

Fe Field::from_int(i64 v) const {
    Fe z = zero();
    i64 r = v % static_cast<i64>(p_);
    if (r < 0) r += p_;
    z.c[0] = static_cast<u32>(r);
    return z;
}

Fe Field::from_coeffs(const std::vector<u32>& cs) const {
    if (cs.size() > static_cast<size_t>(k_)) fail(ErrorKind::argument, "too many coefficients");
    Fe z = zero();
    for (size_t i = 0; i < cs.size(); ++i) z.c[i] = cs[i] % p_;
    return z;
}

Fe Field::gen() const {
    Fe z = zero();
    if (k_ == 1) fail(ErrorKind::argument, "prime field has no generator t");
    z.c[1] = 1;
    return z;
}

Fe Field::from_code(u64 code) const {
    Fe z = zero();
    for (int i = k_ - 1; i >= 0; --i) {
        z.c[i] = static_cast<u32>(code % p_);
        code /= p_;
    }
    return z;
}

Fe Field::random(Rng& rng) const {
    Fe z = zero();
    std::uniform_int_distribution<u32> d(0, p_ - 1);
    for (int i = 0; i < k_; ++i) z.c[i] = d(rng);
    return z;
}

Fe Field::embed(const Fe& x) const {
    if (x.F == this) return x;
    if (x.F->p() != p_) fail(ErrorKind::argument, "embed across characteristics");
    if (x.F->k() == 1) return from_int(x.c[0]);
    if (x.F->k() == 2 && k_ % 2 == 0) {
        Fe r = from_int(x.c[0]);
        return r + sqrt_eps_.scale(x.c[1]);
    }
    fail(ErrorKind::argument, "unsupported embedding");
}

std::optional<Fe> Field::descend(const Fe& x, const Field& sub) const {
    if (x.F != this) fail(ErrorKind::argument, "descend: wrong field");
    if (&sub == this) return x;
    if (sub.p() != p_) fail(ErrorKind::argument, "descend across characteristics");
    if (sub.k() == 1) {
        if (!x.in_prime_field()) return std::nullopt;
        return sub.from_int(x.c[0]);
    }
    if (sub.k() == 2 && k_ % 2 == 0) {
        Fe s = x.frob();
        if (!(s.frob() == x)) return std::nullopt;
        u32 inv2 = inv_p(2);
        Fe u = (x + s).scale(inv2);
        Fe v = (x - s) * (sqrt_eps_.scale(2)).inv();
        if (!u.in_prime_field() || !v.in_prime_field()) fail(ErrorKind::internal, "descend");
        return sub.from_coeffs({u.c[0], v.c[0]});
    }
    fail(ErrorKind::argument, "unsupported descent");
}

u32 Field::norm(const Fe& x) const {
    Fe n = x;
    Fe cur = x;
    for (int i = 1; i < k_; ++i) {
        cur = cur.frob();
        n = n * cur;
    }
    return n.c[0];
}

int Field::legendre(const Fe& x) const {
    if (x.is_zero()) return 0;
    return legendre_p(norm(x));
}

u32 Field::inv_p(u32 a) const { return inv_mod_p(a % p_, p_); }

u32 Field::pow_p(u32 a, u64 e) const {
    u32 r = 1;
    a %= p_;
    while (e) {
        if (e & 1) r = bar_.mul(r, a);
        a = bar_.mul(a, a);
        e >>= 1;
    }
    return r;
}

int Field::legendre_p(u32 a) const {
    a %= p_;
    if (a == 0) return 0;
    return pow_p(a, (p_ - 1) / 2) == 1 ? 1 : -1;
}

std::optional<Fe> Field::sqrt(const Fe& x) const {
    if (x.F != this) fail(ErrorKind::argument, "sqrt: wrong field");
    if (x.is_zero()) return x;
    if (legendre(x) != 1) return std::nullopt;
    if (k_ == 1) {
        // Tonelli-Shanks
        u32 a = x.c[0];
        u32 q = p_ - 1;
        int s = 0;
        while (q % 2 == 0) {
            q /= 2;
            ++s;
        }
        u32 z = eps_;
        u32 m = s, c = pow_p(z, q), t = pow_p(a, q), r = pow_p(a, (q + 1) / 2);
        while (t != 1) {
            u32 i = 0, tt = t;
            while (tt != 1) {
                tt = bar_.mul(tt, tt);
                ++i;
            }
            u32 b = c;
            for (u32 j = 0; j + i + 1 < m; ++j) b = bar_.mul(b, b);
            m = i;
            c = bar_.mul(b, b);
            t = bar_.mul(t, c);
            r = bar_.mul(r, b);
        }
        Fe res = from_int(r), neg = -res;
        return neg < res ? neg : res;
    }
    // Cantor-Zassenhaus on X^2 - x: in R = F[X]/(X^2 - x) compute (X + a)^((q-1)/2)
    // as the norm-style product prod_i Frob^i(X + a) raised to (p-1)/2.
    // Frob(u + vX) = sigma(u) + sigma(v) X^p, X^p = X * x^((p-1)/2).
    // We evaluate with explicit arithmetic in R.
    struct R2 {
        Fe u, v;
    };
    auto mulR = [&](const R2& a, const R2& b) {
        return R2{a.u * b.u + a.v * b.v * x, a.u * b.v + a.v * b.u};
    };
    // X^p = X^(p-1) X = x^((p-1)/2) X, X^(p^i) = x^((p^i-1)/2) X computed iteratively
    Rng rng(0x5eed + x.code() % 1000003);
    for (u64 attempt = 0;; ++attempt) {
        Fe a0 = attempt < p_ ? from_int(static_cast<i64>(attempt)) : random(rng);
        R2 prod{a0, one()};
        Fe xp = x.pow((p_ - 1) / 2);
        Fe coef = xp;  // X^{p^i} = coef * X
        Fe ai = a0;
        for (int i = 1; i < k_; ++i) {
            ai = ai.frob();
            prod = mulR(prod, R2{ai, coef});
            coef = coef.frob() * xp;
        }
        // raise to (p-1)/2
        R2 r{one(), zero()};
        R2 b = prod;
        u64 e = (p_ - 1) / 2;
        while (e) {
            if (e & 1) r = mulR(r, b);
            b = mulR(b, b);
            e >>= 1;
        }
        // r = w0 + w1 X; root of gcd(X^2 - x, r - 1) when w1 != 0
        if (r.v.is_zero()) continue;
        Fe root = (one() - r.u) / r.v;
        if (root * root == x) {
            Fe neg = -root;
            return neg < root ? neg : root;
        }
    }
}

void Field::find_zeta() const {
    if (!order_fits_) fail(ErrorKind::unsupported, "primitive element needs p^k < 2^63");
    u64 n = order_ - 1;
    order_factors_ = prime_factors(n);
    for (u64 code = 1; code < order_; ++code) {
        Fe z = from_code(code);
        bool prim = true;
        for (u64 l : order_factors_) {
            if (z.pow(n / l).is_one()) {
                prim = false;
                break;
            }
        }
        if (prim) {
            zeta_ = z;
            return;
        }
    }
    fail(ErrorKind::internal, "no primitive element");
}

const Fe& Field::zeta() const {
    std::call_once(zeta_once_, [this] { find_zeta(); });
    return zeta_;
}

u64 Field::mult_order(const Fe& x) const {
    if (x.is_zero()) fail(ErrorKind::argument, "order of zero");
    zeta();
    u64 n = order_ - 1;
    for (u64 l : order_factors_) {
        while (n % l == 0 && x.pow(n / l).is_one()) n /= l;
    }
    return n;
}

std::optional<u64> Field::dlog(const Fe& x) const {
    if (x.is_zero()) return std::nullopt;
    const Fe& g = zeta();
    const u64 n = order_ - 1;
    // Pohlig-Hellman with baby-step giant-step per prime
    u64 result = 0, modulus = 1;
    for (u64 l : order_factors_) {
        u64 le = 1;
        int e = 0;
        while ((n / le) % l == 0) {
            le *= l;
            ++e;
        }
        Fe gl = g.pow(n / l);  // order l
        // baby steps for base gl
        u64 msz = static_cast<u64>(std::sqrt(static_cast<double>(l))) + 1;
        std::unordered_map<u64, u64> table;
        Fe cur = one();
        for (u64 j = 0; j < msz; ++j) {
            table.emplace(cur.code(), j);
            cur = cur * gl;
        }
        Fe giant = gl.pow(msz).inv();
        u64 xk = 0, lpow = 1;
        for (int i = 0; i < e; ++i) {
            // h = (x * g^{-xk})^{n / l^{i+1}}
            Fe h = (x * g.pow(xk).inv()).pow(n / (lpow * l));
            Fe y = h;
            u64 d = ~u64(0);
            for (u64 s = 0; s <= msz; ++s) {
                auto it = table.find(y.code());
                if (it != table.end()) {
                    d = s * msz + it->second;
                    break;
                }
                y = y * giant;
            }
            if (d == ~u64(0)) fail(ErrorKind::internal, "dlog failed");
            xk += d * lpow;
            lpow *= l;
        }
        // combine xk mod le with result mod modulus (CRT)
        u128 M = modulus;
        u64 t = 0;
        // find t with result + modulus * t == xk (mod le)
        u64 inv = 0;
        {
            i64 a = static_cast<i64>(modulus % le), b = static_cast<i64>(le);
            i64 x0 = 1, x1 = 0;
            while (b) {
                i64 q = a / b;
                std::tie(a, b) = std::make_pair(b, a - q * b);
                std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
            }
            inv = static_cast<u64>((x0 % static_cast<i64>(le) + static_cast<i64>(le)) % static_cast<i64>(le));
        }
        u64 diff = (xk % le + le - result % le) % le;
        t = mulmod64(diff, inv, le);
        result = static_cast<u64>(result + M * t);
        modulus *= le;
    }
    return result % n;
}

std::string Field::name() const {
    std::ostringstream os;
    os << "F_" << p_;
    if (k_ > 1) os << "^" << k_;
    return os.str();
}

std::vector<Fe> all_elements(const Field& F) {
    u64 q = F.order();
    if (q > (u64(1) << 26)) fail(ErrorKind::overload, "field too large to enumerate");
    std::vector<Fe> out;
    out.reserve(q);
    for (u64 i = 0; i < q; ++i) out.push_back(F.from_code(i));
    return out;
}

// ---------------------------------------------------------------- Fe

bool Fe::is_zero() const {
    for (int i = 0; i < F->k(); ++i)
        if (c[i]) return false;
    return true;
}

bool Fe::is_one() const {
    if (c[0] != 1) return false;
    for (int i = 1; i < F->k(); ++i)
        if (c[i]) return false;
    return true;
}

bool Fe::in_prime_field() const {
    for (int i = 1; i < F->k(); ++i)
        if (c[i]) return false;
    return true;
}

static inline void check_same(const Fe& a, const Fe& b) {
    if (a.F != b.F) fail(ErrorKind::argument, "field context mismatch");
}

Fe Fe::operator+(const Fe& o) const {
    check_same(*this, o);
    Fe r;
    r.F = F;
    const Barrett& B = F->bar();
    for (int i = 0; i < F->k(); ++i) r.c[i] = B.add(c[i], o.c[i]);
    return r;
}

Fe Fe::operator-(const Fe& o) const {
    check_same(*this, o);
    Fe r;
    r.F = F;
    const Barrett& B = F->bar();
    for (int i = 0; i < F->k(); ++i) r.c[i] = B.sub(c[i], o.c[i]);
    return r;
}

Fe Fe::operator-() const {
    Fe r;
    r.F = F;
    const Barrett& B = F->bar();
    for (int i = 0; i < F->k(); ++i) r.c[i] = B.neg(c[i]);
    return r;
}

Fe Fe::scale(u32 s) const {
    Fe r;
    r.F = F;
    const Barrett& B = F->bar();
    for (int i = 0; i < F->k(); ++i) r.c[i] = B.mul(c[i], s);
    return r;
}

Fe Fe::operator*(const Fe& o) const {
    check_same(*this, o);
    const Barrett& B = F->bar();
    const int k = F->k();
    Fe r;
    r.F = F;
    if (k == 1) {
        r.c[0] = B.mul(c[0], o.c[0]);
        return r;
    }
    if (k == 2) {
        u32 e = F->eps();
        u64 lo = static_cast<u64>(c[0]) * o.c[0] + static_cast<u64>(B.mul(c[1], o.c[1])) * e;
        u64 hi = static_cast<u64>(c[0]) * o.c[1] + static_cast<u64>(c[1]) * o.c[0];
        r.c[0] = B.reduce(lo);
        r.c[1] = B.reduce(hi);
        return r;
    }
    std::array<u64, 2 * kMaxExt> acc{};
    for (int i = 0; i < k; ++i) {
        if (!c[i]) continue;
        for (int j = 0; j < k; ++j) acc[i + j] += static_cast<u64>(c[i]) * o.c[j];
    }
    const auto& m = F->modulus();
    const u32 p = F->p();
    for (int i = 2 * k - 2; i >= k; --i) {
        u32 t = B.reduce(acc[i]);
        if (!t) continue;
        for (int j = 0; j < k; ++j) {
            if (m[j]) acc[i - k + j] += static_cast<u64>(p - m[j]) * t;
        }
    }
    for (int i = 0; i < k; ++i) r.c[i] = B.reduce(acc[i]);
    return r;
}

Fe Fe::frob() const {
    const int k = F->k();
    if (k == 1) return *this;
    const Barrett& B = F->bar();
    Fe r;
    r.F = F;
    if (k == 2) {
        r.c[0] = c[0];
        r.c[1] = B.neg(c[1]);
        return r;
    }
    std::array<u64, kMaxExt> acc{};
    const auto& M = F->frob_matrix();
    for (int j = 0; j < k; ++j) {
        if (!c[j]) continue;
        for (int i = 0; i < k; ++i) acc[i] += static_cast<u64>(c[j]) * M[j][i];
    }
    for (int i = 0; i < k; ++i) r.c[i] = B.reduce(acc[i]);
    return r;
}

Fe Fe::inv() const {
    if (is_zero()) fail(ErrorKind::division, "inverse of zero");
    const int k = F->k();
    if (k == 1) {
        Fe r = *this;
        r.c[0] = F->inv_p(c[0]);
        return r;
    }
    // x^{-1} = (prod_{i>=1} sigma^i x) / N(x)
    Fe prod = F->one();
    Fe cur = *this;
    for (int i = 1; i < k; ++i) {
        cur = cur.frob();
        prod = prod * cur;
    }
    Fe n = prod * *this;
    return prod.scale(F->inv_p(n.c[0]));
}

Fe Fe::operator/(const Fe& o) const { return *this * o.inv(); }

Fe Fe::pow(u64 e) const {
    Fe r = F->one();
    Fe b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

u64 Fe::code() const {
    u64 v = 0;
    for (int i = 0; i < F->k(); ++i) v = v * F->p() + c[i];
    return v;
}

std::string Fe::str() const {
    if (F->k() == 1) return std::to_string(c[0]);
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < F->k(); ++i) os << (i ? "," : "") << c[i];
    os << ")";
    return os.str();
}

}  // namespace ssp
