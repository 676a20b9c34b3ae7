#pragma once

// Test-only reference arithmetic, independent of the library's Field.
// GF(p^k) elements are coefficient vectors modulo a brute-force irreducible.

#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

inline i64 md(i64 a, i64 p) { return ((a % p) + p) % p; }

inline i64 inv_mod(i64 a, i64 p) {
    i64 r = 1, b = md(a, p), e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

struct GF {
    i64 p;
    int k;
    std::vector<i64> mod;  // monic, degree k, low first
    i64 q = 1;

    GF(i64 p_, int k_) : p(p_), k(k_) {
        for (int i = 0; i < k; ++i) q *= p;
        if (k == 1) {
            mod = {0, 1};
            return;
        }
        // first monic polynomial without roots and (for k = 4) without quadratic factors
        for (i64 code = 0;; ++code) {
            std::vector<i64> m(k + 1, 0);
            m[k] = 1;
            i64 c = code;
            for (int i = 0; i < k; ++i) {
                m[i] = c % p;
                c /= p;
            }
            if (irreducible(m)) {
                mod = m;
                return;
            }
        }
    }

    static std::vector<i64> polmod(std::vector<i64> a, const std::vector<i64>& m, i64 p) {
        int dm = static_cast<int>(m.size()) - 1;
        for (int i = static_cast<int>(a.size()) - 1; i >= dm; --i) {
            i64 c = md(a[i], p) * inv_mod(m[dm], p) % p;
            if (!c) continue;
            for (int j = 0; j <= dm; ++j) a[i - dm + j] = md(a[i - dm + j] - c * m[j], p);
        }
        a.resize(dm);
        for (auto& x : a) x = md(x, p);
        return a;
    }

    bool irreducible(const std::vector<i64>& m) const {
        // no factor of degree <= k/2
        for (int d = 1; d <= k / 2; ++d) {
            i64 cnt = 1;
            for (int i = 0; i < d; ++i) cnt *= p;
            for (i64 code = 0; code < cnt; ++code) {
                std::vector<i64> f(d + 1, 0);
                f[d] = 1;
                i64 c = code;
                for (int i = 0; i < d; ++i) {
                    f[i] = c % p;
                    c /= p;
                }
                auto r = polmod(m, f, p);
                bool zero = true;
                for (auto x : r) zero = zero && x == 0;
                if (zero) return false;
            }
        }
        return true;
    }

    using E = std::vector<i64>;
    E zero() const { return E(k, 0); }
    E from(i64 a) const {
        E e = zero();
        e[0] = md(a, p);
        return e;
    }
    E add(const E& a, const E& b) const {
        E r(k);
        for (int i = 0; i < k; ++i) r[i] = (a[i] + b[i]) % p;
        return r;
    }
    E mul(const E& a, const E& b) const {
        std::vector<i64> r(2 * k - 1, 0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
        return polmod(r, mod, p);
    }
    bool is_zero(const E& a) const {
        for (auto x : a)
            if (x) return false;
        return true;
    }
    E elem(i64 code) const {
        E e(k);
        for (int i = 0; i < k; ++i) {
            e[i] = code % p;
            code /= p;
        }
        return e;
    }
    E pow(E a, i64 e) const {
        E r = from(1);
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    bool is_square(const E& a) const { return is_zero(a) || pow(a, (q - 1) / 2) == from(1); }
};

// Form over F_p: exponent tuple -> integer coefficient.
using Exps = std::vector<int>;
using IForm = std::map<Exps, i64>;

inline GF::E eval(const GF& K, const IForm& f, const std::vector<GF::E>& v) {
    GF::E s = K.zero();
    for (const auto& [m, c] : f) {
        GF::E t = K.from(c);
        for (size_t i = 0; i < m.size(); ++i) t = K.mul(t, K.pow(v[i], m[i]));
        s = K.add(s, t);
    }
    return s;
}

inline IForm partial(const IForm& f, int i, i64 p) {
    IForm r;
    for (const auto& [m, c] : f) {
        if (!m[i]) continue;
        Exps mm = m;
        --mm[i];
        i64 v = md(c * m[i], p);
        if (v) r[mm] = md(r[mm] + v, p);
    }
    return r;
}

// calls fn on each point of P^{n-1}(F_{p^k}) in normalized form
template <class Fn>
void for_each_projective(const GF& K, int n, Fn fn) {
    for (int lead = n - 1; lead >= 0; --lead) {
        // coordinates before `lead` free, lead = 1, after lead = 0
        i64 cnt = 1;
        for (int i = 0; i < lead; ++i) cnt *= K.q;
        for (i64 code = 0; code < cnt; ++code) {
            std::vector<GF::E> v(n, K.zero());
            i64 c = code;
            for (int i = 0; i < lead; ++i) {
                v[i] = K.elem(c % K.q);
                c /= K.q;
            }
            v[lead] = K.from(1);
            fn(v);
        }
    }
}

}  // namespace oracle
