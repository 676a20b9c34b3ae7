#include "ssp/kernels.hpp"

#include <algorithm>
#include <numeric>

#include "ssp/frobenius.hpp"

namespace ssp {

namespace {

using Vec = std::vector<u32>;

// a * b truncated to degree < n, coefficients mod p
Vec mul_trunc(const Vec& a, const Vec& b, size_t n, u32 p) {
    std::vector<u64> r(n, 0);
    for (size_t i = 0; i < a.size() && i < n; ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size() && i + j < n; ++j) r[i + j] += static_cast<u64>(a[i]) * b[j];
    }
    Vec out(n);
    for (size_t i = 0; i < n; ++i) out[i] = static_cast<u32>(r[i] % p);
    return out;
}

Vec pow_trunc(const Vec& a, u64 e, size_t n, u32 p) {
    Vec r(n, 0), b = a;
    r[0] = 1;
    b.resize(n, 0);
    while (e) {
        if (e & 1) r = mul_trunc(r, b, n, p);
        e >>= 1;
        if (e) b = mul_trunc(b, b, n, p);
    }
    return r;
}

u32 inv_mod(u32 a, u32 p) {
    u64 r = 1, b = a, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<u32>(r);
}

}  // namespace

// ---------------------------------------------------------------- hyperelliptic

HyperScan::HyperScan(int g, const Field& K) : g_(g), K_(&K) {
    if (K.k() != 1) fail(ErrorKind::unsupported, "the hyperelliptic kernel runs over prime fields");
    p_ = K.p();
    if (p_ < 3 || static_cast<int>(p_) <= g) fail(ErrorKind::unsupported, "the hyperelliptic kernel needs p > g");
    if (std::gcd<u64, u64>(p_, 2 * g + 2) != 1) fail(ErrorKind::unsupported, "p divides 2g+2");
    m_ = (p_ - 1) / 2;
    t0_ = static_cast<int>(p_) - g;
    L_ = std::min(t0_ / 2 + 1, 2 * g);
    J_ = std::min<int>(static_cast<int>(m_), static_cast<int>(p_ - 1) / L_);
    chunks_ = L_ >= 2 ? static_cast<u64>(p_) * p_ : p_;
}

KernelChunk HyperScan::tally(u64 chunk) const {
    KernelChunk out;
    u64 n = 2 * 3;
    for (int k = L_ >= 2 ? 2 : 1; k <= 2 * g_ - 1; ++k) n *= p_;
    out.candidates = n;
    if (L_ >= 2 && chunk == 0) out.inseparable = n;
    return out;
}

KernelChunk HyperScan::run(u64 chunk) const {
    const u32 p = p_, m = m_;
    const int g = g_, L = L_, t0 = t0_;
    const size_t D = p;  // coefficients 0 .. p-1
    const u32 eps = static_cast<u32>(field_nonsquare(*K_).code());
    const std::vector<u32> bvals{0, 1, eps};
    KernelChunk out;

    // f_k for k = 0 .. 2g+2; low part a_0 .. a_{L-1}
    std::vector<u32> f(2 * g + 3, 0);
    f[2 * g + 2] = 1;
    f[0] = static_cast<u32>(chunk % p);
    if (L >= 2) f[1] = static_cast<u32>(chunk / p);
    const int fixed_low = L >= 2 ? 2 : 1;
    u64 low_count = 1;
    for (int i = fixed_low; i < L; ++i) low_count *= p;

    // free high parameters a_L .. a_{2g-1}
    std::vector<int> free;
    for (int k = L; k <= 2 * g - 1; ++k) free.push_back(k);
    u64 high_count = 3;
    for (size_t i = 0; i < free.size(); ++i) high_count *= p;
    out.candidates = 2 * low_count * high_count;
    // x^2 divides f: inseparable throughout
    if (L >= 2 && chunk == 0) {
        out.inseparable = out.candidates;
        return out;
    }

    std::vector<u64> binom(J_ + 1, 1);  // C(m, j) mod p
    for (int j = 1; j <= J_; ++j)
        binom[j] = binom[j - 1] * ((m - j + 1) % p) % p * inv_mod(static_cast<u32>(j % p), p) % p;

    // (G + T)^m at degree t has no T^2 term when 2L > t0
    const bool linear = 2 * L > t0;
    const int top = static_cast<int>(p) - 1;
    auto rest_vanishes = [&](const std::vector<u32>& fv, const std::vector<Vec>& Gp, const std::vector<u64>& bin,
                             int from) {
        u32 T[64] = {}, Tj[64], Tn[64];
        for (int k = L; k <= top && k < static_cast<int>(fv.size()); ++k) T[k] = fv[k];
        for (int t = from; t <= top; ++t) {
            u64 s = Gp[0][t];
            std::copy(T, T + top + 1, Tj);
            for (int j = 1; j <= J_ && j * L <= t; ++j) {
                if (j > 1) {
                    for (int q = 0; q <= t; ++q) {
                        u64 acc = 0;
                        for (int a = L; a <= q - (j - 1) * L; ++a) acc += static_cast<u64>(T[a]) * Tj[q - a];
                        Tn[q] = static_cast<u32>(acc % p);
                    }
                    std::copy(Tn, Tn + t + 1, Tj);
                }
                u64 inner = 0;
                for (int q = j * L; q <= t; ++q) inner += static_cast<u64>(Tj[q]) * Gp[j][t - q];
                s += inner % p * bin[j];
            }
            if (s % p) return false;
        }
        return true;
    };

    for (u64 lo = 0; lo < low_count; ++lo) {
        u64 c = lo;
        for (int i = fixed_low; i < L; ++i) {
            f[i] = static_cast<u32>(c % p);
            c /= p;
        }
        Vec G(f.begin(), f.begin() + L);
        // Gp[j] = G^(m - j)
        std::vector<Vec> Gp(J_ + 1);
        Gp[J_] = pow_trunc(G, m - J_, D, p);
        for (int j = J_ - 1; j >= 0; --j) Gp[j] = mul_trunc(Gp[j + 1], G, D, p);
        const Vec& G1 = Gp[1 <= J_ ? 1 : 0];

        // linear form at t0 in the high coefficients: base + sum coef_k f_k
        auto coef = [&](int k) -> u32 {
            if (k > t0 || J_ < 1) return 0;
            return static_cast<u32>(static_cast<u64>(m % p) * G1[t0 - k] % p);
        };
        // b enters below; the x^{2g+1} coefficient is zero
        u64 base = Gp[0][t0];
        base += static_cast<u64>(coef(2 * g + 2)) * f[2 * g + 2];
        base %= p;

        int pivot = -1;
        for (auto it = free.rbegin(); it != free.rend() && linear; ++it)
            if (coef(*it)) {
                pivot = *it;
                break;
            }
        std::vector<int> others;
        for (int k : free)
            if (k != pivot) others.push_back(k);
        u64 other_count = 1;
        for (size_t i = 0; i < others.size(); ++i) other_count *= p;

        for (u32 b : bvals) {
            f[2 * g] = b;
            const u64 base_b = (base + static_cast<u64>(coef(2 * g)) * b) % p;
            for (u64 oi = 0; oi < other_count; ++oi) {
                u64 cc = oi, val = base_b;
                for (int k : others) {
                    f[k] = static_cast<u32>(cc % p);
                    cc /= p;
                    val += static_cast<u64>(coef(k)) * f[k];
                }
                val %= p;
                if (!linear) {
                    // no linear filter; everything is checked below
                } else if (pivot >= 0) {
                    const u32 ck = coef(pivot);
                    f[pivot] = static_cast<u32>((p - val) % p * inv_mod(ck, p) % p);
                } else if (val != 0) {
                    continue;
                }
                // remaining first-row targets, exactly
                if (!rest_vanishes(f, Gp, binom, linear ? t0 + 1 : t0)) continue;
                std::vector<Fe> cs;
                for (u32 x : f) cs.push_back(K_->from_int(x));
                Poly P(*K_, cs);
                out.hits.push_back(HyperModel{K_->one(), P, g});
                out.hits.push_back(HyperModel{K_->from_int(eps), P, g});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- canonical over F_5

namespace {

std::vector<int> dense_cubic(const Form& P) {
    const MonoIndex& I = MonoIndex::get(4, 3);
    std::vector<int> v(I.size(), 0);
    for (const auto& [mo, c] : P.terms()) v[I.rank(mo)] = static_cast<int>(c.code());
    return v;
}

Mono mono_add(const Mono& a, const Mono& b) {
    Mono r{};
    for (int i = 0; i < 4; ++i) r[i] = static_cast<std::uint8_t>(a[i] + b[i]);
    return r;
}

}  // namespace

CanonicalScan::CanonicalScan(const ModelBox& box, u64 chunk_size) : box_(&box), chunk_size_(chunk_size) {
    if (box.K->order() != 5 || box.K->k() != 1) fail(ErrorKind::unsupported, "the canonical kernel runs over F_5");
    chunks_ = (box.size() + chunk_size_ - 1) / chunk_size_;
    const Field& K = *box.K;

    // additive decomposition over slots, checked on a sample
    std::vector<Fe> zero_params;
    for (const auto& s : box.slots) zero_params.insert(zero_params.end(), s.values[0].begin(), s.values[0].end());
    auto model = [&](const std::vector<Fe>& v) { return std::get<CanonicalModel>(box.build(v)); };
    const CanonicalModel m0 = model(zero_params);
    P0_ = dense_cubic(m0.P);
    size_t off = 0;
    for (const auto& s : box.slots) {
        std::vector<std::vector<int>> adds;
        for (const auto& val : s.values) {
            auto v = zero_params;
            std::copy(val.begin(), val.end(), v.begin() + static_cast<long>(off));
            auto d = dense_cubic(model(v).P);
            for (size_t i = 0; i < d.size(); ++i) d[i] = (d[i] - P0_[i] + 5) % 5;
            adds.push_back(d);
        }
        slot_add_.push_back(std::move(adds));
        off += s.values[0].size();
    }
    affine_ = true;
    Rng rng(0x5eed);
    for (int it = 0; it < 64 && affine_; ++it) {
        const u64 idx = rng() % box.size();
        auto params = box.params(idx);
        auto want = dense_cubic(model(params).P);
        std::vector<int> got = P0_;
        u64 r = idx;
        for (size_t s = box.slots.size(); s-- > 0;) {
            const u64 n = box.slots[s].values.size();
            const auto& add = slot_add_[s][r % n];
            r /= n;
            for (size_t i = 0; i < got.size(); ++i) got[i] = (got[i] + add[i]) % 5;
        }
        affine_ = got == want;
    }

    // Q P, (Q P)^2 and the degree-20 targets
    const MonoIndex& I3 = MonoIndex::get(4, 3);
    const MonoIndex& I5 = MonoIndex::get(4, 5);
    const MonoIndex& I10 = MonoIndex::get(4, 10);
    const MonoIndex& I20 = MonoIndex::get(4, 20);
    const Form Q = quadric(K, m0.qtype);
    for (const auto& [qm, qc] : Q.terms())
        for (size_t i = 0; i < I3.size(); ++i)
            qp_terms_.push_back({static_cast<int>(I5.rank(mono_add(qm, I3.mono(i)))), static_cast<int>(i),
                                 static_cast<int>(qc.code())});
    for (size_t i = 0; i < I5.size(); ++i)
        for (size_t j = i; j < I5.size(); ++j) {
            sq_terms_.push_back({static_cast<int>(I10.rank(mono_add(I5.mono(i), I5.mono(j)))), static_cast<int>(i),
                                 static_cast<int>(j)});
            sq_w_.push_back(i == j ? 1 : 2);
        }
    std::vector<std::vector<std::array<int, 3>>> by_target(I20.size());
    for (size_t a = 0; a < I10.size(); ++a)
        for (size_t b = a; b < I10.size(); ++b)
            by_target[I20.rank(mono_add(I10.mono(a), I10.mono(b)))].push_back(
                {static_cast<int>(a), static_cast<int>(b), a == b ? 1 : 2});
    for (const Mono& t : canonical_targets(5)) targets_.push_back(by_target[I20.rank(t)]);
}

KernelChunk CanonicalScan::tally(u64 chunk) const {
    KernelChunk out;
    const u64 start = chunk * chunk_size_;
    const u64 end = std::min(box_->size(), start + chunk_size_);
    if (start < end) out.candidates = end - start;
    return out;
}

KernelChunk CanonicalScan::run(u64 chunk) const {
    KernelChunk out;
    const ModelBox& box = *box_;
    const u64 start = chunk * chunk_size_;
    const u64 end = std::min(box.size(), start + chunk_size_);
    if (start >= end) return out;
    out.candidates = end - start;
    if (!affine_) {
        for (u64 idx = start; idx < end; ++idx) {
            CurveModel m = box.at(idx);
            if (canonical_hw_vanishes(std::get<CanonicalModel>(m))) out.hits.push_back(m);
        }
        return out;
    }
    const size_t ns = box.slots.size();
    std::vector<u64> digit(ns), radix(ns);
    {
        u64 r = start;
        for (size_t s = ns; s-- > 0;) {
            radix[s] = box.slots[s].values.size();
            digit[s] = r % radix[s];
            r /= radix[s];
        }
    }
    const size_t n3 = P0_.size();
    std::vector<int> P(n3), QP(56), R(286);
    for (u64 idx = start; idx < end; ++idx) {
        P = P0_;
        for (size_t s = 0; s < ns; ++s) {
            const auto& add = slot_add_[s][digit[s]];
            for (size_t i = 0; i < n3; ++i) P[i] += add[i];
        }
        std::fill(QP.begin(), QP.end(), 0);
        for (const auto& t : qp_terms_) QP[t[0]] += t[2] * P[t[1]];
        for (int& x : QP) x %= 5;
        std::fill(R.begin(), R.end(), 0);
        for (size_t k = 0; k < sq_terms_.size(); ++k) {
            const auto& t = sq_terms_[k];
            R[t[0]] += sq_w_[k] * QP[t[1]] * QP[t[2]];
        }
        for (int& x : R) x %= 5;
        bool hit = true;
        for (const auto& tl : targets_) {
            int s = 0;
            for (const auto& t : tl) s += t[2] * R[t[0]] * R[t[1]];
            if (s % 5) {
                hit = false;
                break;
            }
        }
        if (hit) out.hits.push_back(box.at(idx));
        for (size_t s = ns; s-- > 0;) {
            if (++digit[s] < radix[s]) break;
            digit[s] = 0;
        }
    }
    return out;
}

}  // namespace ssp
