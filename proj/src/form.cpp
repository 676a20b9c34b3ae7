#include "ssp/form.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <sstream>

namespace ssp {

Form::Form(const Field& F, int nvars, int degree) : F_(&F), n_(nvars), d_(degree) {
    if (nvars < 1 || nvars > 4) fail(ErrorKind::argument, "forms need 1..4 variables");
    if (degree < 0 || degree > 250) fail(ErrorKind::argument, "form degree out of range");
}

Form Form::from_terms(const Field& F, int nvars, const std::vector<std::pair<Mono, i64>>& terms) {
    if (terms.empty()) fail(ErrorKind::argument, "from_terms needs at least one term");
    Form f(F, nvars, mono_deg(terms.front().first));
    for (const auto& [m, c] : terms) f.add_term(m, F.from_int(c));
    return f;
}

void Form::add_term(const Mono& m, const Fe& c) {
    if (mono_deg(m) != d_) fail(ErrorKind::argument, "term degree mismatch");
    for (int i = n_; i < 4; ++i)
        if (m[i]) fail(ErrorKind::argument, "exponent in unused variable");
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

Fe Form::coeff(const Mono& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? F_->zero() : it->second;
}

Form Form::operator+(const Form& o) const {
    if (o.d_ != d_ || o.n_ != n_ || o.F_ != F_) fail(ErrorKind::argument, "form shape mismatch");
    Form r = *this;
    for (const auto& [m, c] : o.t_) r.add_term(m, c);
    return r;
}

Form Form::operator-(const Form& o) const { return *this + o * (-F_->one()); }

Form Form::operator*(const Form& o) const {
    if (o.n_ != n_ || o.F_ != F_) fail(ErrorKind::argument, "form shape mismatch");
    Form r(*F_, n_, d_ + o.d_);
    for (const auto& [a, ca] : t_) {
        for (const auto& [b, cb] : o.t_) {
            Mono m{};
            for (int i = 0; i < 4; ++i) m[i] = static_cast<std::uint8_t>(a[i] + b[i]);
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Form Form::operator*(const Fe& s) const {
    Form r(*F_, n_, d_);
    if (s.is_zero()) return r;
    for (const auto& [m, c] : t_) r.t_.emplace(m, c * s);
    return r;
}

bool Form::operator==(const Form& o) const { return F_ == o.F_ && n_ == o.n_ && d_ == o.d_ && t_ == o.t_; }

Form Form::subst(const std::vector<std::vector<Fe>>& M) const {
    if (static_cast<int>(M.size()) != n_) fail(ErrorKind::argument, "substitution matrix shape");
    std::vector<Form> lin;
    for (int i = 0; i < n_; ++i) {
        Form L(*F_, n_, 1);
        for (int j = 0; j < n_; ++j) {
            Mono m{};
            m[j] = 1;
            L.add_term(m, M[i][j]);
        }
        lin.push_back(L);
    }
    // cached powers of each linear form
    std::vector<std::vector<Form>> pw(n_);
    for (int i = 0; i < n_; ++i) {
        Form one(*F_, n_, 0);
        one.add_term(Mono{}, F_->one());
        pw[i].push_back(one);
    }
    auto power = [&](int i, int e) -> const Form& {
        while (static_cast<int>(pw[i].size()) <= e) pw[i].push_back(pw[i].back() * lin[i]);
        return pw[i][e];
    };
    Form r(*F_, n_, d_);
    for (const auto& [m, c] : t_) {
        Form term(*F_, n_, 0);
        term.add_term(Mono{}, c);
        for (int i = 0; i < n_; ++i)
            if (m[i]) term = term * power(i, m[i]);
        r = r + term;
    }
    return r;
}

Fe Form::eval(const std::vector<Fe>& v) const {
    Fe s = F_->zero();
    for (const auto& [m, c] : t_) {
        Fe t = c;
        for (int i = 0; i < n_; ++i)
            if (m[i]) t = t * v[i].pow(m[i]);
        s += t;
    }
    return s;
}

Form Form::partial(int i) const {
    Form r(*F_, n_, d_ > 0 ? d_ - 1 : 0);
    if (d_ == 0) return r;
    for (const auto& [m, c] : t_) {
        if (!m[i]) continue;
        Mono mm = m;
        --mm[i];
        r.add_term(mm, c.scale(m[i] % F_->p()));
    }
    return r;
}

Form Form::map_to(const Field& G) const {
    Form r(G, n_, d_);
    for (const auto& [m, c] : t_) r.add_term(m, G.embed(c));
    return r;
}

std::string Form::str() const {
    static const char* names[4] = {"x", "y", "z", "w"};
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        os << it->second.str();
        for (int i = 0; i < n_; ++i) {
            if (!it->first[i]) continue;
            os << "*" << names[i];
            if (it->first[i] > 1) os << "^" << int(it->first[i]);
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- MonoIndex

MonoIndex::MonoIndex(int n, int d) : n_(n), d_(d) {
    // ascending lex on the exponent vector
    std::vector<Mono> out;
    if (n == 1) {
        Mono m{};
        m[0] = static_cast<std::uint8_t>(d);
        out.push_back(m);
    } else {
        std::vector<int> e(n, 0);
        auto rec = [&](auto&& self, int i, int left) -> void {
            if (i == n - 1) {
                e[i] = left;
                Mono mm{};
                for (int j = 0; j < n; ++j) mm[j] = static_cast<std::uint8_t>(e[j]);
                out.push_back(mm);
                return;
            }
            for (int a = 0; a <= left; ++a) {
                e[i] = a;
                self(self, i + 1, left - a);
            }
        };
        rec(rec, 0, d);
    }
    monos_ = std::move(out);
    size_t span = 1;
    for (int i = 0; i < std::min(n - 1, 3); ++i) span *= static_cast<size_t>(d + 1);
    table_.assign(span, ~0u);
    for (size_t i = 0; i < monos_.size(); ++i) {
        size_t key = 0;
        for (int j = 0; j < std::min(n - 1, 3); ++j) key = key * (d + 1) + monos_[i][j];
        table_[key] = static_cast<std::uint32_t>(i);
    }
}

std::uint32_t MonoIndex::rank(const Mono& m) const {
    size_t key = 0;
    for (int j = 0; j < std::min(n_ - 1, 3); ++j) key = key * (d_ + 1) + m[j];
    return table_[key];
}

const MonoIndex& MonoIndex::get(int n, int d) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<MonoIndex>> reg;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = reg[{n, d}];
    if (!slot) slot = std::make_unique<MonoIndex>(n, d);
    return *slot;
}

namespace {

// dense buffer of F^m by repeated multiplication with the sparse F
std::vector<Fe> dense_power(const Form& F, u64 m) {
    const Field& K = F.field();
    const int n = F.nvars();
    std::vector<std::pair<Mono, Fe>> terms(F.terms().begin(), F.terms().end());
    std::vector<Fe> cur{K.one()};
    int cd = 0;
    for (u64 step = 0; step < m; ++step) {
        const MonoIndex& src = MonoIndex::get(n, cd);
        const MonoIndex& dst = MonoIndex::get(n, cd + F.degree());
        std::vector<Fe> nxt(dst.size(), K.zero());
        for (size_t i = 0; i < cur.size(); ++i) {
            if (cur[i].is_zero()) continue;
            const Mono& a = src.mono(i);
            for (const auto& [b, c] : terms) {
                Mono s{};
                for (int j = 0; j < 4; ++j) s[j] = static_cast<std::uint8_t>(a[j] + b[j]);
                nxt[dst.rank(s)] += cur[i] * c;
            }
        }
        cur = std::move(nxt);
        cd += F.degree();
    }
    return cur;
}

}  // namespace

std::vector<Fe> form_pow_dense(const Form& F, u64 m) { return dense_power(F, m); }

FormTargeted form_pow_targeted(const Form& F, u64 m, const std::vector<Mono>& targets, bool early_abort) {
    const Field& K = F.field();
    const int n = F.nvars();
    const int total = static_cast<int>(m) * F.degree();
    for (const Mono& t : targets) {
        if (mono_deg(t) != total) fail(ErrorKind::argument, "target tuple has wrong total degree");
        for (int i = n; i < 4; ++i)
            if (t[i]) fail(ErrorKind::argument, "target tuple uses unused variable");
    }
    FormTargeted res;
    res.values.assign(targets.size(), K.zero());
    if (F.is_zero()) return res;
    const u64 m1 = m / 2, m2 = m - m1;
    std::vector<Fe> A = dense_power(F, m1);
    std::vector<Fe> B = (m2 == m1) ? A : dense_power(F, m2);
    const MonoIndex& ia = MonoIndex::get(n, static_cast<int>(m1) * F.degree());
    const MonoIndex& ib = MonoIndex::get(n, static_cast<int>(m2) * F.degree());
    for (size_t ti = 0; ti < targets.size(); ++ti) {
        const Mono& t = targets[ti];
        Fe s = K.zero();
        for (size_t i = 0; i < ia.size(); ++i) {
            if (A[i].is_zero()) continue;
            const Mono& a = ia.mono(i);
            bool ok = true;
            Mono r{};
            for (int j = 0; j < n; ++j) {
                if (a[j] > t[j]) {
                    ok = false;
                    break;
                }
                r[j] = static_cast<std::uint8_t>(t[j] - a[j]);
            }
            if (!ok) continue;
            const Fe& b = B[ib.rank(r)];
            if (!b.is_zero()) s += A[i] * b;
        }
        res.values[ti] = s;
        if (early_abort && !s.is_zero()) {
            res.aborted = true;
            res.abort_at = ti;
            res.values.clear();
            return res;
        }
    }
    return res;
}

}  // namespace ssp
