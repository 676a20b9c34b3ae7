#include "ssp/groebner.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace ssp {

SmallField::SmallField(const Field& F) : F_(&F) {
    if (!F.order_fits() || F.order() > 256) fail(ErrorKind::argument, "small field needs q <= 256");
    q_ = static_cast<u32>(F.order());
    one_ = static_cast<std::uint16_t>(F.one().code());
    std::vector<Fe> els(q_);
    for (u32 a = 0; a < q_; ++a) els[a] = to(static_cast<std::uint16_t>(a));
    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (u32 a = 0; a < q_; ++a) {
        neg_[a] = from(-els[a]);
        for (u32 b = 0; b < q_; ++b) {
            add_[a * q_ + b] = from(els[a] + els[b]);
            mul_[a * q_ + b] = from(els[a] * els[b]);
        }
    }
    for (u32 a = 1; a < q_; ++a) inv_[a] = from(els[a].inv());
}

std::uint16_t SmallField::inv(std::uint16_t a) const {
    if (a == 0) fail(ErrorKind::division, "inverse of zero");
    return inv_[a];
}

const SmallField& SmallField::get(const Field& F) {
    static std::mutex mu;
    static std::map<const Field*, std::unique_ptr<SmallField>> reg;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = reg[&F];
    if (!slot) slot = std::make_unique<SmallField>(F);
    return *slot;
}

namespace {

bool divides(const Exp& a, const Exp& b) { return a.e[0] <= b.e[0] && a.e[1] <= b.e[1] && a.e[2] <= b.e[2]; }

Exp lcm(const Exp& a, const Exp& b) {
    Exp r;
    for (int i = 0; i < 3; ++i) r.e[i] = std::max(a.e[i], b.e[i]);
    return r;
}

Exp quot(const Exp& a, const Exp& b) {
    Exp r;
    for (int i = 0; i < 3; ++i) r.e[i] = static_cast<std::uint8_t>(a.e[i] - b.e[i]);
    return r;
}

Exp mulexp(const Exp& a, const Exp& b) {
    Exp r;
    for (int i = 0; i < 3; ++i) r.e[i] = static_cast<std::uint8_t>(a.e[i] + b.e[i]);
    return r;
}

bool coprime(const Exp& a, const Exp& b) {
    for (int i = 0; i < 3; ++i)
        if (a.e[i] && b.e[i]) return false;
    return true;
}

MPoly make_monic(const SmallField& K, MPoly f) {
    if (f.is_zero()) return f;
    std::uint16_t li = K.inv(f.t.front().c);
    if (li != 1)
        for (auto& t : f.t) t.c = K.mul(t.c, li);
    return f;
}

// f - c * m * g, both sorted
MPoly sub_mul(const SmallField& K, const MPoly& f, std::uint16_t c, const Exp& m, const MPoly& g) {
    MPoly r;
    r.t.reserve(f.t.size() + g.t.size());
    size_t i = 0, j = 0;
    std::uint16_t nc = K.neg(c);
    while (i < f.t.size() || j < g.t.size()) {
        if (j == g.t.size()) {
            r.t.push_back(f.t[i++]);
            continue;
        }
        Exp gm = mulexp(g.t[j].m, m);
        u32 gk = gm.key();
        if (i < f.t.size()) {
            u32 fk = f.t[i].m.key();
            if (fk > gk) {
                r.t.push_back(f.t[i++]);
                continue;
            }
            if (fk == gk) {
                std::uint16_t s = K.add(f.t[i].c, K.mul(nc, g.t[j].c));
                if (s) r.t.push_back({gm, s});
                ++i;
                ++j;
                continue;
            }
        }
        r.t.push_back({gm, K.mul(nc, g.t[j].c)});
        ++j;
    }
    return r;
}

}  // namespace

MPoly mpoly_normalize(const SmallField& K, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.m.key() > b.m.key(); });
    MPoly r;
    for (const Term& t : terms) {
        if (!r.t.empty() && r.t.back().m == t.m) {
            r.t.back().c = K.add(r.t.back().c, t.c);
            if (!r.t.back().c) r.t.pop_back();
        } else if (t.c) {
            r.t.push_back(t);
        }
    }
    return r;
}

MPoly mpoly_add(const SmallField& K, const MPoly& a, const MPoly& b) {
    return sub_mul(K, a, K.neg(1), Exp{}, b);
}

MPoly mpoly_scale_shift(const SmallField& K, const MPoly& a, std::uint16_t c, const Exp& m) {
    MPoly r;
    if (!c) return r;
    for (const Term& t : a.t) r.t.push_back({mulexp(t.m, m), K.mul(t.c, c)});
    return r;
}

MPoly normal_form(const SmallField& K, const MPoly& f0, const std::vector<MPoly>& G) {
    MPoly f = f0, rem;
    while (!f.is_zero()) {
        const Term lt = f.t.front();
        bool reduced = false;
        for (const MPoly& g : G) {
            if (g.is_zero() || !divides(g.lm(), lt.m)) continue;
            std::uint16_t c = K.mul(lt.c, K.inv(g.t.front().c));
            f = sub_mul(K, f, c, quot(lt.m, g.lm()), g);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.t.push_back(lt);
            f.t.erase(f.t.begin());
        }
    }
    return rem;
}

GroebnerIdeal buchberger(const GroebnerIdeal& I, const GroebnerLimits& lim) {
    const SmallField& K = *I.K;
    GroebnerIdeal out{I.K, I.nvars, {}};
    std::vector<MPoly> G;
    for (const MPoly& g : I.gens) {
        if (g.is_zero()) continue;
        if (g.is_constant()) {
            out.gens = {make_monic(K, g)};
            return out;
        }
        G.push_back(make_monic(K, g));
    }
    if (G.empty()) return out;

    struct Pair {
        size_t i, j;
        Exp l;
    };
    std::vector<Pair> pairs;
    std::vector<bool> alive;
    size_t processed = 0;

    auto add_poly = [&](MPoly h) -> bool {
        h = make_monic(K, std::move(h));
        if (h.is_constant()) return true;
        if (h.lm().deg() > lim.max_degree)
            fail(ErrorKind::overload, "groebner degree guard hit (" + std::to_string(h.lm().deg()) + ")");
        size_t n = G.size();
        G.push_back(std::move(h));
        alive.push_back(true);
        if (G.size() > lim.max_basis) fail(ErrorKind::overload, "groebner basis size guard hit");
        const Exp& ln = G[n].lm();
        // chain criterion against existing pairs (Gebauer-Moeller B_k step)
        std::vector<Pair> kept;
        kept.reserve(pairs.size());
        for (const Pair& pr : pairs) {
            if (divides(ln, pr.l) && !(lcm(G[pr.i].lm(), ln) == pr.l) && !(lcm(G[pr.j].lm(), ln) == pr.l)) continue;
            kept.push_back(pr);
        }
        pairs = std::move(kept);
        // new pairs, dropping those whose lcm is a proper multiple of another new lcm
        std::vector<Pair> fresh;
        for (size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            fresh.push_back({i, n, lcm(G[i].lm(), ln)});
        }
        std::vector<Pair> fresh_kept;
        for (size_t a = 0; a < fresh.size(); ++a) {
            bool drop = false;
            for (size_t b = 0; b < fresh.size() && !drop; ++b) {
                if (a == b) continue;
                if (divides(fresh[b].l, fresh[a].l) && !(fresh[b].l == fresh[a].l)) drop = true;
                if (fresh[b].l == fresh[a].l && b < a) drop = true;
            }
            if (drop) continue;
            if (coprime(G[fresh[a].i].lm(), ln)) continue;  // product criterion
            fresh_kept.push_back(fresh[a]);
        }
        for (auto& pr : fresh_kept) pairs.push_back(pr);
        if (pairs.size() > lim.max_pairs) fail(ErrorKind::overload, "groebner pair guard hit");
        // older polynomials whose leading monomial is divisible by the new one are redundant
        for (size_t i = 0; i < n; ++i)
            if (alive[i] && divides(ln, G[i].lm())) alive[i] = false;
        return false;
    };

    std::vector<MPoly> init = std::move(G);
    G.clear();
    // insert low degree first
    std::sort(init.begin(), init.end(), [](const MPoly& a, const MPoly& b) { return a.lm().key() < b.lm().key(); });
    for (MPoly& g : init) {
        std::vector<MPoly> basis;
        for (size_t i = 0; i < G.size(); ++i)
            if (alive[i]) basis.push_back(G[i]);
        MPoly h = normal_form(K, g, basis);
        if (h.is_zero()) continue;
        if (add_poly(std::move(h))) {
            out.gens = {make_monic(K, MPoly{{{Exp{}, 1}}})};
            return out;
        }
    }

    while (!pairs.empty()) {
        // normal strategy: smallest lcm first
        auto it = std::min_element(pairs.begin(), pairs.end(),
                                   [](const Pair& a, const Pair& b) { return a.l.key() < b.l.key(); });
        Pair pr = *it;
        *it = pairs.back();
        pairs.pop_back();
        if (++processed > lim.max_pairs) fail(ErrorKind::overload, "groebner pair guard hit");
        const MPoly& a = G[pr.i];
        const MPoly& b = G[pr.j];
        MPoly s = sub_mul(K, mpoly_scale_shift(K, a, 1, quot(pr.l, a.lm())), 1, quot(pr.l, b.lm()), b);
        std::vector<MPoly> basis;
        for (size_t i = 0; i < G.size(); ++i)
            if (alive[i]) basis.push_back(G[i]);
        MPoly h = normal_form(K, s, basis);
        if (h.is_zero()) continue;
        if (add_poly(std::move(h))) {
            out.gens = {MPoly{{{Exp{}, 1}}}};
            return out;
        }
    }

    // interreduce
    std::vector<MPoly> B;
    for (size_t i = 0; i < G.size(); ++i)
        if (alive[i]) B.push_back(G[i]);
    std::sort(B.begin(), B.end(), [](const MPoly& a, const MPoly& b) { return a.lm().key() < b.lm().key(); });
    for (size_t i = 0; i < B.size(); ++i) {
        std::vector<MPoly> others;
        for (size_t j = 0; j < B.size(); ++j)
            if (j != i) others.push_back(B[j]);
        MPoly lead;
        lead.t.push_back(B[i].t.front());
        MPoly tail;
        tail.t.assign(B[i].t.begin() + 1, B[i].t.end());
        MPoly nt = normal_form(K, tail, others);
        lead.t.insert(lead.t.end(), nt.t.begin(), nt.t.end());
        B[i] = make_monic(K, lead);
    }
    out.gens = std::move(B);
    return out;
}

bool contains_one(const GroebnerIdeal& basis) {
    for (const MPoly& g : basis.gens)
        if (g.is_constant()) return true;
    return false;
}

bool satisfies_buchberger_criterion(const GroebnerIdeal& basis) {
    const SmallField& K = *basis.K;
    const auto& G = basis.gens;
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = i + 1; j < G.size(); ++j) {
            Exp l = lcm(G[i].lm(), G[j].lm());
            std::uint16_t ci = K.inv(G[i].t.front().c), cj = K.inv(G[j].t.front().c);
            MPoly s = sub_mul(K, mpoly_scale_shift(K, G[i], ci, quot(l, G[i].lm())), cj, quot(l, G[j].lm()), G[j]);
            if (!normal_form(K, s, G).is_zero()) return false;
        }
    return true;
}

}  // namespace ssp
