#include "ssp/census.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ssp/formulas.hpp"
#include "ssp/frobenius.hpp"
#include "ssp/richelot.hpp"

namespace ssp {

// ---------------------------------------------------------------- bookkeeping

void Audit::record(bool matrix_zero, int g, u64 points, u32 p, const std::string& what) {
    ++checked;
    const i64 q = static_cast<i64>(p) * p;
    const i64 t = q + 1 - static_cast<i64>(points);
    const bool bounded = std::llabs(t) <= 2 * g * static_cast<i64>(p);
    const bool congruent = bounded && t % (2 * static_cast<i64>(p)) == 0;
    ++traces[t];
    if (!matrix_zero) ++matrix_failures;
    if (!congruent) ++congruence_failures;
    if (!bounded || t % static_cast<i64>(p) != 0) ++divisibility_failures;
    if ((!matrix_zero || !congruent) && examples.size() < 8)
        examples.push_back(what + (matrix_zero ? "" : " matrix") + (congruent ? "" : " trace=" + std::to_string(t)));
}

Audit& Audit::operator+=(const Audit& o) {
    checked += o.checked;
    matrix_failures += o.matrix_failures;
    congruence_failures += o.congruence_failures;
    divisibility_failures += o.divisibility_failures;
    for (const auto& [t, n] : o.traces) traces[t] += n;
    for (const auto& e : o.examples)
        if (examples.size() < 8) examples.push_back(e);
    return *this;
}

u64 CensusResult::raw_hits() const {
    u64 n = 0;
    for (const auto& c : classes) n += c.raw_hits;
    return n;
}

namespace {

std::string join(const std::vector<std::string>& v, char sep) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += v[i];
    }
    return s;
}

std::string ser(const CurveModel& m) { return join(serialize(m), ','); }

bool matrix_zero(const FrobeniusMatrix& M) { return !M.aborted && M.is_zero(); }

CensusResult blank(const std::string& family, u32 p, int k, const std::string& level) {
    CensusResult r;
    r.family = family;
    r.p = p;
    r.field_degree = k;
    r.level = level;
    return r;
}

void number_classes(CensusResult& r) {
    for (size_t i = 0; i < r.classes.size(); ++i) {
        r.classes[i].class_id = i;
        r.classes[i].family = r.family;
        r.classes[i].p = r.p;
        r.classes[i].field_degree = r.field_degree;
    }
}

void audit_hyper(Audit& a, const HyperModel& m, u32 p) {
    const Field& K2 = Field::get(p, 2);
    a.record(matrix_zero(cm_hyperelliptic(m, false)), m.g, count_points_hyper(m, K2), p, ser(m));
}

// Legendre curve y^2 = x(x-1)(x-l) moved to short Weierstrass form
EllipticModel short_legendre(const Fe& l) {
    const Field& K = *l.F;
    const Fe one = K.one();
    const Fe A = -(l * l - l + one) / K.from_int(3);
    const Fe B = -((l + one) * (K.from_int(2) * l - one) * (l - K.from_int(2))) / K.from_int(27);
    return EllipticModel{A, B};
}

Poly weierstrass_cubic(const EllipticModel& e) {
    const Field& K = *e.A.F;
    return Poly(K, {e.B, e.A, K.zero(), K.one()});
}

struct EllipticClasses {
    std::vector<Fe> js;                 // sorted
    std::vector<EllipticModel> models;  // first lambda per j
    std::vector<u64> hits;
    u64 scanned = 0, invalid = 0;
    std::map<std::string, u64> invalid_by_reason;
    std::vector<Fe> lambdas;
};

EllipticClasses scan_legendre(u32 p) {
    const Field& K = Field::get(p, 2);
    EllipticClasses out;
    std::map<Fe, std::pair<EllipticModel, u64>> byj;
    for (const Fe& l : all_elements(K)) {
        if (l.is_zero() || l.is_one()) continue;
        ++out.scanned;
        EllipticModel e = short_legendre(l);
        if (!is_supersingular_elliptic(e)) continue;
        out.lambdas.push_back(l);
        if (auto r = check_elliptic(e)) {
            ++out.invalid;
            ++out.invalid_by_reason[to_string(*r)];
            continue;
        }
        auto it = byj.find(legendre_j(l));
        if (it == byj.end()) byj.emplace(legendre_j(l), std::make_pair(e, u64{1}));
        else ++it->second.second;
    }
    for (const auto& [j, v] : byj) {
        out.js.push_back(j);
        out.models.push_back(v.first);
        out.hits.push_back(v.second);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- elliptic

CensusResult census_elliptic(u32 p, const RunOptions& opt) {
    if (!is_prime_u64(p)) fail(ErrorKind::argument, "p must be prime");
    if (p <= 3) {
        CensusResult r = blank("elliptic", p, 1, "geometric");
        CensusRecord c;
        c.invariants["j"] = "0";
        c.raw_hits = 1;
        r.classes.push_back(c);
        r.referee = eichler_h(p);
        r.notes["model"] = p == 2 ? "y^2 + y = x^3" : "y^2 = x^3 - x";
        number_classes(r);
        return r;
    }
    CensusResult r = blank("elliptic", p, 2, "geometric");
    EllipticClasses ec = scan_legendre(p);
    r.book.box = ec.scanned;
    r.book.survivors = ec.lambdas.size();
    r.book.frobenius_rejected = ec.scanned - ec.lambdas.size();
    r.book.invalid = ec.invalid;
    r.book.invalid_by_reason = ec.invalid_by_reason;
    for (size_t i = 0; i < ec.js.size(); ++i) {
        CensusRecord c;
        c.model = serialize(ec.models[i]);
        c.invariants["j"] = std::to_string(ec.js[i].code());
        c.raw_hits = ec.hits[i];
        r.classes.push_back(c);
    }
    r.notes["hasse_degree"] = std::to_string((p - 1) / 2);
    r.notes["supersingular_lambdas"] = std::to_string(ec.lambdas.size());
    if (opt.audit) {
        const Field& K = Field::get(p, 2);
        for (const Fe& l : ec.lambdas) {
            HyperModel h{K.one(), weierstrass_cubic(short_legendre(l)), 1};
            audit_hyper(r.audit, h, p);
        }
    }
    r.referee = eichler_h(p);
    number_classes(r);
    if (r.classes.size() != *r.referee)
        fail(ErrorKind::census_incomplete, "elliptic census found " + std::to_string(r.classes.size()) +
                                               " j-invariants, expected " + std::to_string(*r.referee));
    return r;
}

// ---------------------------------------------------------------- genus 2

OracleResult rosenhain_oracle(u32 p) {
    if (p < 5 || !is_prime_u64(p)) fail(ErrorKind::unsupported, "the Rosenhain oracle needs a prime p >= 5");
    if (p > 13) fail(ErrorKind::overload, "the Rosenhain oracle is limited to p <= 13");
    const Field& K = Field::get(p, 2);
    std::vector<Fe> vals;
    for (const Fe& x : all_elements(K))
        if (!x.is_zero() && !x.is_one()) vals.push_back(x);
    const Poly base = Poly::from_roots(K, {K.zero(), K.one()});
    OracleResult out;
    std::map<Genus2Key, size_t> index;
    const bool keyed = p >= 7;
    for (size_t a = 0; a < vals.size(); ++a) {
        const Poly fa = base * Poly(K, {-vals[a], K.one()});
        for (size_t b = a + 1; b < vals.size(); ++b) {
            const Poly fb = fa * Poly(K, {-vals[b], K.one()});
            for (size_t c = b + 1; c < vals.size(); ++c) {
                ++out.scanned;
                HyperModel m{K.one(), fb * Poly(K, {-vals[c], K.one()}), 2};
                if (!hyper_cm_vanishes(m)) continue;
                if (keyed) {
                    Genus2Key k = igusa_key(m);
                    auto it = index.find(k);
                    if (it != index.end()) {
                        ++out.hits[it->second];
                        continue;
                    }
                    index.emplace(k, out.reps.size());
                    out.keys.insert(k);
                } else {
                    bool found = false;
                    for (size_t i = 0; i < out.reps.size() && !found; ++i)
                        if (binary_form_iso(out.reps[i], m, true)) {
                            ++out.hits[i];
                            found = true;
                        }
                    if (found) continue;
                }
                out.reps.push_back(m);
                out.hits.push_back(1);
            }
        }
    }
    return out;
}

CensusResult census_genus2(u32 p, const RunOptions& opt) {
    if (p < 5 || !is_prime_u64(p)) fail(ErrorKind::argument, "census_genus2 needs a prime p >= 5");
    CensusResult r = blank("genus2", p, 2, "geometric");
    r.referee = genus2_count(p);
    if (p == 5) {
        OracleResult o = rosenhain_oracle(5);
        r.book.box = o.scanned;
        u64 hits = 0;
        for (size_t i = 0; i < o.reps.size(); ++i) {
            CensusRecord c;
            c.model = serialize(o.reps[i]);
            c.raw_hits = o.hits[i];
            hits += o.hits[i];
            r.classes.push_back(c);
            if (opt.audit) audit_hyper(r.audit, o.reps[i], p);
        }
        r.book.survivors = hits;
        r.book.frobenius_rejected = o.scanned - hits;
        r.notes["method"] = "rosenhain-oracle";
    } else {
        WalkResult w = walk(p);
        for (const GraphNode& n : w.curves) {
            CensusRecord c;
            c.model = serialize(n.model);
            c.invariants["igusa"] = n.key.str();
            c.raw_hits = 1;
            r.classes.push_back(c);
            if (opt.audit) audit_hyper(r.audit, n.model, p);
        }
        r.book.box = r.book.survivors = w.curves.size();
        r.notes["method"] = "richelot-walk";
        r.notes["edges"] = std::to_string(w.edges);
        r.notes["product_nodes"] = std::to_string(w.products.size());
        r.notes["fallback"] = w.used_fallback ? "yes" : "no";
        if (p <= 13) {
            OracleResult o = rosenhain_oracle(p);
            std::set<Genus2Key> walked;
            for (const GraphNode& n : w.curves) walked.insert(n.key);
            if (o.keys != walked) fail(ErrorKind::census_incomplete, "walk and Rosenhain oracle disagree");
            r.notes["oracle"] = "agrees";
        }
    }
    number_classes(r);
    if (r.classes.size() != *r.referee)
        fail(ErrorKind::census_incomplete, "genus-2 census found " + std::to_string(r.classes.size()) +
                                               " classes, expected " + std::to_string(*r.referee));
    return r;
}

// ---------------------------------------------------------------- Howe curves

namespace {

// a sextic model over F_{p^2} of the same curve with all six roots in F_{p^2}
std::vector<Fe> split_rosenhain_roots(const HyperModel& C) {
    const Field& K = C.f.field();
    const u32 p = K.p();
    auto deg = common_degree({2, splitting_degree(C.f)});
    if (!deg) fail(ErrorKind::unsupported, "splitting field too large");
    const Field& L = Field::get(p, *deg);
    auto R = binform_roots(binform_from_poly(C.f, 6), L);
    if (R.size() != 6) fail(ErrorKind::invalid_model, "genus-2 model without six Weierstrass points");
    const Mobius T = mobius_from_std(R[0], R[1], R[2]).inverse();
    std::vector<Fe> fin{K.zero(), K.one()};
    for (int i = 3; i < 6; ++i) {
        P1Pt q = T(R[i]);
        auto d = L.descend(q.x, K);
        if (q.is_inf() || !d) fail(ErrorKind::internal, "Rosenhain parameters outside F_{p^2}");
        fin.push_back(*d);
    }
    // move a non-root t to infinity: x -> 1 / (x - t); infinity goes to 0
    Fe t = K.zero();
    for (const Fe& c : all_elements(K))
        if (std::find(fin.begin(), fin.end(), c) == fin.end()) {
            t = c;
            break;
        }
    std::vector<Fe> roots{K.zero()};
    for (const Fe& s : fin) roots.push_back((s - t).inv());
    std::sort(roots.begin(), roots.end());
    return roots;
}

// both y^2 = (x - b) f_i supersingular, b running over F_{p^2}
std::vector<Fe> common_shift_roots(const Poly& f1, const Poly& f2, const Poly& f) {
    const Field& K = f1.field();
    Poly g = gcd(shifted_power_root_poly(f1), shifted_power_root_poly(f2));
    if (g.is_zero()) fail(ErrorKind::internal, "identically supersingular shifted cubics");
    if (g.deg_or_zero() == 0) return {};
    const Poly x = Poly::x(K);
    const Poly h = gcd(g, powmod(x, K.order(), g) - x);
    std::vector<Fe> out;
    if (h.deg_or_zero() == 0) return out;
    for (const Fe& b : roots(h))
        if (!f(b).is_zero()) out.push_back(b);
    return out;
}

std::vector<std::string> serialize_triple(const HoweTriple& t) {
    std::vector<std::string> out;
    for (const Poly* f : {&t.f1, &t.f2})
        for (size_t i = 0; i <= 3; ++i) out.push_back(std::to_string(f->coeff(i).code()));
    out.push_back(t.marked ? std::to_string(t.marked->code()) : "inf");
    return out;
}

std::string key_string(const HoweKey& k) {
    std::string s;
    for (size_t i = 0; i < k.v.size(); ++i) {
        if (i) s += ';';
        s += k.v[i].str();
    }
    return s;
}

void audit_triple(Audit& a, const HoweTriple& t, u32 p) {
    const Field& K = t.f1.field();
    const Field& K2 = Field::get(p, 2);
    Poly lin = t.marked ? Poly(K, {-*t.marked, K.one()}) : Poly(K, {K.one()});
    HyperModel e1{K.one(), lin * t.f1, 1}, e2{K.one(), lin * t.f2, 1};
    HyperModel c = howe_curve(t);
    const bool zero = matrix_zero(cm_hyperelliptic(c, false)) && matrix_zero(cm_hyperelliptic(e1, false)) &&
                      matrix_zero(cm_hyperelliptic(e2, false));
    const u64 q1 = K2.order() + 1;
    const u64 n = count_points_hyper(e1, K2) + count_points_hyper(e2, K2) + count_points_hyper(c, K2) - 2 * q1;
    a.record(zero, 4, n, p, join(serialize_triple(t), ','));
}

struct HoweClass {
    HoweTriple rep;
    std::string genus2;
    u64 hits = 0;
};

void add_howe_classes(CensusResult& r, const std::map<HoweKey, HoweClass>& classes) {
    for (const auto& [k, c] : classes) {
        CensusRecord rec;
        rec.model = serialize_triple(c.rep);
        rec.invariants["howe_key"] = key_string(k);
        if (!c.genus2.empty()) rec.invariants["genus2"] = c.genus2;
        rec.raw_hits = c.hits;
        r.classes.push_back(rec);
    }
    number_classes(r);
}

}  // namespace

std::vector<HoweTriple> howe_triples_on(const HyperModel& C, bool first_only) {
    const Field& K = C.f.field();
    if (K.k() != 2 || C.g != 2) fail(ErrorKind::argument, "Howe triples need a genus-2 model over F_{p^2}");
    const std::vector<Fe> r = split_rosenhain_roots(C);
    const Poly f = Poly::from_roots(K, r);
    std::vector<HoweTriple> out;
    for (int a = 1; a <= 5; ++a)
        for (int b = a + 1; b <= 5; ++b) {
            std::vector<Fe> w1{r[0], r[a], r[b]}, w2;
            for (int i = 1; i <= 5; ++i)
                if (i != a && i != b) w2.push_back(r[i]);
            const Poly f1 = Poly::from_roots(K, w1), f2 = Poly::from_roots(K, w2);
            if (is_supersingular_cubic(f1) && is_supersingular_cubic(f2)) {
                out.push_back({f1, f2, std::nullopt});
                if (first_only) return out;
            }
            for (const Fe& m : common_shift_roots(f1, f2, f)) {
                out.push_back({f1, f2, m});
                if (first_only) return out;
            }
        }
    return out;
}

std::set<HoweKey> howe_keys(const CensusResult& r) {
    std::set<HoweKey> out;
    const Field& K = Field::get(r.p, 2);
    for (const auto& c : r.classes) {
        // rebuilt from the representative rather than parsed from the printed key
        const auto& m = c.model;
        if (m.size() != 9) fail(ErrorKind::argument, "not a Howe census");
        std::vector<Fe> a, b;
        for (int i = 0; i < 4; ++i) a.push_back(K.from_code(std::stoull(m[i])));
        for (int i = 4; i < 8; ++i) b.push_back(K.from_code(std::stoull(m[i])));
        std::optional<Fe> mk;
        if (m[8] != "inf") mk = K.from_code(std::stoull(m[8]));
        out.insert(howe_key(HoweTriple{Poly(K, a), Poly(K, b), mk}));
    }
    return out;
}

CensusResult census_howe_B(u32 p, const RunOptions& opt, bool existence) {
    if (p < 7 || !is_prime_u64(p)) fail(ErrorKind::argument, "census_howe_B needs a prime p >= 7");
    CensusResult r = blank("howe-b", p, 2, "geometric");
    std::map<HoweKey, HoweClass> classes;
    u64 curves = 0;
    auto take = [&](const GraphNode& n, bool first_only) {
        ++curves;
        auto ts = howe_triples_on(n.model, first_only);
        for (const HoweTriple& t : ts) {
            ++r.book.survivors;
            if (opt.audit) audit_triple(r.audit, t, p);
            HoweKey k = howe_key(t);
            auto it = classes.find(k);
            if (it == classes.end()) classes.emplace(k, HoweClass{t, n.key.str(), 1});
            else ++it->second.hits;
        }
        return ts.empty();
    };
    if (existence) {
        WalkResult w = walk(p, [&](const GraphNode& n) { return take(n, true); });
        r.notes["mode"] = "existence";
        r.notes["walk_stopped"] = w.stopped ? "yes" : "no";
    } else {
        WalkResult w = walk(p);
        for (const GraphNode& n : w.curves) take(n, false);
    }
    r.book.box = r.book.survivors;  // the walk enumerates triples, nothing is rejected
    r.notes["genus2_curves"] = std::to_string(curves);
    add_howe_classes(r, classes);
    return r;
}

namespace {

struct HoweAScan {
    std::vector<EllipticModel> ells;
    std::vector<std::pair<size_t, size_t>> pairs;  // unordered, with repetition
    std::vector<Fe> els;
    const Field* K = nullptr;
};

}  // namespace

CensusResult census_howe_A(u32 p, const RunOptions& opt) {
    if (p < 7 || !is_prime_u64(p)) fail(ErrorKind::argument, "census_howe_A needs a prime p >= 7");
    CensusResult r = blank("howe-a", p, 2, "geometric");
    HoweAScan s;
    s.K = &Field::get(p, 2);
    s.ells = scan_legendre(p).models;
    for (size_t i = 0; i < s.ells.size(); ++i)
        for (size_t j = i; j < s.ells.size(); ++j) s.pairs.push_back({i, j});
    s.els = all_elements(*s.K);
    const Field& K = *s.K;
    const u64 q = K.order();
    const u64 n = s.pairs.size() * q;
    // chunk = (pair, lambda); mu runs inside
    auto run = [&](u64 chunk) {
        KernelChunk out;
        const auto [i, j] = s.pairs[chunk / q];
        const Fe& lambda = s.els[chunk % q];
        for (const Fe& mu : s.els) {
            ++out.candidates;
            if (mu.is_zero()) {
                ++out.inseparable;
                continue;
            }
            HoweModel hm{s.ells[i].A, s.ells[i].B, s.ells[j].A, s.ells[j].B, lambda, mu, K.one()};
            if (check_howe(hm)) {
                ++out.inseparable;
                continue;
            }
            if (hyper_cm_vanishes(HyperModel{K.one(), hm.f1() * hm.f2(), 2})) out.hits.push_back(hm);
        }
        return out;
    };
    auto tally = [&](u64 chunk) {
        // the prefilter is cheap, so resumed chunks recount it
        KernelChunk out;
        const auto [i, j] = s.pairs[chunk / q];
        const Fe& lambda = s.els[chunk % q];
        for (const Fe& mu : s.els) {
            ++out.candidates;
            HoweModel hm{s.ells[i].A, s.ells[i].B, s.ells[j].A, s.ells[j].B, lambda, mu, K.one()};
            if (check_howe(hm)) ++out.inseparable;
        }
        return out;
    };
    auto chunks = run_chunks("howe-a", p, n, run, tally, "howe", K, opt);
    std::map<HoweKey, HoweClass> classes;
    for (const auto& c : chunks) {
        r.book.box += c.candidates;
        r.book.prefiltered += c.inseparable;
        for (const CurveModel& cm : c.hits) {
            const HoweModel& hm = std::get<HoweModel>(cm);
            ++r.book.survivors;
            HoweTriple t{hm.f1(), hm.f2(), std::nullopt};
            if (opt.audit) {
                const Field& K2 = Field::get(p, 2);
                HyperModel c2 = howe_curve(t);
                const bool zero = matrix_zero(cm_hyperelliptic(c2, false)) &&
                                  is_supersingular_cubic(hm.f1()) && is_supersingular_cubic(hm.f2());
                r.audit.record(zero, 4, count_points_howe(hm, K2), p, ser(hm));
            }
            HoweKey k = howe_key(t);
            auto it = classes.find(k);
            if (it == classes.end()) classes.emplace(k, HoweClass{t, igusa_key(howe_curve(t)).str(), 1});
            else ++it->second.hits;
        }
    }
    r.book.frobenius_rejected = r.book.box - r.book.prefiltered - r.book.survivors;
    add_howe_classes(r, classes);
    return r;
}

// ---------------------------------------------------------------- genus 4 hyperelliptic

CensusResult census_hyper_g4(u32 p, const RunOptions& opt) {
    if (!is_prime_u64(p) || p < 11) fail(ErrorKind::argument, "census_hyper_g4 needs a prime p >= 11");
    const Field& K = Field::get(p);
    CensusResult r = blank("hyper4", p, 1, "F_" + std::to_string(p));
    HyperScan scan(4, K);
    auto chunks = run_chunks(
        "hyper4", p, scan.chunks(), [&](u64 c) { return scan.run(c); }, [&](u64 c) { return scan.tally(c); },
        "hyperelliptic", K, opt);
    std::vector<HyperModel> valid;
    for (const auto& c : chunks) {
        r.book.box += c.candidates;
        r.book.prefiltered += c.inseparable;
        for (const CurveModel& cm : c.hits) {
            const HyperModel& m = std::get<HyperModel>(cm);
            if (!hyper_cm_vanishes(m)) continue;
            ++r.book.survivors;
            if (auto why = check_hyper(m)) {
                ++r.book.invalid;
                ++r.book.invalid_by_reason[to_string(*why)];
                continue;
            }
            valid.push_back(m);
        }
    }
    r.book.frobenius_rejected = r.book.box - r.book.prefiltered - r.book.survivors;
    std::sort(valid.begin(), valid.end(),
              [](const HyperModel& a, const HyperModel& b) { return serialize(a) < serialize(b); });
    std::vector<size_t> rep;
    std::vector<u64> hits;
    for (size_t i = 0; i < valid.size(); ++i) {
        if (opt.audit) audit_hyper(r.audit, valid[i], p);
        size_t k = 0;
        while (k < rep.size() && !binary_form_iso(valid[rep[k]], valid[i], false)) ++k;
        if (k == rep.size()) {
            rep.push_back(i);
            hits.push_back(0);
        }
        ++hits[k];
    }
    for (size_t k = 0; k < rep.size(); ++k) {
        CensusRecord c;
        c.model = serialize(valid[rep[k]]);
        c.raw_hits = hits[k];
        r.classes.push_back(c);
    }
    number_classes(r);
    return r;
}

// ---------------------------------------------------------------- genus 4 canonical over F_5

CensusResult census_canonical_g4_f5(const RunOptions& opt) {
    const Field& K = Field::get(5);
    CensusResult r = blank("canonical4-f5", 5, 1, "F_5");
    const std::vector<ModelBox> boxes = gen_canonical_reduced(K);
    const u64 cs = opt.chunk_size ? opt.chunk_size : (u64{1} << 18);
    std::vector<CanonicalScan> scans;
    std::vector<u64> offset{0};
    for (const auto& b : boxes) {
        scans.emplace_back(b, cs);
        offset.push_back(offset.back() + scans.back().chunks());
    }
    auto locate = [&](u64 c) {
        size_t i = 0;
        while (c >= offset[i + 1]) ++i;
        return std::make_pair(i, c - offset[i]);
    };
    auto chunks = run_chunks(
        "canonical4-f5", 5, offset.back(),
        [&](u64 c) {
            auto [i, l] = locate(c);
            return scans[i].run(l);
        },
        [&](u64 c) {
            auto [i, l] = locate(c);
            return scans[i].tally(l);
        },
        "canonical4", K, opt);
    std::vector<CanonicalModel> valid;
    std::map<std::string, u64> by_qtype;
    for (const auto& c : chunks) {
        r.book.box += c.candidates;
        r.book.prefiltered += c.inseparable;
        for (const CurveModel& cm : c.hits) {
            const CanonicalModel& m = std::get<CanonicalModel>(cm);
            if (!canonical_hw_vanishes(m)) continue;
            ++r.book.survivors;
            if (auto why = check_canonical(m)) {
                ++r.book.invalid;
                ++r.book.invalid_by_reason[to_string(*why)];
                continue;
            }
            ++by_qtype[to_string(m.qtype)];
            valid.push_back(m);
        }
    }
    r.book.frobenius_rejected = r.book.box - r.book.prefiltered - r.book.survivors;
    std::sort(valid.begin(), valid.end(),
              [](const CanonicalModel& a, const CanonicalModel& b) { return serialize(a) < serialize(b); });
    const Field& K2 = Field::get(5, 2);
    std::vector<size_t> rep;
    std::vector<u64> hits;
    for (size_t i = 0; i < valid.size(); ++i) {
        if (opt.audit)
            r.audit.record(matrix_zero(hw_canonical_g4(valid[i], false)), 4, count_points_canonical(valid[i], K2), 5,
                           ser(valid[i]));
        size_t k = 0;
        while (k < rep.size() && !canonical_g4_iso(valid[rep[k]], valid[i], 1)) ++k;
        if (k == rep.size()) {
            rep.push_back(i);
            hits.push_back(0);
        }
        ++hits[k];
    }
    // geometric merge of the F_5 representatives
    std::vector<size_t> geo(rep.size());
    u64 ngeo = 0;
    for (size_t a = 0; a < rep.size(); ++a) {
        geo[a] = a;
        for (size_t b = 0; b < a; ++b)
            if (geo[b] == b && canonical_g4_iso(valid[rep[b]], valid[rep[a]], 0)) {
                geo[a] = b;
                break;
            }
        if (geo[a] == a) ++ngeo;
    }
    for (size_t k = 0; k < rep.size(); ++k) {
        CensusRecord c;
        c.model = serialize(valid[rep[k]]);
        c.invariants["qtype"] = to_string(valid[rep[k]].qtype);
        c.invariants["geometric_class"] = std::to_string(geo[k] == k ? k : geo[k]);
        c.raw_hits = hits[k];
        r.classes.push_back(c);
    }
    r.geometric_classes = ngeo;
    for (const auto& [t, n] : by_qtype) r.notes["qtype_" + t] = std::to_string(n);
    number_classes(r);
    return r;
}

FamilyCheck verify_canonical_family_f25(const RunOptions& opt) {
    const Field& K = Field::get(5, 2);
    FamilyCheck out;
    out.name = "2yw + z^2 = x^3 + a1 y^3 + a2 w^3 + a3 z w^2";
    auto mono = [](int a, int b, int c, int d) {
        return Mono{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c),
                    static_cast<std::uint8_t>(d)};
    };
    const auto els = all_elements(K);
    for (const Fe& a1 : els) {
        if (a1.is_zero()) continue;
        for (const Fe& a2 : els) {
            if (a2.is_zero()) continue;
            for (const Fe& a3 : els) {
                Form P(K, 4, 3);
                P.add_term(mono(3, 0, 0, 0), K.one());
                P.add_term(mono(0, 3, 0, 0), a1);
                P.add_term(mono(0, 0, 0, 3), a2);
                if (!a3.is_zero()) P.add_term(mono(0, 0, 1, 2), a3);
                CanonicalModel m{QType::Dege, P};
                ++out.members;
                const bool ok = !check_canonical(m) && canonical_hw_vanishes(m);
                if (ok) ++out.passed;
                else if (out.failures.size() < 8) out.failures.push_back(ser(m));
                if (ok && opt.audit)
                    out.audit.record(matrix_zero(hw_canonical_g4(m, false)), 4, count_points_canonical(m, K), 5,
                                     ser(m));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- trigonal genus 5

namespace {

Mono m3(int a, int b, int c) {
    return Mono{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c), 0};
}

void check_trigonal_member(FamilyCheck& fc, const TrigonalModel& m, const RunOptions& opt) {
    ++fc.members;
    const bool ok = quintic_singularities(m) == SingVerdict::valid_unique_singularity && !check_trigonal(m) &&
                    trigonal_hw_vanishes(m);
    if (ok) ++fc.passed;
    else if (fc.failures.size() < 8) fc.failures.push_back(ser(m));
    if (ok && opt.audit) {
        const Field& L = Field::get(m.F.field().p(), 2);
        fc.audit.record(matrix_zero(hw_trigonal_g5(m, false)), 5, count_points_trigonal(m, L), m.F.field().p(),
                        ser(m));
    }
}

}  // namespace

std::vector<TrigonalModel> trigonal_representatives() {
    const Field& K = Field::get(11);
    std::vector<TrigonalModel> out;
    for (int i = 1; i <= 3; ++i) {
        Form F(K, 3, 5);
        F.add_term(m3(1, 1, 3), K.one());
        F.add_term(m3(5, 0, 0), K.from_int(i));
        F.add_term(m3(0, 5, 0), K.one());
        out.push_back({TriCase::SplitNode, F});
    }
    Form F(K, 3, 5);
    F.add_term(m3(2, 0, 3), K.one());
    F.add_term(m3(0, 2, 3), K.from_int(-2));
    F.add_term(m3(5, 0, 0), K.one());
    F.add_term(m3(3, 2, 0), K.from_int(9));
    F.add_term(m3(1, 4, 0), K.from_int(9));
    out.push_back({TriCase::NonSplitNode, F});
    return out;
}

TrigonalReport verify_trigonal_f11(const RunOptions& opt) {
    const Field& K = Field::get(11);
    TrigonalReport rep;
    rep.split.name = "xyz^3 + a1 x^5 + a2 y^5";
    rep.nonsplit.name = "(x^2 - 2y^2) z^3 + a x^5 + b x^4 y + 9a x^3 y^2 + 4b x^2 y^3 + 9a x y^4 + 3b y^5";
    const auto els = all_elements(K);
    for (const Fe& a1 : els)
        for (const Fe& a2 : els) {
            if (a1.is_zero() || a2.is_zero()) continue;
            Form F(K, 3, 5);
            F.add_term(m3(1, 1, 3), K.one());
            F.add_term(m3(5, 0, 0), a1);
            F.add_term(m3(0, 5, 0), a2);
            check_trigonal_member(rep.split, {TriCase::SplitNode, F}, opt);
        }
    for (const Fe& a : els)
        for (const Fe& b : els) {
            if (a.is_zero() && b.is_zero()) continue;
            Form F(K, 3, 5);
            F.add_term(m3(2, 0, 3), K.one());
            F.add_term(m3(0, 2, 3), K.from_int(-2));
            const std::pair<Mono, Fe> terms[] = {{m3(5, 0, 0), a},
                                                 {m3(4, 1, 0), b},
                                                 {m3(3, 2, 0), K.from_int(9) * a},
                                                 {m3(2, 3, 0), K.from_int(4) * b},
                                                 {m3(1, 4, 0), K.from_int(9) * a},
                                                 {m3(0, 5, 0), K.from_int(3) * b}};
            for (const auto& [mo, c] : terms)
                if (!c.is_zero()) F.add_term(mo, c);
            check_trigonal_member(rep.nonsplit, {TriCase::NonSplitNode, F}, opt);
        }
    const auto reps = trigonal_representatives();
    rep.reps_distinct_over_f11 = true;
    rep.reps_geometrically_one = true;
    for (size_t i = 0; i < reps.size(); ++i)
        for (size_t j = i + 1; j < reps.size(); ++j) {
            if (trigonal_iso(reps[i], reps[j], 1)) rep.reps_distinct_over_f11 = false;
            if (!trigonal_geometric_iso(reps[i], reps[j])) rep.reps_geometrically_one = false;
        }
    return rep;
}

CensusResult census_trigonal_f7(const RunOptions& opt) {
    const Field& K = Field::get(7);
    CensusResult r = blank("trigonal5", 7, 1, "F_7");
    const std::vector<ModelBox> boxes = gen_trigonal_reduced(K);
    const u64 cs = opt.chunk_size ? opt.chunk_size : (u64{1} << 20);
    std::vector<u64> offset{0};
    for (const auto& b : boxes) offset.push_back(offset.back() + (b.size() + cs - 1) / cs);
    auto locate = [&](u64 c) {
        size_t i = 0;
        while (c >= offset[i + 1]) ++i;
        const u64 start = (c - offset[i]) * cs;
        return std::make_tuple(i, start, std::min(boxes[i].size(), start + cs));
    };
    auto chunks = run_chunks(
        "trigonal5", 7, offset.back(),
        [&](u64 c) {
            auto [i, s, e] = locate(c);
            KernelChunk out;
            out.candidates = e - s;
            for (u64 idx = s; idx < e; ++idx) {
                CurveModel m = boxes[i].at(idx);
                if (trigonal_hw_vanishes(std::get<TrigonalModel>(m))) out.hits.push_back(m);
            }
            return out;
        },
        [&](u64 c) {
            auto [i, s, e] = locate(c);
            KernelChunk out;
            out.candidates = e - s;
            return out;
        },
        "trigonal5", K, opt);
    std::vector<TrigonalModel> valid;
    for (const auto& c : chunks) {
        r.book.box += c.candidates;
        for (const CurveModel& cm : c.hits) {
            const TrigonalModel& m = std::get<TrigonalModel>(cm);
            ++r.book.survivors;
            if (auto why = check_trigonal(m)) {
                ++r.book.invalid;
                ++r.book.invalid_by_reason[to_string(*why)];
                continue;
            }
            valid.push_back(m);
        }
    }
    r.book.frobenius_rejected = r.book.box - r.book.survivors;
    std::sort(valid.begin(), valid.end(),
              [](const TrigonalModel& a, const TrigonalModel& b) { return serialize(a) < serialize(b); });
    std::vector<size_t> rep;
    std::vector<u64> hits;
    for (size_t i = 0; i < valid.size(); ++i) {
        size_t k = 0;
        while (k < rep.size() && !trigonal_iso(valid[rep[k]], valid[i], 1)) ++k;
        if (k == rep.size()) {
            rep.push_back(i);
            hits.push_back(0);
        }
        ++hits[k];
    }
    for (size_t k = 0; k < rep.size(); ++k) {
        CensusRecord c;
        c.model = serialize(valid[rep[k]]);
        c.raw_hits = hits[k];
        r.classes.push_back(c);
    }
    number_classes(r);
    return r;
}

// ---------------------------------------------------------------- chunk runner

namespace {

struct CheckpointFile {
    int fd = -1;
    ~CheckpointFile() {
        if (fd >= 0) ::close(fd);
    }
};

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::vector<KernelChunk> run_chunks(const std::string& family, u32 p, u64 n,
                                    const std::function<KernelChunk(u64)>& run,
                                    const std::function<KernelChunk(u64)>& tally, const std::string& model_tag,
                                    const Field& K, const RunOptions& opt) {
    std::vector<KernelChunk> results(n);
    std::vector<char> have(n, 0);
    CheckpointFile ck;
    if (!opt.checkpoint.empty()) {
        std::string text;
        {
            std::ifstream in(opt.checkpoint, std::ios::binary);
            if (in) text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        }
        // a torn last line from an interrupted run is dropped
        const size_t keep = text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1;
        std::istringstream lines(text.substr(0, keep));
        std::string line;
        while (std::getline(lines, line)) {
            auto tok = split_ws(line);
            if (tok.empty()) continue;
            if (tok.size() < 4 || tok[0] != family || tok[1] != std::to_string(p))
                fail(ErrorKind::argument, "checkpoint " + opt.checkpoint + " belongs to another run: " + line);
            const u64 c = std::stoull(tok[2]);
            if (c >= n) fail(ErrorKind::argument, "checkpoint chunk out of range: " + line);
            KernelChunk kc = tally(c);
            u64 k = 0;
            if (tok[3] != "done") {
                if (tok[3].rfind("survivors:", 0) != 0) fail(ErrorKind::argument, "bad checkpoint status: " + line);
                k = std::stoull(tok[3].substr(10));
            }
            if (tok.size() != 4 + k) fail(ErrorKind::argument, "checkpoint survivor count mismatch: " + line);
            for (u64 i = 0; i < k; ++i) kc.hits.push_back(deserialize(model_tag, split_commas(tok[4 + i]), K));
            results[c] = std::move(kc);
            have[c] = 1;
        }
        ck.fd = ::open(opt.checkpoint.c_str(), O_WRONLY | O_CREAT, 0644);
        if (ck.fd < 0) fail(ErrorKind::argument, "cannot open checkpoint " + opt.checkpoint);
        if (::ftruncate(ck.fd, static_cast<off_t>(keep)) != 0 || ::lseek(ck.fd, 0, SEEK_END) < 0)
            fail(ErrorKind::argument, "cannot reset checkpoint " + opt.checkpoint);
    }

    std::vector<u64> todo;
    for (u64 c = 0; c < n; ++c)
        if (!have[c]) todo.push_back(c);
    const u64 already = n - todo.size();

    std::mutex mu;
    std::condition_variable cv;
    std::deque<u64> finished;
    std::atomic<u64> next{0};
    std::exception_ptr error;
    const unsigned jobs = std::max(1u, opt.jobs);
    const unsigned workers = static_cast<unsigned>(std::min<u64>(jobs, std::max<u64>(todo.size(), 1)));
    unsigned running = workers;

    auto worker = [&] {
        for (;;) {
            const u64 i = next.fetch_add(1);
            if (i >= todo.size()) break;
            {
                std::lock_guard<std::mutex> g(mu);
                if (error) break;
            }
            try {
                KernelChunk kc = run(todo[i]);
                std::lock_guard<std::mutex> g(mu);
                results[todo[i]] = std::move(kc);
                finished.push_back(todo[i]);
            } catch (...) {
                std::lock_guard<std::mutex> g(mu);
                if (!error) error = std::current_exception();
            }
            cv.notify_one();
        }
        std::lock_guard<std::mutex> g(mu);
        --running;
        cv.notify_one();
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);

    // the coordinator owns the checkpoint file
    u64 done = already;
    std::string write_error;
    for (;;) {
        std::unique_lock<std::mutex> lk(mu);
        cv.wait(lk, [&] { return !finished.empty() || running == 0; });
        if (finished.empty() && running == 0) break;
        const u64 c = finished.front();
        finished.pop_front();
        const KernelChunk& kc = results[c];
        std::string line = family + " " + std::to_string(p) + " " + std::to_string(c) + " ";
        line += kc.hits.empty() ? "done" : "survivors:" + std::to_string(kc.hits.size());
        for (const CurveModel& m : kc.hits) line += " " + ser(m);
        line += "\n";
        lk.unlock();
        if (ck.fd >= 0 && write_error.empty()) {
            const char* d = line.data();
            size_t left = line.size();
            while (left > 0) {
                const ssize_t w = ::write(ck.fd, d, left);
                if (w <= 0) {
                    write_error = "checkpoint write failed";
                    break;
                }
                d += w;
                left -= static_cast<size_t>(w);
            }
            if (write_error.empty() && ::fsync(ck.fd) != 0) write_error = "checkpoint fsync failed";
        }
        ++done;
        if (opt.progress) opt.progress(done, n);
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    if (!write_error.empty()) fail(ErrorKind::internal, write_error);
    return results;
}

}  // namespace ssp
