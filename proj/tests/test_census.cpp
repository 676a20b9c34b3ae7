#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "ssp/census.hpp"
#include "ssp/formulas.hpp"
#include "ssp/frobenius.hpp"
#include "ssp/report.hpp"

using namespace ssp;

namespace {

bool prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// supersingular j-invariants in F_{p^2} by brute force: a j is kept when some
// curve with that j has trace divisible by p. Counts only; p <= 13.
size_t oracle_supersingular_j_count(oracle::i64 p) {
    oracle::GF K(p, 2);
    std::set<std::vector<oracle::i64>> js;
    const auto one = K.from(1);
    for (oracle::i64 lc = 2; lc < K.q; ++lc) {
        auto l = K.elem(lc);
        if (l == one) continue;
        oracle::i64 n = 1;
        for (oracle::i64 xc = 0; xc < K.q; ++xc) {
            auto x = K.elem(xc);
            auto xl = x;
            for (int i = 0; i < K.k; ++i) xl[i] = oracle::md(x[i] - l[i], p);
            auto v = K.mul(K.mul(x, K.add(x, K.from(-1))), xl);
            n += K.is_zero(v) ? 1 : (K.is_square(v) ? 2 : 0);
        }
        if (oracle::md(K.q + 1 - n, p) != 0) continue;
        // j = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)
        auto t = K.add(K.add(K.mul(l, l), K.mul(K.from(-1), l)), one);
        auto lm1 = K.add(l, K.from(-1));
        auto d = K.mul(K.mul(l, l), K.mul(lm1, lm1));
        auto num = K.mul(K.from(256), K.mul(t, K.mul(t, t)));
        js.insert(K.mul(num, K.pow(d, K.q - 2)));
    }
    return js.size();
}

std::vector<std::string> sorted_ser(const std::vector<CurveModel>& ms) {
    std::vector<std::string> out;
    for (const auto& m : ms) {
        std::string s;
        for (const auto& f : serialize(m)) s += f + ",";
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string tmp_path(const std::string& stem) { return "/tmp/ssp_test_" + stem + "_" + std::to_string(::getpid()); }

}  // namespace

TEST_CASE("elliptic census") {
    CHECK(census_elliptic(2).classes.size() == 1);
    CHECK(census_elliptic(3).classes.size() == 1);
    auto r5 = census_elliptic(5);
    REQUIRE(r5.classes.size() == 1);
    CHECK(r5.classes[0].invariants.at("j") == "0");
    auto r11 = census_elliptic(11);
    std::set<std::string> js;
    for (const auto& c : r11.classes) js.insert(c.invariants.at("j"));
    // 1728 = 1 mod 11, coded as 1 in F_121
    CHECK(js == std::set<std::string>{"0", std::to_string(Field::get(11, 2).from_int(1728).code())});
    for (u32 p = 5; p <= 13; p += 2) {
        if (!prime(p)) continue;
        CAPTURE(p);
        CHECK(census_elliptic(p).classes.size() == oracle_supersingular_j_count(p));
    }
    for (u32 p = 5; p <= 97; ++p) {
        if (!prime(p)) continue;
        CAPTURE(p);
        auto r = census_elliptic(p);
        CHECK(r.classes.size() == eichler_h(p));
        // all (p - 1)/2 roots of the Hasse polynomial turn up in F_{p^2}
        CHECK(r.book.survivors == (p - 1) / 2);
        CHECK(r.book.balanced());
        CHECK(r.raw_hits() + r.book.invalid == r.book.survivors);
        CHECK(r.audit.ok());
        CHECK(r.audit.checked == r.book.survivors);
    }
}

TEST_CASE("Rosenhain oracle") {
    CHECK(rosenhain_oracle(5).reps.size() == 1);
    CHECK(rosenhain_oracle(7).keys.size() == 1);
    CHECK(rosenhain_oracle(11).keys.size() == 2);
    try {
        rosenhain_oracle(17);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::overload);
    }
}

TEST_CASE("genus-2 census") {
    for (u32 p : {5u, 7u, 11u, 13u, 17u}) {
        CAPTURE(p);
        auto r = census_genus2(p);
        CHECK(r.classes.size() == genus2_count(p));
        CHECK(r.audit.ok());
        CHECK(r.book.balanced());
        if (p >= 7 && p <= 13) CHECK(r.notes.at("oracle") == "agrees");
    }
}

TEST_CASE("Howe triples on a curve") {
    // every triple splits f, and both genus-1 pieces are supersingular by a second route
    auto g = census_genus2(13);
    const Field& K = Field::get(13, 2);
    int total = 0;
    for (const auto& c : g.classes) {
        HyperModel C = std::get<HyperModel>(deserialize("hyperelliptic", c.model, K));
        for (const HoweTriple& t : howe_triples_on(C)) {
            ++total;
            CHECK(gcd(t.f1, t.f2).is_one());
            Poly lin = t.marked ? Poly(K, {-*t.marked, K.one()}) : Poly(K, {K.one()});
            for (const Poly* f : {&t.f1, &t.f2}) {
                HyperModel e{K.one(), lin * *f, 1};
                CHECK(cm_hyperelliptic(e).is_zero());
            }
            if (t.marked) CHECK(!(t.f1 * t.f2)(*t.marked).is_zero());
            CHECK(hyper_cm_vanishes(howe_curve(t)));
        }
    }
    CHECK(total > 0);
}

TEST_CASE("Howe censuses") {
    CHECK(census_howe_B(7).classes.empty());
    CHECK(census_howe_A(7).classes.empty());
    for (auto [p, n] : {std::pair<u32, size_t>{11, 4}, {13, 3}}) {
        CAPTURE(p);
        auto b = census_howe_B(p);
        auto a = census_howe_A(p);
        CHECK(b.classes.size() == n);
        CHECK(howe_keys(a) == howe_keys(b));
        CHECK(a.book.balanced());
        CHECK(b.book.balanced());
        CHECK(a.audit.ok());
        CHECK(b.audit.ok());
        auto x = census_howe_B(p, {}, true);
        CHECK(x.classes.size() == 1);
        CHECK(howe_keys(b).count(*howe_keys(x).begin()) == 1);
    }
    // class representatives are pairwise non-isomorphic, and every key is stable under
    // re-keying the representative
    auto b = census_howe_B(17);
    CHECK(b.classes.size() == 10);
    CHECK(howe_keys(b).size() == b.classes.size());
}

TEST_CASE("hyperelliptic kernel agrees with the library scan") {
    for (auto [g, p] : {std::pair<int, u32>{2, 7}, {2, 11}, {3, 5}, {3, 7}}) {
        CAPTURE(g);
        CAPTURE(p);
        const Field& K = Field::get(p);
        HyperScan scan(g, K);
        std::vector<CurveModel> kernel;
        u64 candidates = 0;
        for (u64 c = 0; c < scan.chunks(); ++c) {
            auto kc = scan.run(c);
            auto t = scan.tally(c);
            CHECK(t.candidates == kc.candidates);
            CHECK(t.inseparable == kc.inseparable);
            candidates += kc.candidates;
            for (const auto& m : kc.hits)
                if (!check_hyper(std::get<HyperModel>(m)) && hyper_cm_vanishes(std::get<HyperModel>(m)))
                    kernel.push_back(m);
        }
        ModelBox box = gen_hyper_reduced(g, K);
        CHECK(candidates == box.size());
        std::vector<CurveModel> lib;
        box.for_each(0, box.size(), [&](u64, const CurveModel& m) {
            if (hyper_cm_vanishes(std::get<HyperModel>(m))) lib.push_back(m);
        });
        CHECK(sorted_ser(kernel) == sorted_ser(lib));
    }
}

TEST_CASE("canonical kernel agrees with the library on box slices") {
    const Field& K = Field::get(5);
    for (const ModelBox& box : gen_canonical_reduced(K)) {
        CAPTURE(box.name);
        CanonicalScan scan(box, 4096);
        CHECK(scan.affine());
        Rng rng(3);
        for (int rep = 0; rep < 3; ++rep) {
            const u64 c = rng() % scan.chunks();
            auto kc = scan.run(c);
            CHECK(scan.tally(c).candidates == kc.candidates);
            std::vector<CurveModel> lib;
            const u64 start = c * 4096;
            for (u64 i = start; i < start + kc.candidates; ++i) {
                CurveModel m = box.at(i);
                if (canonical_hw_vanishes(std::get<CanonicalModel>(m))) lib.push_back(m);
            }
            CHECK(sorted_ser(kc.hits) == sorted_ser(lib));
        }
    }
}

TEST_CASE("serialization round trip") {
    Rng rng(11);
    const Field& K = Field::get(7, 2);
    for (int it = 0; it < 50; ++it) {
        std::vector<Fe> c(7);
        for (auto& x : c) x = K.random(rng);
        HyperModel h{K.random(rng), Poly(K, c), 2};
        if (h.f.deg_or_zero() < 5) continue;
        CurveModel back = deserialize("hyperelliptic", serialize(h), K);
        CHECK(serialize(back) == serialize(h));
        CHECK(std::get<HyperModel>(back).g == 2);
    }
    const Field& F5 = Field::get(5);
    for (const ModelBox& box : gen_canonical_reduced(F5))
        for (int it = 0; it < 20; ++it) {
            CurveModel m = box.at(rng() % box.size());
            CHECK(serialize(deserialize("canonical4", serialize(m), F5)) == serialize(m));
        }
    for (const TrigonalModel& t : trigonal_representatives())
        CHECK(serialize(deserialize("trigonal5", serialize(t), Field::get(11))) == serialize(t));
    CHECK_THROWS_AS(deserialize("hyperelliptic", {"1", "x", "0", "1"}, K), Error);
    CHECK_THROWS_AS(deserialize("canonical4", {"N1", "1"}, F5), Error);
}

TEST_CASE("chunk runner: worker count and checkpoints do not change results") {
    const Field& K = Field::get(11);
    HyperScan scan(2, K);
    auto run = [&](u64 c) { return scan.run(c); };
    auto tally = [&](u64 c) { return scan.tally(c); };
    auto flatten = [](const std::vector<KernelChunk>& v) {
        std::vector<std::string> out;
        u64 cand = 0;
        for (const auto& kc : v) {
            cand += kc.candidates;
            for (const auto& m : kc.hits) {
                std::string s;
                for (const auto& f : serialize(m)) s += f + ",";
                out.push_back(s);
            }
        }
        out.push_back(std::to_string(cand));
        return out;
    };
    RunOptions one;
    auto base = flatten(run_chunks("hyper2", 11, scan.chunks(), run, tally, "hyperelliptic", K, one));
    RunOptions many;
    many.jobs = 4;
    CHECK(flatten(run_chunks("hyper2", 11, scan.chunks(), run, tally, "hyperelliptic", K, many)) == base);

    const std::string ck = tmp_path("ck");
    std::remove(ck.c_str());
    RunOptions withck;
    withck.jobs = 2;
    withck.checkpoint = ck;
    CHECK(flatten(run_chunks("hyper2", 11, scan.chunks(), run, tally, "hyperelliptic", K, withck)) == base);
    // keep a third of the lines plus a torn line, then resume
    std::vector<std::string> lines;
    {
        std::ifstream in(ck);
        std::string l;
        while (std::getline(in, l)) lines.push_back(l);
    }
    CHECK(lines.size() == scan.chunks());
    {
        std::ofstream out(ck, std::ios::trunc);
        for (size_t i = 0; i < lines.size() / 3; ++i) out << lines[i] << "\n";
        out << lines.back().substr(0, lines.back().size() / 2);
    }
    u64 reran = 0;
    auto counting = [&](u64 c) {
        ++reran;
        return scan.run(c);
    };
    withck.jobs = 1;
    CHECK(flatten(run_chunks("hyper2", 11, scan.chunks(), counting, tally, "hyperelliptic", K, withck)) == base);
    CHECK(reran == scan.chunks() - lines.size() / 3);
    {
        std::ifstream in(ck);
        std::string l;
        size_t n = 0;
        while (std::getline(in, l)) {
            ++n;
            CHECK(l.rfind("hyper2 11 ", 0) == 0);
        }
        CHECK(n == scan.chunks());
    }
    // a checkpoint from another run is refused
    CHECK_THROWS_AS(run_chunks("hyper3", 11, scan.chunks(), run, tally, "hyperelliptic", K, withck), Error);
    std::remove(ck.c_str());
}

TEST_CASE("genus-4 family checks") {
    auto f = verify_canonical_family_f25();
    CHECK(f.members == 14400);
    CHECK(f.passed == 14400);
    CHECK(f.audit.weak_ok());
    auto t = verify_trigonal_f11();
    CHECK(t.split.members == 100);
    CHECK(t.nonsplit.members == 120);
    CHECK(t.ok());
    CHECK(t.split.audit.ok());
    CHECK(t.nonsplit.audit.ok());
}

TEST_CASE("reports") {
    auto r = census_genus2(11);
    const std::string a = to_json(r, {std::nullopt, 7});
    CHECK(a == to_json(census_genus2(11), {std::nullopt, 7}));
    auto j = nlohmann::json::parse(a);
    CHECK(j["family"] == "genus2");
    CHECK(j["p"] == 11);
    CHECK(j["count"] == 2);
    CHECK(j["classes"].size() == 2);
    CHECK(j["referee"]["formula"] == 2);
    CHECK(j["runtime_ms"].is_null());
    CHECK(j["seed"] == 7);
    const std::string csv = to_csv(r, {std::nullopt, 7});
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.rfind("family,p,field_degree,count,class_id,model,invariants,raw_hits,referee,runtime_ms,seed\n", 0) == 0);

    const std::string path = tmp_path("report");
    write_atomic(path, a);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == a);
    CHECK(!std::ifstream(path + ".tmp").good());
    std::remove(path.c_str());
    CHECK_THROWS(write_atomic("/nonexistent-dir/x.json", a));
}
