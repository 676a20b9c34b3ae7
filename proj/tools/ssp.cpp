// ssp: census and verification front end.
//
// Exit status: 0 success, 1 usage or I/O error, 2 a census or verification
// disagreed with its referee.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ssp/census.hpp"
#include "ssp/formulas.hpp"
#include "ssp/report.hpp"

using namespace ssp;

namespace {

struct Range {
    u32 lo, hi;
};

// contract ranges; --stretch lifts the upper end
const std::map<std::string, Range> kContract = {
    {"elliptic", {2, 199}},  {"genus2", {5, 53}},         {"howe-a", {7, 31}}, {"howe-b", {7, 499}},
    {"hyper4", {11, 13}},    {"canonical4-f5", {5, 5}},   {"trigonal5", {11, 11}}, {"verify", {5, 5}},
};

struct Acceptance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned default_jobs() {
    if (const char* s = std::getenv("SSP_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty() || output == "-") std::cout << text;
    else write_atomic(output, text);
}

bool prime(u64 p) { return is_prime_u64(p); }

int run_census(const std::string& family, u32 p, bool stretch, bool existence, const RunOptions& opt,
               const std::string& format, const std::string& output, const ReportMeta& meta0, bool timing) {
    auto it = kContract.find(family);
    if (family == "trigonal5" && p == 7) {
        if (!stretch) throw CLI::ValidationError("--family trigonal5 -p 7 is a stretch run; pass --stretch");
    } else if (p < it->second.lo || (!stretch && p > it->second.hi) || !prime(p)) {
        throw CLI::ValidationError("p = " + std::to_string(p) + " is outside the range of " + family + " (" +
                                   std::to_string(it->second.lo) + ".." + std::to_string(it->second.hi) +
                                   ", --stretch lifts the upper bound)");
    }
    const auto t0 = std::chrono::steady_clock::now();
    ReportMeta meta = meta0;
    auto stamp = [&] {
        if (timing)
            meta.runtime_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };
    if (family == "verify") {
        FamilyCheck f = verify_canonical_family_f25(opt);
        stamp();
        emit(to_json(f, 5, meta), output);
        if (!f.ok()) throw Acceptance("canonical F_25 family check failed");
        return 0;
    }
    if (family == "trigonal5" && p == 11) {
        TrigonalReport t = verify_trigonal_f11(opt);
        stamp();
        emit(to_json(t, meta), output);
        if (!t.ok()) throw Acceptance("trigonal F_11 verification failed");
        return 0;
    }
    CensusResult r;
    if (family == "elliptic") r = census_elliptic(p, opt);
    else if (family == "genus2") r = census_genus2(p, opt);
    else if (family == "howe-a") r = census_howe_A(p, opt);
    else if (family == "howe-b") r = census_howe_B(p, opt, existence);
    else if (family == "hyper4") r = census_hyper_g4(p, opt);
    else if (family == "canonical4-f5") r = census_canonical_g4_f5(opt);
    else r = census_trigonal_f7(opt);
    stamp();
    emit(format == "csv" ? to_csv(r, meta) : to_json(r, meta), output);
    if (!r.book.balanced()) throw Acceptance("bookkeeping does not balance");
    if (r.referee && r.classes.size() != *r.referee) throw Acceptance("class count differs from the formula");
    return 0;
}

int run_verify(const std::string& suite, u32 pmax, const RunOptions& opt) {
    if (suite == "formulas") {
        int bad = 0;
        for (u32 p = 2; p <= pmax; ++p) {
            if (!prime(p)) continue;
            const u64 h = eichler_h(p);
            const u64 g2 = genus2_count(p);  // throws if the mass formula is not integral
            RunOptions o = opt;
            o.audit = false;
            const u64 found = census_elliptic(p, o).classes.size();
            if (found != h) {
                std::cerr << "p = " << p << ": " << found << " supersingular j-invariants, formula " << h << "\n";
                ++bad;
            }
            std::cout << "p=" << p << " h=" << h << " genus2=" << g2 << "\n";
        }
        if (bad) throw Acceptance("formula cross-check failed");
        return 0;
    }
    if (suite == "canonical-f25") {
        FamilyCheck f = verify_canonical_family_f25(opt);
        std::cout << f.passed << "/" << f.members << " members pass\n";
        if (!f.ok()) throw Acceptance("canonical F_25 family check failed");
        return 0;
    }
    TrigonalReport t = verify_trigonal_f11(opt);
    std::cout << t.split.passed << "/" << t.split.members << " and " << t.nonsplit.passed << "/"
              << t.nonsplit.members << " members pass; representatives distinct over F_11: "
              << (t.reps_distinct_over_f11 ? "yes" : "no")
              << ", one geometric class: " << (t.reps_geometrically_one ? "yes" : "no") << "\n";
    if (!t.ok()) throw Acceptance("trigonal F_11 verification failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superspecial curve censuses over small finite fields"};
    app.require_subcommand(1);

    std::string family, format = "json", output, checkpoint, suite = "formulas";
    u32 p = 0, pmax = 199;
    unsigned jobs = default_jobs();
    u64 chunk_size = 0, seed = 0;
    bool stretch = false, existence = false, timing = false, quiet = false;

    auto* census = app.add_subcommand("census", "run one census and write its report");
    census->add_option("--family", family, "census family")
        ->required()
        ->check(CLI::IsMember({"elliptic", "genus2", "howe-a", "howe-b", "hyper4", "canonical4-f5", "trigonal5",
                               "verify"}));
    census->add_option("-p", p, "characteristic");
    census->add_option("--jobs", jobs, "worker threads (default $SSP_JOBS or 1)")->check(CLI::Range(1u, 1024u));
    census->add_option("--chunk-size", chunk_size, "box indices per chunk for canonical scans");
    census->add_option("--checkpoint", checkpoint, "append finished chunks here and resume from it");
    census->add_option("--output", output, "report path (default stdout)");
    census->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    census->add_option("--rng-seed", seed, "seed recorded in the report");
    census->add_flag("--stretch", stretch, "allow p beyond the contract range");
    census->add_flag("--existence", existence, "howe-b: stop at the first Howe curve");
    census->add_flag("--timing", timing, "record runtime_ms (reports stop being byte-stable)");
    census->add_flag("--quiet", quiet, "no progress on stderr");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "suite")->check(CLI::IsMember({"formulas", "canonical-f25", "trigonal-f11"}));
    verify->add_option("--pmax", pmax, "largest prime for the formulas suite")->check(CLI::Range(2u, 2000u));
    verify->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 1024u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    RunOptions opt;
    opt.jobs = jobs;
    opt.chunk_size = chunk_size;
    opt.checkpoint = checkpoint;
    if (!quiet)
        opt.progress = [](u64 done, u64 total) {
            if (done == total || done % 64 == 0) std::cerr << "\r" << done << "/" << total << " chunks" << std::flush;
            if (done == total) std::cerr << "\n";
        };
    try {
        if (census->parsed()) {
            if (family == "canonical4-f5" || family == "verify") {
                if (p == 0) p = 5;
            } else if (family == "trigonal5" && p == 0) {
                p = 11;
            }
            if (p == 0) throw CLI::ValidationError("-p is required for --family " + family);
            return run_census(family, p, stretch, existence, opt, format, output, ReportMeta{std::nullopt, seed},
                              timing);
        }
        return run_verify(suite, pmax, opt);
    } catch (const CLI::Error& e) {
        std::cerr << "ssp: " << e.what() << "\n";
        return 1;
    } catch (const Acceptance& e) {
        std::cerr << "ssp: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "ssp: " << e.what() << "\n";
        if (e.kind() == ErrorKind::census_incomplete) return 2;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ssp: " << e.what() << "\n";
        return 1;
    }
}
