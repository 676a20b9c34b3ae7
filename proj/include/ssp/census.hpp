#pragma once

// Census drivers: parameter scans, Frobenius filters, validation and
// isomorphism classification, plus brute-force oracles used as referees.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ssp/isomorphy.hpp"
#include "ssp/kernels.hpp"

namespace ssp {

struct CensusRecord {
    std::string family;
    u32 p = 0;
    int field_degree = 0;
    std::vector<std::string> model;               // serialized representative
    std::map<std::string, std::string> invariants;  // fingerprint
    u64 class_id = 0;
    u64 raw_hits = 0;
};

// box = frobenius_rejected + prefiltered + survivors, survivors = invalid + sum of raw hits
struct Bookkeeping {
    u64 box = 0;
    u64 frobenius_rejected = 0;
    u64 prefiltered = 0;  // discarded as inseparable before any Frobenius test
    u64 survivors = 0;
    u64 invalid = 0;
    std::map<std::string, u64> invalid_by_reason;
    bool balanced() const { return box == frobenius_rejected + prefiltered + survivors; }
};

// Re-check of every valid survivor: full Frobenius matrix and the trace t of
// Frobenius over F_{p^2}. congruence: 2p | t and |t| <= 2gp. divisibility is the
// weaker p | t with the same bound, which every superspecial model satisfies.
struct Audit {
    u64 checked = 0;
    u64 matrix_failures = 0;
    u64 congruence_failures = 0;
    u64 divisibility_failures = 0;
    std::map<i64, u64> traces;
    std::vector<std::string> examples;  // first few failures
    bool ok() const { return matrix_failures == 0 && congruence_failures == 0; }
    bool weak_ok() const { return matrix_failures == 0 && divisibility_failures == 0; }
    void record(bool matrix_zero, int g, u64 points, u32 p, const std::string& what);
    Audit& operator+=(const Audit& o);
};

struct CensusResult {
    std::string family;
    u32 p = 0;
    int field_degree = 0;
    std::string level;  // "geometric" or the field of the isomorphism test
    std::vector<CensusRecord> classes;
    std::optional<u64> referee;            // closed-form count when one exists
    std::optional<u64> geometric_classes;  // when the census also merges geometrically
    Bookkeeping book;
    Audit audit;
    std::map<std::string, std::string> notes;
    u64 raw_hits() const;
};

struct RunOptions {
    unsigned jobs = 1;
    u64 chunk_size = 0;      // 0: family default
    std::string checkpoint;  // empty: none
    bool audit = true;
    std::function<void(u64 done, u64 total)> progress;
};

// ---------------------------------------------------------------- elliptic and genus 2

CensusResult census_elliptic(u32 p, const RunOptions& opt = {});

struct OracleResult {
    std::vector<HyperModel> reps;  // one per geometric class
    std::vector<u64> hits;         // Rosenhain triples per class
    std::set<Genus2Key> keys;      // empty at p = 5
    u64 scanned = 0;
};
OracleResult rosenhain_oracle(u32 p);

CensusResult census_genus2(u32 p, const RunOptions& opt = {});

// ---------------------------------------------------------------- Howe curves

CensusResult census_howe_A(u32 p, const RunOptions& opt = {});
// existence stops at the first Howe triple found while walking
CensusResult census_howe_B(u32 p, const RunOptions& opt = {}, bool existence = false);
// the geometric keys behind a Howe census, for comparing strategies
std::set<HoweKey> howe_keys(const CensusResult& r);

// every Howe triple (f = f1 f2, marked point) on one genus-2 curve over F_{p^2}
std::vector<HoweTriple> howe_triples_on(const HyperModel& C, bool first_only = false);

// ---------------------------------------------------------------- genus 4 and 5

CensusResult census_hyper_g4(u32 p, const RunOptions& opt = {});
CensusResult census_canonical_g4_f5(const RunOptions& opt = {});

struct FamilyCheck {
    std::string name;
    u64 members = 0;
    u64 passed = 0;
    std::vector<std::string> failures;  // serialized counterexamples, first few
    Audit audit;
    bool ok() const { return members > 0 && passed == members && audit.weak_ok(); }
};

FamilyCheck verify_canonical_family_f25(const RunOptions& opt = {});

struct TrigonalReport {
    FamilyCheck split, nonsplit;
    bool reps_distinct_over_f11 = false;
    bool reps_geometrically_one = false;
    bool ok() const { return split.ok() && nonsplit.ok() && reps_distinct_over_f11 && reps_geometrically_one; }
};
TrigonalReport verify_trigonal_f11(const RunOptions& opt = {});
std::vector<TrigonalModel> trigonal_representatives();  // F1..F4 over F_11

CensusResult census_trigonal_f7(const RunOptions& opt = {});

// ---------------------------------------------------------------- chunk runner

// Runs chunks 0..n-1 on opt.jobs workers. With a checkpoint path, finished
// chunks are appended as `<family> <p> <chunk> done|survivors:k <model>...`
// and skipped on the next run; tally supplies their counts.
std::vector<KernelChunk> run_chunks(const std::string& family, u32 p, u64 n,
                                    const std::function<KernelChunk(u64)>& run,
                                    const std::function<KernelChunk(u64)>& tally, const std::string& model_tag,
                                    const Field& K, const RunOptions& opt);

}  // namespace ssp
