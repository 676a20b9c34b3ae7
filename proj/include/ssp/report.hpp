#pragma once

// Report emission. Output bytes depend only on the result and the metadata.

#include <optional>
#include <string>

#include "ssp/census.hpp"

namespace ssp {

struct ReportMeta {
    std::optional<double> runtime_ms;  // null keeps reruns byte-identical
    u64 seed = 0;
};

std::string to_json(const CensusResult& r, const ReportMeta& meta);
std::string to_csv(const CensusResult& r, const ReportMeta& meta);
std::string to_json(const FamilyCheck& f, u32 p, const ReportMeta& meta);
std::string to_json(const TrigonalReport& t, const ReportMeta& meta);

// writes path.tmp, flushes it and renames it over path
void write_atomic(const std::string& path, const std::string& content);

}  // namespace ssp
