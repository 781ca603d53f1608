#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "eikmeans/bench.hpp"
#include "eikmeans/core.hpp"
#include "eikmeans/detector.hpp"
#include "eikmeans/partitioner.hpp"

namespace eikmeans {

/// Comma-separated numeric rows. A first line containing any non-numeric
/// cell is taken as a header. LF and CRLF line endings are accepted.
SampleMatrix parse_csv(std::istream& in, std::string_view source = "<stream>");
SampleMatrix parse_csv_file(const std::filesystem::path& path);

/// Writes every value in shortest round-trip form. An empty header list
/// writes no header line.
void write_csv(std::ostream& out, const SampleMatrix& data, const std::vector<std::string>& header = {});
void write_csv_file(const std::filesystem::path& path, const SampleMatrix& data,
                    const std::vector<std::string>& header = {});

inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const PartitionModel& model);
PartitionModel parse_model(std::string_view text);
void save_model(const std::filesystem::path& path, const PartitionModel& model);
PartitionModel load_model(const std::filesystem::path& path);

/// Single-line JSON object.
std::string report_to_json(const DriftReport& report);
/// Multi-line human-readable summary.
std::string report_to_text(const DriftReport& report);

/// Columns: dataset,repetition,n_train,n_test,alpha,k,type1_pct,type1_std,type2_pct,type2_std,seconds.
/// One row per repetition, then a "summary" row with the means and standard deviations.
void write_bench_csv(std::ostream& out, const std::string& dataset, const TrialConfig& cfg,
                     const TrialResult& result);
void write_bench_csv_file(const std::filesystem::path& path, const std::string& dataset,
                          const TrialConfig& cfg, const TrialResult& result);

}  // namespace eikmeans
