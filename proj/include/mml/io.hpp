#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mml/experiments.hpp"

namespace mml {

inline constexpr const char* kCsvSchema = "majorana-memory/1";

/// Shortest form with 17 significant digits; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

/// One CSV document: schema line, header, rows. The dataset's backend and
/// normalization strings are appended to every row.
std::string format_csv(const Table& table, const Dataset& ds);

std::string sha256_hex(const std::string& bytes);

struct OutputFile {
  std::string path;  // file name relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunInfo {
  std::string version;
  double wall_seconds = 0.0;
  int threads = 1;
};

nlohmann::ordered_json build_manifest(const Dataset& ds, const ExperimentConfig& cfg, const RunInfo& info,
                                      const std::vector<OutputFile>& files);

/// Writes <name>_<table>.csv for every table plus <name>_manifest.json into
/// out_dir. Everything goes to temporary files first and is renamed into
/// place only after all writes succeeded. Returns the manifest path.
std::filesystem::path write_outputs(const Dataset& ds, const ExperimentConfig& cfg, const RunInfo& info,
                                    const std::filesystem::path& out_dir);

}  // namespace mml
