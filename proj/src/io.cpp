#include "mml/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "mml/config.hpp"

namespace mml {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return quote(std::get<std::string>(c));
}

std::string file_stem(const ExperimentConfig& cfg) {
  std::string s = cfg.name;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + p.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw Error("failed to write " + p.string());
}

}  // namespace

std::string format_csv(const Table& table, const Dataset& ds) {
  std::string out = std::string("# schema=") + kCsvSchema + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += ",backend,normalization\n";
  const std::string tail = "," + quote(ds.backend) + "," + quote(ds.normalization) + "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += tail;
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

nlohmann::ordered_json build_manifest(const Dataset& ds, const ExperimentConfig& cfg, const RunInfo& info,
                                      const std::vector<OutputFile>& files) {
  nlohmann::ordered_json m;
  m["tool"] = "mml";
  m["version"] = info.version;
  m["schema"] = kCsvSchema;
  m["scenario"] = ds.scenario;
  m["config"] = config_to_yaml(cfg);
  m["backend"] = ds.backend;
  m["normalization"] = ds.normalization;
  m["threads"] = info.threads;
  m["wall_time_seconds"] = info.wall_seconds;
  m["max_rk_local_error"] = ds.max_local_error;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : ds.metrics) {
    if (std::isfinite(v))
      metrics[k] = v;
    else
      metrics[k] = nullptr;
  }
  m["metrics"] = metrics;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& f : files) list.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  m["files"] = list;
  return m;
}

std::filesystem::path write_outputs(const Dataset& ds, const ExperimentConfig& cfg, const RunInfo& info,
                                    const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string stem = file_stem(cfg);

  std::vector<std::pair<fs::path, std::string>> docs;
  std::vector<OutputFile> files;
  for (const auto& t : ds.tables) {
    const std::string name = stem + "_" + t.name + ".csv";
    std::string body = format_csv(t, ds);
    files.push_back({name, sha256_hex(body), body.size()});
    docs.emplace_back(out_dir / name, std::move(body));
  }
  const fs::path manifest = out_dir / (stem + "_manifest.json");
  docs.emplace_back(manifest, build_manifest(ds, cfg, info, files).dump(2) + "\n");

  std::vector<fs::path> temps, placed;
  try {
    for (const auto& [path, body] : docs) {
      fs::path tmp = path;
      tmp += ".tmp";
      temps.push_back(tmp);
      write_file(tmp, body);
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
      fs::rename(temps[i], docs[i].first);
      placed.push_back(docs[i].first);
    }
  } catch (...) {
    // Roll back so that a failed run leaves no partial dataset.
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
    for (const auto& p : placed) fs::remove(p, ec);
    throw;
  }
  return manifest;
}

}  // namespace mml
