#include "eikmeans/io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "eikmeans/error.hpp"

namespace eikmeans {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_number(std::string_view cell, double& value) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string fixed2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io_error, "cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw Error(Errc::io_error, "failed writing '" + path.string() + "'");
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(Errc::parse_error, std::string("model file is missing '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::parse_error, std::string("model file field '") + key + "' has the wrong type");
  }
}

}  // namespace

SampleMatrix parse_csv(std::istream& in, std::string_view source) {
  const std::string where(source);
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool seen_first = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto cells = split(view);

    if (!seen_first) {
      seen_first = true;
      bool numeric = true;
      double tmp = 0.0;
      for (const auto cell : cells) numeric = numeric && parse_number(cell, tmp);
      width = cells.size();
      if (!numeric) continue;  // header line
    }

    if (cells.size() != width) {
      throw Error(Errc::parse_error, where + ": line " + std::to_string(line_no) + ": ragged row, expected " +
                                         std::to_string(width) + " fields, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_number(cells[c], v)) {
        throw Error(Errc::parse_error, where + ": line " + std::to_string(line_no) + ": column " + std::to_string(c + 1) +
                                           ": non-numeric value '" + std::string(cells[c]) + "'");
      }
      if (!std::isfinite(v)) {
        throw Error(Errc::parse_error, where + ": line " + std::to_string(line_no) + ": column " + std::to_string(c + 1) +
                                           ": non-finite value '" + std::string(cells[c]) + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (!seen_first) {
    throw Error(Errc::parse_error, where + ": empty file");
  }
  if (rows == 0) {
    throw Error(Errc::parse_error, where + ": no data rows after header");
  }
  return SampleMatrix::from_row_major(values, rows, width);
}

SampleMatrix parse_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_error, "cannot open '" + path.string() + "' for reading");
  }
  return parse_csv(in, path.string());
}

void write_csv(std::ostream& out, const SampleMatrix& data, const std::vector<std::string>& header) {
  if (!header.empty()) {
    if (header.size() != data.d()) {
      throw Error(Errc::invalid_argument, "CSV header width does not match the data");
    }
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
  }
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.d(); ++j) out << (j ? "," : "") << format_double(data.row(i)[j]);
    out << '\n';
  }
}

void write_csv_file(const std::filesystem::path& path, const SampleMatrix& data,
                    const std::vector<std::string>& header) {
  auto out = open_for_write(path);
  write_csv(out, data, header);
  finish_write(out, path);
}

std::string serialize_model(const PartitionModel& model) {
  json centroids = json::array();
  for (std::size_t k = 0; k < model.k(); ++k) {
    centroids.push_back(std::vector<double>(model.centroids.row(k), model.centroids.row(k) + model.d()));
  }
  json j = json::object();
  j["format"] = "eikmeans-model";
  j["format_version"] = kModelFormatVersion;
  j["k"] = model.k();
  j["dim"] = model.d();
  j["beta"] = model.beta;
  j["theta"] = model.theta;
  j["fallback"] = model.fallback;
  j["fit_seed"] = model.fit_seed;
  j["created_at"] = utc_timestamp();
  j["centroids"] = std::move(centroids);
  j["coefficients"] = model.coefficients;
  j["train_counts"] = model.train_counts;
  return j.dump(2) + "\n";
}

PartitionModel parse_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(Errc::parse_error, "model file must hold a JSON object");
  }
  const int version = field<int>(j, "format_version");
  if (version != kModelFormatVersion) {
    throw Error(Errc::unsupported_version, "unsupported model format_version " + std::to_string(version) +
                                               " (this build reads version " + std::to_string(kModelFormatVersion) + ")");
  }
  const auto k = field<std::size_t>(j, "k");
  const auto dim = field<std::size_t>(j, "dim");
  const auto rows = field<std::vector<std::vector<double>>>(j, "centroids");
  auto coefficients = field<std::vector<double>>(j, "coefficients");
  auto counts = field<std::vector<std::size_t>>(j, "train_counts");
  if (k < 1 || dim < 1 || rows.size() != k || coefficients.size() != k || counts.size() != k) {
    throw Error(Errc::parse_error, "model file arrays do not match k=" + std::to_string(k));
  }
  Matrix c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < k; ++r) {
    if (rows[r].size() != dim) {
      throw Error(Errc::parse_error, "model centroid " + std::to_string(r) + " does not have dim=" + std::to_string(dim) + " entries");
    }
    for (std::size_t col = 0; col < dim; ++col) c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = rows[r][col];
  }
  for (const double v : coefficients) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(Errc::parse_error, "model coefficients must be positive and finite");
    }
  }
  PartitionModel model{CentroidSet(std::move(c)), std::move(coefficients), std::move(counts),
                       field<std::size_t>(j, "beta"), field<double>(j, "theta"), field<bool>(j, "fallback"),
                       field<std::uint64_t>(j, "fit_seed")};
  return model;
}

void save_model(const std::filesystem::path& path, const PartitionModel& model) {
  auto out = open_for_write(path);
  out << serialize_model(model);
  finish_write(out, path);
}

PartitionModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_error, "cannot open model '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string report_to_json(const DriftReport& report) {
  json j = json::object();
  j["drift"] = report.drift;
  j["p_value"] = report.p_value;
  j["statistic"] = report.statistic;
  j["df"] = report.df;
  j["alpha"] = report.alpha;
  j["train_counts"] = report.train_counts;
  j["test_counts"] = report.test_counts;
  j["warnings"] = warning_names(report.warnings);
  return j.dump();
}

std::string report_to_text(const DriftReport& report) {
  std::ostringstream os;
  os << "drift:      " << (report.drift ? "yes" : "no") << '\n'
     << "p-value:    " << format_double(report.p_value) << '\n'
     << "statistic:  " << format_double(report.statistic) << '\n'
     << "df:         " << report.df << '\n'
     << "alpha:      " << format_double(report.alpha) << '\n'
     << "bins:       " << report.train_counts.size() << '\n';
  os << "train:      ";
  for (std::size_t k = 0; k < report.train_counts.size(); ++k) os << (k ? " " : "") << report.train_counts[k];
  os << "\ntest:       ";
  for (std::size_t k = 0; k < report.test_counts.size(); ++k) os << (k ? " " : "") << report.test_counts[k];
  os << '\n';
  const auto names = warning_names(report.warnings);
  os << "warnings:   ";
  if (names.empty()) os << "none";
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
  os << '\n';
  return os.str();
}

void write_bench_csv(std::ostream& out, const std::string& dataset, const TrialConfig& cfg,
                     const TrialResult& result) {
  out << "dataset,repetition,n_train,n_test,alpha,k,type1_pct,type1_std,type2_pct,type2_std,seconds\n";
  for (const auto& rep : result.repetitions) {
    out << dataset << ',' << rep.index << ',' << cfg.n_train << ',' << cfg.n_test << ',' << format_double(cfg.alpha)
        << ',' << rep.k << ',' << fixed2(rep.type1) << ",," << fixed2(rep.type2) << ",," << fixed2(rep.seconds)
        << '\n';
  }
  out << dataset << ",summary," << cfg.n_train << ',' << cfg.n_test << ',' << format_double(cfg.alpha) << ",,"
      << fixed2(result.type1_mean) << ',' << fixed2(result.type1_std) << ',' << fixed2(result.type2_mean) << ','
      << fixed2(result.type2_std) << ',' << fixed2(result.wall_seconds) << '\n';
}

void write_bench_csv_file(const std::filesystem::path& path, const std::string& dataset,
                          const TrialConfig& cfg, const TrialResult& result) {
  auto out = open_for_write(path);
  write_bench_csv(out, dataset, cfg, result);
  finish_write(out, path);
}

}  // namespace eikmeans
