#include "noontomo/io.hpp"

#include "noontomo/errors.hpp"
#include "noontomo/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace noontomo::io {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::string& column) {
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw FormatError("malformed number '" + s + "' in column " + column);
  return value;
}

int parse_int(const std::string& s, const std::string& column) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("malformed integer '" + s + "' in column " + column);
  }
  return value;
}

void write_preamble(std::ostream& out) {
  out << "# format_version: " << kFormatVersion << '\n';
  out << std::setprecision(17);
}

}  // namespace

nlohmann::json density_to_json(const PolarizationDensityMatrix& rho) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back({rho(r, c).real(), rho(r, c).imag()});
    rows.push_back(row);
  }
  return {{"format_version", kFormatVersion}, {"basis", "symmetry-ordered"}, {"rows", rows}};
}

PolarizationDensityMatrix density_from_json(const nlohmann::json& j) {
  try {
    if (j.at("basis").get<std::string>() != "symmetry-ordered") {
      throw FormatError("density matrix basis must be \"symmetry-ordered\"");
    }
    const auto& rows = j.at("rows");
    if (!rows.is_array() || rows.size() != 4) throw FormatError("density matrix must have 4 rows");
    Matrix4c m;
    for (int r = 0; r < 4; ++r) {
      const auto& row = rows.at(r);
      if (!row.is_array() || row.size() != 4) throw FormatError("density matrix rows must have 4 entries");
      for (int c = 0; c < 4; ++c) {
        const auto& z = row.at(c);
        if (!z.is_array() || z.size() != 2) throw FormatError("matrix entries must be [re, im] pairs");
        m(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
      }
    }
    PolarizationDensityMatrix rho(m);
    const ValidationReport report = validate(rho);
    if (!report.physical()) {
      throw FormatError("density matrix fails invariants (hermiticity " + std::to_string(report.hermiticity_defect) +
                        ", trace " + std::to_string(report.trace_defect) + ", min eigenvalue " +
                        std::to_string(report.min_eigenvalue) + ")");
    }
    return rho;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("density matrix JSON: ") + e.what());
  }
}

nlohmann::json diagnostics_to_json(const MleDiagnostics& d) {
  return {{"format_version", kFormatVersion},
          {"log_likelihood", d.log_likelihood},
          {"iterations", d.iterations},
          {"gradient_norm", d.gradient_norm},
          {"converged", d.converged},
          {"settings_rank", d.settings_rank},
          {"pair_rate_hz", d.pair_rate},
          {"starts", d.starts},
          {"start_spread_trace_distance", d.start_spread},
          {"start_log_likelihoods", d.start_log_likelihoods}};
}

nlohmann::json fit_to_json(const SinusoidFit& fit, bool angles_in_degrees) {
  nlohmann::json j = {{"visibility", fit.visibility},
                      {"phase", fit.phase},
                      {"offset", fit.offset},
                      {"residual_norm", fit.residual_norm},
                      {"period_identified", fit.period_identified},
                      {"converged", fit.converged}};
  const char* key = angles_in_degrees ? "period_deg" : "period";
  if (fit.period_identified) {
    j[key] = angles_in_degrees ? rad_to_deg(fit.period) : fit.period;
  } else {
    j[key] = nullptr;
  }
  return j;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (table.header.empty()) {
      table.header = split(t);
      continue;
    }
    auto fields = split(t);
    if (fields.size() != table.header.size()) {
      throw FormatError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw FormatError("CSV file has no header row");
  return table;
}

std::optional<std::size_t> CsvTable::find_column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::column(const std::string& name) const {
  if (auto i = find_column(name)) return *i;
  throw FormatError("CSV is missing column '" + name + "'");
}

void write_counts_csv(std::ostream& out, const TomographyDataset& dataset) {
  write_preamble(out);
  const bool raw = std::any_of(dataset.records.begin(), dataset.records.end(),
                               [](const CountRecord& r) { return r.raw_counts.has_value(); });
  out << "setting_id,qwp_deg,hwp_deg,n_aa,n_ab,n_ba,n_bb,duration_s,singles1_hz,singles2_hz,window_s";
  if (raw) out << ",raw_n_aa,raw_n_ab,raw_n_ba,raw_n_bb";
  out << '\n';
  for (const auto& rec : dataset.records) {
    const auto& s = dataset.setting(rec.setting_id);
    out << rec.setting_id << ',';
    if (s.qwp_angle) out << rad_to_deg(*s.qwp_angle);
    out << ',' << rad_to_deg(s.hwp_angle);
    for (double n : rec.counts) out << ',' << n;
    out << ',' << rec.duration << ',' << rec.singles_rates[0] << ',' << rec.singles_rates[1] << ','
        << rec.window;
    if (raw) {
      const auto& r = rec.raw_counts ? *rec.raw_counts : rec.counts;
      for (double n : r) out << ',' << n;
    }
    out << '\n';
  }
}

TomographyDataset read_counts_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::array<std::string, 4> count_cols{"n_aa", "n_ab", "n_ba", "n_bb"};
  const std::size_t id_col = table.column("setting_id");
  const std::size_t qwp_col = table.column("qwp_deg");
  const std::size_t hwp_col = table.column("hwp_deg");
  std::array<std::size_t, 4> n_col{};
  std::array<std::optional<std::size_t>, 4> raw_col{};
  for (int k = 0; k < 4; ++k) {
    n_col[k] = table.column(count_cols[k]);
    raw_col[k] = table.find_column("raw_" + count_cols[k]);
  }
  const std::size_t dur_col = table.column("duration_s");
  const std::size_t s1_col = table.column("singles1_hz");
  const std::size_t s2_col = table.column("singles2_hz");
  const std::size_t win_col = table.column("window_s");

  TomographyDataset data;
  for (const auto& row : table.rows) {
    WaveplateSetting s;
    s.setting_id = parse_int(row[id_col], "setting_id");
    if (!row[qwp_col].empty()) s.qwp_angle = deg_to_rad(parse_double(row[qwp_col], "qwp_deg"));
    s.hwp_angle = deg_to_rad(parse_double(row[hwp_col], "hwp_deg"));

    bool known = false;
    for (const auto& existing : data.settings) {
      if (existing.setting_id != s.setting_id) continue;
      known = true;
      if (existing.hwp_angle != s.hwp_angle || existing.qwp_angle != s.qwp_angle) {
        throw FormatError("setting " + std::to_string(s.setting_id) + " appears with different angles");
      }
    }
    if (!known) data.settings.push_back(s);

    CountRecord rec;
    rec.setting_id = s.setting_id;
    for (int k = 0; k < 4; ++k) rec.counts[k] = parse_double(row[n_col[k]], count_cols[k]);
    if (raw_col[0] && raw_col[1] && raw_col[2] && raw_col[3]) {
      std::array<double, 4> raw{};
      for (int k = 0; k < 4; ++k) raw[k] = parse_double(row[*raw_col[k]], "raw_" + count_cols[k]);
      rec.raw_counts = raw;
    }
    rec.duration = parse_double(row[dur_col], "duration_s");
    rec.singles_rates = {parse_double(row[s1_col], "singles1_hz"), parse_double(row[s2_col], "singles2_hz")};
    rec.window = parse_double(row[win_col], "window_s");
    data.records.push_back(rec);
  }
  data.validate();
  return data;
}

void write_hom_csv(std::ostream& out, const HomCurve& curve) {
  write_preamble(out);
  out << "delay,coincidence_probability\n";
  for (std::size_t i = 0; i < curve.delays.size(); ++i) {
    out << curve.delays[i] << ',' << curve.coincidence_probabilities[i] << '\n';
  }
}

HomCurve read_hom_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::size_t d = table.column("delay");
  const std::size_t c = table.column("coincidence_probability");
  HomCurve curve;
  for (const auto& row : table.rows) {
    curve.delays.push_back(parse_double(row[d], "delay"));
    curve.coincidence_probabilities.push_back(parse_double(row[c], "coincidence_probability"));
  }
  return curve;
}

void write_fringe_csv(std::ostream& out, const FringeScan& scan) {
  write_preamble(out);
  out << "angle_deg,singles,coincidences\n";
  const double s0 = scan.singles_fit.offset > 0.0 ? scan.singles_fit.offset : 1.0;
  const double c0 = scan.coincidence_fit.offset > 0.0 ? scan.coincidence_fit.offset : 1.0;
  for (std::size_t i = 0; i < scan.angles.size(); ++i) {
    out << rad_to_deg(scan.angles[i]) << ',' << scan.singles[i] / s0 << ',' << scan.coincidences[i] / c0 << '\n';
  }
}

nlohmann::json fringe_to_json(const FringeScan& scan) {
  nlohmann::json j = {{"format_version", kFormatVersion},
                      {"normalization", "each curve divided by its fitted offset"},
                      {"singles", fit_to_json(scan.singles_fit, true)},
                      {"coincidences", fit_to_json(scan.coincidence_fit, true)},
                      {"coincidence_contrast", scan.coincidence_contrast}};
  if (scan.singles_fit.period_identified && scan.coincidence_fit.period_identified) {
    j["period_ratio"] = scan.period_ratio();
  } else {
    j["period_ratio"] = nullptr;
  }
  return j;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace noontomo::io
