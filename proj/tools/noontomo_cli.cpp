// noontomo: simulate, reconstruct and analyze two-photon polarization states.
//
// Exit codes: 0 success, 2 configuration/input error (including
// informationally incomplete settings), 3 reconstruction did not converge.

#include "noontomo/errors.hpp"
#include "noontomo/fixtures.hpp"
#include "noontomo/fringes.hpp"
#include "noontomo/io.hpp"
#include "noontomo/measurement.hpp"
#include "noontomo/mle.hpp"
#include "noontomo/tomography.hpp"
#include "noontomo/units.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace noontomo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;

PolarizationDensityMatrix load_state(const std::string& source, double phi) {
  if (source.ends_with(".json") || fs::is_regular_file(source)) {
    return io::density_from_json(io::read_json_file(source));
  }
  return named_state(source, phi);
}

// "start..stop/count", inclusive of both ends.
std::vector<double> parse_grid(const std::string& text) {
  const auto dots = text.find("..");
  const auto slash = text.find('/');
  if (dots == std::string::npos || slash == std::string::npos || slash < dots) {
    throw FormatError("grid must look like start..stop/count, got '" + text + "'");
  }
  double start = 0.0;
  double stop = 0.0;
  long count = 0;
  try {
    start = std::stod(text.substr(0, dots));
    stop = std::stod(text.substr(dots + 2, slash - dots - 2));
    count = std::stol(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw FormatError("grid must look like start..stop/count, got '" + text + "'");
  }
  if (count < 2) throw FormatError("grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

std::vector<WaveplateSetting> load_settings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  const io::CsvTable table = io::read_csv(in);
  const auto id = table.column("setting_id");
  const auto q = table.column("qwp_deg");
  const auto h = table.column("hwp_deg");
  std::vector<WaveplateSetting> settings;
  for (const auto& row : table.rows) {
    WaveplateSetting s;
    s.setting_id = std::stoi(row[id]);
    if (!row[q].empty()) s.qwp_angle = deg_to_rad(std::stod(row[q]));
    s.hwp_angle = deg_to_rad(std::stod(row[h]));
    settings.push_back(s);
  }
  if (settings.empty()) throw FormatError("settings file has no rows");
  return settings;
}

void emit_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    io::write_json_file(path, j);
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  return out;
}

nlohmann::json nullable(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

struct SimulateOptions {
  std::string state = "psi-plus";
  double phi = 0.0;
  std::optional<std::uint64_t> seed;
  double singles_rate = 1.0e4;
  double duration = 60.0;
  double window = 150e-9;
  std::optional<double> pair_rate;
  double accidental_fraction = 0.1;
  std::string settings_file;
  std::string out;
  std::string truth;
};

int cmd_simulate(const SimulateOptions& o) {
  if (!o.seed) throw FormatError("simulate requires --seed");
  const PolarizationDensityMatrix rho = load_state(o.state, o.phi);
  const auto settings = o.settings_file.empty() ? default_settings() : load_settings(o.settings_file);

  SimulationParams params;
  params.singles_rate = o.singles_rate;
  params.duration = o.duration;
  params.window = o.window;
  params.pair_rate = o.pair_rate ? *o.pair_rate
                                 : pair_rate_for_accidental_fraction(o.singles_rate, o.singles_rate, o.window,
                                                                     o.accidental_fraction);
  params.seed = *o.seed;

  const TomographyDataset data = simulate_counts(rho, settings, params);
  auto out = open_output(o.out);
  io::write_counts_csv(out, data);
  if (!o.truth.empty()) {
    nlohmann::json truth = io::density_to_json(rho);
    truth["pair_rate_hz"] = params.pair_rate;
    truth["seed"] = params.seed;
    truth["state"] = o.state;
    io::write_json_file(o.truth, truth);
  }
  return kExitOk;
}

struct ReconstructOptions {
  std::string counts;
  std::string out;
  std::string diagnostics;
  int starts = 8;
  int max_iterations = 500;
  std::uint64_t seed = 0x5eed;
  std::string accidentals = "background";
};

int cmd_reconstruct(const ReconstructOptions& o) {
  std::ifstream in(o.counts);
  if (!in) throw FormatError("cannot open " + o.counts);
  TomographyDataset data = io::read_counts_csv(in);

  MleOptions options;
  options.starts = o.starts;
  options.max_iterations = o.max_iterations;
  options.seed = o.seed;
  if (o.accidentals == "subtract") {
    data = subtract_accidentals(data);
    options.accidentals = AccidentalsMode::kSubtracted;
  }

  const MleResult result = mle_reconstruct(data, options);
  emit_json(o.out, io::density_to_json(result.rho));
  if (!o.diagnostics.empty()) emit_json(o.diagnostics, io::diagnostics_to_json(result.diagnostics));
  if (!result.diagnostics.converged) {
    std::cerr << "reconstruct: optimizer did not converge (gradient norm " << result.diagnostics.gradient_norm
              << ")\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

struct HomOptions {
  std::string state = "psi-plus";
  double phi = 0.0;
  double analyzer_phi = 0.0;
  double width = 1.0;
  std::string shape = "triangular";
  std::string delays = "-2..2/81";
  std::string out;
  std::string summary;
};

int cmd_hom_scan(const HomOptions& o) {
  const PolarizationDensityMatrix rho = enforce_block_structure(load_state(o.state, o.phi));
  const DelayModel model(o.width, o.shape == "double-exponential" ? OverlapShape::kDoubleExponential
                                                                  : OverlapShape::kTriangular);
  const auto delays = parse_grid(o.delays);
  const HomCurve curve = hom_scan(rho, delays, model, {o.analyzer_phi});
  auto out = open_output(o.out);
  io::write_hom_csv(out, curve);
  emit_json(o.summary, {{"format_version", io::kFormatVersion},
                        {"visibility", curve.visibility},
                        {"dip_depth", curve.dip_depth},
                        {"minimum", curve.minimum},
                        {"baseline", curve.baseline}});
  return kExitOk;
}

struct FringeOptions {
  std::string state;
  double phi = 0.0;
  std::string angles = "0..180/64";
  std::string mode = "circular";
  std::string out;
  std::string fit_out;
};

int cmd_fringe(const FringeOptions& o) {
  const PolarizationDensityMatrix rho = load_state(o.state, o.phi);
  std::vector<double> angles = parse_grid(o.angles);
  for (double& a : angles) a = deg_to_rad(a);
  const FringeScan scan = fringe_scan(rho, angles, o.mode == "hv" ? FringeMode::kHv : FringeMode::kCircular);
  if (!o.out.empty()) {
    auto out = open_output(o.out);
    io::write_fringe_csv(out, scan);
  }
  emit_json(o.fit_out, io::fringe_to_json(scan));
  return kExitOk;
}

struct MetricsOptions {
  std::string state;
  double phi = 0.0;
  double analyzer_phi = 0.0;
  std::string out;
};

int cmd_metrics(const MetricsOptions& o) {
  const PolarizationDensityMatrix rho = load_state(o.state, o.phi);
  const AnalyzerSetting analyzer{o.analyzer_phi};
  const Populations p = populations(rho);
  const ValidationReport report = validate(rho);

  std::optional<double> v_hom;
  std::optional<double> v_depth;
  std::string v_hom_note;
  try {
    v_hom = hom_visibility(rho, analyzer);
    v_depth = hom_dip_depth(rho, analyzer);
  } catch (const UndefinedVisibilityError& e) {
    v_hom_note = e.what();
  }
  const NoonFidelity noon = noon_fidelity(rho);

  nlohmann::json j = {
      {"format_version", io::kFormatVersion},
      {"populations", {{"hh", p.hh}, {"psi_plus", p.psi_plus}, {"vv", p.vv}, {"psi_minus", p.psi_minus}}},
      {"block_structured", report.block_structured()},
      {"analyzer_phi", o.analyzer_phi},
      {"coincidence_probability", coincidence_probability(rho, analyzer)},
      {"coincidence_probability_distinguishable", coincidence_probability_distinguishable(rho, analyzer)},
      {"v_hom", nullable(v_hom)},
      {"v_hom_dip_depth", nullable(v_depth)},
      {"v_int_bound", interferometric_visibility_bound(rho)},
      {"noon_fidelity", noon.fidelity},
      {"noon_phi", noon.phi}};
  if (!v_hom_note.empty()) j["v_hom_note"] = v_hom_note;
  emit_json(o.out, j);
  return kExitOk;
}

int cmd_fixtures(const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (const auto& name : named_state_names()) {
    if (name == "noon") continue;
    io::write_json_file(fs::path(out_dir) / (name + ".json"), io::density_to_json(named_state(name)));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon polarization tomography, HOM and NOON-state analysis"};
  app.require_subcommand(1);
  std::string format_version = io::kFormatVersion;
  app.add_option("--format-version", format_version, "Artifact format version")->capture_default_str();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate tomography coincidence counts");
  simulate->add_option("--state", sim.state, "Named state or density-matrix JSON")->capture_default_str();
  simulate->add_option("--phi", sim.phi, "NOON phase in radians (state 'noon')");
  simulate->add_option("--seed", sim.seed, "Random seed")->required();
  simulate->add_option("--singles-rate", sim.singles_rate, "Singles rate per detector side [1/s]")
      ->capture_default_str();
  simulate->add_option("--duration", sim.duration, "Acquisition time per setting [s]")->capture_default_str();
  simulate->add_option("--window", sim.window, "Coincidence window [s]")->capture_default_str();
  simulate->add_option("--pair-rate", sim.pair_rate, "Pair rate [1/s]; overrides --accidental-fraction");
  simulate->add_option("--accidental-fraction", sim.accidental_fraction,
                       "Accidentals share of out-of-dip coincidences")
      ->capture_default_str();
  simulate->add_option("--settings", sim.settings_file, "CSV with setting_id,qwp_deg,hwp_deg");
  simulate->add_option("--out", sim.out, "Counts CSV")->required();
  simulate->add_option("--truth", sim.truth, "Ground-truth density-matrix JSON");

  ReconstructOptions rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "Maximum-likelihood reconstruction from counts");
  reconstruct->add_option("counts", rec.counts, "Counts CSV")->required();
  reconstruct->add_option("--out", rec.out, "Density-matrix JSON (default stdout)");
  reconstruct->add_option("--diagnostics", rec.diagnostics, "Diagnostics JSON");
  reconstruct->add_option("--starts", rec.starts, "Optimizer starts")->capture_default_str();
  reconstruct->add_option("--max-iterations", rec.max_iterations)->capture_default_str();
  reconstruct->add_option("--seed", rec.seed, "Seed for random starts")->capture_default_str();
  reconstruct->add_option("--accidentals", rec.accidentals, "background or subtract")
      ->check(CLI::IsMember({"background", "subtract"}))
      ->capture_default_str();

  HomOptions hom;
  auto* hom_cmd = app.add_subcommand("hom-scan", "Coincidence probability versus delay");
  hom_cmd->add_option("state", hom.state, "Named state or density-matrix JSON")->capture_default_str();
  hom_cmd->add_option("--phi", hom.phi, "NOON phase in radians (state 'noon')");
  hom_cmd->add_option("--analyzer-phi", hom.analyzer_phi, "Analyzer phase in radians")->capture_default_str();
  hom_cmd->add_option("--width", hom.width, "Coherence width (delay units)")->capture_default_str();
  hom_cmd->add_option("--shape", hom.shape, "triangular or double-exponential")
      ->check(CLI::IsMember({"triangular", "double-exponential"}))
      ->capture_default_str();
  hom_cmd->add_option("--delays", hom.delays, "start..stop/count")->capture_default_str();
  hom_cmd->add_option("--out", hom.out, "HOM curve CSV")->required();
  hom_cmd->add_option("--summary", hom.summary, "Summary JSON (default stdout)");

  FringeOptions fr;
  auto* fringe = app.add_subcommand("fringe", "Half-wave-plate fringe scan");
  fringe->add_option("state", fr.state, "Named state or density-matrix JSON")->required();
  fringe->add_option("--phi", fr.phi, "NOON phase in radians (state 'noon')");
  fringe->add_option("--angles", fr.angles, "HWP angles in degrees, start..stop/count")->capture_default_str();
  fringe->add_option("--mode", fr.mode, "circular or hv")
      ->check(CLI::IsMember({"circular", "hv"}))
      ->capture_default_str();
  fringe->add_option("--out", fr.out, "Fringe CSV");
  fringe->add_option("--fit-out", fr.fit_out, "Fit sidecar JSON (default stdout)");

  MetricsOptions met;
  auto* metrics = app.add_subcommand("metrics", "Figures of merit for a density matrix");
  metrics->add_option("state", met.state, "Named state or density-matrix JSON")->required();
  metrics->add_option("--phi", met.phi, "NOON phase in radians (state 'noon')");
  metrics->add_option("--analyzer-phi", met.analyzer_phi, "Analyzer phase in radians")->capture_default_str();
  metrics->add_option("--out", met.out, "Report JSON (default stdout)");

  std::string fixtures_dir = ".";
  auto* fixtures = app.add_subcommand("fixtures", "Write the built-in states as density-matrix JSON");
  fixtures->add_option("--out-dir", fixtures_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (format_version != io::kFormatVersion) {
      throw FormatError("unsupported format version '" + format_version + "' (supported: " +
                        io::kFormatVersion + ")");
    }
    if (*simulate) return cmd_simulate(sim);
    if (*reconstruct) return cmd_reconstruct(rec);
    if (*hom_cmd) return cmd_hom_scan(hom);
    if (*fringe) return cmd_fringe(fr);
    if (*metrics) return cmd_metrics(met);
    if (*fixtures) return cmd_fixtures(fixtures_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
