#pragma once

// File formats.
//
// Density matrix JSON:
//   {"format_version": "1.0", "basis": "symmetry-ordered",
//    "rows": [[[re, im], x4], x4]}
// Readers reject anything that is not a physical density matrix.
//
// CSV files start with a "# format_version: 1.0" comment line followed by a
// mandatory header row. Readers skip '#' lines and locate columns by name.
//   counts:  setting_id,qwp_deg,hwp_deg,n_aa,n_ab,n_ba,n_bb,duration_s,
//            singles1_hz,singles2_hz,window_s  (empty qwp_deg = QWP removed;
//            optional raw_n_aa..raw_n_bb after accidental subtraction)
//   HOM:     delay,coincidence_probability
//   fringe:  angle_deg,singles,coincidences  (each normalized to its fitted offset)

#include "noontomo/fringes.hpp"
#include "noontomo/measurement.hpp"
#include "noontomo/mle.hpp"
#include "noontomo/state.hpp"
#include "noontomo/tomography.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace noontomo::io {

inline constexpr const char* kFormatVersion = "1.0";

nlohmann::json density_to_json(const PolarizationDensityMatrix& rho);
/// Throws FormatError on schema violations or unphysical matrices.
PolarizationDensityMatrix density_from_json(const nlohmann::json& j);

nlohmann::json diagnostics_to_json(const MleDiagnostics& d);
nlohmann::json fit_to_json(const SinusoidFit& fit, bool angles_in_degrees);

void write_counts_csv(std::ostream& out, const TomographyDataset& dataset);
/// Throws FormatError on a missing column or malformed value; the result is
/// passed through TomographyDataset::validate().
TomographyDataset read_counts_csv(std::istream& in);

void write_hom_csv(std::ostream& out, const HomCurve& curve);
/// Delays and probabilities only; summary fields are left at zero.
HomCurve read_hom_csv(std::istream& in);

void write_fringe_csv(std::ostream& out, const FringeScan& scan);
/// Fit parameters for both curves plus the raw coincidence contrast.
nlohmann::json fringe_to_json(const FringeScan& scan);

/// Rows of a simple numeric CSV keyed by header name, used by the readers above.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Throws FormatError if the column is missing.
  std::size_t column(const std::string& name) const;
  std::optional<std::size_t> find_column(const std::string& name) const;
};
CsvTable read_csv(std::istream& in);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace noontomo::io
