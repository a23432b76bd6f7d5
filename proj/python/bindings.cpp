#include "noontomo/errors.hpp"
#include "noontomo/fixtures.hpp"
#include "noontomo/fringes.hpp"
#include "noontomo/io.hpp"
#include "noontomo/measurement.hpp"
#include "noontomo/mle.hpp"
#include "noontomo/optics.hpp"
#include "noontomo/state.hpp"
#include "noontomo/tomography.hpp"
#include "noontomo/units.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace noontomo;

namespace {

PolarizationDensityMatrix as_rho(const Matrix4c& m) { return PolarizationDensityMatrix(m); }

OverlapShape parse_shape(const std::string& s) {
  if (s == "triangular") return OverlapShape::kTriangular;
  if (s == "double_exponential" || s == "double-exponential") return OverlapShape::kDoubleExponential;
  throw FormatError("unknown overlap shape '" + s + "'");
}

py::dict fit_dict(const SinusoidFit& f) {
  py::dict d;
  d["visibility"] = f.visibility;
  d["period"] = f.period;
  d["phase"] = f.phase;
  d["offset"] = f.offset;
  d["residual_norm"] = f.residual_norm;
  d["period_identified"] = f.period_identified;
  d["converged"] = f.converged;
  return d;
}

py::dict diagnostics_dict(const MleDiagnostics& d) {
  py::dict out;
  out["log_likelihood"] = d.log_likelihood;
  out["iterations"] = d.iterations;
  out["gradient_norm"] = d.gradient_norm;
  out["converged"] = d.converged;
  out["settings_rank"] = d.settings_rank;
  out["pair_rate"] = d.pair_rate;
  out["starts"] = d.starts;
  out["start_spread"] = d.start_spread;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-photon polarization states: HOM, NOON and maximum-likelihood tomography";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidStateError>(m, "InvalidStateError", base.ptr());
  py::register_exception<UndefinedVisibilityError>(m, "UndefinedVisibilityError", base.ptr());
  py::register_exception<IncompleteSettingsError>(m, "IncompleteSettingsError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());

  // polarization states
  m.def("validate", [](const Matrix4c& rho) {
    const ValidationReport r = validate(rho);
    py::dict d;
    d["hermiticity_defect"] = r.hermiticity_defect;
    d["trace_defect"] = r.trace_defect;
    d["min_eigenvalue"] = r.min_eigenvalue;
    d["block_coherence"] = r.block_coherence;
    d["physical"] = r.physical();
    d["passed"] = r.passed();
    return d;
  }, py::arg("rho"));
  m.def("to_symmetry_basis", [](const Matrix4c& m) { return to_symmetry_basis(ProductBasisMatrix(m)).entries(); },
        py::arg("product_matrix"));
  m.def("to_product_basis", [](const Matrix4c& rho) { return to_product_basis(as_rho(rho)).entries(); },
        py::arg("rho"));
  m.def("enforce_block_structure", [](const Matrix4c& rho) { return enforce_block_structure(as_rho(rho)).entries(); },
        py::arg("rho"));
  m.def("make_distinguishable", [](const Matrix4c& rho) { return make_distinguishable(as_rho(rho)).entries(); },
        py::arg("rho"));
  m.def("populations", [](const Matrix4c& rho) {
    const Populations p = populations(as_rho(rho));
    return py::make_tuple(p.hh, p.psi_plus, p.vv, p.psi_minus);
  }, py::arg("rho"), "(p_HH, p_psi+, p_VV, p_psi-)");
  m.def("fidelity", [](const Matrix4c& rho, const Vector4c& psi) { return fidelity(as_rho(rho), PurePairState(psi)); },
        py::arg("rho"), py::arg("psi"));
  m.def("ideal_noon", [](double phi) { return ideal_noon(phi).amplitudes(); }, py::arg("phi"));
  m.def("trace_distance", [](const Matrix4c& a, const Matrix4c& b) { return trace_distance(as_rho(a), as_rho(b)); });

  // optics
  m.def("hwp", [](double theta) { return hwp(theta).entries(); }, py::arg("theta"));
  m.def("qwp", [](double theta) { return qwp(theta).entries(); }, py::arg("theta"));
  m.def("lift", [](const Matrix2c& u) { return lift(JonesMatrix(u)).entries(); }, py::arg("jones"));
  m.def("apply", [](const Matrix4c& rho, const Matrix4c& u) { return apply(as_rho(rho), TwoPhotonUnitary(u)).entries(); },
        py::arg("rho"), py::arg("unitary"));
  m.def("hv_noon_from_cavity", [] { return hv_noon_from_cavity().amplitudes(); });

  // measurement
  m.def("coincidence_probability",
        [](const Matrix4c& rho, double phi) { return coincidence_probability(as_rho(rho), {phi}); },
        py::arg("rho"), py::arg("phi") = 0.0);
  m.def("coincidence_probability_distinguishable",
        [](const Matrix4c& rho, double phi) { return coincidence_probability_distinguishable(as_rho(rho), {phi}); },
        py::arg("rho"), py::arg("phi") = 0.0);
  m.def("hom_visibility", [](const Matrix4c& rho, double phi) { return hom_visibility(as_rho(rho), {phi}); },
        py::arg("rho"), py::arg("phi") = 0.0);
  m.def("interferometric_visibility_bound",
        [](const Matrix4c& rho) { return interferometric_visibility_bound(as_rho(rho)); }, py::arg("rho"));
  m.def("apply_delay", [](const Matrix4c& rho, double tau, double width, const std::string& shape) {
    return apply_delay(as_rho(rho), tau, DelayModel(width, parse_shape(shape))).entries();
  }, py::arg("rho"), py::arg("tau"), py::arg("coherence_width"), py::arg("shape") = "triangular");
  m.def("hom_scan", [](const Matrix4c& rho, const std::vector<double>& delays, double width,
                       const std::string& shape, double phi) {
    const HomCurve c = hom_scan(as_rho(rho), delays, DelayModel(width, parse_shape(shape)), {phi});
    py::dict d;
    d["delays"] = c.delays;
    d["coincidence_probabilities"] = c.coincidence_probabilities;
    d["visibility"] = c.visibility;
    d["dip_depth"] = c.dip_depth;
    d["minimum"] = c.minimum;
    d["baseline"] = c.baseline;
    return d;
  }, py::arg("rho"), py::arg("delays"), py::arg("coherence_width") = 1.0, py::arg("shape") = "triangular",
     py::arg("phi") = 0.0);

  // tomography
  py::class_<WaveplateSetting>(m, "WaveplateSetting")
      .def(py::init([](int id, std::optional<double> qwp_deg, double hwp_deg) {
             WaveplateSetting s;
             s.setting_id = id;
             if (qwp_deg) s.qwp_angle = deg_to_rad(*qwp_deg);
             s.hwp_angle = deg_to_rad(hwp_deg);
             return s;
           }),
           py::arg("setting_id"), py::arg("qwp_deg"), py::arg("hwp_deg"))
      .def_readonly("setting_id", &WaveplateSetting::setting_id)
      .def_readonly("qwp_angle", &WaveplateSetting::qwp_angle)
      .def_readonly("hwp_angle", &WaveplateSetting::hwp_angle);

  py::class_<TomographyDataset>(m, "TomographyDataset")
      .def_readonly("settings", &TomographyDataset::settings)
      .def("counts", [](const TomographyDataset& d) {
        std::vector<std::array<double, 4>> out;
        for (const auto& r : d.records) out.push_back(r.counts);
        return out;
      })
      .def("to_csv", [](const TomographyDataset& d) {
        std::ostringstream out;
        io::write_counts_csv(out, d);
        return out.str();
      })
      .def_static("from_csv", [](const std::string& text) {
        std::istringstream in(text);
        return io::read_counts_csv(in);
      });

  m.def("measurement_operators", [](const WaveplateSetting& s) {
    const Effects e = measurement_operators(s);
    return std::vector<Matrix4c>(e.begin(), e.end());
  }, py::arg("setting"));
  m.def("default_settings", &default_settings);
  m.def("check_completeness", [](const std::vector<WaveplateSetting>& settings) {
    const CompletenessReport r = check_completeness(settings);
    return py::make_tuple(r.rank, r.passed());
  }, py::arg("settings"), "(rank, passed)");
  m.def("simulate_counts", [](const Matrix4c& rho, std::uint64_t seed, std::optional<std::vector<WaveplateSetting>> settings,
                              double singles_rate, double duration, double window, double pair_rate) {
    SimulationParams p{singles_rate, duration, window, pair_rate, seed};
    return simulate_counts(as_rho(rho), settings ? *settings : default_settings(), p);
  }, py::arg("rho"), py::arg("seed"), py::arg("settings") = py::none(), py::arg("singles_rate") = 1.0e4,
     py::arg("duration") = 60.0, py::arg("window") = 150e-9, py::arg("pair_rate") = 135.0);
  m.def("subtract_accidentals", &subtract_accidentals, py::arg("dataset"));
  m.def("mle_reconstruct", [](const TomographyDataset& data, int starts, bool subtracted, std::uint64_t seed) {
    MleOptions o;
    o.starts = starts;
    o.seed = seed;
    o.accidentals = subtracted ? AccidentalsMode::kSubtracted : AccidentalsMode::kBackground;
    MleResult r;
    {
      py::gil_scoped_release release;
      r = mle_reconstruct(data, o);
    }
    return py::make_tuple(r.rho.entries(), diagnostics_dict(r.diagnostics));
  }, py::arg("dataset"), py::arg("starts") = 1, py::arg("subtracted") = false, py::arg("seed") = 0x5eed);
  m.def("measured_fixture", [](const std::string& id) {
    if (id.size() != 1) throw FormatError("fixture id must be a single letter");
    return measured_fixture(id[0]).entries();
  }, py::arg("state_id"));
  m.def("named_state", [](const std::string& name, double phi) { return named_state(name, phi).entries(); },
        py::arg("name"), py::arg("phi") = 0.0);

  // NOON metrics and fringes
  m.def("noon_fidelity", [](const Matrix4c& rho) {
    const NoonFidelity f = noon_fidelity(as_rho(rho));
    return py::make_tuple(f.fidelity, f.phi);
  }, py::arg("rho"), "(best_fidelity, best_phi)");
  m.def("fit_sinusoid", [](const std::vector<double>& xs, const std::vector<double>& ys) {
    return fit_dict(fit_sinusoid(xs, ys));
  }, py::arg("xs"), py::arg("ys"));
  m.def("fringe_scan", [](const Matrix4c& rho, const std::vector<double>& angles, const std::string& mode) {
    if (mode != "circular" && mode != "hv") throw FormatError("mode must be 'circular' or 'hv'");
    const FringeScan s = fringe_scan(as_rho(rho), angles, mode == "hv" ? FringeMode::kHv : FringeMode::kCircular);
    py::dict d;
    d["angles"] = s.angles;
    d["singles"] = s.singles;
    d["coincidences"] = s.coincidences;
    d["singles_fit"] = fit_dict(s.singles_fit);
    d["coincidence_fit"] = fit_dict(s.coincidence_fit);
    d["coincidence_contrast"] = s.coincidence_contrast;
    return d;
  }, py::arg("rho"), py::arg("angles"), py::arg("mode") = "circular");
}
