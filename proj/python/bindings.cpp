#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uscmem/config.hpp"
#include "uscmem/errors.hpp"
#include "uscmem/experiment.hpp"
#include "uscmem/protocols.hpp"
#include "uscmem/report.hpp"

namespace py = pybind11;
using namespace uscmem;

namespace {

QubitAmplitudes amplitudes(Complex alpha, Complex beta) {
  QubitAmplitudes q;
  q.alpha = alpha;
  q.beta = beta;
  q.validate();
  return q;
}

py::dict sweep_dict(const std::vector<double>& t, const std::vector<double>& omega,
                    const std::vector<double>& fidelity) {
  py::dict d;
  d["t"] = t;
  d["omega"] = omega;
  d["F_s"] = fidelity;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parity-protected quantum memory in an ultrastrongly coupled Rabi cell";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_RuntimeError);
  static py::exception<TruncationError> truncation_error(m, "TruncationError", numerical_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const TruncationError& e) {
      py::set_error(truncation_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    }
  });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double omega_cav, double omega_eg, double coupling_max, int n_fock) {
             ModelParams p{omega_cav, omega_eg, coupling_max, n_fock};
             p.validate();
             return p;
           }),
           py::arg("omega_cav") = 1.0, py::arg("omega_eg") = 0.1, py::arg("coupling_max") = 1.0,
           py::arg("n_fock") = 30)
      .def_readwrite("omega_cav", &ModelParams::omega_cav)
      .def_readwrite("omega_eg", &ModelParams::omega_eg)
      .def_readwrite("coupling_max", &ModelParams::coupling_max)
      .def_readwrite("n_fock", &ModelParams::n_fock)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(omega_cav=" + format_number(p.omega_cav) + ", omega_eg=" +
               format_number(p.omega_eg) + ", coupling_max=" + format_number(p.coupling_max) +
               ", n_fock=" + std::to_string(p.n_fock) + ")";
      });

  py::class_<CouplingSchedule>(m, "CouplingSchedule")
      .def(py::init([](double start, double end, double T) {
             CouplingSchedule s{start, end, T};
             s.validate();
             return s;
           }),
           py::arg("omega_start"), py::arg("omega_end"), py::arg("total_time"))
      .def_static("storage", &CouplingSchedule::storage, py::arg("params"), py::arg("total_time"),
                  py::arg("omega_start") = 0.0)
      .def_static("retrieval", &CouplingSchedule::retrieval, py::arg("params"),
                  py::arg("total_time"), py::arg("omega_end") = 0.0)
      .def_static("from_flux", &CouplingSchedule::from_flux, py::arg("f"), py::arg("delta_f"),
                  py::arg("omega0"), py::arg("total_time"))
      .def_readonly("omega_start", &CouplingSchedule::omega_start)
      .def_readonly("omega_end", &CouplingSchedule::omega_end)
      .def_readonly("total_time", &CouplingSchedule::total_time)
      .def("coupling_at", [](const CouplingSchedule& s, double t) { return coupling_at(s, t); });

  m.def("rabi_hamiltonian", &build_rabi, py::arg("params"), py::arg("coupling"));
  m.def("parity_operator", [](int n_fock) { return parity_op(HilbertDims(n_fock)); },
        py::arg("n_fock"));

  m.def(
      "eigendecompose",
      [](const ModelParams& p, double coupling, int k) {
        const Spectrum s = eigendecompose(build_rabi(p, coupling), k, p.dims());
        return py::make_tuple(s.energies, s.states, s.parities);
      },
      py::arg("params"), py::arg("coupling"), py::arg("k") = 2,
      "Lowest k (energies, states as columns, parities) of H(coupling).");

  m.def(
      "cat_approximant",
      [](const ModelParams& p, double coupling, const std::string& branch) {
        CatBranch b;
        if (branch == "ground") {
          b = CatBranch::Ground;
        } else if (branch == "excited") {
          b = CatBranch::Excited;
        } else {
          throw ValidationError("branch must be 'ground' or 'excited'");
        }
        return ComplexVector(cat_approximant(p, coupling, b).amplitudes);
      },
      py::arg("params"), py::arg("coupling"), py::arg("branch") = "ground");

  m.def(
      "coherent_state", [](Complex alpha, int n_fock) { return coherent_state(alpha, n_fock).amplitudes; },
      py::arg("alpha"), py::arg("n_fock"));

  m.def(
      "propagate",
      [](const ModelParams& p, const CouplingSchedule& s, const ComplexVector& psi0, int steps,
         int record_every) {
        const Trajectory tr = propagate(p, s, StateVector(p.dims(), psi0),
                                        PropagatorConfig::for_schedule(s, steps, record_every));
        ComplexMatrix states(psi0.size(), static_cast<Eigen::Index>(tr.states.size()));
        for (std::size_t i = 0; i < tr.states.size(); ++i) states.col(i) = tr.states[i].amplitudes;
        return py::make_tuple(tr.times, tr.couplings, states);
      },
      py::arg("params"), py::arg("schedule"), py::arg("psi0"), py::arg("steps") = kDefaultSweepSteps,
      py::arg("record_every") = 1, "Returns (times, couplings, states as columns).");

  m.def(
      "round_trip",
      [](const ModelParams& p, double T, Complex alpha, Complex beta, int steps, int record_every,
         double omega_start) {
        const RoundTripResult r =
            round_trip(p, amplitudes(alpha, beta), T, steps, record_every, omega_start);
        py::dict d;
        d["F_s"] = r.final_fidelity;
        d["theta_opt"] = r.theta_opt;
        d["storage"] = sweep_dict(r.storage.trajectory.times, r.storage.trajectory.couplings,
                                  r.storage.fidelity);
        d["retrieval"] = sweep_dict(r.retrieval.trajectory.times,
                                    r.retrieval.trajectory.couplings, r.retrieval.fidelity);
        return d;
      },
      py::arg("params"), py::arg("total_time") = 105.0,
      py::arg("alpha") = Complex(std::numbers::sqrt2 / 2, 0), py::arg("beta") = Complex(std::numbers::sqrt2 / 2, 0),
      py::arg("steps") = kDefaultSweepSteps, py::arg("record_every") = 10, py::arg("omega_start") = 0.0);

  m.def(
      "phase_landscape",
      [](const ModelParams& p, double T, int theta_points, int steps, int record_every) {
        const auto s = CouplingSchedule::storage(p, T);
        const PhaseLandscape l = phase_landscape(p, QubitAmplitudes{}, s,
                                                 PropagatorConfig::for_schedule(s, steps, record_every),
                                                 theta_points);
        py::dict d;
        d["omega"] = l.coupling_grid;
        d["theta"] = l.theta_grid;
        d["fidelity"] = l.fidelity;
        d["theta_opt"] = l.theta_opt;
        d["max_fidelity"] = l.max_fidelity;
        return d;
      },
      py::arg("params"), py::arg("total_time") = 105.0, py::arg("theta_points") = 64,
      py::arg("steps") = kDefaultSweepSteps, py::arg("record_every") = 10);

  m.def(
      "beam_splitter",
      [](const ComplexVector& amps, int n_fock, double transmissivity, double phase) {
        return beam_splitter(TwoModeState(n_fock, amps), transmissivity, phase).amplitudes;
      },
      py::arg("amplitudes"), py::arg("n_fock"), py::arg("transmissivity") = 0.5,
      py::arg("phase") = 0.0, "Two-mode amplitudes indexed n_a * n_fock + n_b.");

  m.def("physical_time", &physical_time, py::arg("total_time"), py::arg("f_cav_hz"));

  m.def(
      "run",
      [](const std::string& experiment, const std::map<std::string, std::string>& overrides) {
        std::vector<std::string> sets;
        for (const auto& [k, v] : overrides) sets.push_back(k + "=" + v);
        const RunConfig cfg = parse_config("", experiment, sets);
        const ResultBundle b = run_experiment(cfg.spec);
        py::dict scalars;
        for (const auto& s : b.scalars) scalars[py::str(s.name)] = s.value;
        py::dict curves;
        for (const auto& c : b.curves) {
          py::dict cols;
          for (std::size_t j = 0; j < c.columns.size(); ++j) {
            std::vector<double> col;
            for (const auto& row : c.rows) col.push_back(row[j]);
            cols[py::str(c.columns[j])] = col;
          }
          curves[py::str(c.name)] = cols;
        }
        py::dict d;
        d["experiment"] = b.experiment;
        d["spec_hash"] = b.spec_hash;
        d["summary"] = b.summary_line;
        d["scalars"] = scalars;
        d["curves"] = curves;
        return d;
      },
      py::arg("experiment"), py::arg("overrides") = std::map<std::string, std::string>{},
      "Runs a named experiment with key=value overrides; values are given as strings.");
}
