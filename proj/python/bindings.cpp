// Python bindings for the main operations: schedules, Hamiltonians,
// propagation, spectra, the variational loop and the annealing-time report.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vcqa/annealtime.hpp"
#include "vcqa/harness.hpp"

namespace py = pybind11;
using namespace vcqa;

namespace {

schedule::ScheduleSet schedules_from(const std::vector<double>& params,
                                     bool ramp, int per_schedule,
                                     AuxAxis axis) {
  if (ramp) return schedule::ramp_profile();
  optimize::OptimizerConfig config;
  config.params_per_schedule = per_schedule;
  return optimize::schedules_from_params(params, config, axis);
}

py::dict metrics_dict(const evolve::EvolutionMetrics& m) {
  py::dict d;
  d["final_energy"] = m.final_energy;
  d["err_pct"] = m.err_pct;
  d["fidelity"] = m.fidelity;
  d["dt_used"] = m.dt_used;
  d["refinements"] = m.refinements;
  d["norm_drift"] = m.norm_drift;
  return d;
}

py::dict report_dict(const annealtime::AnnealTimeReport& r) {
  py::dict d;
  d["t_actual"] = r.t_actual;
  d["t_predicted"] = r.t_predicted;
  d["coefficient_c"] = r.coefficient_c;
  d["denominator"] = r.denominator;
  d["boundary_term_tf"] = r.boundary_term_tf;
  d["residual"] = r.residual;
  d["reduced_form"] = r.reduced_form;
  d["t_predicted_dropped_terms"] = r.t_predicted_dropped_terms;
  return d;
}

}  // namespace

PYBIND11_MODULE(_vcqa, m) {
  m.doc() = "variational coherent quantum annealing laboratory";
  m.attr("__version__") = harness::kVersion;

  // ---- schedules ---------------------------------------------------------
  m.def("hermite_basis", &schedule::hermite_basis, py::arg("t_hat"));
  m.def(
      "monotone_slopes",
      [](const std::vector<double>& values, double spacing) {
        return schedule::monotone_slopes(values, spacing);
      },
      py::arg("values"), py::arg("spacing"));

  py::class_<schedule::Schedule>(m, "Schedule")
      .def("__call__", &schedule::Schedule::value, py::arg("x"))
      .def("value", &schedule::Schedule::value, py::arg("x"))
      .def("derivative", &schedule::Schedule::derivative, py::arg("x"))
      .def("is_zero", &schedule::Schedule::is_zero);

  m.def(
      "hermite_schedule",
      [](int role, const std::vector<double>& interior, double lo, double hi) {
        return schedule::Schedule::from_spec(
            schedule::spec_for_role(role, interior, lo, hi));
      },
      py::arg("role"), py::arg("interior"), py::arg("lo") = 0.0,
      py::arg("hi") = 1.0,
      "Monotone piecewise-cubic schedule; role 1 runs 1->0, role 2 runs "
      "0->1, role 3 is pinned to zero at both ends.");
  m.def("ramp_profile", [] {
    const auto set = schedule::ramp_profile();
    return py::make_tuple(set.f1, set.f2, set.f3);
  });
  m.def("ramp_equivalent_params", &schedule::ramp_equivalent_params,
        py::arg("per_schedule"), py::arg("with_aux"));

  // ---- operators ---------------------------------------------------------
  py::class_<PauliSum>(m, "PauliSum")
      .def(py::init([](int n_qubits,
                       const std::vector<std::pair<double, std::string>>& t) {
             std::vector<PauliTerm> terms;
             terms.reserve(t.size());
             for (const auto& [c, ops] : t) terms.push_back({c, ops});
             return PauliSum(n_qubits, std::move(terms));
           }),
           py::arg("n_qubits"), py::arg("terms"))
      .def_property_readonly("n_qubits", &PauliSum::n_qubits)
      .def_property_readonly("dim", &PauliSum::dim)
      .def_property_readonly("terms",
                             [](const PauliSum& h) {
                               std::vector<std::pair<double, std::string>> out;
                               for (const auto& t : h.terms())
                                 out.emplace_back(t.coefficient, t.ops);
                               return out;
                             })
      .def("is_diagonal", &PauliSum::is_diagonal)
      .def("diagonal", &PauliSum::diagonal)
      .def("apply", &PauliSum::apply, py::arg("psi"))
      .def("expectation", &PauliSum::expectation, py::arg("psi"))
      .def("to_dense", &PauliSum::to_dense);

  py::enum_<Connectivity>(m, "Connectivity")
      .value("linear", Connectivity::linear)
      .value("cyclic", Connectivity::cyclic)
      .value("star", Connectivity::star)
      .value("full", Connectivity::full)
      .value("heisenberg", Connectivity::heisenberg);
  py::enum_<AuxAxis>(m, "AuxAxis")
      .value("none", AuxAxis::none)
      .value("x", AuxAxis::x)
      .value("y", AuxAxis::y)
      .value("z", AuxAxis::z);

  py::class_<Edge>(m, "Edge")
      .def_readonly("i", &Edge::i)
      .def_readonly("j", &Edge::j)
      .def_readonly("g", &Edge::g);
  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def_readonly("connectivity", &ProblemInstance::connectivity)
      .def_readonly("n_qubits", &ProblemInstance::n_qubits)
      .def_readonly("omegas", &ProblemInstance::omegas)
      .def_readonly("couplings", &ProblemInstance::couplings)
      .def_readonly("seed", &ProblemInstance::seed);

  m.def(
      "generate_instances",
      [](const std::string& connectivity, int n, int count, std::uint64_t seed,
         const std::string& range, double h_omega, double h_g,
         double h_delta) {
        const auto c = connectivity_from_string(connectivity);
        std::optional<HeisenbergParams> h;
        if (c == Connectivity::heisenberg)
          h = HeisenbergParams{h_omega, h_g, h_delta};
        return harness::generate_instances(
            c, n, count, seed, harness::draw_range_from_string(range), h);
      },
      py::arg("connectivity"), py::arg("n"), py::arg("count"), py::arg("seed"),
      py::arg("range") = "half-open", py::arg("heisenberg_omega") = 1.0,
      py::arg("heisenberg_g") = 0.1, py::arg("heisenberg_delta") = 5.0);

  m.def("initial_hamiltonian", &initial_hamiltonian, py::arg("n_qubits"),
        py::arg("epsilon") = 1.0);
  m.def("minus_state", &minus_state, py::arg("n_qubits"));
  m.def("spin_glass", &spin_glass, py::arg("instance"));
  m.def("heisenberg_chain", &heisenberg_chain, py::arg("n_qubits"),
        py::arg("omega"), py::arg("g"), py::arg("delta"));
  m.def(
      "aux_hamiltonian",
      [](const ProblemInstance& inst, const std::string& axis) {
        return aux_hamiltonian(inst, aux_axis_from_string(axis));
      },
      py::arg("instance"), py::arg("axis"));
  m.def("final_hamiltonian", &final_hamiltonian, py::arg("instance"));
  m.def(
      "ground_state",
      [](const PauliSum& h) {
        const auto gs = ground_state(h);
        return py::make_tuple(gs.energy, gs.basis);
      },
      py::arg("hamiltonian"));
  m.def(
      "lowest_two",
      [](const PauliSum& h) {
        const auto [e0, e1] = spectrum::lowest_two(h);
        return py::make_tuple(e0, e1);
      },
      py::arg("hamiltonian"));

  // ---- dynamics and analysis ----------------------------------------------
  m.def(
      "anneal",
      [](const ProblemInstance& instance, double total_time, bool ramp,
         const std::vector<double>& params, const std::string& axis,
         int per_schedule, double dt, double tol, int samples) {
        const auto ax = aux_axis_from_string(axis);
        const auto schedules = schedules_from(params, ramp, per_schedule, ax);
        const auto setup = make_setup(instance, schedules, total_time,
                                      ramp ? AuxAxis::none : ax);
        evolve::IntegratorOptions opts;
        opts.dt = dt;
        opts.tolerance = tol;
        opts.n_samples = samples;
        const auto traj = evolve::propagate(setup, opts);
        const auto ground = ground_state(setup.h_final);
        const StateVector& psi = traj.states.back();
        py::dict d;
        d["final_energy"] = traj.exp_final.back();
        d["err_pct"] =
            evolve::percent_error(psi, setup.h_final, ground.energy);
        d["fidelity"] = evolve::fidelity(psi, ground.basis);
        d["ground_energy"] = ground.energy;
        d["times"] = traj.times;
        d["exp_initial"] = traj.exp_initial;
        d["exp_final"] = traj.exp_final;
        d["exp_aux"] = traj.exp_aux;
        d["norms"] = traj.norms;
        d["state"] = psi;
        return d;
      },
      py::arg("instance"), py::arg("T"), py::arg("ramp") = true,
      py::arg("params") = std::vector<double>{}, py::arg("axis") = "none",
      py::arg("params_per_schedule") = 2, py::arg("dt") = 0.0,
      py::arg("tol") = 1e-6, py::arg("samples") = 2);

  m.def(
      "vcqa_run",
      [](const ProblemInstance& instance, double total_time,
         const std::string& axis, int max_evals, int restarts,
         std::uint64_t seed, int per_schedule, double cost_dt,
         double cost_tol) {
        optimize::OptimizerConfig config;
        config.max_evals = max_evals;
        config.restarts = restarts;
        config.seed = seed ? seed : harness::mix_seed(instance.seed, 0x0f);
        config.params_per_schedule = per_schedule;
        config.integrator.dt = cost_dt;
        config.integrator.tolerance = cost_tol;
        const auto ax = aux_axis_from_string(axis);
        const auto [result, metrics] =
            optimize::vcqa_run(instance, total_time, ax, config);
        py::dict d = metrics_dict(metrics);
        d["best_params"] = result.best_params;
        d["best_cost"] = result.best_cost;
        d["eval_count"] = result.eval_count;
        d["converged"] = result.converged;
        return d;
      },
      py::arg("instance"), py::arg("T"), py::arg("axis") = "z",
      py::arg("max_evals") = 400, py::arg("restarts") = 3,
      py::arg("seed") = 0, py::arg("params_per_schedule") = 2,
      py::arg("cost_dt") = 0.0, py::arg("cost_tol") = 1e-5);

  m.def(
      "gap_profile",
      [](const ProblemInstance& instance, double total_time, bool ramp,
         const std::vector<double>& params, const std::string& axis,
         int per_schedule, int grid_points) {
        const auto ax = aux_axis_from_string(axis);
        const auto schedules = schedules_from(params, ramp, per_schedule, ax);
        const auto setup = make_setup(instance, schedules, total_time,
                                      ramp ? AuxAxis::none : ax);
        const auto grid = spectrum::uniform_grid(grid_points);
        const auto profile = spectrum::gap_profile(setup, grid);
        return py::make_tuple(profile.grid, profile.gaps);
      },
      py::arg("instance"), py::arg("T") = 1.0, py::arg("ramp") = true,
      py::arg("params") = std::vector<double>{}, py::arg("axis") = "none",
      py::arg("params_per_schedule") = 2, py::arg("grid_points") = 101);

  m.def(
      "annealing_time_report",
      [](const ProblemInstance& instance, double total_time, bool ramp,
         const std::vector<double>& params, const std::string& axis,
         int per_schedule, int samples) {
        const auto ax = aux_axis_from_string(axis);
        const auto schedules = schedules_from(params, ramp, per_schedule, ax);
        const auto setup = make_setup(instance, schedules, total_time,
                                      ramp ? AuxAxis::none : ax);
        evolve::IntegratorOptions opts;
        opts.n_samples = samples;
        opts.tolerance = 1e-7;
        opts.store_states = false;
        const auto traj = evolve::propagate(setup, opts);
        return report_dict(annealtime::annealing_time_prediction(traj, setup));
      },
      py::arg("instance"), py::arg("T"), py::arg("ramp") = true,
      py::arg("params") = std::vector<double>{}, py::arg("axis") = "none",
      py::arg("params_per_schedule") = 2, py::arg("samples") = 1001);
}
