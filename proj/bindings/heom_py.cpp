#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heom/bath.hpp"
#include "heom/config.hpp"
#include "heom/hierarchy.hpp"
#include "heom/liouvillian.hpp"
#include "heom/observables.hpp"
#include "heom/oracles.hpp"
#include "heom/runner.hpp"
#include "heom/solvers.hpp"

namespace py = pybind11;
using namespace heom;

namespace {

// Python-side handle; pybind11 holders cannot wrap shared_ptr<const T>.
struct PySpace {
  std::shared_ptr<const HierarchySpace> ptr;
};

PySpace enumerate_space(const std::vector<BathSpec>& baths, int m_max,
                        int n_max, double i_th) {
  return {HierarchySpace::enumerate(ExponentTable::build(baths),
                                    {m_max, n_max, i_th})};
}

}  // namespace

PYBIND11_MODULE(_heomkit, m) {
  m.doc() = "Hierarchical-equations-of-motion engine (C++ core)";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_RuntimeError);
  py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_KeyError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<BathFlavor>(m, "BathFlavor")
      .value("FERMIONIC", BathFlavor::Fermionic)
      .value("BOSONIC", BathFlavor::Bosonic);
  py::enum_<Parity>(m, "Parity")
      .value("EVEN", Parity::Even)
      .value("ODD", Parity::Odd);

  py::class_<BathSpec>(m, "BathSpec")
      .def_static(
          "lorentzian_fermion",
          [](const DenseMatrix& op, double Gamma, double W, double mu, double kT,
             int N, const std::string& dec, const std::string& bath_id,
             const std::string& channel) {
            return BathSpec::lorentzian_fermion(
                op, Gamma, W, mu, kT, N,
                dec == "matsubara" ? Decomposition::Matsubara : Decomposition::Pade,
                bath_id, channel);
          },
          py::arg("coupling_op"), py::arg("Gamma"), py::arg("W"), py::arg("mu"),
          py::arg("kT"), py::arg("N"), py::arg("decomposition") = "pade",
          py::arg("bath_id") = "", py::arg("channel") = "")
      .def_static(
          "drude_lorentz_boson",
          [](const DenseMatrix& op, double Delta, double W, double kT, int N,
             const std::string& dec, const std::string& bath_id,
             const std::string& channel) {
            return BathSpec::drude_lorentz_boson(
                op, Delta, W, kT, N,
                dec == "matsubara" ? Decomposition::Matsubara : Decomposition::Pade,
                bath_id, channel);
          },
          py::arg("coupling_op"), py::arg("Delta"), py::arg("W"), py::arg("kT"),
          py::arg("N"), py::arg("decomposition") = "pade",
          py::arg("bath_id") = "", py::arg("channel") = "")
      .def("correlation",
           [](const BathSpec& b, double tau, py::object nu) {
             if (nu.is_none()) return b.correlation(tau);
             return b.correlation(tau, nu.cast<int>());
           },
           py::arg("tau"), py::arg("nu") = py::none())
      .def_property_readonly("flavor", &BathSpec::flavor)
      .def_property_readonly("coupling_op", &BathSpec::coupling_op)
      .def_property_readonly("bath_id", &BathSpec::bath_id)
      .def_property_readonly("family_size", &BathSpec::family_size);

  py::class_<AdoIndex>(m, "AdoIndex")
      .def_readonly("m", &AdoIndex::m)
      .def_readonly("n", &AdoIndex::n)
      .def_readonly("j", &AdoIndex::j)
      .def_readonly("q", &AdoIndex::q)
      .def_readonly("flat", &AdoIndex::flat);

  py::class_<PySpace>(m, "HierarchySpace")
      .def_property_readonly("size", [](const PySpace& s) { return s.ptr->size(); })
      .def_property_readonly("K_f", [](const PySpace& s) { return s.ptr->K_f(); })
      .def_property_readonly("K_b", [](const PySpace& s) { return s.ptr->K_b(); })
      .def("ado_at",
           [](const PySpace& s, std::size_t flat) { return s.ptr->ado_at(flat); })
      .def("index_of",
           [](const PySpace& s, const std::vector<int>& j,
              const std::vector<int>& q) { return s.ptr->index_of(j, q); },
           py::arg("j"), py::arg("q"))
      .def("importance", [](const PySpace& s, const AdoIndex& a) {
        return importance(a, s.ptr->exponents());
      });

  m.def("enumerate_space", &enumerate_space, py::arg("baths"), py::arg("m_max"),
        py::arg("n_max"), py::arg("importance_threshold") = 0.0);
  m.def(
      "count_ados",
      [](const std::vector<BathSpec>& baths, int m_max, int n_max, double i_th) {
        return HierarchySpace::count(ExponentTable::build(baths),
                                     {m_max, n_max, i_th});
      },
      py::arg("baths"), py::arg("m_max"), py::arg("n_max"),
      py::arg("importance_threshold") = 0.0);

  py::class_<SystemSpec>(m, "SystemSpec")
      .def_static("constant", &SystemSpec::constant)
      .def_property_readonly("dim", &SystemSpec::dim);

  py::class_<HeomMatrix>(m, "HeomMatrix")
      .def_property_readonly("dim", &HeomMatrix::dim)
      .def_property_readonly("parity", &HeomMatrix::parity)
      .def_property_readonly("nnz",
                             [](const HeomMatrix& M) { return M.matrix().nonZeros(); })
      .def("apply", &HeomMatrix::apply, py::arg("x"), py::arg("t") = 0.0)
      .def("add_lindblad", &HeomMatrix::add_lindblad)
      .def("export_coo", &HeomMatrix::export_coo);

  m.def(
      "build_heomls",
      [](const SystemSpec& sys, const std::vector<BathSpec>& baths,
         const PySpace& space, Parity parity, int threads) {
        return build_heomls(sys, baths, space.ptr, parity, threads);
      },
      py::arg("system"), py::arg("baths"), py::arg("space"),
      py::arg("parity") = Parity::Even, py::arg("threads") = 1);

  py::class_<AdosVector>(m, "AdosVector")
      .def_static(
          "from_reduced",
          [](const DenseMatrix& rho0, const PySpace& space, Parity parity) {
            return AdosVector::from_reduced(rho0, space.ptr, parity);
          },
          py::arg("rho0"), py::arg("space"), py::arg("parity") = Parity::Even)
      .def_property_readonly("data", [](const AdosVector& v) { return v.data; })
      .def("block", &AdosVector::block)
      .def("root", &AdosVector::root);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("method", &SolveReport::method)
      .def_readonly("steps", &SolveReport::steps)
      .def_readonly("residual", &SolveReport::residual)
      .def_readonly("wall_seconds", &SolveReport::wall_seconds);

  m.def(
      "steadystate",
      [](const HeomMatrix& M, const std::string& method) {
        LinearOptions lin;
        if (method == "gmres") lin.method = LinearOptions::Method::Gmres;
        SolveReport rep;
        AdosVector out = steadystate(M, lin, &rep);
        return py::make_tuple(out, rep);
      },
      py::arg("M"), py::arg("method") = "lu");
  m.def(
      "evolve_ode",
      [](const HeomMatrix& M, const AdosVector& x0, const std::vector<double>& t,
         double rtol, double atol) {
        OdeOptions opt;
        opt.rtol = rtol;
        opt.atol = atol;
        return evolve_ode(M, x0, t, opt);
      },
      py::arg("M"), py::arg("x0"), py::arg("t_list"), py::arg("rtol") = 1e-8,
      py::arg("atol") = 1e-10);
  m.def("evolve_expm",
        [](const HeomMatrix& M, const AdosVector& x0,
           const std::vector<double>& t) { return evolve_expm(M, x0, t); });
  m.def(
      "shifted_solve",
      [](const HeomMatrix& M, double omega, int sign, const Vector& b) {
        return shifted_solve(M, omega, sign, b);
      },
      py::arg("M"), py::arg("omega"), py::arg("sign"), py::arg("b"));

  m.def("reduced_density", &reduced_density);
  m.def("expectation", &expectation);
  m.def(
      "dos",
      [](const HeomMatrix& M_odd, const AdosVector& ss, const DenseMatrix& d_op,
         const std::vector<double>& grid, int threads) {
        SpectrumOptions opt;
        opt.threads = threads;
        const SpectrumResult r = dos(M_odd, ss, d_op, grid, opt);
        return py::make_tuple(r.omega, r.value);
      },
      py::arg("M_odd"), py::arg("steady"), py::arg("d_op"), py::arg("omega_grid"),
      py::arg("threads") = 1);
  m.def(
      "psd",
      [](const HeomMatrix& M_even, const AdosVector& ss, const DenseMatrix& a_op,
         const std::vector<double>& grid, int threads) {
        SpectrumOptions opt;
        opt.threads = threads;
        const SpectrumResult r = psd(M_even, ss, a_op, grid, opt);
        return py::make_tuple(r.omega, r.value);
      },
      py::arg("M_even"), py::arg("steady"), py::arg("a_op"), py::arg("omega_grid"),
      py::arg("threads") = 1);
  m.def(
      "current",
      [](const AdosVector& ss, const std::string& bath_id) {
        return current(ss, bath_id).value;
      },
      py::arg("steady"), py::arg("bath_id"));
  m.def("conductance", &conductance, py::arg("phi_grid"), py::arg("currents"));

  m.def(
      "run_config",
      [](const std::string& text, const std::string& out_dir, int threads,
         bool count_only) {
        const RunConfig cfg = parse_config(text);
        RunOptions opt;
        opt.out_dir = out_dir;
        opt.threads = threads;
        opt.count_only = count_only;
        run(cfg, opt);
      },
      py::arg("config_json"), py::arg("out_dir") = "", py::arg("threads") = 0,
      py::arg("count_only") = false);
  m.def("describe_ado", [](const std::string& text, const std::string& selector) {
    return describe_ado(parse_config(text), selector);
  });
  m.def("run_oracle", [](const std::string& name) {
    const auto r = oracles::run_suite(name);
    return py::make_tuple(r.pass, r.detail);
  });
}
