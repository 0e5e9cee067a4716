#include "heom/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "heom/observables.hpp"
#include "heom/solvers.hpp"

namespace heom {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

cx entry_to_cx(const json& e) {
  if (e.is_number()) return cx(e.get<double>(), 0.0);
  return cx(e[0].get<double>(), e[1].get<double>());
}

DenseMatrix parse_matrix(const json& j) {
  const int n = static_cast<int>(j.size());
  DenseMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = entry_to_cx(j[r][c]);
  return m;
}

DenseMatrix lowering(int dim) {
  DenseMatrix a = DenseMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

void add_op(std::map<std::string, DenseMatrix>& ops, const std::string& name,
            DenseMatrix m) {
  if (ops.count(name))
    throw ConfigError("config error at /system/operators: name '" + name +
                      "' collides with a built-in operator");
  ops.emplace(name, std::move(m));
}

cx bose_distribution(double w, double kT) { return 1.0 / std::expm1(w / kT); }

}  // namespace

Model build_model(const RunConfig& config, double phi) {
  const json& j = config.json();
  const json& sys = j.at("system");
  const std::string type = sys.at("type").get<std::string>();

  Model model;
  auto& ops = model.ops;

  if (type == "fermion_level") {
    const double eps = sys.at("epsilon").get<double>();
    const double u = sys.at("u").get<double>();
    const bool spin = sys.at("spin").get<bool>();
    if (spin) {
      DenseMatrix sm = lowering(2);
      DenseMatrix sz = DenseMatrix::Identity(2, 2);
      sz(1, 1) = -1;
      const DenseMatrix i2 = DenseMatrix::Identity(2, 2);
      const DenseMatrix d_up = kron(sm, i2);
      const DenseMatrix d_dn = kron(sz, sm);  // Jordan-Wigner phase
      const DenseMatrix n_up = d_up.adjoint() * d_up;
      const DenseMatrix n_dn = d_dn.adjoint() * d_dn;
      model.system = SystemSpec::constant(eps * (n_up + n_dn) + u * n_up * n_dn);
      add_op(ops, "d_up", d_up);
      add_op(ops, "d_dn", d_dn);
      add_op(ops, "n_up", n_up);
      add_op(ops, "n_dn", n_dn);
      add_op(ops, "n", n_up + n_dn);
      add_op(ops, "I", DenseMatrix::Identity(4, 4));
    } else {
      if (u != 0.0)
        throw ConfigError("config error at /system/u: requires 'spin': true");
      const DenseMatrix d = lowering(2);
      const DenseMatrix n = d.adjoint() * d;
      model.system = SystemSpec::constant(eps * n);
      add_op(ops, "d", d);
      add_op(ops, "n", n);
      add_op(ops, "I", DenseMatrix::Identity(2, 2));
    }
  } else if (type == "boson_mode") {
    const double w = sys.at("omega").get<double>();
    const int nf = sys.at("n_fock").get<int>();
    const DenseMatrix a = lowering(nf);
    const DenseMatrix n = a.adjoint() * a;
    model.system = SystemSpec::constant(w * n);
    add_op(ops, "a", a);
    add_op(ops, "x", a + DenseMatrix(a.adjoint()));
    add_op(ops, "n", n);
    add_op(ops, "I", DenseMatrix::Identity(nf, nf));
  } else if (type == "charge_cavity") {
    const double eps = sys.at("epsilon").get<double>();
    const double wc = sys.at("omega_c").get<double>();
    const double g = sys.at("g").get<double>();
    const int np = sys.at("n_photon").get<int>();
    const DenseMatrix i2 = DenseMatrix::Identity(2, 2);
    const DenseMatrix in = DenseMatrix::Identity(np, np);
    const DenseMatrix d = kron(lowering(2), in);
    const DenseMatrix a = kron(i2, lowering(np));
    const DenseMatrix nd = d.adjoint() * d;
    const DenseMatrix na = a.adjoint() * a;
    const DenseMatrix x = a + DenseMatrix(a.adjoint());
    model.system = SystemSpec::constant(eps * nd + wc * na + g * nd * x);
    add_op(ops, "d", d);
    add_op(ops, "a", a);
    add_op(ops, "x", x);
    add_op(ops, "n_d", nd);
    add_op(ops, "n_a", na);
    add_op(ops, "I", kron(i2, in));
  } else {  // matrix
    model.system = SystemSpec::constant(parse_matrix(sys.at("h")));
    add_op(ops, "I",
           DenseMatrix::Identity(model.system.dim(), model.system.dim()));
  }

  for (const auto& [name, mat] : sys.at("operators").items()) {
    DenseMatrix m = parse_matrix(mat);
    if (m.rows() != model.system.dim())
      throw ConfigError("config error at /system/operators/" + name +
                        ": dimension does not match the system");
    add_op(ops, name, std::move(m));
  }

  const auto resolve_op = [&](const json& spec, const std::string& path) {
    if (spec.is_string()) {
      const auto it = ops.find(spec.get<std::string>());
      if (it == ops.end())
        throw ConfigError("config error at " + path + ": unknown operator '" +
                          spec.get<std::string>() + "'");
      return it->second;
    }
    DenseMatrix m = parse_matrix(spec);
    if (m.rows() != model.system.dim())
      throw ConfigError("config error at " + path + ": dimension mismatch");
    return m;
  };

  for (std::size_t b = 0; b < j.at("baths").size(); ++b) {
    const json& bath = j.at("baths")[b];
    const std::string path = "/baths/" + std::to_string(b);
    const std::string id = bath.at("id").get<std::string>();
    const bool fermionic = bath.at("flavor").get<std::string>() == "fermionic";

    if (bath.contains("exponents")) {
      const json& exps = bath.at("exponents");
      const DenseMatrix op = resolve_op(bath.at("coupling"), path + "/coupling");
      const std::string channel =
          bath.at("coupling").is_string() ? bath.at("coupling").get<std::string>() : "";
      if (fermionic) {
        std::vector<FermionicExponent> plus, minus;
        for (const auto& e : exps.at("plus"))
          plus.push_back({entry_to_cx(e.at("eta")), entry_to_cx(e.at("gamma")), +1});
        for (const auto& e : exps.at("minus"))
          minus.push_back({entry_to_cx(e.at("eta")), entry_to_cx(e.at("gamma")), -1});
        model.baths.push_back(BathSpec::fermionic(op, plus, minus, id, channel));
      } else {
        std::vector<BosonicExponent> terms;
        for (const auto& e : exps.at("terms")) {
          const std::string part = e.at("part").get<std::string>();
          terms.push_back({entry_to_cx(e.at("xi")), entry_to_cx(e.at("chi")),
                           part == "real"   ? BosonPart::Real
                           : part == "imag" ? BosonPart::Imag
                                            : BosonPart::Combined});
        }
        model.baths.push_back(BathSpec::bosonic(op, terms, id, channel));
      }
      continue;
    }

    const double width = bath.at("width").get<double>();
    const double kT = bath.at("kT").get<double>();
    if (bath.at("markovian").get<bool>()) {
      // Born-Markov replacement: jumps sqrt(J(wc)(n+1)) op, sqrt(J(wc) n) op'.
      const double delta = bath.at("delta").get<double>();
      const double wc = bath.at("omega_c").get<double>();
      const double jwc = 4.0 * delta * width * wc / (wc * wc + width * width);
      const double nbar = bose_distribution(wc, kT).real();
      const DenseMatrix op = resolve_op(bath.at("coupling"), path + "/coupling");
      model.jumps.push_back(std::sqrt(jwc * (nbar + 1.0)) * op);
      model.jumps.push_back(std::sqrt(jwc * nbar) * DenseMatrix(op.adjoint()));
      continue;
    }

    const Decomposition dec =
        bath.at("decomposition").get<std::string>() == "pade"
            ? Decomposition::Pade
            : Decomposition::Matsubara;
    const int n_exp = bath.at("n_exp").get<int>();
    if (fermionic) {
      double mu = 0.0;
      const json& mu_spec = bath.at("mu");
      if (mu_spec.is_string())
        mu = (mu_spec.get<std::string>() == "+phi/2" ? +0.5 : -0.5) * phi;
      else
        mu = mu_spec.get<double>();
      const double gamma = bath.at("gamma").get<double>();
      std::vector<std::pair<DenseMatrix, std::string>> channels;
      const json& cpl = bath.at("coupling");
      if (cpl.is_array() && !cpl.empty() && cpl[0].is_string()) {
        for (const auto& name : cpl)
          channels.emplace_back(resolve_op(name, path + "/coupling"),
                                name.get<std::string>());
      } else {
        channels.emplace_back(resolve_op(cpl, path + "/coupling"),
                              cpl.is_string() ? cpl.get<std::string>() : "");
      }
      for (auto& [op, channel] : channels)
        model.baths.push_back(BathSpec::lorentzian_fermion(
            op, gamma, width, mu, kT, n_exp, dec, id, channel));
    } else {
      const double delta = bath.at("delta").get<double>();
      const DenseMatrix op = resolve_op(bath.at("coupling"), path + "/coupling");
      const std::string channel =
          bath.at("coupling").is_string() ? bath.at("coupling").get<std::string>() : "";
      model.baths.push_back(BathSpec::drude_lorentz_boson(
          op, delta, width, kT, n_exp, dec, id, channel));
    }
  }

  for (const auto& lb : j.at("lindblad")) {
    const DenseMatrix op = resolve_op(lb.at("operator"), "/lindblad/operator");
    model.jumps.push_back(std::sqrt(lb.at("rate").get<double>()) * op);
  }
  return model;
}

std::shared_ptr<const HierarchySpace> enumerate_model(const RunConfig& config,
                                                      const Model& model) {
  const json& tr = config.json().at("truncation");
  HierarchySpace::Options opt;
  opt.m_max = tr.at("m_max").get<int>();
  opt.n_max = tr.at("n_max").get<int>();
  opt.importance_threshold = tr.at("importance_threshold").get<double>();
  ExponentTable table = ExponentTable::build(model.baths);
  if (table.sys_dim == 0) table.sys_dim = model.system.dim();
  return HierarchySpace::enumerate(std::move(table), opt);
}

int resolve_threads(const RunConfig& config, int override_threads) {
  if (override_threads > 0) return override_threads;
  const int cfg = config.json().at("threads").get<int>();
  if (cfg > 0) return cfg;
  if (const char* env = std::getenv("HEOM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

namespace {

std::vector<double> grid_points(const json& g) {
  const double from = g.at("from").get<double>();
  const double to = g.at("to").get<double>();
  const int points = g.at("points").get<int>();
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    out[static_cast<std::size_t>(i)] =
        from + (to - from) * i / static_cast<double>(points - 1);
  return out;
}

DenseMatrix initial_state(const json& spec, const SystemSpec& system) {
  const int d = system.dim();
  if (spec.is_string()) {
    const std::string name = spec.get<std::string>();
    if (name == "maximally_mixed")
      return DenseMatrix::Identity(d, d) / static_cast<double>(d);
    if (name == "ground") {
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(system.H0);
      const Vector v = es.eigenvectors().col(0);
      return v * v.adjoint();
    }
    throw ConfigError("config error: unknown initial state '" + name + "'");
  }
  DenseMatrix rho = parse_matrix(spec);
  if (rho.rows() != d) throw ConfigError("config error: initial state dimension mismatch");
  if (!is_hermitian(rho, 1e-10))
    throw ConfigError("config error: initial state must be Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-12)
    throw ConfigError("config error: initial state must have unit trace");
  return rho;
}

// Writes `rho` as CSV rows i,j,re,im.
void write_density_csv(const std::string& path, const DenseMatrix& rho) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError("cannot open " + path);
  std::fprintf(f, "i,j,re,im\n");
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index k = 0; k < rho.cols(); ++k)
      std::fprintf(f, "%lld,%lld,%.12g,%.12g\n", static_cast<long long>(i),
                   static_cast<long long>(k), rho(i, k).real(), rho(i, k).imag());
  std::fclose(f);
}

struct TaskContext {
  const RunConfig& config;
  fs::path out_dir;
  int threads = 1;
  double phi = 0.0;
  Model model;
  std::shared_ptr<const HierarchySpace> space;
  std::unique_ptr<HeomMatrix> even, odd;
  std::unique_ptr<AdosVector> steady;
  json manifest_tasks = json::array();

  const HeomMatrix& even_matrix() {
    if (!even) {
      even = std::make_unique<HeomMatrix>(
          build_heomls(model.system, model.baths, space, Parity::Even, threads));
      for (const auto& f : model.jumps) even->add_lindblad(f);
    }
    return *even;
  }
  const HeomMatrix& odd_matrix() {
    if (!odd) {
      odd = std::make_unique<HeomMatrix>(
          build_heomls(model.system, model.baths, space, Parity::Odd, threads));
      for (const auto& f : model.jumps) odd->add_lindblad(f);
    }
    return *odd;
  }
  const AdosVector& steady_state(const LinearOptions& lin, SolveReport* report) {
    if (!steady) {
      steady = std::make_unique<AdosVector>(steadystate(even_matrix(), lin, report));
    } else if (report) {
      report->method = "cached";
      report->residual = (even_matrix().matrix() * steady->data).cwiseAbs().maxCoeff() /
                         steady->data.cwiseAbs().maxCoeff();
    }
    return *steady;
  }
};

LinearOptions linear_options(const json& task) {
  LinearOptions lin;
  if (task.contains("solver") && task.at("solver").get<std::string>() == "gmres")
    lin.method = LinearOptions::Method::Gmres;
  return lin;
}

DenseMatrix task_operator(const json& spec, const Model& model,
                          const std::string& path) {
  if (spec.is_string()) {
    const auto it = model.ops.find(spec.get<std::string>());
    if (it == model.ops.end())
      throw ConfigError("config error at " + path + ": unknown operator '" +
                        spec.get<std::string>() + "'");
    return it->second;
  }
  DenseMatrix m = parse_matrix(spec);
  if (m.rows() != model.system.dim())
    throw ConfigError("config error at " + path + ": dimension mismatch");
  return m;
}

// Runs one task; returns the manifest entry.
json run_task(TaskContext& ctx, const json& task, std::size_t index) {
  const std::string type = task.at("type").get<std::string>();
  const auto t0 = Clock::now();
  json entry{{"type", type}};

  const fs::path out_path = ctx.out_dir / task.value("output", type + ".csv");
  const fs::path partial = out_path.string() + ".partial";
  entry["output"] = out_path.filename().string();

  if (type == "steadystate") {
    SolveReport rep;
    const AdosVector& ss = ctx.steady_state(linear_options(task), &rep);
    write_density_csv(partial.string(), reduced_density(ss));
    fs::rename(partial, out_path);
    entry["residual"] = rep.residual;
    entry["method"] = rep.method;
  } else if (type == "evolve") {
    const double t_final = task.at("t_final").get<double>();
    const int points = task.at("points").get<int>();
    std::vector<double> t_list(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
      t_list[static_cast<std::size_t>(i)] = t_final * i / (points - 1);
    const DenseMatrix rho0 = initial_state(task.at("initial"), ctx.model.system);
    const AdosVector x0 = AdosVector::from_reduced(rho0, ctx.space);

    SolveReport rep;
    std::vector<AdosVector> traj;
    if (task.at("method").get<std::string>() == "expm") {
      traj = evolve_expm(ctx.even_matrix(), x0, t_list, {}, &rep);
    } else {
      OdeOptions opt;
      opt.rtol = task.at("rtol").get<double>();
      opt.atol = task.at("atol").get<double>();
      traj = evolve_ode(ctx.even_matrix(), x0, t_list, opt, &rep);
    }

    std::vector<std::string> names;
    for (const auto& o : task.at("observables")) names.push_back(o.get<std::string>());
    if (names.empty()) names = {"trace"};
    std::vector<std::vector<cx>> values(names.size());
    for (std::size_t k = 0; k < names.size(); ++k) {
      DenseMatrix op = names[k] == "trace"
                           ? DenseMatrix(DenseMatrix::Identity(
                                 ctx.model.system.dim(), ctx.model.system.dim()))
                           : task_operator(names[k], ctx.model, "/tasks/observables");
      for (const auto& state : traj) values[k].push_back(expectation(state, op));
    }
    write_trajectory_csv(partial.string(), t_list, names, values);
    fs::rename(partial, out_path);
    if (task.at("dump_ados").get<bool>())
      write_ados_binary((ctx.out_dir / "ados.bin").string(), t_list, traj);
    entry["steps"] = rep.steps;
    entry["method"] = rep.method;
  } else if (type == "dos" || type == "psd") {
    SolveReport ss_rep;
    const AdosVector& ss = ctx.steady_state(linear_options(task), &ss_rep);
    const DenseMatrix op =
        task_operator(task.at("operator"), ctx.model, "/tasks/operator");
    SpectrumOptions sopt;
    sopt.linear = linear_options(task);
    sopt.threads = ctx.threads;
    const std::vector<double> grid = grid_points(task.at("omega"));
    const SpectrumResult res = type == "dos"
                                   ? dos(ctx.odd_matrix(), ss, op, grid, sopt)
                                   : psd(ctx.even_matrix(), ss, op, grid, sopt);
    write_spectrum_csv(partial.string(), res);
    fs::rename(partial, out_path);
    entry["steadystate_residual"] = ss_rep.residual;
    entry["max_solve_residual"] = res.max_residual;
  } else if (type == "current") {
    SolveReport rep;
    const AdosVector& ss = ctx.steady_state(linear_options(json::object()), &rep);
    const CurrentResult cur = current(ss, task.at("bath").get<std::string>(), ctx.phi);
    std::FILE* f = std::fopen(partial.string().c_str(), "w");
    if (!f) throw SolverError("cannot open " + partial.string());
    std::fprintf(f, "phi,current\n%.12g,%.12g\n", cur.phi, cur.value);
    std::fclose(f);
    fs::rename(partial, out_path);
    entry["steadystate_residual"] = rep.residual;
    entry["current"] = cur.value;
  } else if (type == "conductance") {
    const std::string bath_id = task.at("bath").get<std::string>();
    const std::vector<double> phis = grid_points(task.at("phi"));
    const LinearOptions lin = linear_options(task);
    std::vector<double> currents;
    double worst_residual = 0.0;
    for (double phi : phis) {
      Model m = build_model(ctx.config, phi);
      auto space = enumerate_model(ctx.config, m);
      HeomMatrix M = build_heomls(m.system, m.baths, space, Parity::Even, ctx.threads);
      for (const auto& fop : m.jumps) M.add_lindblad(fop);
      SolveReport rep;
      const AdosVector ss = steadystate(M, lin, &rep);
      worst_residual = std::max(worst_residual, rep.residual);
      currents.push_back(current(ss, bath_id, phi).value);
    }
    const auto g = conductance(phis, currents);
    std::vector<double> gvals;
    for (const auto& [p, gv] : g) gvals.push_back(gv);
    write_sweep_csv(partial.string(), phis, currents, gvals);
    fs::rename(partial, out_path);
    entry["max_steadystate_residual"] = worst_residual;
  } else {
    throw ConfigError("unknown task type '" + type + "'");
  }

  entry["wall_ms"] =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  entry["index"] = index;
  return entry;
}

}  // namespace

void run(const RunConfig& config, const RunOptions& opt) {
  const json& j = config.json();

  if (opt.count_only) {
    const Model model = build_model(config, j.at("phi").get<double>());
    const json& tr = j.at("truncation");
    HierarchySpace::Options sopt;
    sopt.m_max = tr.at("m_max").get<int>();
    sopt.n_max = tr.at("n_max").get<int>();
    sopt.importance_threshold = tr.at("importance_threshold").get<double>();
    ExponentTable table = ExponentTable::build(model.baths);
    std::cout << HierarchySpace::count(table, sopt) << "\n";
    return;
  }

  TaskContext ctx{config};
  ctx.threads = resolve_threads(config, opt.threads);
  ctx.phi = j.at("phi").get<double>();
  ctx.out_dir = opt.out_dir.empty()
                    ? fs::path(j.at("output").at("directory").get<std::string>())
                    : fs::path(opt.out_dir);
  fs::create_directories(ctx.out_dir);

  std::cout << "effective config:\n" << serialize(config) << "\n";

  ctx.model = build_model(config, ctx.phi);
  ctx.space = enumerate_model(config, ctx.model);
  const int d = ctx.model.system.dim();

  json manifest;
  manifest["ado_count"] = ctx.space->size();
  manifest["matrix_dim"] = ctx.space->size() * static_cast<std::size_t>(d) * d;
  manifest["threads"] = ctx.threads;
  manifest["phi"] = ctx.phi;

  const auto write_manifest = [&] {
    manifest["tasks"] = ctx.manifest_tasks;
    std::ofstream out(ctx.out_dir / "run_manifest.json");
    out << manifest.dump(2) << "\n";
  };

  const json& tasks = j.at("tasks");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    try {
      ctx.manifest_tasks.push_back(run_task(ctx, tasks[i], i));
    } catch (const std::exception& e) {
      manifest["failed_stage"] =
          "task " + std::to_string(i) + " (" +
          tasks[i].at("type").get<std::string>() + ")";
      manifest["error"] = e.what();
      write_manifest();
      throw SolverError("task " + std::to_string(i) + " (" +
                        tasks[i].at("type").get<std::string>() +
                        ") failed: " + e.what());
    }
  }

  if (j.at("output").at("export_matrix").get<bool>()) {
    if (ctx.even) ctx.even->export_coo((ctx.out_dir / "heomls_even.coo").string());
    if (ctx.odd) ctx.odd->export_coo((ctx.out_dir / "heomls_odd.coo").string());
  }
  write_manifest();
}

std::string describe_ado(const RunConfig& config, const std::string& selector) {
  const json& j = config.json();
  const Model model = build_model(config, j.at("phi").get<double>());
  const auto space = enumerate_model(config, model);
  const ExponentTable& t = space->exponents();

  const AdoIndex* ado = nullptr;
  std::size_t flat = 0;
  // Integer selector: flat index. Otherwise a JSON key {"j": [...], "q": [...]}.
  try {
    std::size_t pos = 0;
    flat = std::stoull(selector, &pos);
    if (pos != selector.size()) throw std::invalid_argument("not an integer");
  } catch (const std::exception&) {
    json key;
    try {
      key = json::parse(selector);
    } catch (const json::parse_error&) {
      throw ConfigError("describe: selector must be a flat index or a JSON key "
                        "{\"j\": [...], \"q\": [...]}");
    }
    std::vector<int> jv, qv;
    if (key.contains("j")) jv = key.at("j").get<std::vector<int>>();
    if (key.contains("q")) qv = key.at("q").get<std::vector<int>>();
    try {
      flat = space->index_of(jv, qv);
    } catch (const NotFoundError& e) {
      return e.what();  // reports "pruned (...)" or "exceeds tier (...)"
    }
  }
  ado = &space->ado_at(flat);

  std::ostringstream out;
  out << "ADO " << flat << ": m=" << ado->m << " n=" << ado->n << " j=[";
  for (std::size_t i = 0; i < ado->j.size(); ++i)
    out << (i ? "," : "") << ado->j[i];
  out << "] q=[";
  for (std::size_t i = 0; i < ado->q.size(); ++i)
    out << (i ? "," : "") << ado->q[i];
  out << "] parity=" << (ado->parity == Parity::Even ? "even" : "odd") << "\n";
  out << "importance = " << importance(*ado, t) << "\n";
  for (std::size_t r = 0; r < ado->j.size(); ++r) {
    const auto& mode = t.boson[static_cast<std::size_t>(ado->j[r])];
    out << "j[" << r + 1 << "] mode " << ado->j[r] << ": bosonic bath '"
        << t.bath_ids[static_cast<std::size_t>(mode.bath)] << "' channel '"
        << t.channels[static_cast<std::size_t>(mode.bath)] << "' l=" << mode.l
        << " part="
        << (mode.part == BosonPart::Real   ? "real"
            : mode.part == BosonPart::Imag ? "imag"
                                           : "combined")
        << " xi=" << mode.xi << " chi=" << mode.chi << "\n";
  }
  for (std::size_t w = 0; w < ado->q.size(); ++w) {
    const auto& mode = t.fermion[static_cast<std::size_t>(ado->q[w])];
    out << "q[" << w + 1 << "] mode " << ado->q[w] << ": fermionic bath '"
        << t.bath_ids[static_cast<std::size_t>(mode.bath)] << "' channel '"
        << t.channels[static_cast<std::size_t>(mode.bath)] << "' nu="
        << (mode.nu > 0 ? "+1" : "-1") << " h=" << mode.h << " eta=" << mode.eta
        << " gamma=" << mode.gamma << "\n";
  }
  return out.str();
}

}  // namespace heom
