#include "heom/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace heom {

using nlohmann::json;

RunConfig::RunConfig() : doc(new nlohmann::json(nlohmann::json::object())) {}
RunConfig::RunConfig(const RunConfig& o) : doc(new nlohmann::json(*o.doc)) {}
RunConfig::RunConfig(RunConfig&& o) noexcept : doc(o.doc) { o.doc = nullptr; }
RunConfig& RunConfig::operator=(RunConfig o) {
  std::swap(doc, o.doc);
  return *this;
}
RunConfig::~RunConfig() { delete doc; }

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + (path.empty() ? "/" : path) + ": " + what);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

// Matrices are arrays of rows; entries are numbers or [re, im] pairs.
void validate_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty matrix (array of rows)");
  const std::size_t n = j.size();
  for (std::size_t r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != n)
      fail(path, "matrix must be square (row " + std::to_string(r) + ")");
    for (std::size_t c = 0; c < row.size(); ++c) {
      const json& e = row[c];
      const std::string epath =
          path + "/" + std::to_string(r) + "/" + std::to_string(c);
      if (e.is_number()) continue;
      if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        continue;
      fail(epath, "matrix entry must be a number or [re, im]");
    }
  }
}

void validate_grid(json& j, const std::string& path, int min_points) {
  require_object(j, path);
  check_keys(j, path, {"from", "to", "points"});
  if (!j.contains("from") || !j.contains("to") || !j.contains("points"))
    fail(path, "grid requires 'from', 'to' and 'points'");
  const double from = get_number(j["from"], path + "/from");
  const double to = get_number(j["to"], path + "/to");
  const int points = get_int(j["points"], path + "/points");
  if (!(to > from)) fail(path, "'to' must exceed 'from'");
  if (points < min_points)
    fail(path, "'points' must be >= " + std::to_string(min_points));
}

void validate_system(json& sys, const std::string& path) {
  require_object(sys, path);
  if (!sys.contains("type")) fail(path, "system requires 'type'");
  const std::string type = get_string(sys["type"], path + "/type");

  if (type == "fermion_level") {
    check_keys(sys, path, {"type", "epsilon", "u", "spin", "operators"});
    if (!sys.contains("epsilon")) fail(path, "fermion_level requires 'epsilon'");
    get_number(sys["epsilon"], path + "/epsilon");
    if (!sys.contains("u")) sys["u"] = 0.0;
    get_number(sys["u"], path + "/u");
    if (!sys.contains("spin")) sys["spin"] = false;
    get_bool(sys["spin"], path + "/spin");
  } else if (type == "boson_mode") {
    check_keys(sys, path, {"type", "omega", "n_fock", "operators"});
    if (!sys.contains("omega") || !sys.contains("n_fock"))
      fail(path, "boson_mode requires 'omega' and 'n_fock'");
    get_number(sys["omega"], path + "/omega");
    if (get_int(sys["n_fock"], path + "/n_fock") < 2)
      fail(path + "/n_fock", "must be >= 2");
  } else if (type == "charge_cavity") {
    check_keys(sys, path, {"type", "epsilon", "omega_c", "g", "n_photon", "operators"});
    for (const char* key : {"epsilon", "omega_c", "g"}) {
      if (!sys.contains(key)) fail(path, std::string("charge_cavity requires '") + key + "'");
      get_number(sys[key], path + "/" + key);
    }
    if (!sys.contains("n_photon")) fail(path, "charge_cavity requires 'n_photon'");
    if (get_int(sys["n_photon"], path + "/n_photon") < 2)
      fail(path + "/n_photon", "must be >= 2");
  } else if (type == "matrix") {
    check_keys(sys, path, {"type", "h", "operators"});
    if (!sys.contains("h")) fail(path, "matrix system requires 'h'");
    validate_matrix(sys["h"], path + "/h");
  } else {
    fail(path + "/type", "unknown system type '" + type + "'");
  }
  if (sys.contains("operators")) {
    require_object(sys["operators"], path + "/operators");
    for (const auto& [name, mat] : sys["operators"].items())
      validate_matrix(mat, path + "/operators/" + name);
  } else {
    sys["operators"] = json::object();
  }
}

void validate_exponent_entry(json& e, const std::string& path, bool fermionic) {
  require_object(e, path);
  if (fermionic) {
    check_keys(e, path, {"eta", "gamma"});
    for (const char* key : {"eta", "gamma"}) {
      if (!e.contains(key)) fail(path, std::string("requires '") + key + "'");
      const json& v = e[key];
      if (!(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()))
        fail(path + "/" + key, "expected [re, im]");
    }
  } else {
    check_keys(e, path, {"xi", "chi", "part"});
    for (const char* key : {"xi", "chi"}) {
      if (!e.contains(key)) fail(path, std::string("requires '") + key + "'");
      const json& v = e[key];
      if (!(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()))
        fail(path + "/" + key, "expected [re, im]");
    }
    if (!e.contains("part")) e["part"] = "combined";
    const std::string part = get_string(e["part"], path + "/part");
    if (part != "real" && part != "imag" && part != "combined")
      fail(path + "/part", "must be 'real', 'imag' or 'combined'");
  }
}

void validate_bath(json& bath, const std::string& path) {
  require_object(bath, path);
  check_keys(bath, path,
             {"id", "flavor", "coupling", "spectral_density", "decomposition",
              "gamma", "delta", "width", "mu", "kT", "n_exp", "exponents",
              "markovian", "omega_c"});
  if (!bath.contains("id")) fail(path, "bath requires 'id'");
  get_string(bath["id"], path + "/id");
  if (!bath.contains("flavor")) fail(path, "bath requires 'flavor'");
  const std::string flavor = get_string(bath["flavor"], path + "/flavor");
  if (flavor != "fermionic" && flavor != "bosonic")
    fail(path + "/flavor", "must be 'fermionic' or 'bosonic'");
  if (!bath.contains("coupling")) fail(path, "bath requires 'coupling'");
  const json& cpl = bath["coupling"];
  if (cpl.is_string()) {
    // named operator
  } else if (cpl.is_array() && !cpl.empty() && cpl[0].is_string()) {
    if (flavor != "fermionic")
      fail(path + "/coupling", "channel lists are only supported for fermionic baths");
    for (std::size_t i = 0; i < cpl.size(); ++i)
      get_string(cpl[i], path + "/coupling/" + std::to_string(i));
  } else {
    validate_matrix(cpl, path + "/coupling");
  }

  if (!bath.contains("markovian")) bath["markovian"] = false;
  const bool markovian = get_bool(bath["markovian"], path + "/markovian");
  if (markovian && flavor != "bosonic")
    fail(path + "/markovian", "only bosonic baths support the Lindblad replacement");

  if (bath.contains("exponents")) {
    if (markovian) fail(path, "'markovian' and 'exponents' are exclusive");
    for (const char* key : {"spectral_density", "gamma", "delta", "width", "n_exp"})
      if (bath.contains(key))
        fail(path, std::string("'exponents' excludes '") + key + "'");
    json& exps = bath["exponents"];
    require_object(exps, path + "/exponents");
    if (flavor == "fermionic") {
      check_keys(exps, path + "/exponents", {"plus", "minus"});
      for (const char* fam : {"plus", "minus"}) {
        if (!exps.contains(fam))
          fail(path + "/exponents", std::string("requires '") + fam + "'");
        json& list = exps[fam];
        if (!list.is_array())
          fail(path + "/exponents/" + fam, "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i)
          validate_exponent_entry(list[i],
                                  path + "/exponents/" + fam + "/" + std::to_string(i),
                                  true);
      }
      if (exps["plus"].size() != exps["minus"].size())
        fail(path + "/exponents", "'plus' and 'minus' families must have equal length");
    } else {
      check_keys(exps, path + "/exponents", {"terms"});
      if (!exps.contains("terms") || !exps["terms"].is_array())
        fail(path + "/exponents", "requires an array 'terms'");
      json& list = exps["terms"];
      for (std::size_t i = 0; i < list.size(); ++i)
        validate_exponent_entry(list[i],
                                path + "/exponents/terms/" + std::to_string(i),
                                false);
    }
    return;
  }

  // Spectral-density route.
  const std::string expected_sd = flavor == "fermionic" ? "lorentzian" : "drude_lorentz";
  if (!bath.contains("spectral_density")) bath["spectral_density"] = expected_sd;
  const std::string sd = get_string(bath["spectral_density"], path + "/spectral_density");
  if (sd != expected_sd)
    fail(path + "/spectral_density",
         "'" + sd + "' is not available for " + flavor + " baths (use '" +
             expected_sd + "' or raw exponents)");
  if (!bath.contains("decomposition")) bath["decomposition"] = "pade";
  const std::string dec = get_string(bath["decomposition"], path + "/decomposition");
  if (dec != "pade" && dec != "matsubara")
    fail(path + "/decomposition", "must be 'pade' or 'matsubara'");

  if (!bath.contains("width")) fail(path, "bath requires 'width'");
  if (!(get_number(bath["width"], path + "/width") > 0))
    fail(path + "/width", "must be > 0");
  if (!bath.contains("kT")) fail(path, "bath requires 'kT'");
  if (!(get_number(bath["kT"], path + "/kT") > 0)) fail(path + "/kT", "must be > 0");

  if (flavor == "fermionic") {
    if (bath.contains("delta")) fail(path, "'delta' is a bosonic coupling strength");
    if (!bath.contains("gamma")) fail(path, "fermionic bath requires 'gamma'");
    if (get_number(bath["gamma"], path + "/gamma") < 0)
      fail(path + "/gamma", "must be >= 0");
    if (!bath.contains("mu")) bath["mu"] = 0.0;
    const json& mu = bath["mu"];
    if (mu.is_string()) {
      const std::string s = mu.get<std::string>();
      if (s != "+phi/2" && s != "-phi/2")
        fail(path + "/mu", "string form must be '+phi/2' or '-phi/2'");
    } else if (!mu.is_number()) {
      fail(path + "/mu", "expected a number or '+phi/2'/'-phi/2'");
    }
    if (markovian) fail(path + "/markovian", "only bosonic baths support it");
  } else {
    if (bath.contains("gamma")) fail(path, "'gamma' is a fermionic coupling strength");
    if (bath.contains("mu")) fail(path, "'mu' applies to fermionic baths only");
    if (!bath.contains("delta")) fail(path, "bosonic bath requires 'delta'");
    if (get_number(bath["delta"], path + "/delta") < 0)
      fail(path + "/delta", "must be >= 0");
    if (markovian) {
      if (!bath.contains("omega_c"))
        fail(path, "markovian bath requires 'omega_c' (evaluation frequency)");
      get_number(bath["omega_c"], path + "/omega_c");
    }
  }
  if (bath.contains("omega_c") && !markovian)
    fail(path + "/omega_c", "only meaningful with 'markovian': true");
  if (!markovian) {
    if (!bath.contains("n_exp")) fail(path, "bath requires 'n_exp'");
    if (get_int(bath["n_exp"], path + "/n_exp") < 1) fail(path + "/n_exp", "must be >= 1");
  } else if (bath.contains("n_exp")) {
    fail(path, "'n_exp' is unused for markovian baths");
  }
}

void validate_task(json& task, const std::string& path) {
  require_object(task, path);
  if (!task.contains("type")) fail(path, "task requires 'type'");
  const std::string type = get_string(task["type"], path + "/type");

  const auto default_output = [&](const char* name) {
    if (!task.contains("output")) task["output"] = name;
    get_string(task["output"], path + "/output");
  };
  const auto default_solver = [&] {
    if (!task.contains("solver")) task["solver"] = "lu";
    const std::string s = get_string(task["solver"], path + "/solver");
    if (s != "lu" && s != "gmres") fail(path + "/solver", "must be 'lu' or 'gmres'");
  };

  if (type == "steadystate") {
    check_keys(task, path, {"type", "solver", "output"});
    default_solver();
    default_output("steadystate.csv");
  } else if (type == "evolve") {
    check_keys(task, path,
               {"type", "method", "t_final", "points", "observables", "initial",
                "rtol", "atol", "output", "dump_ados"});
    if (!task.contains("method")) task["method"] = "ode";
    const std::string m = get_string(task["method"], path + "/method");
    if (m != "ode" && m != "expm") fail(path + "/method", "must be 'ode' or 'expm'");
    if (!task.contains("t_final")) fail(path, "evolve requires 't_final'");
    if (!(get_number(task["t_final"], path + "/t_final") > 0))
      fail(path + "/t_final", "must be > 0");
    if (!task.contains("points")) task["points"] = 101;
    if (get_int(task["points"], path + "/points") < 2)
      fail(path + "/points", "must be >= 2");
    if (!task.contains("observables")) task["observables"] = json::array();
    if (!task["observables"].is_array())
      fail(path + "/observables", "expected an array of operator names");
    for (std::size_t i = 0; i < task["observables"].size(); ++i)
      get_string(task["observables"][i], path + "/observables/" + std::to_string(i));
    if (!task.contains("initial")) task["initial"] = "ground";
    if (!task["initial"].is_string())
      validate_matrix(task["initial"], path + "/initial");
    if (!task.contains("rtol")) task["rtol"] = 1e-8;
    if (!task.contains("atol")) task["atol"] = 1e-10;
    if (!(get_number(task["rtol"], path + "/rtol") > 0)) fail(path + "/rtol", "must be > 0");
    if (!(get_number(task["atol"], path + "/atol") > 0)) fail(path + "/atol", "must be > 0");
    if (!task.contains("dump_ados")) task["dump_ados"] = false;
    get_bool(task["dump_ados"], path + "/dump_ados");
    default_output("evolve.csv");
  } else if (type == "dos" || type == "psd") {
    check_keys(task, path, {"type", "operator", "omega", "solver", "output"});
    if (!task.contains("operator")) fail(path, type + " requires 'operator'");
    if (!task["operator"].is_string())
      validate_matrix(task["operator"], path + "/operator");
    if (!task.contains("omega")) fail(path, type + " requires 'omega'");
    validate_grid(task["omega"], path + "/omega", 2);
    default_solver();
    default_output(type == "dos" ? "dos.csv" : "psd.csv");
  } else if (type == "current") {
    check_keys(task, path, {"type", "bath", "output"});
    if (!task.contains("bath")) fail(path, "current requires 'bath'");
    get_string(task["bath"], path + "/bath");
    default_output("current.csv");
  } else if (type == "conductance") {
    check_keys(task, path, {"type", "bath", "phi", "solver", "output"});
    if (!task.contains("bath")) fail(path, "conductance requires 'bath'");
    get_string(task["bath"], path + "/bath");
    if (!task.contains("phi")) fail(path, "conductance requires 'phi'");
    validate_grid(task["phi"], path + "/phi", 3);
    default_solver();
    default_output("conductance.csv");
  } else {
    fail(path + "/type", "unknown task type '" + type + "'");
  }
}

void validate(json& j) {
  require_object(j, "");
  check_keys(j, "", {"system", "baths", "truncation", "tasks", "output",
                     "threads", "phi", "lindblad"});
  if (!j.contains("system")) fail("", "configuration requires 'system'");
  validate_system(j["system"], "/system");

  if (!j.contains("baths")) j["baths"] = json::array();
  if (!j["baths"].is_array()) fail("/baths", "expected an array");
  for (std::size_t i = 0; i < j["baths"].size(); ++i)
    validate_bath(j["baths"][i], "/baths/" + std::to_string(i));

  if (!j.contains("truncation")) j["truncation"] = json::object();
  json& tr = j["truncation"];
  require_object(tr, "/truncation");
  check_keys(tr, "/truncation", {"m_max", "n_max", "importance_threshold"});
  if (!tr.contains("m_max")) tr["m_max"] = 0;
  if (!tr.contains("n_max")) tr["n_max"] = 0;
  if (!tr.contains("importance_threshold")) tr["importance_threshold"] = 0.0;
  if (get_int(tr["m_max"], "/truncation/m_max") < 0)
    fail("/truncation/m_max", "must be >= 0");
  if (get_int(tr["n_max"], "/truncation/n_max") < 0)
    fail("/truncation/n_max", "must be >= 0");
  if (get_number(tr["importance_threshold"], "/truncation/importance_threshold") < 0)
    fail("/truncation/importance_threshold", "must be >= 0");

  if (!j.contains("tasks")) fail("", "configuration requires 'tasks'");
  if (!j["tasks"].is_array() || j["tasks"].empty())
    fail("/tasks", "expected a nonempty array of tasks");
  for (std::size_t i = 0; i < j["tasks"].size(); ++i)
    validate_task(j["tasks"][i], "/tasks/" + std::to_string(i));

  if (!j.contains("output")) j["output"] = json::object();
  json& out = j["output"];
  require_object(out, "/output");
  check_keys(out, "/output", {"directory", "formats", "dump_ados", "export_matrix"});
  if (!out.contains("directory")) out["directory"] = "heom_out";
  get_string(out["directory"], "/output/directory");
  if (!out.contains("formats")) out["formats"] = json::array({"csv"});
  if (!out["formats"].is_array()) fail("/output/formats", "expected an array");
  for (std::size_t i = 0; i < out["formats"].size(); ++i)
    if (get_string(out["formats"][i], "/output/formats") != "csv")
      fail("/output/formats", "only 'csv' is supported");
  if (!out.contains("export_matrix")) out["export_matrix"] = false;
  get_bool(out["export_matrix"], "/output/export_matrix");
  if (!out.contains("dump_ados")) out["dump_ados"] = false;
  get_bool(out["dump_ados"], "/output/dump_ados");

  if (!j.contains("threads")) j["threads"] = 0;  // 0: HEOM_THREADS or 1
  if (get_int(j["threads"], "/threads") < 0) fail("/threads", "must be >= 0");
  if (!j.contains("phi")) j["phi"] = 0.0;
  get_number(j["phi"], "/phi");

  if (!j.contains("lindblad")) j["lindblad"] = json::array();
  if (!j["lindblad"].is_array()) fail("/lindblad", "expected an array");
  for (std::size_t i = 0; i < j["lindblad"].size(); ++i) {
    json& lb = j["lindblad"][i];
    const std::string path = "/lindblad/" + std::to_string(i);
    require_object(lb, path);
    check_keys(lb, path, {"operator", "rate"});
    if (!lb.contains("operator")) fail(path, "requires 'operator'");
    if (!lb["operator"].is_string()) validate_matrix(lb["operator"], path + "/operator");
    if (!lb.contains("rate")) lb["rate"] = 1.0;
    if (get_number(lb["rate"], path + "/rate") < 0) fail(path + "/rate", "must be >= 0");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  try {
    cfg.json() = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config error: invalid JSON: ") + e.what());
  }
  validate(cfg.json());
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const RunConfig& config) { return config.json().dump(2); }

}  // namespace heom
