#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "heom/config.hpp"
#include "heom/hierarchy.hpp"
#include "heom/liouvillian.hpp"

namespace heom {

// A config resolved into engine objects at a given bias voltage.
struct Model {
  SystemSpec system;
  std::map<std::string, DenseMatrix> ops;  // named operators
  std::vector<BathSpec> baths;             // hierarchical baths
  std::vector<DenseMatrix> jumps;          // pre-scaled Lindblad jump operators
};

Model build_model(const RunConfig& config, double phi);

// Enumerates the hierarchy space of `model` under the config's truncation.
std::shared_ptr<const HierarchySpace> enumerate_model(const RunConfig& config,
                                                      const Model& model);

struct RunOptions {
  bool count_only = false;
  int threads = 0;      // > 0 overrides the config / HEOM_THREADS
  std::string out_dir;  // nonempty overrides the config
};

// Executes the configured tasks in order, writing one CSV per task plus a
// JSON run manifest. Throws ConfigError/SolverError naming the failing stage;
// partially written outputs keep a .partial suffix.
void run(const RunConfig& config, const RunOptions& opt = {});

// Human-readable dictionary entry for one ADO, selected by flat index
// (selector parses as an integer) or by a JSON key {"j": [...], "q": [...]}.
std::string describe_ado(const RunConfig& config, const std::string& selector);

int resolve_threads(const RunConfig& config, int override_threads);

}  // namespace heom
