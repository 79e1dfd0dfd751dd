// cavisteady: stationary states of driven-dissipative Kerr cavity rings.
//
//   cavisteady solve --n 4 --nmax 2 --u 6 --j 0.3 --omega 0.5 --methods exact,pert2
//   cavisteady scan  --n 4 --nmax 2 --u 6 --omega 0.7 --scan j:0:1:21 --methods exact,pert0,pert1,pert2
//
// Exit codes: 0 success, 2 invalid configuration, 3 solver failure on a
// single solve, 1 I/O failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavisteady/eom.hpp"
#include "cavisteady/errors.hpp"
#include "cavisteady/scan.hpp"

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitIo = 1;

struct Flags {
  std::string config_path;
  int n = 0;
  int nmax = 0;
  double delta = 0, u = 0, j = 0, omega = 0, gamma0 = 0, nthermal = 0;
  std::string methods;
  std::string scan;
  std::string observables;
  std::string out;
  std::string format;
  bool appendix_verbatim = false;
  bool full_system = false;
  int oracle_cut = -1;
  unsigned threads = 0;
  std::string dump_system;
};

struct Options {
  CLI::Option* n;
  CLI::Option* nmax;
  CLI::Option* delta;
  CLI::Option* u;
  CLI::Option* j;
  CLI::Option* omega;
  CLI::Option* gamma0;
  CLI::Option* nthermal;
  CLI::Option* methods;
  CLI::Option* scan;
  CLI::Option* observables;
  CLI::Option* out;
  CLI::Option* format;
  CLI::Option* appendix_verbatim;
  CLI::Option* full_system;
  CLI::Option* oracle_cut;
  CLI::Option* threads;
};

Options add_common(CLI::App& app, Flags& f) {
  Options o{};
  app.add_option("--config", f.config_path, "JSON config file; flags override its fields")->check(CLI::ExistingFile);
  o.n = app.add_option("--n", f.n, "number of cavities N");
  o.nmax = app.add_option("--nmax", f.nmax, "exponent truncation n_max");
  o.delta = app.add_option("--delta", f.delta, "detuning omega_a - omega_L");
  o.u = app.add_option("--u", f.u, "Kerr strength U");
  o.j = app.add_option("--j", f.j, "tunneling rate J");
  o.omega = app.add_option("--omega", f.omega, "coherent drive amplitude");
  o.gamma0 = app.add_option("--gamma0", f.gamma0, "zero-temperature decay rate");
  o.nthermal = app.add_option("--nthermal", f.nthermal, "thermal bath occupation n_T");
  o.methods = app.add_option("--methods,--method", f.methods, "comma list of exact,pert0,pert1,pert2,oracle");
  o.observables = app.add_option("--observables", f.observables, "comma list of n_a,g2,nn");
  o.out = app.add_option("--out", f.out, "output path (default stdout)");
  o.format = app.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  o.appendix_verbatim =
      app.add_flag("--appendix-verbatim", f.appendix_verbatim, "drop the +P(m+n)/2 pump diagonal term");
  o.full_system = app.add_flag("--full-system", f.full_system,
                               "exact solve over every canonical correlator instead of the observable closure");
  o.oracle_cut = app.add_option("--oracle-cut", f.oracle_cut, "Fock cutoff of the density-matrix oracle");
  o.threads = app.add_option("--threads", f.threads, "worker threads for scans (0: all cores)");
  return o;
}

cavisteady::ScanConfig build_config(const Flags& f, const Options& o) {
  using namespace cavisteady;
  ScanConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    c = config_from_json(buf.str());
  }
  if (o.n->count()) c.base.n_cavities = f.n;
  if (o.nmax->count()) c.base.n_max = f.nmax;
  if (o.delta->count()) c.base.delta = f.delta;
  if (o.u->count()) c.base.u = f.u;
  if (o.j->count()) c.base.j = f.j;
  if (o.omega->count()) c.base.omega = f.omega;
  if (o.gamma0->count()) c.base.gamma0 = f.gamma0;
  if (o.nthermal->count()) c.base.n_thermal = f.nthermal;
  if (o.appendix_verbatim->count()) c.base.pump_diagonal = PumpDiagonal::kAppendixVerbatim;
  if (o.full_system->count()) c.method_options.full_system = true;
  if (o.oracle_cut->count()) c.method_options.oracle_cut = f.oracle_cut;
  if (o.threads->count()) c.threads = f.threads;
  if (o.out->count()) c.out_path = f.out;
  if (o.format->count()) c.format = f.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  if (o.observables->count()) c.observables = parse_observables(f.observables);
  if (o.methods->count()) {
    c.methods.clear();
    std::stringstream ss(f.methods);
    for (std::string name; std::getline(ss, name, ',');) {
      const auto m = parse_method(name);
      if (!m) throw Error(ErrorCode::kInvalidConfig, "unknown method '" + name + "'");
      c.methods.push_back(*m);
    }
  }
  if (o.scan && o.scan->count()) c.scan = parse_scan_range(f.scan);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cavisteady;

  CLI::App app{"Stationary states of driven-dissipative Kerr cavity rings"};
  app.require_subcommand(1);

  Flags solve_flags;
  auto* solve = app.add_subcommand("solve", "solve a single parameter point");
  Options solve_opts = add_common(*solve, solve_flags);
  solve->add_option("--dump-system", solve_flags.dump_system, "write the assembled (M, I) as text");

  Flags scan_flags;
  auto* scan = app.add_subcommand("scan", "one-dimensional parameter scan");
  Options scan_opts = add_common(*scan, scan_flags);
  scan_opts.scan = scan->add_option("--scan", scan_flags.scan, "name:from:to:steps with name in j,delta,laser_offset,omega,n_thermal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  const bool is_scan = scan->parsed();
  const Flags& flags = is_scan ? scan_flags : solve_flags;
  const Options& opts = is_scan ? scan_opts : solve_opts;

  ScanConfig config;
  try {
    config = build_config(flags, opts);
    if (!is_scan) config.scan.reset();
    if (is_scan && !config.scan) throw Error(ErrorCode::kInvalidConfig, "scan needs --scan name:from:to:steps");
    validate_config(config);
  } catch (const Error& e) {
    std::cerr << "cavisteady: " << e.what() << '\n';
    return kExitInvalidConfig;
  }

  try {
    if (!is_scan && !flags.dump_system.empty()) {
      AssemblyOptions assembly;
      if (!config.method_options.full_system) {
        assembly.seeds = observable_seeds(config.base.n_cavities, config.base.n_max);
      }
      const auto system = assemble_system(validate_params(config.base), assembly);
      std::ofstream dump(flags.dump_system);
      if (!dump) throw Error(ErrorCode::kIoFailure, "cannot open " + flags.dump_system);
      write_system_dump(system, dump);
    }

    const auto rows = run_scan(config);
    write_results(rows, config, std::cout);

    if (!is_scan) {
      for (const auto& r : rows) {
        if (!r.error.empty() && !r.n_a) {
          std::cerr << "cavisteady: " << to_string(r.method) << ": " << r.error << '\n';
          return kExitSolverFailure;
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "cavisteady: " << e.what() << '\n';
    if (e.code() == ErrorCode::kIoFailure) return kExitIo;
    return is_scan ? kExitIo : kExitSolverFailure;
  }
  return 0;
}
