// Command-line front end: theory, oracle1d, simulate, verify.
//
// Exit codes: 0 success / verification passed, 1 verification failed,
// 2 configuration or region error.

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssk/cavity1d.hpp"
#include "ssk/errors.hpp"
#include "ssk/fluctuation_system.hpp"
#include "ssk/report.hpp"
#include "ssk/rs_solver.hpp"
#include "ssk/simulator.hpp"

namespace {

using ssk::Json;

struct TheoryConfig {
  ssk::MixturePolynomial mixture{std::vector<ssk::MixtureTerm>{{2, 1.0}}};
  double beta = 0.2;
  double h = 0.3;
  double tol = ssk::kDefaultTol;
  ssk::MatrixVariant variant = ssk::MatrixVariant::as_printed;
};

struct OracleConfig {
  std::vector<int> mono{1, 1};
  std::vector<int> n_grid{1000, 10000, 100000};
  int hermite_order = 40;
  double tol = 1e-6;
};

// Raw flag values; applied over file values only when given on the command line.
struct Flags {
  std::string config_path;
  std::string out_path;
  bool csv = false;
  std::string mixture;
  double beta = 0, h = 0, tol = 0;
  std::string variant;
  std::uint64_t seed = 0;
  int n = 0, n_disorder = 0, n_chains = 0, measure_every = 0, batches = 0;
  long sweeps = 0, burnin = 0, dump_every = 0;
  std::string dump_path;
  std::string mono;
  std::string n_grid;
  int hermite_order = 0;
  int free_energy_points = 0;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ssk::ConfigError("bad integer list '" + text + "'");
    }
  }
  if (out.empty()) throw ssk::ConfigError("empty integer list");
  return out;
}

Json load_config_file(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw ssk::ConfigError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw ssk::ConfigError(std::string("config file is not valid JSON: ") + ex.what());
  }
  // a report is accepted as a config: its echoed "config" section is used
  if (j.contains("config") && j.at("config").is_object()) return j.at("config");
  return j;
}

TheoryConfig theory_config(const Json& file, const Flags& f, const CLI::App& app) {
  TheoryConfig c;
  try {
    if (file.contains("mixture")) c.mixture = ssk::mixture_from_json(file.at("mixture"));
    if (file.contains("beta")) c.beta = file.at("beta").get<double>();
    if (file.contains("h")) c.h = file.at("h").get<double>();
    if (file.contains("tol")) c.tol = file.at("tol").get<double>();
    if (file.contains("matrix_variant"))
      c.variant = ssk::matrix_variant_from_string(file.at("matrix_variant").get<std::string>());
  } catch (const nlohmann::json::exception& ex) {
    throw ssk::ConfigError(std::string("bad configuration field: ") + ex.what());
  }
  if (app.count("--mixture")) c.mixture = ssk::MixturePolynomial::parse(f.mixture);
  if (app.count("--beta")) c.beta = f.beta;
  if (app.count("--h")) c.h = f.h;
  if (app.count("--tol")) c.tol = f.tol;
  if (app.count("--variant")) c.variant = ssk::matrix_variant_from_string(f.variant);
  if (!(c.beta >= 0.0) || !std::isfinite(c.h)) throw ssk::ConfigError("need beta >= 0 and finite h");
  return c;
}

ssk::ExperimentConfig experiment_config(const Json& file, const Flags& f, const CLI::App& app,
                                        const TheoryConfig& theory) {
  ssk::ExperimentConfig c;
  c.mixture = theory.mixture;
  c.beta = theory.beta;
  c.h = theory.h;
  c = ssk::experiment_config_from_json(file, c);
  c.mixture = theory.mixture;
  c.beta = theory.beta;
  c.h = theory.h;
  if (app.count("--seed")) c.seed = f.seed;
  if (app.count("--N")) c.n = f.n;
  if (app.count("--n-disorder")) c.n_disorder = f.n_disorder;
  if (app.count("--n-chains")) c.n_chains = f.n_chains;
  if (app.count("--sweeps")) c.sweeps = f.sweeps;
  if (app.count("--burnin")) c.burnin = f.burnin;
  if (app.count("--measure-every")) c.measure_every = f.measure_every;
  if (app.count("--batches")) c.batches = f.batches;
  if (app.count("--dump-every")) c.dump_every = f.dump_every;
  if (app.count("--dump")) c.dump_path = f.dump_path;
  if (!c.dump_path.empty() && c.dump_every == 0) c.dump_every = 1000;
  ssk::validate(c);
  return c;
}

OracleConfig oracle_config(const Json& file, const Flags& f, const CLI::App& app) {
  OracleConfig c;
  try {
    if (file.contains("mono")) c.mono = file.at("mono").get<std::vector<int>>();
    if (file.contains("n_grid")) c.n_grid = file.at("n_grid").get<std::vector<int>>();
    if (file.contains("hermite_order")) c.hermite_order = file.at("hermite_order").get<int>();
    if (file.contains("oracle_tol")) c.tol = file.at("oracle_tol").get<double>();
  } catch (const nlohmann::json::exception& ex) {
    throw ssk::ConfigError(std::string("bad configuration field: ") + ex.what());
  }
  if (app.count("--mono")) c.mono = parse_int_list(f.mono);
  if (app.count("--n-grid")) c.n_grid = parse_int_list(f.n_grid);
  if (app.count("--hermite-order")) c.hermite_order = f.hermite_order;
  for (int n : c.n_grid)
    if (n < 4) throw ssk::ConfigError("oracle N values must be >= 4");
  if (c.hermite_order < 20) throw ssk::ConfigError("hermite order must be >= 20");
  return c;
}

Json theory_echo(const TheoryConfig& c) {
  return {{"mixture", ssk::to_json(c.mixture)}, {"beta", c.beta}, {"h", c.h}, {"tol", c.tol},
          {"matrix_variant", std::string(ssk::to_string(c.variant))}};
}

void emit(const Flags& f, const Json& report, const std::string& csv) {
  const std::string text = report.dump(2) + "\n";
  if (!f.out_path.empty()) {
    std::ofstream out(f.out_path, std::ios::trunc);
    if (!out) throw ssk::ConfigError("cannot write " + f.out_path);
    out << text;
    if (f.csv && !csv.empty()) {
      std::ofstream csv_out(f.out_path + ".csv", std::ios::trunc);
      csv_out << csv;
    }
  } else if (f.csv && !csv.empty()) {
    std::cout << csv;
  } else {
    std::cout << text;
  }
}

Json theory_section(const TheoryConfig& c, ssk::FluctuationReport* out = nullptr) {
  const auto diag = ssk::high_temp_check(c.mixture, c.beta, c.h);
  const auto point = ssk::rs_point(c.mixture, c.beta, c.h, c.tol);
  const auto rep = ssk::limiting_covariances(point, c.variant);
  Json j = ssk::to_json(rep);
  j["region"] = ssk::to_json(diag);
  if (out) *out = rep;
  return j;
}

int cmd_theory(const Flags& f, const CLI::App& app) {
  const auto file = load_config_file(f.config_path);
  const auto c = theory_config(file, f, app);
  ssk::FluctuationReport rep;
  Json report;
  report["command"] = "theory";
  report["config"] = theory_echo(c);
  report["theory"] = theory_section(c, &rep);
  emit(f, report, ssk::fluctuation_csv(rep));
  return 0;
}

struct OracleRow {
  std::string label;
  double engine;
  std::vector<double> quadrature;
  double limit;
};

OracleRow oracle_row(const std::string& label, const ssk::EpsPolynomial& poly, double engine,
                     const ssk::RSPoint& point, const OracleConfig& c) {
  OracleRow row{label, engine, {}, 0.0};
  for (int n : c.n_grid)
    row.quadrature.push_back(ssk::nu0_polynomial_quadrature(poly, point, n, c.hermite_order));
  row.limit = ssk::richardson_limit(c.n_grid, row.quadrature);
  return row;
}

ssk::EpsPolynomial monomial_poly(const std::vector<int>& exps) {
  ssk::EpsPolynomial poly = ssk::EpsPolynomial::constant(1.0);
  const ssk::ReplicaMonomial mono(exps);
  for (int l = 0; l < mono.replicas(); ++l)
    for (int j = 0; j < mono.exponent(l); ++j) poly = poly * ssk::EpsPolynomial::eps(l);
  return poly;
}

Json oracle_json(const OracleRow& row, const OracleConfig& c) {
  Json values = Json::array();
  for (std::size_t i = 0; i < c.n_grid.size(); ++i)
    values.push_back({{"N", c.n_grid[i]}, {"quadrature", row.quadrature[i]}});
  const double delta = std::abs(row.limit - row.engine);
  return {{"label", row.label},     {"engine", row.engine},     {"quadrature", values},
          {"extrapolated", row.limit}, {"delta", delta}, {"pass", delta <= c.tol}};
}

int cmd_oracle1d(const Flags& f, const CLI::App& app) {
  const auto file = load_config_file(f.config_path);
  const auto tc = theory_config(file, f, app);
  const auto oc = oracle_config(file, f, app);
  // an RSPoint JSON (e.g. a theory report's point) may carry beta/h/mixture
  const auto point = ssk::rs_point(tc.mixture, tc.beta, tc.h, tc.tol);
  const ssk::ReplicaMonomial mono(oc.mono);
  const auto row = oracle_row(mono.to_string(), monomial_poly(oc.mono),
                              ssk::nu0_monomial(mono, point), point, oc);
  Json report;
  report["command"] = "oracle1d";
  report["config"] = theory_echo(tc);
  report["config"]["mono"] = oc.mono;
  report["config"]["n_grid"] = oc.n_grid;
  report["config"]["hermite_order"] = oc.hermite_order;
  report["point"] = ssk::to_json(point);
  report["oracle"] = oracle_json(row, oc);
  emit(f, report, "");
  return 0;
}

std::vector<double> beta_grid(double beta, int points) {
  if (points < 3 || points % 2 == 0)
    throw ssk::ConfigError("--free-energy needs an odd number of points >= 3");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = beta * i / (points - 1);
  return grid;
}

int cmd_simulate(const Flags& f, const CLI::App& app) {
  const auto file = load_config_file(f.config_path);
  const auto tc = theory_config(file, f, app);
  const auto ec = experiment_config(file, f, app, tc);
  const auto result = ssk::run_experiment(ec);
  Json report;
  report["command"] = "simulate";
  report["config"] = ssk::to_json(ec);
  report["result"] = ssk::to_json(result);
  if (app.count("--free-energy")) {
    report["config"]["free_energy_points"] = f.free_energy_points;
    report["free_energy"] =
        ssk::to_json(ssk::thermo_integrate_free_energy(ec, beta_grid(ec.beta, f.free_energy_points)));
  }
  emit(f, report, ssk::experiment_csv(result));
  return 0;
}

int cmd_verify(const Flags& f, const CLI::App& app) {
  const auto file = load_config_file(f.config_path);
  const auto tc = theory_config(file, f, app);
  const auto ec = experiment_config(file, f, app, tc);
  const auto oc = oracle_config(file, f, app);

  ssk::FluctuationReport rep;
  Json report;
  report["command"] = "verify";
  report["config"] = ssk::to_json(ec);
  report["config"]["matrix_variant"] = std::string(ssk::to_string(tc.variant));
  report["config"]["n_grid"] = oc.n_grid;
  report["config"]["hermite_order"] = oc.hermite_order;
  report["config"]["oracle_tol"] = oc.tol;
  report["theory"] = theory_section(tc, &rep);

  const auto result = ssk::run_experiment(ec);
  report["simulation"] = ssk::to_json(result);

  bool pass = true;
  Json table = Json::array();
  auto add = [&](const std::string& name, double theory, const ssk::EstimatorSummary& mc) {
    const double diff = mc.mean - theory;
    const double z = mc.std_error > 0.0 ? diff / mc.std_error : (diff == 0.0 ? 0.0 : INFINITY);
    const bool ok = std::abs(z) <= 3.0;
    pass = pass && ok;
    table.push_back({{"observable", name},
                     {"theory", theory},
                     {"mc", mc.mean},
                     {"stderr", mc.std_error},
                     {"z", std::isfinite(z) ? Json(z) : Json("inf")},
                     {"pass", ok}});
  };
  for (int l = 0; l < 7; ++l) add(std::string(ssk::kLimitNames[l]), rep.limits[l], result.estimates[l]);
  add("R12", rep.point.q, result.estimates[ssk::kOverlap]);
  add("R1", rep.point.r, result.estimates[ssk::kMagnetization]);
  report["z_table"] = table;

  Json oracle = Json::array();
  const std::vector<std::vector<int>> monos = {{1}, {1, 1}, {2}, {1, 1, 1, 1}, {1, 3}};
  for (const auto& m : monos) {
    const ssk::ReplicaMonomial mono(m);
    const auto row = oracle_row(mono.to_string(), monomial_poly(m), ssk::nu0_monomial(mono, rep.point),
                                rep.point, oc);
    oracle.push_back(oracle_json(row, oc));
  }
  const auto polys = ssk::y_polynomials(rep.point);
  for (std::size_t j = 0; j < polys.size(); ++j) {
    const auto row = oracle_row("Y" + std::to_string(j + 1), polys[j], rep.y[j], rep.point, oc);
    oracle.push_back(oracle_json(row, oc));
  }
  for (const auto& row : oracle) pass = pass && row.at("pass").get<bool>();
  report["oracle"] = oracle;
  report["pass"] = pass;
  emit(f, report, ssk::experiment_csv(result));
  return pass ? 0 : 1;
}

void print_error(const std::string& type, const std::string& message) {
  const Json err = {{"error", {{"type", type}, {"message", message}}}};
  std::cout << err.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("SSK_THREADS")) {
    const int count = std::atoi(threads);
    if (count > 0) omp_set_num_threads(count);
  }

  CLI::App app{"Spherical SK model: replica-symmetric theory, cavity oracle, Monte Carlo"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help message and exit");
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print this help message and exit");
    sub->add_option("--config", f.config_path, "JSON config file (flags override it)");
    sub->add_option("--out", f.out_path, "write the JSON report here instead of stdout");
    sub->add_flag("--csv", f.csv, "CSV export (to <out>.csv, or stdout without --out)");
    sub->add_option("--seed", f.seed, "64-bit seed");
    sub->add_option("--mixture", f.mixture, "p<degree>:<weight>[,...]");
    sub->add_option("--beta", f.beta, "inverse temperature");
    sub->add_option("--h", f.h, "external field");
    sub->add_option("--tol", f.tol, "fixed-point tolerance");
    sub->add_option("--variant", f.variant, "M matrix: as_printed | rederived");
  };
  auto mc = [&](CLI::App* sub) {
    sub->add_option("--N", f.n, "number of spins");
    sub->add_option("--n-disorder", f.n_disorder, "disorder samples");
    sub->add_option("--n-chains", f.n_chains, "chains per disorder sample (>= 4)");
    sub->add_option("--sweeps", f.sweeps, "measured steps per chain");
    sub->add_option("--burnin", f.burnin, "burn-in steps per chain");
    sub->add_option("--measure-every", f.measure_every, "steps between measurements");
    sub->add_option("--batches", f.batches, "batches for batch-means errors");
    sub->add_option("--dump", f.dump_path, "thinned-sample binary dump path");
    sub->add_option("--dump-every", f.dump_every, "steps between dumped configurations");
  };
  auto oracle = [&](CLI::App* sub) {
    sub->add_option("--mono", f.mono, "replica exponents, e.g. 1,3");
    sub->add_option("--n-grid", f.n_grid, "N values for the quadrature, e.g. 1000,10000,100000");
    sub->add_option("--hermite-order", f.hermite_order, "Gauss-Hermite order (>= 20)");
  };

  auto* theory = app.add_subcommand("theory", "fixed point, Y, M, v and limiting covariances");
  common(theory);
  auto* oracle1d = app.add_subcommand("oracle1d", "cavity quadrature oracle for one monomial");
  common(oracle1d);
  oracle(oracle1d);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo on the sphere");
  common(simulate);
  mc(simulate);
  simulate->add_option("--free-energy", f.free_energy_points,
                       "also integrate the free energy over [0, beta] with this many points");
  auto* verify = app.add_subcommand("verify", "theory vs simulation vs oracle");
  common(verify);
  mc(verify);
  oracle(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*theory) return cmd_theory(f, *theory);
    if (*oracle1d) return cmd_oracle1d(f, *oracle1d);
    if (*simulate) return cmd_simulate(f, *simulate);
    if (*verify) return cmd_verify(f, *verify);
  } catch (const ssk::RegionError& e) {
    print_error("region", e.what());
    return 2;
  } catch (const ssk::ConfigError& e) {
    print_error("config", e.what());
    return 2;
  } catch (const ssk::DomainError& e) {
    print_error("domain", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 2;
  }
  return 2;
}
