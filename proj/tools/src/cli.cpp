#include "wvgg/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "wvgg/errors.hpp"
#include "wvgg/io.hpp"
#include "wvgg/sd_engine.hpp"
#include "wvgg/wvgg_density.hpp"

namespace wvgg::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

Json load_config(const std::string& path) {
  if (path.empty()) throw DomainError("--config is required for this command");
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

const Json& options_of(const Json& cfg) {
  static const Json empty = Json::object();
  return cfg.contains("options") ? cfg.at("options") : empty;
}

template <class T>
T option(const Json& opts, const char* key, T fallback) {
  if (!opts.contains(key)) return fallback;
  try {
    return opts.at(key).get<T>();
  } catch (const Json::exception&) {
    throw DomainError(std::string("option '") + key + "' has the wrong type");
  }
}

std::vector<double> r_grid_from(const Json& opts) {
  const double lo = option(opts, "r_min", 1e-4);
  const double hi = option(opts, "r_max", 50.0);
  const int count = option(opts, "r_count", 200);
  if (count < 2) throw DomainError("option 'r_count' must be at least 2");
  return log_grid(lo, hi, count);
}

QuadOptions quad_from(const Json& opts) {
  QuadOptions q = density_quadrature();
  q.rel_tol = option(opts, "rel_tol", q.rel_tol);
  return q;
}

// Explicit "directions", else a deterministic grid of s_count points.
std::vector<Vector> directions_from(const Json& opts, int n, int default_count) {
  std::vector<Vector> out;
  if (opts.contains("directions")) {
    for (const auto& d : opts.at("directions")) {
      Vector s = vector_from_json(d, "directions");
      if (s.size() != n) throw DomainError("direction has the wrong dimension");
      if (!(s.norm() > 0.0)) throw DomainError("direction must be nonzero");
      out.push_back(s / s.norm());
    }
    return out;
  }
  const int count = option(opts, "s_count", default_count);
  if (count < 1) throw DomainError("option 's_count' must be positive");
  return sphere_grid(n, count);
}

// Writes to <prefix><suffix> when a prefix is given and echoes to `out` otherwise.
void emit(const RunConfig& cfg, const std::string& suffix, const std::string& text, std::ostream& out) {
  if (cfg.out_prefix.empty()) {
    out << text;
    return;
  }
  const std::string path = cfg.out_prefix + suffix;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path + "'");
  f << text;
  out << "wrote " << path << '\n';
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const Json j = load_config(cfg.config_file);
  const WvggParams p = params_from_json(j);
  const Json& o = options_of(j);
  ClassifyBudget b;
  b.seed = cfg.seed.value_or(option(o, "seed", kDefaultSeed));
  b.s_samples = option(o, "s_samples", b.s_samples);
  b.max_draws = option(o, "max_draws", b.max_draws);
  b.positive_fraction = option(o, "positive_fraction", b.positive_fraction);
  b.mono_s_samples = option(o, "mono_s_samples", b.mono_s_samples);
  b.mono_tol = option(o, "mono_tol", b.mono_tol);
  b.max_seconds = option(o, "max_seconds", b.max_seconds);
  b.scan.grid_points = option(o, "grid_points", b.scan.grid_points);
  if (o.contains("r_min") || o.contains("r_max") || o.contains("r_count")) b.mono_r_grid = r_grid_from(o);

  const ClassificationReport r = classify(p, b);
  Json doc = report_to_json(r);
  doc["subclass"] = subclass_to_json(identify_subclass(p));
  emit(cfg, ".report.json", doc.dump(2) + "\n", out);
  return kOk;
}

int cmd_density(const RunConfig& cfg, std::ostream& out) {
  const Json j = load_config(cfg.config_file);
  const WvggParams p = params_from_json(j);
  const Json& o = options_of(j);
  const auto grid = r_grid_from(o);
  const auto dirs = directions_from(o, p.dim(), 1);
  const QuadOptions q = quad_from(o);
  int status = kOk;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const DensityCurve c = density_curve(p, dirs[k], grid, q);
    std::ostringstream csv;
    write_csv(csv, c);
    emit(cfg, "_s" + std::to_string(k) + ".csv", csv.str(), out);
    if (c.status != QuadStatus::Finite) status = kNumericFailure;
  }
  return status;
}

int cmd_verify_lemmas(const RunConfig& cfg, std::ostream& out) {
  int draws = 1000;
  if (!cfg.config_file.empty()) draws = option(options_of(load_config(cfg.config_file)), "draws", draws);
  const auto checks = lemma_suites(cfg.seed.value_or(kDefaultSeed), draws);
  std::ostringstream table;
  bool all = true;
  for (const auto& c : checks) {
    table << c.name;
    if (!c.detail.empty()) table << ": " << c.detail;
    table << ' ' << (c.pass ? "PASS" : "FAIL") << '\n';
    all = all && c.pass;
  }
  emit(cfg, ".lemmas.txt", table.str(), out);
  return all ? kOk : kNumericFailure;
}

int cmd_usp(const RunConfig& cfg, std::ostream& out) {
  const Json j = load_config(cfg.config_file);
  const Vector mu = vector_from_json(j.at("mu"), "mu");
  const CovMatrix sigma = matrix_from_json(j.at("sigma"), "sigma");
  if (sigma.dim() != mu.size()) throw DomainError("mu and sigma dimensions differ");
  if (!sigma.invertible()) throw DomainError("sigma must be invertible");
  const Json& o = options_of(j);
  const Vector x = o.contains("x") ? vector_from_json(o.at("x"), "x") : mu;
  ScanOptions scan;
  scan.grid_points = option(o, "grid_points", scan.grid_points);
  scan.max_evaluations = option(o, "max_evaluations", scan.max_evaluations);
  const QuantityContext ctx(mu, sigma);
  const MembershipResult m = v_plus_member(ctx, x, scan);
  Json doc = infimum_to_json(m.evidence);
  doc["v_plus_member"] = to_string(m.member);
  emit(cfg, ".usp.json", doc.dump(2) + "\n", out);
  return kOk;
}

int cmd_counterexample(const RunConfig& cfg, std::ostream& out) {
  const Json j = load_config(cfg.config_file);
  const CounterexampleInput in = counterexample_input_from_json(j);
  const Json& o = options_of(j);
  CounterexampleGrid grid;
  grid.s_count = option(o, "s_count", grid.s_count);
  if (o.contains("r_min") || o.contains("r_max") || o.contains("r_count")) grid.r_grid = r_grid_from(o);
  grid.tol = option(o, "tol", grid.tol);
  const Counterexample c = build_sd_counterexample(in, grid);
  emit(cfg, ".counterexample.json", counterexample_to_json(c).dump(2) + "\n", out);
  return kOk;
}

std::vector<Vector> default_thetas(int n) {
  std::vector<Vector> out{Vector::Zero(n)};
  const Vector e1 = Vector::Unit(n, 0);
  const Vector diag = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  for (double t : {0.5, 1.0, 2.0, 4.0}) out.push_back(t * e1);
  for (double t : {0.5, 1.0, 2.0, 4.0}) out.push_back(t * diag);
  return out;
}

int cmd_char_exponent(const RunConfig& cfg, std::ostream& out) {
  const Json j = load_config(cfg.config_file);
  const WvggParams p = params_from_json(j);
  const Json& o = options_of(j);
  std::vector<Vector> thetas;
  if (o.contains("thetas")) {
    for (const auto& t : o.at("thetas")) thetas.push_back(vector_from_json(t, "thetas"));
  } else {
    thetas = default_thetas(p.dim());
  }
  const QuadOptions q = quad_from(o);
  std::ostringstream csv;
  csv << std::setprecision(17);
  for (int k = 0; k < p.dim(); ++k) csv << "theta_" << (k + 1) << ',';
  csv << "re,im\n";
  for (const auto& t : thetas) {
    if (t.size() != p.dim()) throw DomainError("theta has the wrong dimension");
    const auto psi = char_exponent(p, t, q);
    for (int k = 0; k < p.dim(); ++k) csv << t[k] << ',';
    csv << psi.real() << ',' << psi.imag() << '\n';
  }
  emit(cfg, ".char_exponent.csv", csv.str(), out);
  return kOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "classify") return cmd_classify(cfg, out);
    if (cfg.command == "density") return cmd_density(cfg, out);
    if (cfg.command == "verify-lemmas") return cmd_verify_lemmas(cfg, out);
    if (cfg.command == "usp") return cmd_usp(cfg, out);
    if (cfg.command == "counterexample") return cmd_counterexample(cfg, out);
    if (cfg.command == "char-exponent") return cmd_char_exponent(cfg, out);
    err << "unknown command '" << cfg.command << "'\n";
    return kInvalidConfig;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const NotApplicable& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const NotRaySupported& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const DomainError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const Json::exception& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-decomposability analysis of weak variance generalised gamma convolutions"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::uint64_t seed = 0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "Decide SD / NOT_SD / INCONCLUSIVE and write a JSON report"},
      {"density", "Tabulate the polar density r -> h_s(r) and its derivative as CSV"},
      {"verify-lemmas", "Run the matrix and Bessel invariant suites"},
      {"usp", "Estimate inf_u E(x, u) and membership of x in V+"},
      {"counterexample", "Build and verify the SD measure with nonzero drift"},
      {"char-exponent", "Tabulate the characteristic exponent on a theta grid"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", cfg.config_file, "JSON configuration file");
    sub->add_option("--seed", seed, "Seed for sampled directions");
    sub->add_option("--out", cfg.out_prefix, "Output path prefix");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kInvalidConfig;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
    if (sub->count("--seed") > 0) cfg.seed = seed;
  }
  return run(cfg, out, err);
}

}  // namespace wvgg::cli
