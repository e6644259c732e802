#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wvgg/cli.hpp"
#include "wvgg/errors.hpp"
#include "wvgg/io.hpp"
#include "wvgg/special_fn.hpp"

using namespace wvgg;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = WVGG_CONFIG_DIR;

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "wvgg_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "wvgg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Json, ParamsRoundTrip) {
  const Json j = Json::parse(R"({
    "d": [0.5, 0.5], "mu": [1, -0.5], "sigma": [[1, 0.2], [0.2, 1]],
    "measure": {"n": 2, "components": [
      {"kind": "atom", "mass": 2, "point": [1, 3]},
      {"kind": "ray", "direction": [1, 1], "density": {"name": "beta2", "a": 1.5, "b": 0.75}},
      {"kind": "ray", "direction": [1, 2], "density": {"name": "power_cut", "a": 2, "b": 1, "c": 0.5, "g": 1}},
      {"kind": "curve", "curve": "circle_theta2", "interval": [0, 1]}
    ]}})");
  const WvggParams p = params_from_json(j);
  EXPECT_EQ(p.dim(), 2);
  EXPECT_EQ(p.measure.components().size(), 4u);
  const Json back = params_to_json(p);
  const WvggParams q = params_from_json(back);
  EXPECT_EQ(params_to_json(q).dump(), back.dump());
  EXPECT_EQ(back["measure"]["components"][1]["density"]["b"].get<double>(), 0.75);
}

TEST(Json, FamiliesExpand) {
  EXPECT_EQ(measure_from_json(Json::parse(R"({"family": "alpha_gamma", "a": 0.5, "alpha": [1, 1]})")).components().size(), 3u);
  EXPECT_EQ(measure_from_json(Json::parse(R"({"family": "beta2_axes", "a": [1, 2], "b": [1, 3]})")).components().size(), 2u);
  EXPECT_EQ(measure_from_json(Json::parse(R"({"family": "circle", "parametrization": "theta"})")).dim(), 2);
}

TEST(Json, MalformedDocumentsRaiseDomainError) {
  EXPECT_THROW(params_from_json(Json::parse(R"({"mu": [1, 0]})")), DomainError);
  EXPECT_THROW(measure_from_json(Json::parse(R"({"family": "gh"})")), DomainError);
  EXPECT_THROW(measure_from_json(Json::parse(R"({"n": 2, "components": [{"kind": "blob"}]})")), DomainError);
  EXPECT_THROW(measure_from_json(Json::parse(
                   R"({"n": 2, "components": [{"kind": "ray", "direction": [1, 1], "density": {"name": "nope"}}]})")),
               DomainError);
  EXPECT_THROW(params_from_json(Json::parse(
                   R"({"mu": [1, 0], "sigma": [[1, 0.5], [0.4, 1]], "measure": {"family": "circle", "parametrization": "theta"}})")),
               DomainError);
}

TEST(Json, ReportLayout) {
  ClassificationReport r;
  r.verdict = Verdict::NOT_SD;
  r.rule = "Cor3.5(ii)";
  r.evidence.push_back({"interior_atom_mass", 0.5, 0.0});
  const Json j = report_to_json(r);
  EXPECT_EQ(j["verdict"], "NOT_SD");
  EXPECT_EQ(j["rule"], "Cor3.5(ii)");
  EXPECT_EQ(j["numeric_only"], false);
  EXPECT_EQ(j["evidence"][0]["name"], "interior_atom_mass");
  EXPECT_EQ(j["evidence"][0]["tol"], 0.0);
}

TEST(Csv, RoundTripsSeventeenDigits) {
  const WvggParams p = params_from_json(Json::parse(slurp(kConfigs / "atom_drift.json")));
  const Vector s = (Vector(2) << 0.6, 0.8).finished();
  const DensityCurve c = density_curve(p, s, log_grid(1e-4, 20, 25));
  std::ostringstream os;
  write_csv(os, c);
  std::string header;
  const auto rows = parse_csv(os.str(), &header);
  EXPECT_EQ(header, "s_1,s_2,r,h,dh,err");
  ASSERT_EQ(rows.size(), c.values.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 6u);
    EXPECT_EQ(rows[i][0], s[0]);
    EXPECT_EQ(rows[i][2], c.r_grid[i]);
    EXPECT_EQ(rows[i][3], c.values[i]);
    EXPECT_EQ(rows[i][4], c.deriv[i]);
    EXPECT_EQ(rows[i][5], c.quadrature_err[i]);
  }
}

TEST(Cli, ClassifyDriftlessWvag) {
  const Invocation r = invoke({"classify", "--config", (kConfigs / "wvag_driftless.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["verdict"], "SD");
  EXPECT_EQ(j["rule"], "Thm3.1(iii)");
  EXPECT_EQ(j["seed"], 20240601u);
}

TEST(Cli, DensityFirstRowMatchesClosedForm) {
  const Invocation r = invoke({"density", "--config", (kConfigs / "atom_driftless.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out, nullptr);
  ASSERT_EQ(rows.size(), 200u);
  EXPECT_DOUBLE_EQ(rows[0][2], 1e-4);
  const double ref = kappa_bessel(1.0, 2e-4) / M_PI;
  EXPECT_NEAR(rows[0][3], ref, 1e-12 * ref);
}

TEST(Cli, VerifyLemmasTable) {
  const Invocation r = invoke({"verify-lemmas"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("xi_extrema n=3: inf=5 sup=16 PASS"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(Cli, UspReportsMembership) {
  const Invocation r = invoke({"usp", "--config", (kConfigs / "circle_u2.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["v_plus_member"], "true");
  EXPECT_GT(j["value"].get<double>(), 0.0);
}

TEST(Cli, CharExponentTable) {
  const Invocation r = invoke({"char-exponent", "--config", (kConfigs / "vg_char.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "theta_1,theta_2,re,im");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0][2], -std::log(1.5), 1e-12);
}

TEST(Cli, OutputsAreDeterministic) {
  const fs::path dir = scratch();
  const std::string cfg = (kConfigs / "circle_u2.json").string();
  const fs::path quick = write_config("quick_u2.json", R"({
    "mu": [1, 0.5], "sigma": [[1, 0.3], [0.3, 2]],
    "measure": {"family": "circle", "parametrization": "theta_squared"},
    "options": {"s_samples": 16, "max_draws": 256, "mono_s_samples": 8}})");
  ASSERT_EQ(invoke({"classify", "--config", quick.string(), "--seed", "7", "--out", (dir / "a").string()}).code, 0);
  ASSERT_EQ(invoke({"classify", "--config", quick.string(), "--seed", "7", "--out", (dir / "b").string()}).code, 0);
  EXPECT_EQ(slurp(dir / "a.report.json"), slurp(dir / "b.report.json"));
  EXPECT_NE(slurp(dir / "a.report.json").find("\"seed\": 7"), std::string::npos);

  ASSERT_EQ(invoke({"density", "--config", cfg, "--out", (dir / "c").string()}).code, 0);
  ASSERT_EQ(invoke({"density", "--config", cfg, "--out", (dir / "d").string()}).code, 0);
  EXPECT_EQ(slurp(dir / "c_s0.csv"), slurp(dir / "d_s0.csv"));
}

TEST(Cli, InvalidConfigExitsOne) {
  EXPECT_EQ(invoke({"classify"}).code, 1);
  EXPECT_EQ(invoke({"classify", "--config", "/nonexistent/file.json"}).code, 1);
  EXPECT_EQ(invoke({"classify", "--config", write_config("bad.json", "{not json").string()}).code, 1);
  EXPECT_EQ(invoke({"density", "--config", write_config("bad_grid.json", R"({
    "mu": [0, 0], "sigma": [[1, 0], [0, 1]],
    "measure": {"n": 2, "components": [{"kind": "atom", "mass": 1, "point": [1, 1]}]},
    "options": {"r_count": 1}})").string()}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"classify", "--bogus"}).code, 1);
  const Invocation one_d = invoke({"density", "--config", write_config("one_d.json", R"({
    "mu": [1], "sigma": [[1]], "measure": {"n": 1, "components": [{"kind": "atom", "mass": 1, "point": [1]}]}})").string()});
  EXPECT_EQ(one_d.code, 1) << one_d.err;
}

TEST(Cli, NumericFailureExitsTwo) {
  // Tolerance −1 flags any step with positive density, so verification must fail.
  const Invocation r = invoke({"counterexample", "--config", write_config("cx_fail.json", R"({
    "c": 0.5, "alpha": [1, 1], "mu": [1, 0], "sigma": [[1, 0], [0, 1]],
    "options": {"s_count": 2, "r_count": 5, "tol": -1.0}})").string()});
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}).code, 0); }
