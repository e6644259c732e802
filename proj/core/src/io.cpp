#include "wvgg/io.hpp"

#include <cmath>
#include <string>

#include "wvgg/errors.hpp"

namespace wvgg {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing key '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw DomainError(std::string("'") + what + "' must be a number");
  return j.get<double>();
}

double number_at(const Json& j, const char* key) { return number(require(j, key), key); }

RadialDensity density_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("density must be an object");
  const Json& name = require(j, "name");
  if (!name.is_string()) throw DomainError("density 'name' must be a string");
  DensityParams params;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    params[key] = number(value, key.c_str());
  }
  const auto& registry = DensityRegistry::global();
  const std::string n = name.get<std::string>();
  if (!registry.contains(n)) throw DomainError("unknown density '" + n + "'");
  return registry.make(n, params);
}

Json density_to_json(const RadialDensity& w) {
  Json j;
  j["name"] = w.name;
  // Infinite bounds are the defaults and have no JSON representation.
  for (const auto& [key, value] : w.params) {
    if (std::isfinite(value)) j[key] = value;
  }
  return j;
}

MeasureComponent component_from_json(const Json& j) {
  const Json& kind = require(j, "kind");
  if (!kind.is_string()) throw DomainError("component 'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "atom") return Atom{number_at(j, "mass"), vector_from_json(require(j, "point"), "point")};
  if (k == "ray") return Ray{vector_from_json(require(j, "direction"), "direction"), density_from_json(require(j, "density"))};
  if (k == "curve") {
    const Json& name = require(j, "curve");
    if (!name.is_string()) throw DomainError("'curve' must be a string");
    double lo = 0.0;
    double hi = 1.0;
    if (j.contains("interval")) {
      const Json& iv = j.at("interval");
      if (!iv.is_array() || iv.size() != 2) throw DomainError("'interval' must be [lo, hi]");
      lo = number(iv[0], "interval");
      hi = number(iv[1], "interval");
      if (!(hi > lo)) throw DomainError("'interval' must satisfy lo < hi");
    }
    return circle_curve(name.get<std::string>(), lo, hi);
  }
  throw DomainError("unknown component kind '" + k + "'");
}

std::vector<double> doubles(const Json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string("'") + what + "' must be an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

ThorinMeasure family_from_json(const Json& j) {
  const std::string family = require(j, "family").get<std::string>();
  if (family == "alpha_gamma") return alpha_gamma_measure(number_at(j, "a"), vector_from_json(require(j, "alpha"), "alpha"));
  if (family == "beta2") {
    return beta2_measure(number_at(j, "a"), number_at(j, "b"), vector_from_json(require(j, "direction"), "direction"));
  }
  if (family == "beta2_axes") return beta2_axes_measure(doubles(require(j, "a"), "a"), doubles(require(j, "b"), "b"));
  if (family == "circle") return circle_measure(require(j, "parametrization").get<std::string>());
  throw DomainError("unknown measure family '" + family + "'");
}

}  // namespace

Vector vector_from_json(const Json& j, const char* what) {
  const std::vector<double> xs = doubles(j, what);
  if (xs.empty()) throw DomainError(std::string("'") + what + "' must be nonempty");
  Vector v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v[static_cast<Eigen::Index>(i)] = xs[i];
  return v;
}

Json vector_to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) j.push_back(v[k]);
  return j;
}

CovMatrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw DomainError(std::string("'") + what + "' must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::vector<double> row = doubles(j[static_cast<std::size_t>(r)], what);
    if (static_cast<Eigen::Index>(row.size()) != n) throw DomainError(std::string("'") + what + "' must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return CovMatrix(m);
}

ThorinMeasure measure_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("measure must be an object");
  if (j.contains("family")) return family_from_json(j);
  const Json& comps = require(j, "components");
  if (!comps.is_array() || comps.empty()) throw DomainError("'components' must be a nonempty array");
  std::vector<MeasureComponent> out;
  for (const auto& c : comps) out.push_back(component_from_json(c));
  int n = 0;
  if (j.contains("n")) {
    n = require(j, "n").get<int>();
  } else if (const auto* a = std::get_if<Atom>(&out.front())) {
    n = static_cast<int>(a->point.size());
  } else if (const auto* r = std::get_if<Ray>(&out.front())) {
    n = static_cast<int>(r->direction.size());
  } else {
    n = 2;
  }
  return ThorinMeasure(n, std::move(out));
}

Json measure_to_json(const ThorinMeasure& u) {
  Json comps = Json::array();
  for (const auto& c : u.components()) {
    Json e;
    if (const auto* a = std::get_if<Atom>(&c)) {
      e["kind"] = "atom";
      e["mass"] = a->mass;
      e["point"] = vector_to_json(a->point);
    } else if (const auto* r = std::get_if<Ray>(&c)) {
      e["kind"] = "ray";
      e["direction"] = vector_to_json(r->direction);
      e["density"] = density_to_json(r->density);
    } else {
      const auto& cv = std::get<Curve>(c);
      e["kind"] = "curve";
      e["curve"] = cv.name;
      e["interval"] = {cv.lower, cv.upper};
    }
    comps.push_back(std::move(e));
  }
  return Json{{"n", u.dim()}, {"components", std::move(comps)}};
}

WvggParams params_from_json(const Json& j) {
  try {
    const Vector mu = vector_from_json(require(j, "mu"), "mu");
    const int n = static_cast<int>(mu.size());
    if (j.contains("n") && j.at("n").get<int>() != n) throw DomainError("'n' does not match the length of 'mu'");
    const Vector d = j.contains("d") ? vector_from_json(j.at("d"), "d") : Vector::Zero(n);
    CovMatrix sigma = matrix_from_json(require(j, "sigma"), "sigma");
    ThorinMeasure u = j.contains("measure") ? measure_from_json(j.at("measure")) : measure_from_json(j);
    return WvggParams(d, mu, std::move(sigma), std::move(u));
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed params: ") + e.what());
  }
}

Json params_to_json(const WvggParams& p) {
  Json sigma = Json::array();
  for (Eigen::Index r = 0; r < p.sigma.matrix().rows(); ++r) sigma.push_back(vector_to_json(p.sigma.matrix().row(r).transpose()));
  return Json{{"n", p.dim()},
              {"d", vector_to_json(p.d)},
              {"mu", vector_to_json(p.mu)},
              {"sigma", std::move(sigma)},
              {"measure", measure_to_json(p.measure)}};
}

Json report_to_json(const ClassificationReport& r) {
  Json ev = Json::array();
  for (const auto& e : r.evidence) ev.push_back(Json{{"name", e.name}, {"value", e.value}, {"tol", e.tol}});
  return Json{{"verdict", to_string(r.verdict)},
              {"rule", r.rule},
              {"numeric_only", r.numeric_only},
              {"evidence", std::move(ev)},
              {"notes", r.notes},
              {"seed", r.seed}};
}

Json subclass_to_json(const SubclassTag& t) { return Json{{"tags", t.names()}, {"drift_zero", t.drift_zero}}; }

Json infimum_to_json(const InfimumEstimate& e) {
  return Json{{"value", e.value},
              {"argmin_v", vector_to_json(e.argmin_v)},
              {"permutation", e.permutation},
              {"boundary", e.boundary},
              {"certified_positive", e.certified_positive},
              {"uncertainty", e.uncertainty},
              {"grid_value", e.grid_value},
              {"evaluations", e.evaluations}};
}

CounterexampleInput counterexample_input_from_json(const Json& j) {
  try {
    CounterexampleInput in;
    in.c = j.contains("c") ? number_at(j, "c") : 0.5;
    in.alpha = vector_from_json(require(j, "alpha"), "alpha");
    in.mu = vector_from_json(require(j, "mu"), "mu");
    in.sigma = matrix_from_json(require(j, "sigma"), "sigma");
    in.d = j.contains("d") ? vector_from_json(j.at("d"), "d") : Vector::Zero(in.alpha.size());
    if (j.contains("axis")) {
      for (const auto& a : j.at("axis")) {
        if (a.is_null()) {
          in.axis.emplace_back(std::nullopt);
        } else {
          in.axis.emplace_back(density_from_json(a));
        }
      }
    }
    return in;
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed counterexample config: ") + e.what());
  }
}

Json counterexample_to_json(const Counterexample& c) {
  Json flags = Json::array();
  for (const auto& f : c.verification) {
    flags.push_back(Json{{"s", vector_to_json(f.s)},
                         {"nonincreasing", f.nonincreasing},
                         {"r0", f.r0},
                         {"margin", f.margin},
                         {"status", to_string(f.status)}});
  }
  Json j{{"a", c.a},     {"b", c.b},         {"g", c.g},         {"h", c.h},
         {"e_bar", c.e_bar}, {"a_low", c.a_low}, {"b_low", c.b_low}, {"verified", c.verified},
         {"verification", std::move(flags)}};
  if (c.params) j["params"] = params_to_json(*c.params);
  return j;
}

}  // namespace wvgg
