#include "json_io.hpp"

#include <cmath>
#include <cstdio>

#include "freemoments/error.hpp"

namespace freemoments::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::validation, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) bad("unknown field '" + key + "'");
  }
}

std::pair<const char*, const char*> param_names(DensityKind kind) {
  switch (kind) {
    case DensityKind::semicircle: return {"center", "radius"};
    case DensityKind::marchenko_pastur: return {"rate", "jump"};
    case DensityKind::cauchy: return {"center", "scale"};
    case DensityKind::uniform: return {"a", "b"};
  }
  return {"first", "second"};
}

DensityKind density_kind(const std::string& name) {
  if (name == "semicircle") return DensityKind::semicircle;
  if (name == "marchenko_pastur" || name == "mp" || name == "free_poisson") return DensityKind::marchenko_pastur;
  if (name == "cauchy") return DensityKind::cauchy;
  if (name == "uniform") return DensityKind::uniform;
  bad("unknown density '" + name + "'");
}

std::vector<Atom> atoms_from_json(const json& j) {
  if (!j.is_array()) bad("atoms must be an array of [location, weight] pairs");
  std::vector<Atom> atoms;
  for (const auto& a : j) {
    if (!a.is_array() || a.size() != 2) bad("each atom must be a [location, weight] pair");
    atoms.push_back({rational_from_json(a[0]), rational_from_json(a[1])});
  }
  return atoms;
}

json atoms_to_json(const std::vector<Atom>& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(json::array({to_json(a.location), to_json(a.weight)}));
  return out;
}

// Defaults: MP jump 1; semicircle center 0.
Density density_from_json(const json& j, const json& name_holder) {
  const DensityKind kind = density_kind(field(name_holder, "name").get<std::string>());
  const auto [first_name, second_name] = param_names(kind);
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (!params.is_object()) bad("params must be an object");
  for (const auto& [key, value] : params.items()) {
    if (key != first_name && key != second_name) bad("unknown parameter '" + key + "' for " + std::string(to_string(kind)));
  }
  Density d{kind, 0, 0, 1};
  if (params.contains(first_name)) {
    d.first = rational_from_json(params.at(first_name));
  } else if (kind == DensityKind::cauchy || kind == DensityKind::semicircle) {
    d.first = 0;
  } else {
    bad(std::string("missing parameter '") + first_name + "'");
  }
  if (params.contains(second_name)) {
    d.second = rational_from_json(params.at(second_name));
  } else if (kind == DensityKind::marchenko_pastur || kind == DensityKind::cauchy) {
    d.second = 1;
  } else if (kind == DensityKind::semicircle) {
    d.second = 2;
  } else {
    bad(std::string("missing parameter '") + second_name + "'");
  }
  if (j.contains("mass")) d.mass = rational_from_json(j.at("mass"));
  return d;
}

json density_to_json(const Density& d) {
  const auto [first_name, second_name] = param_names(d.kind);
  json params = json::object();
  params[first_name] = to_json(d.first);
  params[second_name] = to_json(d.second);
  return json{{"name", std::string(to_string(d.kind))}, {"params", params}, {"mass", to_json(d.mass)}};
}

Measure density_measure(const Density& d) {
  // The MP factory handles rates below 1 (atom at 0 plus a density part).
  if (d.kind == DensityKind::marchenko_pastur) return Measure::marchenko_pastur(d.first, d.second, d.mass);
  return Measure::combine({}, d);
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return Rational(std::to_string(j.get<unsigned long long>()));
  if (j.is_number_float()) bad("floating-point JSON numbers are not exact; write rationals as \"p/q\" strings");
  bad("expected a rational, got " + j.dump());
}

json to_json(const Rational& q) { return format_rational(q); }

std::vector<Rational> rationals_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

json to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

json complex_to_json(std::complex<double> z) { return json{{"re", real_to_json(z.real())}, {"im", real_to_json(z.imag())}}; }

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.find('/') != std::string::npos) return parse_rational(s).get_d();
    try {
      std::size_t used = 0;
      const double x = std::stod(s, &used);
      if (used == s.size()) return x;
    } catch (const std::exception&) {
    }
  }
  bad("expected a real number, got " + j.dump());
}

Blocks blocks_from_json(const json& j) {
  if (!j.is_array()) bad("blocks must be an array of arrays of integers");
  Blocks out;
  for (const auto& b : j) {
    if (!b.is_array()) bad("blocks must be an array of arrays of integers");
    std::vector<int> block;
    for (const auto& x : b) {
      if (!x.is_number_integer()) bad("block elements must be integers");
      block.push_back(x.get<int>());
    }
    out.push_back(std::move(block));
  }
  return out;
}

json to_json(const Blocks& blocks) {
  json out = json::array();
  for (const auto& b : blocks) out.push_back(b);
  return out;
}

Measure measure_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "discrete") {
    reject_unknown(j, {"kind", "atoms"});
    return Measure::discrete(atoms_from_json(field(j, "atoms")));
  }
  if (kind == "density") {
    reject_unknown(j, {"kind", "name", "params", "mass"});
    return density_measure(density_from_json(j, j));
  }
  if (kind == "mixed") {
    reject_unknown(j, {"kind", "atoms", "density"});
    const json& d = field(j, "density");
    reject_unknown(d, {"name", "params", "mass"});
    const Density density = density_from_json(d, d);
    auto atoms = atoms_from_json(field(j, "atoms"));
    if (density.kind == DensityKind::marchenko_pastur && density.first < 1) {
      return add_discrete(Measure::discrete(atoms), density_measure(density));
    }
    return Measure::combine(std::move(atoms), density);
  }
  bad("unknown measure kind '" + kind + "'");
}

json to_json(const Measure& mu) {
  if (mu.is_discrete()) return json{{"kind", "discrete"}, {"atoms", atoms_to_json(mu.atoms())}};
  if (mu.atoms().empty()) {
    json out{{"kind", "density"}};
    const json d = density_to_json(*mu.density());
    for (const auto& [k, v] : d.items()) out[k] = v;
    return out;
  }
  return json{{"kind", "mixed"}, {"atoms", atoms_to_json(mu.atoms())}, {"density", density_to_json(*mu.density())}};
}

Ensemble ensemble_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  Ensemble e;
  if (kind == "gue") {
    reject_unknown(j, {"kind", "scale", "shift", "dim", "trials", "seed", "threads", "budget"});
    e = Ensemble::gue();
  } else if (kind == "wishart") {
    reject_unknown(j, {"kind", "rate", "scale", "shift", "dim", "trials", "seed", "threads", "budget"});
    e = Ensemble::wishart(j.contains("rate") ? rational_from_json(j.at("rate")) : Rational(1));
  } else if (kind == "deterministic") {
    reject_unknown(j, {"kind", "measure", "scale", "shift", "dim", "trials", "seed", "threads", "budget"});
    e = Ensemble::deterministic(measure_from_json(field(j, "measure")));
  } else if (kind == "free_sum") {
    reject_unknown(j, {"kind", "parts", "scale", "shift", "dim", "trials", "seed", "threads", "budget"});
    const json& parts = field(j, "parts");
    if (!parts.is_array()) bad("parts must be an array");
    std::vector<Ensemble> list;
    for (const auto& p : parts) list.push_back(ensemble_from_json(p));
    e = Ensemble::free_sum(std::move(list));
  } else {
    bad("unknown ensemble kind '" + kind + "'");
  }
  if (j.contains("scale")) e = e.scaled(real_from_json(j.at("scale")));
  if (j.contains("shift")) e = e.shifted(real_from_json(j.at("shift")));
  return e;
}

json to_json(const Ensemble& e) {
  json out{{"kind", std::string(to_string(e.kind))}};
  switch (e.kind) {
    case EnsembleKind::wishart: out["rate"] = to_json(e.rate); break;
    case EnsembleKind::deterministic: out["measure"] = to_json(e.measure); break;
    case EnsembleKind::free_sum: {
      json parts = json::array();
      for (const auto& p : e.parts) parts.push_back(to_json(p));
      out["parts"] = parts;
      break;
    }
    case EnsembleKind::gue: break;
  }
  if (e.scale != 1.0) out["scale"] = real_to_json(e.scale);
  if (e.shift != 0.0) out["shift"] = real_to_json(e.shift);
  return out;
}

MatrixEnsembleSpec ensemble_spec_from_json(const json& j) {
  MatrixEnsembleSpec spec;
  spec.ensemble = ensemble_from_json(j);
  auto count = [&](const char* key, std::uint64_t fallback) -> std::uint64_t {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) return v.get<std::uint64_t>();
    if (v.is_string()) {
      try {
        std::size_t used = 0;
        const auto x = std::stoull(v.get<std::string>(), &used);
        if (used == v.get<std::string>().size()) return x;
      } catch (const std::exception&) {
      }
    }
    bad(std::string("'") + key + "' must be a nonnegative integer");
  };
  spec.dim = count("dim", spec.dim);
  spec.trials = count("trials", spec.trials);
  spec.seed = count("seed", spec.seed);
  spec.threads = static_cast<unsigned>(count("threads", spec.threads));
  if (j.contains("budget")) spec.budget = real_from_json(j.at("budget"));
  return spec;
}

json to_json(const MatrixEnsembleSpec& spec) {
  json out = to_json(spec.ensemble);
  out["dim"] = spec.dim;
  out["trials"] = spec.trials;
  out["seed"] = std::to_string(spec.seed);
  return out;
}

json to_json(const SupportBound& b) {
  return json{{"bound", to_json(b.bound)}, {"c", to_json(b.c)}, {"argmax", b.argmax}, {"exact", b.exact}};
}

json to_json(const MomentEstimate& est) {
  json mean = json::array(), se = json::array();
  for (double x : est.mean) mean.push_back(real_to_json(x));
  for (double x : est.stderr_) se.push_back(real_to_json(x));
  return json{{"p", est.p},           {"dim", est.dim},         {"trials", est.trials},
              {"mean", mean},         {"stderr", se},           {"warnings", est.warnings},
              {"prng", std::string(prng_name)}};
}

json to_json(const PredictionReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back(json{{"k", v.k},
                              {"mean", real_to_json(v.mean)},
                              {"target", real_to_json(v.target)},
                              {"allowed", real_to_json(v.allowed)}});
  }
  json allowed = json::array();
  for (double a : r.allowed) allowed.push_back(real_to_json(a));
  return json{{"pass", r.pass}, {"z", real_to_json(r.z)}, {"c", real_to_json(r.c)}, {"allowed", allowed},
              {"violations", violations}};
}

json to_json(const MomentTransferReport& r) {
  json out{{"order", r.order},
           {"sigma_has_moment", r.sigma_has_moment},
           {"even_order", r.even_order},
           {"support_positive", r.support_positive},
           {"support_negative", r.support_negative},
           {"support_minorized", r.support_minorized},
           {"support_majorized", r.support_majorized},
           {"converse_applies", r.converse_applies}};
  out["truncation_bound"] = r.truncation_bound ? to_json(*r.truncation_bound) : json(nullptr);
  return out;
}

json to_json(const TaylorEstimate& e) {
  json coeffs = json::array();
  for (std::size_t i = 0; i < e.coefficients.size(); ++i) {
    coeffs.push_back(json{{"i", i},
                          {"value", complex_to_json(e.coefficients[i])},
                          {"stability", real_to_json(e.stability[i])}});
  }
  return json{{"coefficients", coeffs},
              {"condition", real_to_json(e.condition)},
              {"ill_conditioned", e.ill_conditioned},
              {"real_coefficients", e.real_coefficients},
              {"points_used", e.points_used}};
}

namespace {

json dropped_json(const std::vector<DroppedPoint>& dropped) {
  json out = json::array();
  for (const auto& d : dropped) out.push_back(json{{"radius", real_to_json(d.radius)}, {"reason", d.reason}});
  return out;
}

json ray_json(const NontangentialRay& ray) {
  return json{{"alpha", real_to_json(ray.alpha)},
              {"beta", real_to_json(ray.beta)},
              {"theta", real_to_json(ray.theta)},
              {"levels", ray.levels}};
}

}  // namespace

json to_json(const RayTransformSamples& s) {
  json points = json::array();
  for (std::size_t i = 0; i < s.z.size(); ++i) {
    points.push_back(json{{"t", real_to_json(s.radii[i])},
                          {"z", complex_to_json(to_double(s.z[i]))},
                          {"L", complex_to_json(to_double(s.L[i]))},
                          {"R", complex_to_json(to_double(s.R[i]))},
                          {"residual", real_to_json(s.residuals[i])}});
  }
  return json{{"ray", ray_json(s.ray)},
              {"precision", s.precision == Precision::extended ? "extended" : "double"},
              {"points", points},
              {"dropped", dropped_json(s.dropped)}};
}

json to_json(const TaylorCheckReport& r) {
  json table = json::array();
  for (std::size_t i = 0; i < r.order; ++i) {
    table.push_back(json{{"i", i},
                         {"estimate", complex_to_json(r.estimate.coefficients[i])},
                         {"exact", to_json(r.exact_cumulants[i])},
                         {"deviation", real_to_json(r.deviations[i])},
                         {"stability", real_to_json(r.estimate.stability[i])}});
  }
  return json{{"order", r.order},
              {"pass", r.pass},
              {"tol", real_to_json(r.tol)},
              {"max_deviation", real_to_json(r.max_deviation)},
              {"coefficients", table},
              {"condition", real_to_json(r.estimate.condition)},
              {"ill_conditioned", r.estimate.ill_conditioned},
              {"real_coefficients", r.estimate.real_coefficients},
              {"points_used", r.estimate.points_used},
              {"retained_points", r.retained_points},
              {"max_residual", real_to_json(r.max_residual)},
              {"left_inverse_error", real_to_json(r.left_inverse_error)},
              {"dropped", dropped_json(r.dropped)}};
}

json to_json(const SuiteReport& r, bool timings) {
  json criteria = json::array();
  for (const auto& c : r.criteria) {
    json item{{"id", c.id}, {"name", c.name}, {"anchor", c.anchor}, {"tags", c.tags}, {"pass", c.pass},
              {"checks", c.checks}};
    if (timings) item["seconds"] = real_to_json(c.seconds);
    criteria.push_back(item);
  }
  return json{{"pass", r.pass}, {"criteria", criteria}};
}

json error_json(std::string_view code, const std::string& detail) {
  return json{{"error", std::string(code)}, {"detail", detail}};
}

}  // namespace freemoments::io
