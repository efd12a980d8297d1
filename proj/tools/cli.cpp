#include "cli.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json_io.hpp"

#include "freemoments/error.hpp"

namespace freemoments::cli {

namespace {

using io::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::validation, what); }

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad("invalid JSON in " + what + ": " + e.what());
  }
}

/// Inline JSON when the argument starts with '{' or '[', otherwise a file path.
json load_json(const std::string& arg, const std::string& what) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return parse_json(arg, what);
  std::ifstream in(arg);
  if (!in) bad("cannot read " + what + " file '" + arg + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), what + " file '" + arg + "'");
}

std::vector<Rational> rational_list(const std::string& arg, const std::string& what) {
  const json j = parse_json(arg, what);
  return io::rationals_from_json(j);
}

Rational rational_arg(const std::string& arg) { return parse_rational(arg); }

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("re") && v.contains("im")) {
    return v.at("re").get<std::string>() + (v.at("im").get<std::string>().starts_with("-") ? " " : " +") +
           v.at("im").get<std::string>() + "i";
  }
  return v.dump();
}

// Top-level scalars as "key = value", arrays of scalars as indexed columns.
void render_table(const json& j, std::ostream& os) {
  std::vector<std::pair<std::string, const json*>> columns;
  for (const auto& [key, value] : j.items()) {
    const bool scalar_array = value.is_array() && !value.empty() &&
                              std::all_of(value.begin(), value.end(), [](const json& x) {
                                return x.is_primitive() || (x.is_object() && x.contains("re"));
                              });
    if (value.is_primitive()) {
      os << key << " = " << scalar_text(value) << "\n";
    } else if (scalar_array) {
      columns.emplace_back(key, &value);
    }
  }
  if (columns.empty()) return;
  std::size_t rows = 0;
  os << std::left << std::setw(6) << "i";
  for (const auto& [key, col] : columns) {
    rows = std::max(rows, col->size());
    os << std::setw(26) << key;
  }
  os << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    os << std::setw(6) << r + 1;
    for (const auto& [key, col] : columns) os << std::setw(26) << (r < col->size() ? scalar_text((*col)[r]) : "");
    os << "\n";
  }
}

struct Output {
  std::string path;
  bool table = false;
};

void add_output_flags(CLI::App* sub, Output& o) {
  sub->add_option("--out", o.path, "Write the JSON result to this file");
  sub->add_flag("--table", o.table, "Print a human-readable table instead of JSON on stdout");
}

void emit(const json& result, const Output& o, std::ostream& out) {
  if (!o.path.empty()) {
    std::ofstream f(o.path);
    if (!f) bad("cannot write '" + o.path + "'");
    f << result.dump(2) << "\n";
  }
  if (o.table) {
    render_table(result, out);
  } else if (o.path.empty()) {
    out << result.dump(2) << "\n";
  }
}

struct Handler {
  std::function<int()> run;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Free moments, cumulants, R-transforms and random-matrix checks", "freemoments"};
  app.require_subcommand(1);
  app.allow_extras(false);
  json result;
  int status = exit_ok;
  Output output;

  // nc
  auto* nc = app.add_subcommand("nc", "Non-crossing partitions");
  int nc_count = 0, nc_list = 0, nc_n = 0;
  std::string nc_kreweras, nc_lower, nc_upper, nc_check;
  nc->add_option("--count", nc_count, "Count NC(n) by enumeration");
  nc->add_option("--list", nc_list, "List NC(n) in canonical order");
  nc->add_option("--kreweras", nc_kreweras, "Kreweras complement of BLOCKS (with --n)");
  nc->add_option("--check", nc_check, "Is BLOCKS non-crossing (with --n)");
  nc->add_option("--lower", nc_lower, "Moebius value of [lower, upper] (with --upper, --n)");
  nc->add_option("--upper", nc_upper);
  nc->add_option("--n", nc_n, "Ground set size for block arguments");
  add_output_flags(nc, output);

  // cumulants / moments
  bool free_flag = false, classical_flag = false;
  std::string seq_arg, measure_arg;
  std::size_t order = 0;
  auto* cumulants = app.add_subcommand("cumulants", "Free or classical cumulants from moments");
  cumulants->add_flag("--free", free_flag, "Free cumulants (default)");
  cumulants->add_flag("--classical", classical_flag, "Classical cumulants");
  cumulants->add_option("--moments", seq_arg, "JSON list of moments m_1..m_p");
  cumulants->add_option("--measure", measure_arg, "Measure JSON (file or inline), with --order");
  cumulants->add_option("--order", order, "Number of cumulants");
  add_output_flags(cumulants, output);

  auto* moments_cmd = app.add_subcommand("moments", "Moments from free or classical cumulants, or of a measure");
  moments_cmd->add_flag("--free", free_flag, "Free cumulants (default)");
  moments_cmd->add_flag("--classical", classical_flag, "Classical cumulants");
  moments_cmd->add_option("--cumulants", seq_arg, "JSON list of cumulants k_1..k_p");
  moments_cmd->add_option("--measure", measure_arg, "Measure JSON (file or inline), with --order");
  moments_cmd->add_option("--order", order, "Number of moments");
  add_output_flags(moments_cmd, output);

  // freeconv
  std::string conv_a, conv_b;
  auto* freeconv = app.add_subcommand("freeconv", "Free (or classical) convolution of two moment sequences");
  freeconv->add_option("--a", conv_a, "Moments of the first law (JSON list) or a measure")->required();
  freeconv->add_option("--b", conv_b, "Moments of the second law (JSON list) or a measure")->required();
  freeconv->add_option("--order", order, "Order when an argument is a measure");
  freeconv->add_flag("--classical", classical_flag, "Classical convolution instead");
  add_output_flags(freeconv, output);

  // rseries
  std::string r_arg, inverse_arg;
  auto* rseries = app.add_subcommand("rseries", "R-series from moments, moments from an R-series, series inverse");
  rseries->add_option("--moments", seq_arg, "JSON list of moments: prints G(1/z), L, zK and R");
  rseries->add_option("--r", r_arg, "JSON list of R coefficients k_1..k_p: prints the moments");
  rseries->add_option("--inverse", inverse_arg, "JSON coefficients a_0..a_N: compositional inverse");
  add_output_flags(rseries, output);

  // support-bound
  std::string bound_moments;
  auto* support = app.add_subcommand("support-bound", "16 max |k_n|^(1/n) from free cumulants");
  support->add_option("--cumulants", seq_arg, "JSON list of free cumulants");
  support->add_option("--moments", bound_moments, "JSON list of moments");
  support->add_option("--measure", measure_arg, "Measure JSON (file or inline), with --order");
  support->add_option("--order", order, "Number of cumulants for --measure");
  add_output_flags(support, output);

  // rtransform / verify share the ray flags
  NontangentialRay ray;
  double inversion_tol = 1e-12;
  std::string precision = "extended";
  double verify_tol = 1e-5;
  std::string report_path;
  auto add_ray_flags = [&](CLI::App* sub) {
    sub->add_option("--alpha", ray.alpha, "Cone aperture: |Re z| < -alpha Im z");
    sub->add_option("--beta", ray.beta, "Region radius: |z| < beta");
    sub->add_option("--theta", ray.theta, "Ray angle from the negative imaginary axis");
    sub->add_option("--levels", ray.levels, "Radii beta 2^-j, j = 1..levels");
    sub->add_option("--precision", precision, "extended (50 digits) or double")
        ->check(CLI::IsMember({"extended", "double"}));
  };
  auto* rtransform = app.add_subcommand("rtransform", "Numeric R-transform of a measure on a nontangential ray");
  rtransform->add_option("--measure", measure_arg, "Measure JSON (file or inline)")->required();
  rtransform->add_option("--order", order, "Number of Taylor coefficients")->required();
  rtransform->add_option("--tol", inversion_tol, "Newton residual tolerance");
  rtransform->add_option("--report", report_path, "Write the JSON report to this file");
  add_ray_flags(rtransform);
  add_output_flags(rtransform, output);

  // levy
  std::string gamma_arg = "0", sigma_arg;
  auto* levy = app.add_subcommand("levy", "Cumulants and moments of nu(gamma, sigma)");
  levy->add_option("--gamma", gamma_arg, "Drift (rational)");
  levy->add_option("--sigma", sigma_arg, "Levy measure JSON (file or inline)")->required();
  levy->add_option("--order", order, "Number of cumulants and moments")->required();
  levy->add_flag("--classical", classical_flag, "Classical infinitely divisible law instead");
  add_output_flags(levy, output);

  // simulate
  std::string spec_arg, target_arg;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  double z_score = 3, allowance_c = 5;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo trace moments of a matrix ensemble");
  simulate->add_option("--spec", spec_arg, "Ensemble spec JSON (file or inline)")->required();
  simulate->add_option("--order", order, "Number of moments")->required();
  simulate->add_option("--seed", seed, "64-bit seed (overrides the spec)");
  simulate->add_option("--threads", threads, "Worker threads (results do not depend on it)");
  simulate->add_option("--target", target_arg, "JSON list of predicted moments to compare with");
  simulate->add_option("--z", z_score, "Standard errors allowed in the comparison");
  simulate->add_option("--c", allowance_c, "Finite-N allowance c p^2 / N");
  add_output_flags(simulate, output);

  // verify
  std::vector<std::string> only;
  bool corrupt = false, timings = false;
  auto* verify = app.add_subcommand("verify", "Taylor check for one measure, or the full acceptance battery");
  verify->add_option("--measure", measure_arg, "Check R's Taylor coefficients for this measure");
  verify->add_option("--order", order, "Number of coefficients (default 4)");
  verify->add_option("--tol", verify_tol, "Tolerance on coefficient deviations");
  add_ray_flags(verify);
  verify->add_option("--only", only, "Criterion numbers, names or tags (comma separated)")->delimiter(',');
  verify->add_flag("--corrupt-semicircle", corrupt, "Negative control: corrupt the semicircle target moments");
  verify->add_option("--seed", seed, "Seed for the random parts of the battery");
  verify->add_option("--threads", threads, "Worker threads for the Monte Carlo criterion");
  verify->add_flag("--timings", timings, "Include per-criterion runtimes");
  add_output_flags(verify, output);

  auto measure_moments = [&](const std::string& arg, const char* what) {
    if (order == 0) bad(std::string("--order is required with ") + what);
    return moments(io::measure_from_json(load_json(arg, "measure")), order);
  };
  auto kind = [&] {
    if (free_flag && classical_flag) bad("--free and --classical are exclusive");
    return classical_flag ? CumulantKind::classical : CumulantKind::free;
  };
  auto inversion_options = [&] {
    InversionOptions opts;
    opts.tol = inversion_tol;
    opts.precision = precision == "double" ? Precision::double_precision : Precision::extended;
    return opts;
  };

  try {
    std::vector<const char*> argv{"freemoments"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    out << io::error_json("validation", e.what()).dump(2) << "\n";
    return exit_validation;
  }

  try {
    if (nc->parsed()) {
      const int modes = (nc_count > 0) + (nc_list > 0) + !nc_kreweras.empty() + !nc_check.empty() + !nc_lower.empty();
      if (modes != 1) bad("nc needs exactly one of --count, --list, --kreweras, --check, --lower/--upper");
      if (nc_count > 0) {
        result = json{{"n", nc_count}, {"count", enumerate_nc(nc_count).size()}};
      } else if (nc_list > 0) {
        json list = json::array();
        for (const auto& p : enumerate_nc(nc_list)) list.push_back(io::to_json(p.blocks()));
        result = json{{"n", nc_list}, {"count", list.size()}, {"partitions", list}};
      } else {
        if (nc_n <= 0) bad("--n is required with block arguments");
        if (!nc_kreweras.empty()) {
          const auto p = NCPartition::from_blocks(nc_n, io::blocks_from_json(parse_json(nc_kreweras, "--kreweras")));
          result = json{{"n", nc_n}, {"blocks", io::to_json(p.blocks())},
                        {"kreweras", io::to_json(kreweras_complement(p).blocks())}};
        } else if (!nc_check.empty()) {
          const auto blocks = io::blocks_from_json(parse_json(nc_check, "--check"));
          result = json{{"n", nc_n}, {"blocks", io::to_json(blocks)}, {"noncrossing", is_noncrossing(nc_n, blocks)}};
        } else {
          if (nc_upper.empty()) bad("--lower needs --upper");
          const NCInterval interval(NCPartition::from_blocks(nc_n, io::blocks_from_json(parse_json(nc_lower, "--lower"))),
                                    NCPartition::from_blocks(nc_n, io::blocks_from_json(parse_json(nc_upper, "--upper"))));
          result = json{{"n", nc_n}, {"mobius", mobius_nc(interval).get_str()}};
        }
      }
    } else if (cumulants->parsed()) {
      const MomentSequence m = !seq_arg.empty() ? MomentSequence{rational_list(seq_arg, "--moments")}
                               : !measure_arg.empty() ? measure_moments(measure_arg, "--measure")
                                                      : (bad("cumulants needs --moments or --measure"), MomentSequence{});
      const auto k = kind() == CumulantKind::free ? free_cumulants_from_moments(m) : classical_cumulants_from_moments(m);
      result = json{{"kind", std::string(to_string(k.kind))}, {"k", io::to_json(k.k)}};
    } else if (moments_cmd->parsed()) {
      if (!seq_arg.empty()) {
        const CumulantSequence k{rational_list(seq_arg, "--cumulants"), kind()};
        const auto m = k.kind == CumulantKind::free ? moments_from_free_cumulants(k) : moments_from_classical_cumulants(k);
        result = json{{"kind", std::string(to_string(k.kind))}, {"m", io::to_json(m.m)}};
      } else if (!measure_arg.empty()) {
        result = json{{"m", io::to_json(measure_moments(measure_arg, "--measure").m)}};
      } else {
        bad("moments needs --cumulants or --measure");
      }
    } else if (freeconv->parsed()) {
      auto sequence = [&](const std::string& arg) {
        const json j = load_json(arg, "sequence");
        if (j.is_array()) return MomentSequence{io::rationals_from_json(j)};
        if (order == 0) bad("--order is required when a convolution argument is a measure");
        return moments(io::measure_from_json(j), order);
      };
      const auto a = sequence(conv_a), b = sequence(conv_b);
      const auto m = classical_flag ? classical_convolve(a, b) : free_convolve(a, b);
      result = json{{"kind", classical_flag ? "classical" : "free"}, {"m", io::to_json(m.m)}};
    } else if (rseries->parsed()) {
      const int modes = !seq_arg.empty() + !r_arg.empty() + !inverse_arg.empty();
      if (modes != 1) bad("rseries needs exactly one of --moments, --r, --inverse");
      if (!seq_arg.empty()) {
        const auto chain = r_transform_chain(MomentSequence{rational_list(seq_arg, "--moments")});
        result = json{{"r", io::to_json(chain.r.coeffs())},
                      {"g", io::to_json(chain.g.coeffs())},
                      {"l", io::to_json(chain.l.coeffs())},
                      {"zk", io::to_json(chain.zk.coeffs())}};
      } else if (!r_arg.empty()) {
        result = json{{"m", io::to_json(moments_from_r_series(TruncatedSeries(rational_list(r_arg, "--r"))).m)}};
      } else {
        const auto coeffs = rational_list(inverse_arg, "--inverse");
        if (coeffs.empty()) bad("--inverse needs at least one coefficient");
        result = json{{"inverse", io::to_json(series_comp_inverse(TruncatedSeries(coeffs)).coeffs())}};
      }
    } else if (support->parsed()) {
      CumulantSequence k;
      if (!seq_arg.empty()) {
        k = CumulantSequence{rational_list(seq_arg, "--cumulants"), CumulantKind::free};
      } else if (!bound_moments.empty()) {
        k = free_cumulants_from_moments(MomentSequence{rational_list(bound_moments, "--moments")});
      } else if (!measure_arg.empty()) {
        k = free_cumulants_from_moments(measure_moments(measure_arg, "--measure"));
      } else {
        bad("support-bound needs --cumulants, --moments or --measure");
      }
      result = io::to_json(support_bound_from_cumulants(k));
    } else if (rtransform->parsed()) {
      ray.validate();
      const Measure mu = io::measure_from_json(load_json(measure_arg, "measure"));
      const auto samples = invert_g_on_ray(mu, ray, inversion_options());
      result = io::to_json(samples);
      result["fit"] = io::to_json(estimate_taylor_on_ray(samples, order));
      if (!report_path.empty() && output.path.empty()) output.path = report_path;
    } else if (levy->parsed()) {
      const LevyPair lp{rational_arg(gamma_arg), io::measure_from_json(load_json(sigma_arg, "sigma"))};
      const auto k = classical_flag ? classical_cumulants_from_levy(lp, order) : free_cumulants_from_levy(lp, order);
      const auto m = classical_flag ? moments_of_classical_id(lp, order) : moments_of_free_id(lp, order);
      result = json{{"gamma", io::to_json(lp.gamma)}, {"sigma", io::to_json(lp.sigma)},
                    {"kind", std::string(to_string(k.kind))}, {"k", io::to_json(k.k)}, {"m", io::to_json(m.m)}};
      result["moment_transfer"] = io::to_json(diagnose_moment_transfer(lp, order));
    } else if (simulate->parsed()) {
      auto spec = io::ensemble_spec_from_json(load_json(spec_arg, "spec"));
      if (seed) spec.seed = *seed;
      if (threads > 0) spec.threads = threads;
      const auto est = sample_trace_moments(spec, order);
      result = json{{"spec", io::to_json(spec)}, {"estimate", io::to_json(est)}};
      if (!target_arg.empty()) {
        const auto report = compare_to_prediction(est, MomentSequence{rational_list(target_arg, "--target")}, z_score,
                                                  allowance_c);
        result["comparison"] = io::to_json(report);
      }
    } else if (verify->parsed()) {
      if (!measure_arg.empty()) {
        ray.validate();
        const auto report = verify_taylor_expansion(io::measure_from_json(load_json(measure_arg, "measure")),
                                                    order == 0 ? 4 : order, ray, verify_tol, inversion_options());
        result = io::to_json(report);
        status = report.pass ? exit_ok : exit_numeric;
      } else {
        SuiteConfig config;
        config.only.insert(only.begin(), only.end());
        config.corrupt_semicircle = corrupt;
        if (seed) config.seed = *seed;
        if (threads > 0) config.threads = threads;
        const auto report = run_suite(config);
        result = io::to_json(report, timings);
        status = report.pass ? exit_ok : exit_numeric;
      }
    }
    emit(result, output, out);
    return status;
  } catch (const Error& e) {
    out << io::error_json(to_string(e.code()), e.what()).dump(2) << "\n";
    return is_numeric_failure(e.code()) ? exit_numeric : exit_validation;
  } catch (const json::exception& e) {
    out << io::error_json("validation", e.what()).dump(2) << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    out << io::error_json("internal", e.what()).dump(2) << "\n";
    return exit_numeric;
  }
}

}  // namespace freemoments::cli
