#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "json_io.hpp"

#include "freemoments/error.hpp"

namespace py = pybind11;
using namespace freemoments;
using io::json;

namespace {

std::vector<Rational> parse_list(const std::vector<std::string>& values) { return parse_rationals(values); }

std::vector<std::string> format_list(const std::vector<Rational>& values) { return format_rationals(values); }

Measure measure_of(const std::string& text) { return io::measure_from_json(json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Free moments, cumulants, R-transforms and random-matrix checks";

  static py::exception<Error> error_type(m, "FreeMomentsError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type.ptr())(std::string(to_string(e.code())) + ": " + e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("nc_count", [](int n) { return enumerate_nc(n).size(); }, py::arg("n"));
  m.def(
      "enumerate_nc",
      [](int n) {
        std::vector<Blocks> out;
        for (const auto& p : enumerate_nc(n)) out.push_back(p.blocks());
        return out;
      },
      py::arg("n"));
  m.def("is_noncrossing", [](int n, const Blocks& b) { return is_noncrossing(n, b); }, py::arg("n"), py::arg("blocks"));
  m.def(
      "kreweras_complement",
      [](int n, const Blocks& b) { return kreweras_complement(NCPartition::from_blocks(n, b)).blocks(); }, py::arg("n"),
      py::arg("blocks"));
  m.def(
      "mobius",
      [](int n, const Blocks& lower, const Blocks& upper) {
        return mobius_nc(NCInterval(NCPartition::from_blocks(n, lower), NCPartition::from_blocks(n, upper))).get_str();
      },
      py::arg("n"), py::arg("lower"), py::arg("upper"));

  m.def(
      "free_cumulants", [](const std::vector<std::string>& mom) {
        return format_list(free_cumulants_from_moments(MomentSequence{parse_list(mom)}).k);
      },
      py::arg("moments"));
  m.def(
      "moments_from_free_cumulants",
      [](const std::vector<std::string>& k) {
        return format_list(moments_from_free_cumulants(CumulantSequence{parse_list(k), CumulantKind::free}).m);
      },
      py::arg("cumulants"));
  m.def(
      "classical_cumulants",
      [](const std::vector<std::string>& mom) {
        return format_list(classical_cumulants_from_moments(MomentSequence{parse_list(mom)}).k);
      },
      py::arg("moments"));
  m.def(
      "moments_from_classical_cumulants",
      [](const std::vector<std::string>& k) {
        return format_list(moments_from_classical_cumulants(CumulantSequence{parse_list(k), CumulantKind::classical}).m);
      },
      py::arg("cumulants"));
  m.def(
      "free_convolve",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return format_list(free_convolve(MomentSequence{parse_list(a)}, MomentSequence{parse_list(b)}).m);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "classical_convolve",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return format_list(classical_convolve(MomentSequence{parse_list(a)}, MomentSequence{parse_list(b)}).m);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "r_series", [](const std::vector<std::string>& mom) {
        return format_list(r_series_from_moments(MomentSequence{parse_list(mom)}).coeffs());
      },
      py::arg("moments"));
  m.def(
      "series_inverse",
      [](const std::vector<std::string>& c) { return format_list(series_comp_inverse(TruncatedSeries(parse_list(c))).coeffs()); },
      py::arg("coefficients"));
  m.def(
      "support_bound_json",
      [](const std::vector<std::string>& k) {
        return io::to_json(support_bound_from_cumulants(CumulantSequence{parse_list(k), CumulantKind::free})).dump();
      },
      py::arg("cumulants"));

  m.def(
      "measure_moments", [](const std::string& measure, std::size_t p) { return format_list(moments(measure_of(measure), p).m); },
      py::arg("measure_json"), py::arg("order"));
  m.def(
      "cauchy_transform",
      [](const std::string& measure, std::complex<double> z) { return cauchy_transform(measure_of(measure), z); },
      py::arg("measure_json"), py::arg("z"));
  m.def(
      "verify_taylor_json",
      [](const std::string& measure, std::size_t order, double tol, double alpha, double beta, double theta, int levels) {
        NontangentialRay ray{alpha, beta, theta, levels};
        ray.validate();
        py::gil_scoped_release release;
        return io::to_json(verify_taylor_expansion(measure_of(measure), order, ray, tol)).dump();
      },
      py::arg("measure_json"), py::arg("order"), py::arg("tol") = 1e-5, py::arg("alpha") = 1.0, py::arg("beta") = 0.1,
      py::arg("theta") = 0.0, py::arg("levels") = 40);
  m.def(
      "levy_json",
      [](const std::string& gamma, const std::string& sigma, std::size_t order, bool classical) {
        const LevyPair lp{parse_rational(gamma), measure_of(sigma)};
        const auto k = classical ? classical_cumulants_from_levy(lp, order) : free_cumulants_from_levy(lp, order);
        const auto mom = classical ? moments_of_classical_id(lp, order) : moments_of_free_id(lp, order);
        json out{{"k", io::to_json(k.k)}, {"m", io::to_json(mom.m)}};
        out["moment_transfer"] = io::to_json(diagnose_moment_transfer(lp, order));
        return out.dump();
      },
      py::arg("gamma"), py::arg("sigma_json"), py::arg("order"), py::arg("classical") = false);
  m.def(
      "simulate_json",
      [](const std::string& spec_text, std::size_t order) {
        const auto spec = io::ensemble_spec_from_json(json::parse(spec_text));
        py::gil_scoped_release release;
        return io::to_json(sample_trace_moments(spec, order)).dump();
      },
      py::arg("spec_json"), py::arg("order"));
  m.def(
      "run_suite_json",
      [](const std::vector<std::string>& only, bool corrupt_semicircle) {
        SuiteConfig config;
        config.only.insert(only.begin(), only.end());
        config.corrupt_semicircle = corrupt_semicircle;
        py::gil_scoped_release release;
        return io::to_json(run_suite(config), false).dump();
      },
      py::arg("only") = std::vector<std::string>{}, py::arg("corrupt_semicircle") = false);
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        const int code = cli::run(args, out);
        return std::make_pair(code, out.str());
      },
      py::arg("args"));
}
