#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgrf/bank_io.hpp"
#include "sgrf/covariance.hpp"
#include "sgrf/error.hpp"
#include "sgrf/field_io.hpp"
#include "sgrf/filterbank.hpp"
#include "sgrf/grid.hpp"
#include "sgrf/sampler.hpp"
#include "sgrf/spectrum.hpp"
#include "sgrf/validate.hpp"

namespace py = pybind11;

namespace {

py::array_t<double> field_array(const sgrf::FieldSample& f) {
  py::array_t<double> out({f.grid.rows(), f.grid.n_phi});
  std::copy(f.data.begin(), f.data.end(), out.mutable_data());
  return out;
}

py::dict curve_dict(const sgrf::CovarianceCurve& c) {
  py::dict d;
  d["name"] = c.name;
  d["gamma"] = c.gamma;
  d["cos_gamma"] = c.cos_gamma;
  d["analytic"] = c.analytic;
  d["empirical"] = c.empirical;
  d["standard_error"] = c.standard_error;
  d["samples"] = c.samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sgrf, mod) {
  mod.doc() = "Gaussian random fields on the sphere by latitude marching";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::exception<sgrf::Error>(mod, "SgrfError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const sgrf::Error& e) {
      const std::string message = e.code() + ": " + e.what();
      py::set_error(error_type.get_stored(), message.c_str());
    }
  });

  py::class_<sgrf::PowerSpectrum>(mod, "PowerSpectrum")
      .def_static("from_kappas", &sgrf::PowerSpectrum::from_kappas, py::arg("kappas"),
                  py::arg("amplitude") = 1.0)
      .def_static("from_squared_amplitude", &sgrf::PowerSpectrum::from_squared_amplitude,
                  py::arg("a_squared"), py::arg("amplitude") = 1.0)
      .def_property_readonly("order", &sgrf::PowerSpectrum::order)
      .def_property_readonly("amplitude", &sgrf::PowerSpectrum::amplitude)
      .def_property_readonly("kappas", [](const sgrf::PowerSpectrum& s) {
        return std::vector<sgrf::Complex>(s.kappas().begin(), s.kappas().end());
      })
      .def_property_readonly("lambdas", [](const sgrf::PowerSpectrum& s) {
        return std::vector<sgrf::Complex>(s.lambdas().begin(), s.lambdas().end());
      })
      .def_property_readonly("residues", [](const sgrf::PowerSpectrum& s) {
        return std::vector<sgrf::Complex>(s.residues().begin(), s.residues().end());
      })
      .def("power", [](const sgrf::PowerSpectrum& s, int l) { return sgrf::angular_power(s, l); },
           py::arg("l"));

  py::class_<sgrf::LatitudeGrid>(mod, "LatitudeGrid")
      .def_readonly("n", &sgrf::LatitudeGrid::n)
      .def_readonly("m_max", &sgrf::LatitudeGrid::m_max)
      .def_readonly("n_phi", &sgrf::LatitudeGrid::n_phi)
      .def_readonly("z", &sgrf::LatitudeGrid::z)
      .def_readonly("phi", &sgrf::LatitudeGrid::phi);
  mod.def("build_grid", &sgrf::build_grid, py::arg("n"), py::arg("m_max"), py::arg("n_phi"));

  py::class_<sgrf::FilterBank>(mod, "FilterBank")
      .def_property_readonly("grid", &sgrf::FilterBank::grid)
      .def_property_readonly("spectrum", &sgrf::FilterBank::spectrum)
      .def("transition", [](const sgrf::FilterBank& b, int m, int s) {
        return sgrf::Matrix(b.transition(m, s));
      })
      .def("innovation", [](const sgrf::FilterBank& b, int m, int s) {
        return sgrf::Matrix(b.innovation(m, s));
      })
      .def("equator_factor", [](const sgrf::FilterBank& b, int m) {
        return sgrf::Matrix(b.equator_factor(m));
      })
      .def("save", [](const sgrf::FilterBank& b, const std::string& path) {
        sgrf::save_bank(b, path);
      })
      .def("to_bytes", [](const sgrf::FilterBank& b) { return py::bytes(sgrf::serialize_bank(b)); })
      .def("__eq__", [](const sgrf::FilterBank& a, const sgrf::FilterBank& b) { return a == b; });
  mod.def("precompute", &sgrf::precompute, py::arg("spectrum"), py::arg("grid"),
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
  mod.def("load_bank", &sgrf::load_bank, py::arg("path"));

  py::class_<sgrf::FieldSample>(mod, "FieldSample")
      .def_readonly("grid", &sgrf::FieldSample::grid)
      .def_readonly("seed", &sgrf::FieldSample::seed)
      .def_readonly("sample", &sgrf::FieldSample::sample)
      .def_property_readonly("values", &field_array)
      .def("save", [](const sgrf::FieldSample& f, const sgrf::PowerSpectrum& spec,
                      const std::string& path) { sgrf::save_field(f, spec, path); })
      .def("save_csv", [](const sgrf::FieldSample& f, const std::string& path) {
        sgrf::save_field_csv(f, path);
      });
  mod.def("load_field", &sgrf::load_field, py::arg("path"));

  py::class_<sgrf::Sampler>(mod, "Sampler")
      .def(py::init<const sgrf::FilterBank&>(), py::keep_alive<1, 2>(), py::arg("bank"))
      .def("generate",
           [](sgrf::Sampler& s, std::uint64_t seed, std::uint64_t sample) {
             return s.generate(seed, sample);
           },
           py::arg("seed"), py::arg("sample") = 0, py::call_guard<py::gil_scoped_release>());

  mod.def("cross_covariance", &sgrf::cross_covariance, py::arg("spectrum"), py::arg("m"),
          py::arg("p"), py::arg("q"), py::arg("z1"), py::arg("z2"));
  mod.def("jmatrix", &sgrf::jmatrix, py::arg("spectrum"), py::arg("m"), py::arg("z1"),
          py::arg("z2"));
  mod.def(
      "analytic_covariance",
      [](const sgrf::PowerSpectrum& spec, double cos_gamma, int l_max) {
        if (l_max < 0) l_max = sgrf::required_l_max(spec);
        const auto v = sgrf::analytic_covariance(spec, cos_gamma, l_max);
        return py::make_tuple(v.value, v.tail_bound);
      },
      py::arg("spectrum"), py::arg("cos_gamma"), py::arg("l_max") = -1);
  mod.def("required_l_max", &sgrf::required_l_max, py::arg("spectrum"),
          py::arg("tol") = sgrf::kDefaultTailTolerance);

  mod.def(
      "convergence_study",
      [](const sgrf::PowerSpectrum& spec, const std::vector<int>& resolutions,
         std::uint64_t samples, std::uint64_t seed, int threads, bool rotate) {
        sgrf::StudyOptions o{samples, seed, threads, rotate};
        sgrf::ConvergenceReport r;
        {
          py::gil_scoped_release release;
          r = sgrf::convergence_study(spec, resolutions, o);
        }
        py::list results;
        for (const auto& res : r.results) {
          py::dict d;
          d["n"] = res.n;
          d["equator_error"] = res.equator_error;
          d["meridian_error"] = res.meridian_error;
          d["equator"] = curve_dict(res.equator);
          d["meridian"] = curve_dict(res.meridian);
          results.append(d);
        }
        py::dict out;
        out["results"] = results;
        out["equator_slope"] = r.equator_slope;
        out["meridian_slope"] = r.meridian_slope;
        out["samples"] = r.samples;
        out["seed"] = r.seed;
        return out;
      },
      py::arg("spectrum"), py::arg("resolutions"), py::arg("samples") = 40000,
      py::arg("seed") = 1, py::arg("threads") = 1, py::arg("rotate") = true);
}
