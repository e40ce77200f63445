#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "interpnet/absorption.hpp"
#include "interpnet/activations.hpp"
#include "interpnet/errors.hpp"
#include "interpnet/model_io.hpp"
#include "interpnet/sqann.hpp"
#include "interpnet/tnn.hpp"

namespace py = pybind11;
using namespace interpnet;

namespace {

Dataset make_dataset(const std::vector<Vector>& xs, const std::vector<Vector>& ys) {
  return Dataset::from_rows(xs, ys);
}

py::dict neuron_dict(const NeuronRef& n) {
  py::dict d;
  d["layer"] = n.layer;
  d["node"] = n.node;
  d["activation"] = n.activation;
  d["sample_index"] = n.sample_index;
  return d;
}

}  // namespace

PYBIND11_MODULE(interpnet, m) {
  m.doc() = "Constructive interpretable networks: TNN and SQANN";

  static py::exception<Error> base(m, "Error");
  static py::exception<DataError> data_error(m, "DataError", base.ptr());
  static py::exception<ConstructionError> construction_error(m, "ConstructionError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) {
        std::rethrow_exception(p);
      }
    } catch (const DataError& e) {
      py::set_error(data_error, e.what());
    } catch (const ConstructionError& e) {
      py::set_error(construction_error, e.what());
    } catch (const InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("x"), py::arg("y"))
      .def("__len__", &Dataset::size)
      .def_property_readonly("input_dim", &Dataset::input_dim)
      .def_property_readonly("output_dim", &Dataset::output_dim)
      .def_property_readonly("x", [](const Dataset& d) {
        std::vector<Vector> out;
        for (const Sample& s : d) out.push_back(s.x);
        return out;
      })
      .def_property_readonly("y", [](const Dataset& d) {
        std::vector<Vector> out;
        for (const Sample& s : d) out.push_back(s.y);
        return out;
      })
      .def("head", &Dataset::head)
      .def("tail", &Dataset::tail);

  m.def("dsa", [](double x, double a1, double a2, double r) { return dsa(x, DsaParams{a1, a2, r}); },
        py::arg("x"), py::arg("a1") = 0.001, py::arg("a2") = 0.5, py::arg("r") = 0.5);

  py::class_<TnnModel>(m, "TnnModel")
      .def_readonly("weights", &TnnModel::weights)
      .def_readonly("biases", &TnnModel::biases)
      .def_readonly("alpha", &TnnModel::alpha)
      .def_readonly("sharpness", &TnnModel::sharpness)
      .def("predict", [](const TnnModel& t, double x) { return tnn_predict(t, x); })
      .def("error_bound", &tnn_error_bound);

  m.def("build_tnn", [](const Dataset& d, double a) { return build_tnn(linear_order(d), a); }, py::arg("data"),
        py::arg("a") = 5.0);
  m.def("required_sharpness", &required_sharpness, py::arg("epsilon"), py::arg("n"), py::arg("u"));

  py::class_<SqannConfig>(m, "SqannConfig")
      .def(py::init([](double a1, double a2, double r, double tau_ad, double tau_act) {
             SqannConfig c;
             c.dsa = {a1, a2, r};
             c.tau_ad = tau_ad;
             c.tau_act = tau_act;
             c.validate();
             return c;
           }),
           py::arg("a1") = 0.001, py::arg("a2") = 0.5, py::arg("r") = 0.5, py::arg("tau_ad") = 0.1,
           py::arg("tau_act") = 0.9)
      .def_readonly("tau_ad", &SqannConfig::tau_ad)
      .def_readonly("tau_act", &SqannConfig::tau_act);

  py::class_<SqannModel>(m, "SqannModel")
      .def_property_readonly("layer_samples",
                             [](const SqannModel& s) {
                               std::vector<std::vector<std::size_t>> out;
                               for (const SqannLayer& l : s.layers) out.push_back(l.sample_indices);
                               return out;
                             })
      .def("node_count", &SqannModel::node_count)
      .def("predict", [](const SqannModel& s, const Vector& x) { return sqann_predict(s, x).y; })
      .def("explain", [](const SqannModel& s, const Vector& x) {
        const ExplanationReport rep = explain(s, x);
        py::dict d;
        d["y"] = rep.outcome.y;
        d["strong"] = rep.outcome.strong();
        d["activations"] = rep.outcome.activations;
        py::list refs;
        for (const Reference& r : rep.references) {
          py::dict ref = neuron_dict(r.neuron);
          ref["stored_y"] = r.stored_y;
          ref["weight"] = r.weight;
          refs.append(ref);
        }
        d["references"] = refs;
        return d;
      });

  m.def("build_sqann", [](const Dataset& d, const SqannConfig& c) { return build_sqann(d, c).model; },
        py::arg("data"), py::arg("config") = SqannConfig{});

  m.def(
      "absorb",
      [](const std::string& kind, const Dataset& fitting, const Dataset& external, double epsilon,
         std::size_t max_rounds, const SqannConfig& cfg) {
        AbsorptionConfig ac;
        ac.epsilon = epsilon;
        ac.max_rounds = max_rounds;
        const ModelBuilder build = kind == "tnn" ? tnn_builder(epsilon) : sqann_builder(cfg);
        AbsorptionResult res = absorb_loop(build, fitting, external, ac);
        py::dict d;
        d["fitting_size"] = res.fitting.size();
        d["absorbed"] = res.report.total_absorbed();
        d["rounds"] = res.report.rounds.size();
        d["converged"] = res.report.converged;
        d["external_mse"] = res.report.rounds.empty() ? res.report.initial_mse
                                                       : res.report.rounds.back().external_mse_after;
        if (auto* t = std::get_if<TnnModel>(&res.model)) {
          d["model"] = py::cast(*t);
        } else {
          d["model"] = py::cast(std::get<SqannModel>(res.model));
        }
        return d;
      },
      py::arg("kind"), py::arg("fitting"), py::arg("external"), py::arg("epsilon"), py::arg("max_rounds") = 100,
      py::arg("config") = SqannConfig{});

  m.def(
      "load_csv",
      [](const std::filesystem::path& path, std::vector<std::string> targets, bool header) {
        return load_csv(path, CsvOptions{header, std::move(targets)});
      },
      py::arg("path"), py::arg("target_columns") = std::vector<std::string>{}, py::arg("has_header") = true);

  m.def("save_model", [](const TnnModel& t, const std::filesystem::path& p) { save_model(ModelFile{t, {}, 0}, p); });
  m.def("save_model", [](const SqannModel& s, const std::filesystem::path& p) { save_model(ModelFile{s, {}, 0}, p); });
  m.def("load_model", [](const std::filesystem::path& p) -> py::object {
    ModelFile f = load_model(p);
    if (auto* t = std::get_if<TnnModel>(&f.model)) {
      return py::cast(*t);
    }
    return py::cast(std::get<SqannModel>(f.model));
  });
}
