#include "interpnet/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "interpnet/absorption.hpp"
#include "interpnet/errors.hpp"
#include "interpnet/experiments.hpp"
#include "interpnet/format.hpp"
#include "interpnet/model_io.hpp"

namespace interpnet {

namespace {

struct DataArgs {
  std::string path;
  std::vector<std::string> targets;
  bool no_header = false;

  Dataset load() const { return load_csv(path, CsvOptions{!no_header, targets}); }
};

struct SqannArgs {
  double tau_ad = 0.1;
  double tau_act = 0.9;
  double a1 = 0.001;
  double a2 = 0.5;
  double r = 0.5;

  SqannConfig config() const {
    SqannConfig c;
    c.dsa = {a1, a2, r};
    c.tau_ad = tau_ad;
    c.tau_act = tau_act;
    return c;
  }
};

void add_data_options(CLI::App* cmd, DataArgs& d, const char* flag, const char* help) {
  cmd->add_option("--target-col", d.targets, "Target column name or 0-based index (repeatable; default last)");
  cmd->add_flag("--no-header", d.no_header, "CSV has no header row");
  cmd->add_option(flag, d.path, help);
}

void add_sqann_options(CLI::App* cmd, SqannArgs& s) {
  cmd->add_option("--tau-ad", s.tau_ad, "Admission threshold")->capture_default_str();
  cmd->add_option("--tau-act", s.tau_act, "Strong activation threshold")->capture_default_str();
  cmd->add_option("--a1", s.a1, "Width of the rational activation term")->capture_default_str();
  cmd->add_option("--a2", s.a2, "Width of the super-Gaussian term")->capture_default_str();
  cmd->add_option("--r", s.r, "Mixing weight of the super-Gaussian term")->capture_default_str();
}

Vector parse_input(const std::string& text) {
  Vector v;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string cell = text.substr(start, comma - start);
    while (!cell.empty() && cell.front() == ' ') {
      cell.erase(cell.begin());
    }
    while (!cell.empty() && cell.back() == ' ') {
      cell.pop_back();
    }
    double x = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
      throw NonNumericCell("cannot read input '" + text + "'", 1, v.size() + 1);
    }
    v.push_back(x);
    start = comma + 1;
  }
  return v;
}

std::string join(const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += (i ? "," : "") + format_number(v[i]);
  }
  return s;
}

std::string describe(const NeuronRef& n, const Vector& y) {
  return "layer " + std::to_string(n.layer + 1) + ", node " + std::to_string(n.node + 1) + ", sample " +
         std::to_string(n.sample_index + 1) + ", α=" + join(y);
}

void explain_sqann(const ModelFile& f, const SqannModel& m, const Vector& x, std::ostream& out) {
  const Vector input = f.scaling.empty() ? x : f.scaling.apply(x);
  const ExplanationReport rep = explain(m, input);
  out << "prediction: " << join(rep.outcome.y) << "\n";
  for (std::size_t l = 0; l < rep.regimes.size(); ++l) {
    out << "layer " << l + 1 << ":";
    for (std::size_t j = 0; j < rep.regimes[l].size(); ++j) {
      out << " " << format_number(rep.outcome.activations[l][j]) << " (" << to_string(rep.regimes[l][j]) << ")";
    }
    out << "\n";
  }
  if (rep.outcome.strong()) {
    const Reference& r = rep.references.front();
    out << "strong activation: " << describe(r.neuron, r.stored_y) << "\n";
    return;
  }
  out << "interpolated (ood suspect):\n";
  for (const Reference& r : rep.references) {
    out << "  " << describe(r.neuron, r.stored_y) << ", weight " << format_number(r.weight) << "\n";
  }
}

void explain_tnn(const ModelFile& f, const TnnModel& m, const Vector& x, std::ostream& out) {
  const Vector input = f.scaling.empty() ? x : f.scaling.apply(x);
  if (input.size() != 1) {
    throw DimensionMismatch("TNN expects a scalar input");
  }
  const ActivationPattern p = tnn_activation_pattern(m, input[0]);
  out << "prediction: " << join(tnn_predict(m, input[0])) << "\n";
  out << "activation pattern:";
  for (NeuronState s : p.states) {
    out << (s == NeuronState::On ? " on" : s == NeuronState::Off ? " off" : " half");
  }
  out << "\n";
  // Ordered samples are descending: with `on` leading On neurons, x sits
  // between ordered samples n - on (below) and n - on - 1 (above).
  const std::size_t on = p.leading_on();
  const std::size_t n = m.size();
  const auto show = [&](const char* what, std::size_t k) {
    out << what << ": sample " << m.ordered_index[k] + 1 << ", x=" << format_number(m.ordered_x[k])
        << ", y=" << join(m.ordered_y[k]) << "\n";
  };
  if (on > 0) {
    show("nearest fitting sample at or below", n - on);
  }
  if (on < n) {
    show("nearest fitting sample above", n - on - 1);
  }
}

std::optional<Model> build_model(const std::string& kind, const Dataset& d, double a, const SqannArgs& sq,
                                 std::ostream& trace_out, bool want_trace) {
  if (kind == "tnn") {
    return Model{build_tnn(linear_order(d), a)};
  }
  const SqannBuild b = build_sqann(d, sq.config());
  if (want_trace) {
    b.trace.write_log(trace_out);
  }
  return Model{b.model};
}

void write_predictions(std::ostream& os, const ModelFile& f, const Dataset& d) {
  os << "index";
  for (std::size_t c = 0; c < d.output_dim(); ++c) {
    os << ",y" << c + 1 << ",prediction" << c + 1;
  }
  os << "\n";
  for (const Sample& s : d) {
    const Vector p = predict(f, s.x);
    os << s.index + 1;
    for (std::size_t c = 0; c < p.size(); ++c) {
      os << "," << format_number(s.y[c]) << "," << format_number(p[c]);
    }
    os << "\n";
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw IoError("cannot open " + path + " for writing");
  }
  return f;
}

Dataset tnn_fitting(const TnnModel& m) {
  std::vector<Sample> samples;
  for (std::size_t k = 0; k < m.size(); ++k) {
    samples.push_back({{m.ordered_x[k]}, m.ordered_y[k], m.ordered_index[k]});
  }
  return Dataset(std::move(samples));
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpretable constructive networks (TNN, SQANN): fit, predict, explain, absorb"};
  app.name("interpnet");
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Build a model from a CSV file");
  std::string fit_kind;
  DataArgs fit_data;
  double fit_a = 5.0;
  SqannArgs fit_sq;
  std::string fit_out = "model.json";
  std::string fit_trace;
  bool fit_scale = false;
  fit->add_option("--model", fit_kind, "Model kind")->required()->check(CLI::IsMember({"tnn", "sqann"}));
  add_data_options(fit, fit_data, "--data", "Fitting CSV");
  fit->get_option("--data")->required();
  fit->add_option("--a", fit_a, "TNN sharpness")->capture_default_str();
  add_sqann_options(fit, fit_sq);
  fit->add_flag("--scale", fit_scale, "Min-max scale inputs with the fitting set");
  fit->add_option("--out", fit_out, "Model file to write")->capture_default_str();
  fit->add_option("--trace", fit_trace, "Write the SQANN construction log here");

  // predict
  auto* pred = app.add_subcommand("predict", "Evaluate a saved model");
  std::string pred_model;
  std::vector<std::string> pred_inputs;
  DataArgs pred_data;
  std::string pred_out;
  pred->add_option("--model-file", pred_model, "Model file")->required();
  auto* pred_input = pred->add_option("--input", pred_inputs, "Comma separated input vector (repeatable)");
  add_data_options(pred, pred_data, "--data", "CSV of samples to evaluate");
  pred->get_option("--data")->excludes(pred_input);
  pred->add_option("--out", pred_out, "Write the predictions CSV here instead of stdout");

  // explain
  auto* expl = app.add_subcommand("explain", "Show which neurons and fitting samples produce a prediction");
  std::string expl_model;
  std::string expl_input;
  expl->add_option("--model-file", expl_model, "Model file")->required();
  expl->add_option("--input", expl_input, "Comma separated input vector")->required();

  // absorb
  auto* abs = app.add_subcommand("absorb", "Absorb out-of-distribution external samples and rebuild");
  std::string abs_model;
  std::string abs_kind = "sqann";
  DataArgs abs_data;
  DataArgs abs_ext;
  double abs_eps = 0.0;
  std::size_t abs_rounds = 100;
  double abs_a = 5.0;
  SqannArgs abs_sq;
  bool abs_weak = false;
  std::string abs_report;
  std::string abs_out;
  abs->add_option("--model-file", abs_model, "Start from this model's kind and parameters");
  abs->add_option("--model", abs_kind, "Model kind when building from --data")
      ->check(CLI::IsMember({"tnn", "sqann"}))
      ->capture_default_str();
  add_data_options(abs, abs_data, "--data", "Fitting CSV");
  abs->add_option("--external", abs_ext.path, "External CSV")->required();
  abs->add_option("--epsilon", abs_eps, "Error tolerance")->required();
  abs->add_option("--max-rounds", abs_rounds, "Maximum absorption rounds")->capture_default_str();
  abs->add_option("--a", abs_a, "Base TNN sharpness")->capture_default_str();
  add_sqann_options(abs, abs_sq);
  abs->add_flag("--weak-activation", abs_weak, "Also absorb samples without a strong activation");
  abs->add_option("--report", abs_report, "Write the per-round report CSV here");
  abs->add_option("--out", abs_out, "Write the final model here");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an experiment described by a JSON spec");
  std::string exp_spec;
  exp->add_option("--spec", exp_spec, "Experiment spec (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 1;
  }

  try {
    if (fit->parsed()) {
      const Dataset raw = fit_data.load();
      ModelFile f;
      f.dataset_fingerprint = dataset_fingerprint(raw);
      Dataset d = raw;
      if (fit_scale) {
        f.scaling = fit_scaling(raw);
        d = f.scaling.apply(raw);
      }
      std::ofstream trace;
      if (!fit_trace.empty()) {
        trace = open_out(fit_trace);
      }
      f.model = *build_model(fit_kind, d, fit_a, fit_sq, trace, !fit_trace.empty());
      save_model(f, fit_out);
      if (const auto* s = std::get_if<SqannModel>(&f.model)) {
        err << "built SQANN with " << s->layers.size() << " layers, " << s->node_count() << " nodes\n";
      } else {
        const auto& t = std::get<TnnModel>(f.model);
        err << "built TNN with " << t.size() << " neurons, error bound " << format_number(tnn_error_bound(t))
            << "\n";
      }
      return 0;
    }

    if (pred->parsed()) {
      const ModelFile f = load_model(pred_model);
      if (!pred_data.path.empty()) {
        const Dataset d = pred_data.load();
        if (pred_out.empty()) {
          write_predictions(out, f, d);
        } else {
          std::ofstream os = open_out(pred_out);
          write_predictions(os, f, d);
        }
        return 0;
      }
      if (pred_inputs.empty()) {
        err << "error: predict needs --input or --data\n" << pred->help();
        return 1;
      }
      std::ostringstream text;
      for (const std::string& in : pred_inputs) {
        text << join(predict(f, parse_input(in))) << "\n";
      }
      if (pred_out.empty()) {
        out << text.str();
      } else {
        open_out(pred_out) << text.str();
      }
      return 0;
    }

    if (expl->parsed()) {
      const ModelFile f = load_model(expl_model);
      const Vector x = parse_input(expl_input);
      if (const auto* s = std::get_if<SqannModel>(&f.model)) {
        explain_sqann(f, *s, x, out);
      } else {
        explain_tnn(f, std::get<TnnModel>(f.model), x, out);
      }
      return 0;
    }

    if (abs->parsed()) {
      std::string kind = abs_kind;
      SqannConfig sq = abs_sq.config();
      double a = abs_a;
      ScalingParams scaling;
      std::optional<Dataset> fitting;
      if (!abs_model.empty()) {
        const ModelFile f = load_model(abs_model);
        scaling = f.scaling;
        if (const auto* t = std::get_if<TnnModel>(&f.model)) {
          kind = "tnn";
          a = t->sharpness;
          if (abs_data.path.empty()) {
            fitting = tnn_fitting(*t);
          }
        } else {
          kind = "sqann";
          sq = std::get<SqannModel>(f.model).config;
          if (abs_data.path.empty()) {
            err << "error: absorbing into a SQANN model file also needs its fitting --data\n";
            return 1;
          }
        }
        if (!abs_data.path.empty()) {
          const Dataset raw = abs_data.load();
          if (dataset_fingerprint(raw) != f.dataset_fingerprint) {
            throw DataError("--data does not match the dataset the model was built on");
          }
          fitting = scaling.empty() ? raw : scaling.apply(raw);
        }
      } else {
        if (abs_data.path.empty()) {
          err << "error: absorb needs --data or --model-file\n" << abs->help();
          return 1;
        }
        fitting = abs_data.load();
      }
      abs_ext.targets = abs_data.targets;
      abs_ext.no_header = abs_data.no_header;
      Dataset external = abs_ext.load();
      if (!scaling.empty()) {
        external = scaling.apply(external);
      }

      AbsorptionConfig cfg;
      cfg.epsilon = abs_eps;
      cfg.max_rounds = abs_rounds;
      cfg.criterion = abs_weak ? OodCriterion::ErrorOrWeakActivation : OodCriterion::ErrorOnly;
      const ModelBuilder build = kind == "tnn" ? tnn_builder(abs_eps, a) : sqann_builder(sq);
      const AbsorptionResult res = absorb_loop(build, *fitting, external, cfg);
      if (!abs_report.empty()) {
        std::ofstream os = open_out(abs_report);
        res.report.write_csv(os);
      }
      if (!abs_out.empty()) {
        save_model(ModelFile{res.model, scaling, dataset_fingerprint(res.fitting)}, abs_out);
      }
      err << "absorbed " << res.report.total_absorbed() << " samples in " << res.report.rounds.size()
          << " rounds; fitting size " << res.fitting.size() << "; "
          << (res.report.converged ? "converged" : "not converged") << "\n";
      return 0;
    }

    if (exp->parsed()) {
      const ExperimentSpec spec = ExperimentSpec::load(exp_spec);
      for (const auto& path : run_experiment(spec)) {
        err << "wrote " << path.string() << "\n";
      }
      return 0;
    }
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const ConstructionError& e) {
    err << "construction error: " << e.what() << "\n";
    return 3;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace interpnet
