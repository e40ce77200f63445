#include "interpnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "interpnet/absorption.hpp"
#include "interpnet/errors.hpp"
#include "interpnet/format.hpp"
#include "interpnet/model_io.hpp"
#include "interpnet/tnn.hpp"
#include "svg.hpp"

namespace interpnet {

using nlohmann::json;
namespace fs = std::filesystem;

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Rng::normal(double mean, double sd) {
  const double u1 = 1.0 - uniform(0.0, 1.0);
  const double u2 = uniform(0.0, 1.0);
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::TnnCurve:
      return "tnn_curve";
    case ExperimentKind::SqannRing:
      return "sqann_ring";
    case ExperimentKind::SqannSpread:
      return "sqann_spread";
    case ExperimentKind::RegressionAbsorb:
      return "regression_absorb";
  }
  return "unknown";
}

std::string to_string(SyntheticShape s) {
  switch (s) {
    case SyntheticShape::Line:
      return "line";
    case SyntheticShape::Ring:
      return "ring";
    case SyntheticShape::TwoRing:
      return "two_ring";
  }
  return "unknown";
}

namespace {

template <class Enum, std::size_t N>
Enum enum_from(const std::string& s, const Enum (&values)[N], const char* what) {
  for (Enum v : values) {
    if (to_string(v) == s) {
      return v;
    }
  }
  throw SchemaError(std::string("unknown ") + what + " '" + s + "'");
}

template <class T>
T value_of(const json& doc, const char* key, T fallback) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    return fallback;
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("experiment field '") + key + "' has the wrong type: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  if (!out) {
    throw IoError("error while writing " + path.string());
  }
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) {
    return 0.0;
  }
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += (i ? "," : "") + cells[i];
  }
  return out + "\n";
}

// One box per group (min, q1, median, q3, max). Writes name.svg and the
// plotted numbers to name.csv.
std::vector<fs::path> box_plot(const fs::path& dir, const std::string& name, const std::string& title,
                               const std::string& y_title, const std::vector<double>& groups,
                               const std::vector<std::vector<double>>& values) {
  std::string table = "spread,min,q1,median,q3,max\n";
  double top = 0.0;
  double bottom = 0.0;
  struct Box {
    double lo, q1, med, q3, hi;
  };
  std::vector<Box> boxes;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::vector<double>& v = values[g];
    const Box b{quantile(v, 0.0), quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75), quantile(v, 1.0)};
    boxes.push_back(b);
    top = std::max(top, b.hi);
    bottom = std::min(bottom, b.lo);
    table += csv_join({format_number(groups[g]), format_number(b.lo), format_number(b.q1), format_number(b.med),
                       format_number(b.q3), format_number(b.hi)});
  }
  svg::Plot plot(0.0, static_cast<double>(groups.size()), bottom, top > bottom ? top * 1.05 : bottom + 1.0, title);
  for (std::size_t g = 0; g < boxes.size(); ++g) {
    const double c = static_cast<double>(g) + 0.5;
    const Box& b = boxes[g];
    plot.line(c, b.lo, c, b.q1, "black");
    plot.line(c, b.q3, c, b.hi, "black");
    plot.box(c - 0.3, b.q1, c + 0.3, b.q3, "#9ecae1");
    plot.line(c - 0.3, b.med, c + 0.3, b.med, "#d62728");
    plot.label_x(c, format_number(groups[g]));
  }
  plot.axis_titles("test data spread", y_title);
  const fs::path svg_path = dir / (name + ".svg");
  const fs::path csv_path = dir / (name + ".csv");
  write_text(svg_path, plot.str());
  write_text(csv_path, table);
  return {svg_path, csv_path};
}

Vector moved(Rng& rng, const Vector& x, double spread) {
  Vector out = x;
  for (double& c : out) {
    c += rng.uniform(-spread, spread);
  }
  return out;
}

double norm(const Vector& x) { return std::hypot(x[0], x[1]); }

std::vector<fs::path> write_spread(const ExperimentSpec& spec, const SpreadReport& report) {
  const fs::path& dir = spec.output_dir;
  std::string trials = "spread,seed,status,fitting_max_error,mean_error,median_error,n_interp\n";
  std::string samples = "spread,seed,sample,error,fractional_error,interpolated\n";
  for (const SpreadTrial& t : report.trials) {
    trials += csv_join({format_number(t.spread), std::to_string(t.seed), t.ok ? "ok" : "failed",
                        format_number(t.fitting_max_error),
                        format_number(t.errors.empty() ? 0.0
                                                       : std::accumulate(t.errors.begin(), t.errors.end(), 0.0) /
                                                             static_cast<double>(t.errors.size())),
                        format_number(quantile(t.errors, 0.5)), std::to_string(t.n_interp)});
    for (std::size_t i = 0; i < t.errors.size(); ++i) {
      samples += csv_join({format_number(t.spread), std::to_string(t.seed), std::to_string(i),
                           format_number(t.errors[i]), format_number(t.fractional_errors[i]),
                           t.interpolated[i] ? "1" : "0"});
    }
  }
  std::vector<fs::path> written{dir / "spread_trials.csv", dir / "spread_samples.csv"};
  write_text(written[0], trials);
  write_text(written[1], samples);

  std::vector<std::vector<double>> err(spec.spreads.size()), strong(spec.spreads.size()),
      frac(spec.spreads.size()), frac_strong(spec.spreads.size()), interp(spec.spreads.size());
  for (const SpreadTrial& t : report.trials) {
    const auto g = static_cast<std::size_t>(
        std::find(spec.spreads.begin(), spec.spreads.end(), t.spread) - spec.spreads.begin());
    if (!t.ok) {
      continue;
    }
    for (std::size_t i = 0; i < t.errors.size(); ++i) {
      err[g].push_back(t.errors[i]);
      frac[g].push_back(t.fractional_errors[i]);
      if (!t.interpolated[i]) {
        strong[g].push_back(t.errors[i]);
        frac_strong[g].push_back(t.fractional_errors[i]);
      }
    }
    interp[g].push_back(static_cast<double>(t.n_interp));
  }
  const std::string shape = to_string(spec.shape);
  const auto add = [&](const std::vector<fs::path>& paths) { written.insert(written.end(), paths.begin(), paths.end()); };
  add(box_plot(dir, "spread_error", "external error (" + shape + ")", "|error|", spec.spreads, err));
  add(box_plot(dir, "spread_error_strong", "external error without interpolated (" + shape + ")", "|error|",
               spec.spreads, strong));
  add(box_plot(dir, "spread_fractional", "fractional external error (" + shape + ")", "fractional error",
               spec.spreads, frac));
  add(box_plot(dir, "spread_fractional_strong", "fractional error without interpolated (" + shape + ")",
               "fractional error", spec.spreads, frac_strong));
  add(box_plot(dir, "spread_n_interp", "interpolated predictions (" + shape + ")", "N_interp", spec.spreads, interp));
  return written;
}

std::vector<fs::path> write_ring(const ExperimentSpec& spec) {
  const auto [fitting, external] = gen_synthetic(spec, spec.spread, spec.seed);
  const SqannModel model = build_sqann(fitting, spec.sqann).model;
  std::map<std::size_t, const Sample*> by_index;
  for (const Sample& s : fitting) {
    by_index[s.index] = &s;
  }

  std::string points = "role,index,x1,x2,y,prediction,interpolated,reference_1,reference_2\n";
  std::string plotted = "element,x1,x2,x1_end,x2_end,value\n";
  svg::Plot plot(-1.4, 1.4, -1.4, 1.4, "SQANN on " + to_string(spec.shape) + " data");
  const auto colour = [](double y) { return y > 0.75 ? "#e41a1c" : "#67000d"; };

  for (const Sample& s : fitting) {
    points += csv_join({"fitting", std::to_string(s.index), format_number(s.x[0]), format_number(s.x[1]),
                        format_number(s.y[0]), format_number(s.y[0]), "0", "", ""});
    plotted += csv_join({"fitting", format_number(s.x[0]), format_number(s.x[1]), "", "", format_number(s.y[0])});
    plot.circle(s.x[0], s.x[1], 4.0, colour(s.y[0]), "none");
  }
  const char* link_colours[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf"};
  std::size_t links = 0;
  for (const Sample& s : external) {
    const PredictionOutcome p = sqann_predict(model, s.x);
    std::string r1;
    std::string r2;
    plot.cross(s.x[0], s.x[1], 3.0, colour(p.y[0]));
    plotted += csv_join({"external", format_number(s.x[0]), format_number(s.x[1]), "", "", format_number(p.y[0])});
    if (const auto* in = std::get_if<Interpolated>(&p.provenance)) {
      r1 = std::to_string(in->neurons[0].sample_index);
      r2 = std::to_string(in->neurons[1].sample_index);
      plot.circle(s.x[0], s.x[1], 7.0, "none", "#e41a1c");
      plotted += csv_join({"interpolated", format_number(s.x[0]), format_number(s.x[1]), "", "", format_number(p.y[0])});
      const char* c = link_colours[links % std::size(link_colours)];
      const bool dashed = (links / std::size(link_colours)) % 2 == 1;
      ++links;
      for (const NeuronRef& n : in->neurons) {
        const Sample& ref = *by_index.at(n.sample_index);
        plot.line(s.x[0], s.x[1], ref.x[0], ref.x[1], c, dashed);
        plotted += csv_join({"link", format_number(s.x[0]), format_number(s.x[1]), format_number(ref.x[0]),
                             format_number(ref.x[1]), format_number(n.activation)});
      }
    }
    points += csv_join({"external", std::to_string(s.index), format_number(s.x[0]), format_number(s.x[1]),
                        format_number(s.y[0]), format_number(p.y[0]), p.strong() ? "0" : "1", r1, r2});
  }
  plot.axis_titles("x1", "x2");
  const fs::path dir = spec.output_dir;
  write_text(dir / "ring_points.csv", points);
  write_text(dir / "ring.svg", plot.str());
  write_text(dir / "ring.csv", plotted);
  return {dir / "ring_points.csv", dir / "ring.svg", dir / "ring.csv"};
}

std::vector<fs::path> write_tnn_curve(const ExperimentSpec& spec) {
  Rng rng(spec.seed);
  std::vector<Vector> xs;
  std::vector<Vector> ys;
  std::set<double> seen;
  while (xs.size() < spec.n_fit) {
    const double x = rng.uniform(0.0, 1.0);
    if (!seen.insert(x).second) {
      continue;
    }
    xs.push_back({x});
    ys.push_back({std::sin(2.0 * std::numbers::pi * x)});
  }
  const Dataset d = Dataset::from_rows(xs, ys);
  const TnnModel m = build_tnn(linear_order(d), spec.tnn_a);

  std::string table = "series,x,y\n";
  std::vector<double> gx;
  std::vector<double> gy;
  constexpr std::size_t kGrid = 401;
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(kGrid - 1);
    gx.push_back(x);
    gy.push_back(tnn_predict(m, x)[0]);
    table += csv_join({"tnn", format_number(x), format_number(gy.back())});
  }
  svg::Plot plot(0.0, 1.0, -1.3, 1.3, "TNN, a = " + format_number(spec.tnn_a) + ", N = " + std::to_string(m.size()));
  plot.polyline(gx, gy, "#1f77b4");
  for (const Sample& s : d) {
    plot.circle(s.x[0], s.y[0], 3.0, "#2ca02c", "none");
    table += csv_join({"fitting", format_number(s.x[0]), format_number(s.y[0])});
  }
  plot.axis_titles("x", "y");

  std::string summary = "n_fit,a,error_bound,max_fitting_error\n";
  double worst = 0.0;
  for (const Sample& s : d) {
    worst = std::max(worst, std::abs(tnn_predict(m, s.x[0])[0] - s.y[0]));
  }
  summary += csv_join({std::to_string(m.size()), format_number(spec.tnn_a), format_number(tnn_error_bound(m)),
                       format_number(worst)});
  const fs::path dir = spec.output_dir;
  write_text(dir / "tnn_curve.svg", plot.str());
  write_text(dir / "tnn_curve.csv", table);
  write_text(dir / "tnn_summary.csv", summary);
  return {dir / "tnn_curve.svg", dir / "tnn_curve.csv", dir / "tnn_summary.csv"};
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json(std::string_view text, const fs::path& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("experiment spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw SchemaError("experiment spec must be a JSON object");
  }
  static const std::set<std::string> known{"kind",  "seed",     "n_fit",      "n_external", "shape",
                                           "spread", "spreads", "trials",     "noise_sd",   "sqann",
                                           "tnn_a", "data",     "target_columns", "scale",  "taus",
                                           "max_rounds", "output_dir"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) {
      throw SchemaError("unknown experiment field '" + key + "'");
    }
  }
  if (!doc.contains("kind")) {
    throw SchemaError("experiment spec needs a 'kind'");
  }

  ExperimentSpec s;
  static const ExperimentKind kinds[] = {ExperimentKind::TnnCurve, ExperimentKind::SqannRing,
                                         ExperimentKind::SqannSpread, ExperimentKind::RegressionAbsorb};
  static const SyntheticShape shapes[] = {SyntheticShape::Line, SyntheticShape::Ring, SyntheticShape::TwoRing};
  s.kind = enum_from(value_of<std::string>(doc, "kind", ""), kinds, "experiment kind");
  if (s.kind == ExperimentKind::SqannRing) {
    s.shape = SyntheticShape::TwoRing;
    s.sqann.dsa.a1 = 1.0;
    s.sqann.dsa.a2 = 1.0;
  }
  s.seed = value_of<std::uint64_t>(doc, "seed", s.seed);
  s.n_fit = value_of<std::size_t>(doc, "n_fit", s.n_fit);
  s.n_external = value_of<std::size_t>(doc, "n_external", s.n_external);
  s.shape = enum_from(value_of<std::string>(doc, "shape", to_string(s.shape)), shapes, "shape");
  s.spread = value_of<double>(doc, "spread", s.spread);
  s.spreads = value_of<std::vector<double>>(doc, "spreads", s.spreads);
  s.trials = value_of<std::size_t>(doc, "trials", s.trials);
  s.noise_sd = value_of<double>(doc, "noise_sd", s.noise_sd);
  s.tnn_a = value_of<double>(doc, "tnn_a", s.tnn_a);
  s.target_columns = value_of<std::vector<std::string>>(doc, "target_columns", s.target_columns);
  s.scale = value_of<bool>(doc, "scale", s.scale);
  s.taus = value_of<std::vector<double>>(doc, "taus", s.taus);
  s.max_rounds = value_of<std::size_t>(doc, "max_rounds", s.max_rounds);

  if (const auto it = doc.find("sqann"); it != doc.end()) {
    static const std::set<std::string> sq_keys{"a1", "a2", "r", "tau_ad", "tau_act", "max_construction_steps",
                                               "interpolation"};
    if (!it->is_object()) {
      throw SchemaError("experiment field 'sqann' must be an object");
    }
    for (const auto& [key, value] : it->items()) {
      if (!sq_keys.count(key)) {
        throw SchemaError("unknown sqann field '" + key + "'");
      }
    }
    SqannConfig& c = s.sqann;
    c.dsa.a1 = value_of<double>(*it, "a1", c.dsa.a1);
    c.dsa.a2 = value_of<double>(*it, "a2", c.dsa.a2);
    c.dsa.r = value_of<double>(*it, "r", c.dsa.r);
    c.tau_ad = value_of<double>(*it, "tau_ad", c.tau_ad);
    c.tau_act = value_of<double>(*it, "tau_act", c.tau_act);
    c.max_construction_steps = value_of<std::size_t>(*it, "max_construction_steps", c.max_construction_steps);
    const std::string rule = value_of<std::string>(*it, "interpolation", "two_neuron_weighted");
    if (rule == "nearest_constant") {
      c.interpolation = InterpolationRule::NearestConstant;
    } else if (rule != "two_neuron_weighted") {
      throw SchemaError("unknown interpolation rule '" + rule + "'");
    }
  }

  const auto resolve = [&base](const fs::path& p) { return p.is_relative() && !base.empty() ? base / p : p; };
  if (doc.contains("data")) {
    s.data = resolve(value_of<std::string>(doc, "data", ""));
  }
  s.output_dir = resolve(value_of<std::string>(doc, "output_dir", "."));

  if (s.n_fit == 0 || s.trials == 0 || s.max_rounds == 0) {
    throw SchemaError("n_fit, trials and max_rounds must be positive");
  }
  if (s.spreads.empty() || std::any_of(s.spreads.begin(), s.spreads.end(), [](double v) { return !(v >= 0.0); }) ||
      !(s.spread >= 0.0)) {
    throw SchemaError("spreads must be non-negative and not empty");
  }
  if (s.kind == ExperimentKind::RegressionAbsorb && s.data.empty()) {
    throw SchemaError("regression_absorb needs a 'data' path");
  }
  try {
    s.sqann.validate();
  } catch (const InvalidArgument& e) {
    throw SchemaError(std::string("invalid sqann settings: ") + e.what());
  }
  return s;
}

ExperimentSpec ExperimentSpec::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), path.parent_path());
}

std::pair<Dataset, Dataset> gen_synthetic(const ExperimentSpec& spec, double spread, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> fitting;
  for (std::size_t i = 0; i < spec.n_fit; ++i) {
    Sample s;
    s.index = i;
    switch (spec.shape) {
      case SyntheticShape::Line: {
        const double t = rng.uniform(-1.0, 1.0);
        s.x = {t + rng.normal(0.0, spec.noise_sd), t + rng.normal(0.0, spec.noise_sd)};
        s.y = {norm(s.x)};
        break;
      }
      case SyntheticShape::Ring: {
        const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = rng.uniform(0.8, 1.2);
        s.x = {r * std::cos(t), r * std::sin(t)};
        s.y = {std::cos(t)};
        break;
      }
      case SyntheticShape::TwoRing: {
        const bool outer = i % 2 == 0;
        const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = outer ? rng.uniform(0.9, 1.1) : rng.uniform(0.4, 0.6);
        s.x = {r * std::cos(t), r * std::sin(t)};
        s.y = {outer ? 0.5 : 1.0};
        break;
      }
    }
    fitting.push_back(std::move(s));
  }

  std::vector<Sample> external;
  const std::size_t m = std::min(spec.n_external, spec.n_fit);
  for (std::size_t i = 0; i < m; ++i) {
    Sample s{moved(rng, fitting[i].x, spread), fitting[i].y, spec.n_fit + i};
    if (spread > 0.0) {
      if (spec.shape == SyntheticShape::Line) {
        s.y = {norm(s.x)};
      } else if (spec.shape == SyntheticShape::Ring) {
        const double r = norm(s.x);
        s.y = {r > 0.0 ? s.x[0] / r : 1.0};
      }
    }
    external.push_back(std::move(s));
  }
  return {Dataset(std::move(fitting)), Dataset(std::move(external))};
}

double fractional_error(double predicted, double truth) {
  return std::abs(predicted - truth) / std::max(std::abs(truth), 1e-8);
}

double SpreadReport::median_error(double spread) const {
  std::vector<double> pooled;
  for (const SpreadTrial& t : trials) {
    if (t.ok && t.spread == spread) {
      pooled.insert(pooled.end(), t.errors.begin(), t.errors.end());
    }
  }
  return pooled.empty() ? std::numeric_limits<double>::quiet_NaN() : quantile(std::move(pooled), 0.5);
}

double SpreadReport::mean_n_interp(double spread) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const SpreadTrial& t : trials) {
    if (t.ok && t.spread == spread) {
      sum += static_cast<double>(t.n_interp);
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

SpreadReport run_spread_experiment(const ExperimentSpec& spec) {
  SpreadReport report;
  for (double spread : spec.spreads) {
    for (std::size_t k = 0; k < spec.trials; ++k) {
      SpreadTrial t;
      t.spread = spread;
      t.seed = spec.seed + k;
      try {
        const auto [fitting, external] = gen_synthetic(spec, spread, t.seed);
        const SqannModel model = build_sqann(fitting, spec.sqann).model;
        for (const Sample& s : fitting) {
          t.fitting_max_error = std::max(t.fitting_max_error, std::abs(sqann_predict(model, s.x).y[0] - s.y[0]));
        }
        for (const Sample& s : external) {
          const PredictionOutcome p = sqann_predict(model, s.x);
          t.errors.push_back(std::abs(p.y[0] - s.y[0]));
          t.fractional_errors.push_back(fractional_error(p.y[0], s.y[0]));
          t.interpolated.push_back(!p.strong());
          t.n_interp += p.strong() ? 0 : 1;
        }
      } catch (const Error& e) {
        t = SpreadTrial{spread, spec.seed + k, false, e.what(), 0.0, 0, {}, {}, {}};
      }
      report.trials.push_back(std::move(t));
    }
  }
  return report;
}

AbsorptionTable run_regression_absorb(const ExperimentSpec& spec) {
  const Dataset all = load_csv(spec.data, CsvOptions{true, spec.target_columns});
  if (spec.n_fit >= all.size()) {
    throw InvalidArgument("n_fit must leave external rows");
  }
  Dataset fitting = all.head(spec.n_fit);
  Dataset external = all.tail(spec.n_fit);
  if (spec.scale) {
    const ScalingParams p = fit_scaling(fitting);
    fitting = p.apply(fitting);
    external = p.apply(external);
  }
  const ModelBuilder build = sqann_builder(spec.sqann);

  AbsorptionTable table;
  const auto row = [](std::string label, double tau, std::size_t absorbed, std::size_t size, double mse) {
    return AbsorptionRow{std::move(label), tau, absorbed, size, mse, std::sqrt(mse)};
  };
  bool first = true;
  for (double tau : spec.taus) {
    AbsorptionConfig cfg;
    cfg.epsilon = tau;
    cfg.max_rounds = spec.max_rounds;
    const AbsorptionResult res = absorb_loop(build, fitting, external, cfg);
    const AbsorptionReport& r = res.report;
    if (first) {
      table.push_back(row("o.", 0.0, 0, r.initial_fitting_size, r.initial_mse));
      first = false;
    }
    const double mse = r.rounds.empty() ? r.initial_mse : r.rounds.back().external_mse_after;
    table.push_back(row("e" + format_number(tau), tau, r.total_absorbed(), res.fitting.size(), mse));
  }
  if (first) {
    const Model m = build(fitting);
    double sum = 0.0;
    for (const Sample& s : external) {
      const double e = predict(m, s.x)[0] - s.y[0];
      sum += e * e;
    }
    table.push_back(row("o.", 0.0, 0, fitting.size(), sum / static_cast<double>(external.size())));
  }
  return table;
}

std::vector<fs::path> run_experiment(const ExperimentSpec& spec) {
  fs::create_directories(spec.output_dir);
  switch (spec.kind) {
    case ExperimentKind::SqannSpread:
      return write_spread(spec, run_spread_experiment(spec));
    case ExperimentKind::SqannRing:
      return write_ring(spec);
    case ExperimentKind::TnnCurve:
      return write_tnn_curve(spec);
    case ExperimentKind::RegressionAbsorb: {
      const AbsorptionTable table = run_regression_absorb(spec);
      std::string csv = "row,tau,absorbed,fitting_size,mse,rmse\n";
      for (const AbsorptionRow& r : table) {
        csv += csv_join({r.label, r.label == "o." ? "" : format_number(r.tau), std::to_string(r.absorbed),
                         std::to_string(r.fitting_size), format_number(r.mse), format_number(r.rmse)});
      }
      const fs::path out = spec.output_dir / "absorption_table.csv";
      write_text(out, csv);
      return {out};
    }
  }
  return {};
}

}  // namespace interpnet
