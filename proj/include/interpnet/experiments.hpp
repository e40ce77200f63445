#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "interpnet/core_data.hpp"
#include "interpnet/sqann.hpp"

namespace interpnet {

/// Seeded generator with hand-rolled distributions, so a seed yields the same
/// stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  double normal(double mean, double sd);

 private:
  std::mt19937_64 engine_;
};

enum class ExperimentKind { TnnCurve, SqannRing, SqannSpread, RegressionAbsorb };

enum class SyntheticShape {
  Line,     ///< x1 = x2 = t plus Gaussian noise, y = |x|
  Ring,     ///< x = R (cos t, sin t), y = cos t
  TwoRing,  ///< outer ring labelled 0.5, inner ring 1.0
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::SqannSpread;
  std::uint64_t seed = 0;
  std::size_t n_fit = 128;
  std::size_t n_external = 128;
  SyntheticShape shape = SyntheticShape::Ring;
  double spread = 0.1;
  std::vector<double> spreads{0.02, 0.05, 0.1, 0.2, 0.4};
  std::size_t trials = 20;
  double noise_sd = 0.05;
  SqannConfig sqann;
  double tnn_a = 5.0;
  std::filesystem::path data;
  std::vector<std::string> target_columns;
  bool scale = true;
  std::vector<double> taus{5.0, 2.0};
  std::size_t max_rounds = 1;
  std::filesystem::path output_dir = ".";

  /// Relative paths are resolved against `base`. Throws SchemaError.
  static ExperimentSpec from_json(std::string_view text, const std::filesystem::path& base = {});
  static ExperimentSpec load(const std::filesystem::path& path);
};

std::string to_string(ExperimentKind k);
std::string to_string(SyntheticShape s);

/// Fitting set of spec.n_fit samples and an external set made of the first
/// spec.n_external of them with every input component moved by U(-s, s).
/// External targets follow the generating law at the moved input (the ring
/// label is kept).
std::pair<Dataset, Dataset> gen_synthetic(const ExperimentSpec& spec, double spread, std::uint64_t seed);

struct SpreadTrial {
  double spread = 0.0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double fitting_max_error = 0.0;
  std::size_t n_interp = 0;
  std::vector<double> errors;
  std::vector<double> fractional_errors;
  std::vector<bool> interpolated;
};

struct SpreadReport {
  std::vector<SpreadTrial> trials;

  /// Median of the pooled external errors of one spread level; NaN if the
  /// level has no successful trial.
  double median_error(double spread) const;
  double mean_n_interp(double spread) const;
};

/// |y_hat - y| / max(|y|, 1e-8).
double fractional_error(double predicted, double truth);

SpreadReport run_spread_experiment(const ExperimentSpec& spec);

struct AbsorptionRow {
  std::string label;  ///< "o." for the original model, "e<tau>" otherwise
  double tau = 0.0;
  std::size_t absorbed = 0;
  std::size_t fitting_size = 0;
  double mse = 0.0;
  double rmse = 0.0;
};

using AbsorptionTable = std::vector<AbsorptionRow>;

/// Fits a SQANN on the first n_fit rows, then absorbs at each tau from the
/// original model. Errors are measured on the remaining rows.
AbsorptionTable run_regression_absorb(const ExperimentSpec& spec);

/// Runs the experiment and writes its CSV reports and SVG plots into
/// spec.output_dir. Returns the written paths.
std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec);

}  // namespace interpnet
