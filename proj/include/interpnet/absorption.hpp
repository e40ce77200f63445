#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "interpnet/core_data.hpp"
#include "interpnet/sqann.hpp"
#include "interpnet/tnn.hpp"

namespace interpnet {

using Model = std::variant<TnnModel, SqannModel>;

/// Evaluates either model kind. A TNN needs a one-component input.
Vector predict(const Model& m, std::span<const double> x);

/// Largest componentwise |f(x) - y|.
double sample_error(const Model& m, const Sample& s);

enum class OodCriterion {
  ErrorOnly,
  /// Also flags samples whose strongest SQANN activation stays at or below
  /// tau_act. Has no extra effect on a TNN.
  ErrorOrWeakActivation,
};

struct AbsorptionConfig {
  double epsilon = 0.1;
  std::size_t max_rounds = 100;
  OodCriterion criterion = OodCriterion::ErrorOnly;
  /// Keep the model built on the initial fitting set and answer with
  /// whichever SQANN activates more strongly.
  bool keep_initial = false;

  void validate() const;
};

/// Positions (into `external`) of samples ruled out of distribution.
std::vector<std::size_t> find_ood(const Model& m, const Dataset& external, const AbsorptionConfig& cfg);

struct AbsorptionRound {
  /// Positions in the external dataset absorbed this round.
  std::vector<std::size_t> absorbed;
  std::size_t fitting_size_after = 0;
  double external_max_error_after = 0.0;
  double external_mse_after = 0.0;
};

struct AbsorptionReport {
  std::size_t initial_fitting_size = 0;
  double initial_max_error = 0.0;
  double initial_mse = 0.0;
  std::vector<AbsorptionRound> rounds;
  bool converged = false;

  std::size_t total_absorbed() const noexcept;
  /// Header plus a round 0 row for the model before any absorption.
  void write_csv(std::ostream& os) const;
};

using ModelBuilder = std::function<Model(const Dataset&)>;

/// Sorts each fitting set and picks a = max(base_a, a needed for an error
/// below epsilon / 2), so absorbed and old samples both stay within epsilon.
ModelBuilder tnn_builder(double epsilon, double base_a = 5.0, DummyGap dummy = {});

ModelBuilder sqann_builder(SqannConfig cfg = {});

/// Chooses between the initial and the current SQANN by strongest activation.
/// Falls back to `current` for TNNs.
struct EnsembleModel {
  Model initial;
  Model current;

  Vector predict(std::span<const double> x) const;
};

struct AbsorptionResult {
  Model model;
  Dataset fitting;
  AbsorptionReport report;
  /// Set when AbsorptionConfig::keep_initial is on.
  std::optional<EnsembleModel> ensemble;
};

/// Repeats find_ood, appending the flagged samples to the fitting set in
/// external order and rebuilding, until nothing is flagged, the external set
/// is used up or max_rounds is reached. External indices that clash with
/// fitting indices are shifted past them.
AbsorptionResult absorb_loop(const ModelBuilder& build, const Dataset& fitting, const Dataset& external,
                             const AbsorptionConfig& cfg);

struct CfCheck {
  bool ok = true;
  std::size_t violations = 0;
  double max_error = 0.0;
};

/// Catastrophic-forgetting check: every old fitting sample must have error
/// below epsilon (TNN) or exactly zero (SQANN) under `after`. Throws
/// InvalidArgument if `after` was not built on a superset of the samples
/// stored in `before` and of `old_fitting`.
CfCheck cf_check(const Model& before, const Model& after, const Dataset& old_fitting, double epsilon);

}  // namespace interpnet
