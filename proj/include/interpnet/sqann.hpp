#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "interpnet/activations.hpp"
#include "interpnet/core_data.hpp"

namespace interpnet {

/// Output rule used when no neuron is strongly activated.
enum class InterpolationRule {
  TwoNeuronWeighted,  ///< activation-weighted mean of the two strongest neurons
  NearestConstant,    ///< alpha of the single strongest neuron
};

struct SqannConfig {
  DsaParams dsa;
  double tau_ad = 0.1;   ///< admission threshold
  double tau_act = 0.9;  ///< activation (collision / retrieval) threshold
  /// Upper bound on sample checks during construction; 0 means 50 n^2.
  std::size_t max_construction_steps = 0;
  InterpolationRule interpolation = InterpolationRule::TwoNeuronWeighted;

  /// Throws InvalidArgument unless 0 < tau_ad < tau_act < 1 and dsa is valid.
  void validate() const;
};

/// One layer: every node is the fingerprint of exactly one fitting sample.
/// Layer 0 stores raw inputs; layer k > 0 stores the activation vector the
/// sample produced at layer k-1.
struct SqannLayer {
  std::vector<Vector> nodes;
  std::vector<Vector> alphas;
  std::vector<std::size_t> sample_indices;

  std::size_t size() const noexcept { return nodes.size(); }
};

struct SqannModel {
  std::vector<SqannLayer> layers;
  SqannConfig config;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;

  std::size_t node_count() const noexcept;
};

/// Address of a neuron inside a model; layer and node are 0-based.
struct NeuronRef {
  std::size_t layer = 0;
  std::size_t node = 0;
  double activation = 0.0;
  std::size_t sample_index = 0;
};

struct StrongActivation {
  NeuronRef neuron;
};

/// Output blended from the two most activated neurons. For a single-node
/// model `neurons[1]` repeats `neurons[0]` with weight 0.
struct Interpolated {
  std::array<NeuronRef, 2> neurons;
  std::array<double, 2> weights;
};

using Provenance = std::variant<StrongActivation, Interpolated>;

struct PredictionOutcome {
  Vector y;
  Provenance provenance;
  /// Activation vector of every layer: the full fingerprint of the input.
  std::vector<Vector> activations;

  bool strong() const noexcept { return std::holds_alternative<StrongActivation>(provenance); }
  /// Largest activation over all layers.
  double max_activation() const noexcept;
};

/// Component j is dsa(||v - node_j||_2). Throws DimensionMismatch when `v`
/// does not match the node dimension.
Vector layer_activation(std::span<const double> v, const SqannLayer& layer, const DsaParams& p);

struct ForwardResult {
  std::vector<Vector> activations;
  /// Earliest layer holding an activation above tau_act; the node is the
  /// argmax within that layer.
  std::optional<NeuronRef> first_strong;
};

/// Propagates through layers [0, upto) and reports the first strong neuron.
ForwardResult forward_to_layer(const SqannModel& m, std::span<const double> x, std::size_t upto);

enum class TraceKind { Admitted, Filtered, Collision };

struct TraceEvent {
  TraceKind kind = TraceKind::Admitted;
  std::size_t sample_index = 0;
  /// Admitted: layer joined. Filtered: layer the sample was passed over by.
  /// Collision: layer the sample was pushed into.
  std::size_t layer = 0;
  std::size_t step = 0;
  std::vector<std::size_t> destroyed_layers;
  /// Samples sent back to the unused pool, in original insertion order.
  std::vector<std::size_t> returned_indices;
};

struct ConstructionTrace {
  std::vector<TraceEvent> events;
  std::size_t steps = 0;

  /// One event per line: kind,sample_index,layer,step (layer 1-based).
  /// Collision lines append destroyed layers and returned indices as
  /// space-separated lists.
  void write_log(std::ostream& os) const;
};

struct SqannBuild {
  SqannModel model;
  ConstructionTrace trace;
};

/// Layer-by-layer construction over the dataset in its given order.
///
/// Each sample is forwarded through the existing layers and then
///  - collides when some layer holds an activation above tau_act: it is
///    pushed into the earliest such layer, every deeper layer is destroyed
///    and its samples rejoin the end of the unused pool in insertion order;
///  - is admitted to the layer under construction when all its activations
///    there are below tau_ad (the first sample of a layer always is);
///  - is otherwise filtered, staying in the pool for deeper layers.
///
/// Throws UnresolvableCollision when a sample reproduces an existing
/// fingerprint exactly but carries a different output, and BudgetExceeded
/// when the step budget runs out.
SqannBuild build_sqann(const Dataset& d, const SqannConfig& cfg = {});

PredictionOutcome sqann_predict(const SqannModel& m, std::span<const double> x);

enum class Regime { Weak, Moderate, Strong };

Regime classify_activation(double activation, const SqannConfig& cfg);

struct Reference {
  NeuronRef neuron;
  Vector stored_y;
  double weight = 0.0;
};

struct ExplanationReport {
  PredictionOutcome outcome;
  /// Fitting samples the output was taken from, strongest first.
  std::vector<Reference> references;
  /// Regime of every neuron, shaped like outcome.activations.
  std::vector<std::vector<Regime>> regimes;
  /// True when no neuron exceeded tau_act.
  bool ood_suspect = false;
};

ExplanationReport explain(const SqannModel& m, std::span<const double> x);

std::string to_string(TraceKind kind);
std::string to_string(Regime regime);

}  // namespace interpnet
