#pragma once

#include <cstddef>
#include <vector>

#include "interpnet/core_data.hpp"

namespace interpnet {

/// How the gap below the smallest fitting input is chosen. It only shapes the
/// left end of the fitted curve.
enum class DummyGapRule {
  MeanGap,    ///< arithmetic mean of the N-1 real gaps
  SumOverN,  ///< sum of the real gaps divided by N
  LastGap,    ///< repeat the smallest-x gap
  Fixed,      ///< user supplied value
};

struct DummyGap {
  DummyGapRule rule = DummyGapRule::MeanGap;
  double value = 0.0;  ///< used by Fixed only

  static DummyGap fixed(double v) { return {DummyGapRule::Fixed, v}; }
};

/// Single-layer triangularly constructed network TNN(x) = alpha^T sigmoid(W x + b).
///
/// Neuron j is anchored at ordered sample N-1-j, so sample k (0-based,
/// descending x) switches on neurons 0..N-1-k and leaves the rest off.
struct TnnModel {
  Vector weights;
  Vector biases;
  /// output_dim rows of N retrieval coefficients.
  std::vector<Vector> alpha;
  double sharpness = 5.0;
  /// Fitting inputs, strictly descending.
  Vector ordered_x;
  /// Fitting outputs in the same order, N rows of output_dim.
  std::vector<Vector> ordered_y;
  std::vector<std::size_t> ordered_index;
  double dummy_gap = 0.0;

  std::size_t size() const noexcept { return weights.size(); }
  std::size_t output_dim() const noexcept { return alpha.size(); }
};

/// Closed-form construction. Throws InvalidArgument for a <= 0 and
/// DegenerateGap if a gap is not strictly positive.
TnnModel build_tnn(const OrderedDataset& d, double a = 5.0, DummyGap dummy = {});

Vector tnn_predict(const TnnModel& m, double x);

enum class NeuronState { Off, Half, On };

struct ActivationPattern {
  std::vector<NeuronState> states;
  Vector raw;             ///< sigmoid(W x + b)
  Vector pre_activation;  ///< W x + b

  /// Number of leading On neurons; for fitting sample k this is N - k.
  std::size_t leading_on() const;
};

/// Thresholds sigmoid(Wx+b) at delta = sigmoid(-a): pre-activations at or
/// beyond +a are On, at or beyond -a are Off, anything between is Half.
ActivationPattern tnn_activation_pattern(const TnnModel& m, double x);

/// delta * (N + 1) * U with delta = sigmoid(-a) and U the largest |y|
/// component; bounds the error on every fitting sample.
double tnn_error_bound(const TnnModel& m);

/// Sharpness a with sigmoid(-a) = epsilon / (U (N + 1)), i.e.
/// ln(U (N + 1) / epsilon - 1). Throws InvalidTolerance when
/// epsilon >= U (N + 1) or epsilon <= 0.
double required_sharpness(double epsilon, std::size_t n, double u);

}  // namespace interpnet
