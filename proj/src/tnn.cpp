#include "interpnet/tnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "interpnet/activations.hpp"
#include "interpnet/errors.hpp"

namespace interpnet {

namespace {

double choose_dummy_gap(const Vector& gaps, DummyGap dummy) {
  if (dummy.rule == DummyGapRule::Fixed) {
    if (!(dummy.value > 0.0) || !std::isfinite(dummy.value)) {
      throw DegenerateGap("fixed dummy gap must be positive and finite");
    }
    return dummy.value;
  }
  if (gaps.empty()) {
    return 1.0;
  }
  const double sum = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  switch (dummy.rule) {
    case DummyGapRule::MeanGap:
      return sum / static_cast<double>(gaps.size());
    case DummyGapRule::SumOverN:
      return sum / static_cast<double>(gaps.size() + 1);
    case DummyGapRule::LastGap:
      return gaps.back();
    case DummyGapRule::Fixed:
      break;
  }
  return dummy.value;
}

}  // namespace

TnnModel build_tnn(const OrderedDataset& d, double a, DummyGap dummy) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidArgument("TNN sharpness a must be positive and finite");
  }
  const std::size_t n = d.size();
  if (n == 0) {
    throw InvalidArgument("cannot build a TNN on an empty dataset");
  }

  TnnModel m;
  m.sharpness = a;
  m.ordered_x.resize(n);
  m.ordered_y.resize(n);
  m.ordered_index.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    m.ordered_x[k] = d.x(k);
    m.ordered_y[k] = d.y(k);
    m.ordered_index[k] = d.data()[k].index;
  }

  // gaps[k] = x(k) - x(k+1), one per adjacent pair.
  Vector gaps(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    gaps[k] = m.ordered_x[k] - m.ordered_x[k + 1];
    if (!(gaps[k] > 0.0)) {
      throw DegenerateGap("gap between ordered samples " + std::to_string(k) + " and " +
                          std::to_string(k + 1) + " is not positive");
    }
  }
  m.dummy_gap = choose_dummy_gap(gaps, dummy);

  m.weights.resize(n);
  m.biases.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t anchor = n - 1 - j;
    const double gap = anchor + 1 < n ? gaps[anchor] : m.dummy_gap;
    m.weights[j] = 2.0 * a / gap;
    m.biases[j] = a - m.weights[j] * m.ordered_x[anchor];
  }

  // alpha = A^{-1} y: the bidiagonal inverse turns outputs into increments.
  const std::size_t out_dim = d.data().output_dim();
  m.alpha.assign(out_dim, Vector(n));
  for (std::size_t c = 0; c < out_dim; ++c) {
    m.alpha[c][0] = m.ordered_y[n - 1][c];
    for (std::size_t j = 1; j < n; ++j) {
      m.alpha[c][j] = m.ordered_y[n - 1 - j][c] - m.ordered_y[n - j][c];
    }
  }
  return m;
}

Vector tnn_predict(const TnnModel& m, double x) {
  Vector out(m.output_dim(), 0.0);
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double s = sigmoid(m.weights[j] * x + m.biases[j]);
    for (std::size_t c = 0; c < out.size(); ++c) {
      out[c] += m.alpha[c][j] * s;
    }
  }
  return out;
}

std::size_t ActivationPattern::leading_on() const {
  const auto first_not_on =
      std::find_if(states.begin(), states.end(), [](NeuronState s) { return s != NeuronState::On; });
  return static_cast<std::size_t>(first_not_on - states.begin());
}

ActivationPattern tnn_activation_pattern(const TnnModel& m, double x) {
  ActivationPattern p;
  const std::size_t n = m.size();
  p.states.resize(n);
  p.raw.resize(n);
  p.pre_activation.resize(n);
  const double a = m.sharpness;
  for (std::size_t j = 0; j < n; ++j) {
    const double wx = m.weights[j] * x;
    const double z = wx + m.biases[j];
    // Fitting samples land on +-a up to the rounding of W x + b.
    const double slack = 1e-9 * (std::abs(wx) + std::abs(m.biases[j]) + a);
    p.pre_activation[j] = z;
    p.raw[j] = sigmoid(z);
    if (z >= a - slack) {
      p.states[j] = NeuronState::On;
    } else if (z <= -a + slack) {
      p.states[j] = NeuronState::Off;
    } else {
      p.states[j] = NeuronState::Half;
    }
  }
  return p;
}

double tnn_error_bound(const TnnModel& m) {
  double u = 0.0;
  for (const Vector& y : m.ordered_y) {
    for (double c : y) {
      u = std::max(u, std::abs(c));
    }
  }
  return sigmoid(-m.sharpness) * static_cast<double>(m.size() + 1) * u;
}

double required_sharpness(double epsilon, std::size_t n, double u) {
  const double scale = u * static_cast<double>(n + 1);
  if (!(epsilon > 0.0) || !(epsilon < scale)) {
    throw InvalidTolerance("tolerance must satisfy 0 < epsilon < U (N + 1)");
  }
  return std::log(scale / epsilon - 1.0);
}

}  // namespace interpnet
