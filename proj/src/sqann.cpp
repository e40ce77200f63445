#include "interpnet/sqann.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "interpnet/errors.hpp"

namespace interpnet {

namespace {

// Fingerprints closer than this count as identical ("activation exactly 1").
constexpr double kIdenticalDistance = 1e-12;
constexpr double kOutputTolerance = 1e-9;

double euclidean(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double max_of(const Vector& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

bool outputs_differ(const Vector& a, const Vector& b) {
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (std::abs(a[c] - b[c]) > kOutputTolerance) {
      return true;
    }
  }
  return false;
}

NeuronRef make_ref(const SqannModel& m, std::size_t layer, std::size_t node, double activation) {
  return NeuronRef{layer, node, activation, m.layers[layer].sample_indices[node]};
}

// State of one construction run. Positions refer to the input dataset.
class Builder {
 public:
  Builder(const Dataset& d, const SqannConfig& cfg) : data_(d), cfg_(cfg) {
    const std::size_t n = d.size();
    budget_ = cfg.max_construction_steps != 0 ? cfg.max_construction_steps : 50 * n * n;
    model_.config = cfg;
    model_.input_dim = d.input_dim();
    model_.output_dim = d.output_dim();
    cache_.resize(n);
    pool_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pool_[i] = i;
    }
  }

  SqannBuild run() {
    std::size_t current = 0;
    while (!pool_.empty()) {
      if (model_.layers.size() == current) {
        model_.layers.emplace_back();
        positions_.emplace_back();
      }
      bool restarted = false;
      std::size_t i = 0;
      while (i < pool_.size()) {
        const std::size_t pos = pool_[i];
        if (++trace_.steps > budget_) {
          throw BudgetExceeded("construction exceeded " + std::to_string(budget_) +
                                   " steps while building layer " + std::to_string(current + 1),
                               current);
        }
        const Outcome outcome = check(pos, current);
        if (outcome.collided_layer) {
          const std::size_t lc = *outcome.collided_layer;
          if (lc == current) {
            house(pos, current);
            record(TraceKind::Collision, pos, current);
            pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(i));
            continue;
          }
          resolve_deep_collision(i, lc, current);
          current = lc + 1;
          restarted = true;
          break;
        }
        if (outcome.admissible) {
          house(pos, current);
          record(TraceKind::Admitted, pos, current);
          pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
          record(TraceKind::Filtered, pos, current);
          ++i;
        }
      }
      if (!restarted) {
        ++current;
      }
    }
    return SqannBuild{std::move(model_), std::move(trace_)};
  }

 private:
  struct Outcome {
    std::optional<std::size_t> collided_layer;
    bool admissible = false;
  };

  // Input the sample feeds to `layer`: the raw x for layer 0, otherwise the
  // cached activation of the previous layer.
  const Vector& input_to(std::size_t pos, std::size_t layer) const {
    return layer == 0 ? data_[pos].x : cache_[pos][layer - 1];
  }

  Outcome check(std::size_t pos, std::size_t current) {
    std::vector<Vector>& acts = cache_[pos];
    Outcome out;
    // Layers below `current` are frozen during a pass, so their activations
    // stay valid until a collision truncates the cache.
    for (std::size_t l = 0; l < current; ++l) {
      if (acts.size() == l) {
        acts.push_back(layer_activation(input_to(pos, l), model_.layers[l], cfg_.dsa));
      }
      if (max_of(acts[l]) > cfg_.tau_act) {
        ensure_resolvable(pos, l);
        out.collided_layer = l;
        return out;
      }
    }
    const SqannLayer& layer = model_.layers[current];
    if (layer.size() == 0) {
      out.admissible = true;
      return out;
    }
    const Vector here = layer_activation(input_to(pos, current), layer, cfg_.dsa);
    if (max_of(here) > cfg_.tau_act) {
      ensure_resolvable(pos, current);
      out.collided_layer = current;
      return out;
    }
    out.admissible = std::all_of(here.begin(), here.end(), [&](double v) { return v < cfg_.tau_ad; });
    return out;
  }

  void ensure_resolvable(std::size_t pos, std::size_t layer) const {
    const SqannLayer& target = model_.layers[layer];
    const Vector& v = input_to(pos, layer);
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (euclidean(v, target.nodes[j]) < kIdenticalDistance &&
          outputs_differ(data_[pos].y, target.alphas[j])) {
        throw UnresolvableCollision("sample " + std::to_string(data_[pos].index) +
                                    " reproduces the fingerprint of sample " +
                                    std::to_string(target.sample_indices[j]) + " at layer " +
                                    std::to_string(layer + 1) + " with a different output");
      }
    }
  }

  void house(std::size_t pos, std::size_t layer) {
    SqannLayer& target = model_.layers[layer];
    target.nodes.push_back(input_to(pos, layer));
    target.alphas.push_back(data_[pos].y);
    target.sample_indices.push_back(data_[pos].index);
    positions_[layer].push_back(pos);
  }

  void resolve_deep_collision(std::size_t pool_slot, std::size_t lc, std::size_t current) {
    const std::size_t pos = pool_[pool_slot];
    TraceEvent ev{TraceKind::Collision, data_[pos].index, lc, trace_.steps, {}, {}};
    std::vector<std::size_t> returned;
    for (std::size_t l = lc + 1; l <= current; ++l) {
      ev.destroyed_layers.push_back(l);
      for (std::size_t p : positions_[l]) {
        returned.push_back(p);
        ev.returned_indices.push_back(data_[p].index);
      }
    }
    pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(pool_slot));
    pool_.insert(pool_.end(), returned.begin(), returned.end());

    model_.layers.resize(lc + 1);
    positions_.resize(lc + 1);
    // Layer lc gains a node, so every cached activation from lc on is stale.
    for (std::vector<Vector>& acts : cache_) {
      if (acts.size() > lc) {
        acts.resize(lc);
      }
    }
    // The collider's own input to lc is still valid (computed from layers < lc).
    house_with_input(pos, lc);
    trace_.events.push_back(std::move(ev));
  }

  void house_with_input(std::size_t pos, std::size_t layer) { house(pos, layer); }

  void record(TraceKind kind, std::size_t pos, std::size_t layer) {
    trace_.events.push_back(TraceEvent{kind, data_[pos].index, layer, trace_.steps, {}, {}});
  }

  const Dataset& data_;
  const SqannConfig& cfg_;
  std::size_t budget_ = 0;
  SqannModel model_;
  ConstructionTrace trace_;
  std::vector<std::size_t> pool_;
  std::vector<std::vector<std::size_t>> positions_;
  std::vector<std::vector<Vector>> cache_;
};

struct Ranked {
  double activation;
  std::size_t layer;
  std::size_t node;
};

}  // namespace

void SqannConfig::validate() const {
  dsa.validate();
  if (!(tau_ad > 0.0 && tau_ad < tau_act && tau_act < 1.0)) {
    throw InvalidArgument("thresholds must satisfy 0 < tau_ad < tau_act < 1");
  }
}

std::size_t SqannModel::node_count() const noexcept {
  std::size_t total = 0;
  for (const SqannLayer& l : layers) {
    total += l.size();
  }
  return total;
}

double PredictionOutcome::max_activation() const noexcept {
  double best = 0.0;
  for (const Vector& v : activations) {
    best = std::max(best, max_of(v));
  }
  return best;
}

Vector layer_activation(std::span<const double> v, const SqannLayer& layer, const DsaParams& p) {
  Vector out(layer.size());
  for (std::size_t j = 0; j < layer.size(); ++j) {
    const Vector& node = layer.nodes[j];
    if (node.size() != v.size()) {
      throw DimensionMismatch("layer expects vectors of dimension " + std::to_string(node.size()) +
                              ", got " + std::to_string(v.size()));
    }
    out[j] = dsa(euclidean(v, node), p);
  }
  return out;
}

ForwardResult forward_to_layer(const SqannModel& m, std::span<const double> x, std::size_t upto) {
  if (upto > m.layers.size()) {
    throw InvalidArgument("forward_to_layer: model has only " + std::to_string(m.layers.size()) +
                          " layers");
  }
  if (x.size() != m.input_dim) {
    throw DimensionMismatch("model expects input dimension " + std::to_string(m.input_dim) +
                            ", got " + std::to_string(x.size()));
  }
  ForwardResult result;
  result.activations.reserve(upto);
  Vector input(x.begin(), x.end());
  for (std::size_t l = 0; l < upto; ++l) {
    Vector acts = layer_activation(input, m.layers[l], m.config.dsa);
    if (!result.first_strong && max_of(acts) > m.config.tau_act) {
      const auto best = std::max_element(acts.begin(), acts.end());
      const auto node = static_cast<std::size_t>(best - acts.begin());
      result.first_strong = make_ref(m, l, node, *best);
    }
    result.activations.push_back(acts);
    input = std::move(acts);
  }
  return result;
}

SqannBuild build_sqann(const Dataset& d, const SqannConfig& cfg) {
  cfg.validate();
  if (d.empty()) {
    throw InvalidArgument("cannot build a SQANN on an empty dataset");
  }
  return Builder(d, cfg).run();
}

PredictionOutcome sqann_predict(const SqannModel& m, std::span<const double> x) {
  ForwardResult fwd = forward_to_layer(m, x, m.layers.size());
  PredictionOutcome out;
  out.activations = std::move(fwd.activations);

  if (fwd.first_strong) {
    const NeuronRef& n = *fwd.first_strong;
    out.y = m.layers[n.layer].alphas[n.node];
    out.provenance = StrongActivation{n};
    return out;
  }

  std::vector<Ranked> ranked;
  for (std::size_t l = 0; l < out.activations.size(); ++l) {
    for (std::size_t j = 0; j < out.activations[l].size(); ++j) {
      ranked.push_back({out.activations[l][j], l, j});
    }
  }
  // Strongest first; ties go to the shallower layer, then the lower node.
  const auto by_strength = [](const Ranked& a, const Ranked& b) {
    if (a.activation != b.activation) {
      return a.activation > b.activation;
    }
    return a.layer != b.layer ? a.layer < b.layer : a.node < b.node;
  };
  const std::size_t keep = std::min<std::size_t>(2, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    by_strength);

  const Ranked first = ranked[0];
  const Ranked second = ranked.size() > 1 ? ranked[1] : ranked[0];
  Interpolated interp{{make_ref(m, first.layer, first.node, first.activation),
                       make_ref(m, second.layer, second.node, second.activation)},
                      {1.0, 0.0}};

  const bool blend =
      ranked.size() > 1 && m.config.interpolation == InterpolationRule::TwoNeuronWeighted;
  if (blend) {
    const double total = first.activation + second.activation;
    interp.weights = total > 0.0
                         ? std::array<double, 2>{first.activation / total, second.activation / total}
                         : std::array<double, 2>{0.5, 0.5};
  }
  const Vector& y1 = m.layers[first.layer].alphas[first.node];
  const Vector& y2 = m.layers[second.layer].alphas[second.node];
  out.y.resize(y1.size());
  for (std::size_t c = 0; c < y1.size(); ++c) {
    out.y[c] = interp.weights[0] * y1[c] + interp.weights[1] * y2[c];
  }
  out.provenance = interp;
  return out;
}

Regime classify_activation(double activation, const SqannConfig& cfg) {
  if (activation > cfg.tau_act) {
    return Regime::Strong;
  }
  if (activation >= cfg.tau_ad) {
    return Regime::Moderate;
  }
  return Regime::Weak;
}

ExplanationReport explain(const SqannModel& m, std::span<const double> x) {
  ExplanationReport report;
  report.outcome = sqann_predict(m, x);
  for (const Vector& layer : report.outcome.activations) {
    std::vector<Regime> regimes;
    regimes.reserve(layer.size());
    for (double a : layer) {
      regimes.push_back(classify_activation(a, m.config));
    }
    report.regimes.push_back(std::move(regimes));
  }

  const auto stored = [&](const NeuronRef& n) { return m.layers[n.layer].alphas[n.node]; };
  if (const auto* strong = std::get_if<StrongActivation>(&report.outcome.provenance)) {
    report.references.push_back({strong->neuron, stored(strong->neuron), 1.0});
  } else {
    const auto& interp = std::get<Interpolated>(report.outcome.provenance);
    report.ood_suspect = true;
    for (std::size_t k = 0; k < 2; ++k) {
      if (k == 1 && interp.weights[1] == 0.0) {
        break;
      }
      report.references.push_back({interp.neurons[k], stored(interp.neurons[k]), interp.weights[k]});
    }
  }
  return report;
}

std::string to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::Admitted:
      return "admitted";
    case TraceKind::Filtered:
      return "filtered";
    case TraceKind::Collision:
      return "collision";
  }
  return "unknown";
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Weak:
      return "weak";
    case Regime::Moderate:
      return "moderate";
    case Regime::Strong:
      return "strong";
  }
  return "unknown";
}

void ConstructionTrace::write_log(std::ostream& os) const {
  const auto join = [&os](const std::vector<std::size_t>& values, std::size_t offset) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      os << (i ? " " : "") << values[i] + offset;
    }
  };
  os << "kind,sample_index,layer,step,destroyed_layers,returned_indices\n";
  for (const TraceEvent& ev : events) {
    os << to_string(ev.kind) << ',' << ev.sample_index << ',' << ev.layer + 1 << ',' << ev.step << ',';
    join(ev.destroyed_layers, 1);
    os << ',';
    join(ev.returned_indices, 0);
    os << '\n';
  }
}

}  // namespace interpnet
