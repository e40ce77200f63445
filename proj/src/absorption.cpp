#include "interpnet/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>

#include "interpnet/errors.hpp"
#include "interpnet/format.hpp"

namespace interpnet {

namespace {

std::set<std::size_t> stored_indices(const Model& m) {
  std::set<std::size_t> out;
  if (const auto* t = std::get_if<TnnModel>(&m)) {
    out.insert(t->ordered_index.begin(), t->ordered_index.end());
  } else {
    for (const SqannLayer& l : std::get<SqannModel>(m).layers) {
      out.insert(l.sample_indices.begin(), l.sample_indices.end());
    }
  }
  return out;
}

double max_error(const Vector& pred, const Vector& y) {
  double e = 0.0;
  for (std::size_t c = 0; c < y.size(); ++c) {
    e = std::max(e, std::abs(pred[c] - y[c]));
  }
  return e;
}

struct Evaluation {
  double max_error = 0.0;
  double mse = 0.0;
};

template <class Predictor>
Evaluation evaluate(const Predictor& f, const Dataset& d) {
  Evaluation ev;
  double sum = 0.0;
  std::size_t count = 0;
  for (const Sample& s : d) {
    const Vector pred = f(s.x);
    ev.max_error = std::max(ev.max_error, max_error(pred, s.y));
    for (std::size_t c = 0; c < s.y.size(); ++c) {
      const double e = pred[c] - s.y[c];
      sum += e * e;
      ++count;
    }
  }
  ev.mse = count ? sum / static_cast<double>(count) : 0.0;
  return ev;
}

Dataset disjoint_indices(const Dataset& fitting, const Dataset& external) {
  std::set<std::size_t> used;
  std::size_t top = 0;
  for (const Sample& s : fitting) {
    used.insert(s.index);
    top = std::max(top, s.index + 1);
  }
  const bool clash = std::any_of(external.begin(), external.end(),
                                 [&](const Sample& s) { return used.count(s.index) != 0; });
  if (!clash) {
    return external;
  }
  std::vector<Sample> shifted(external.begin(), external.end());
  for (Sample& s : shifted) {
    s.index += top;
  }
  return Dataset(std::move(shifted));
}

}  // namespace

Vector predict(const Model& m, std::span<const double> x) {
  if (const auto* t = std::get_if<TnnModel>(&m)) {
    if (x.size() != 1) {
      throw DimensionMismatch("TNN expects a scalar input, got dimension " + std::to_string(x.size()));
    }
    return tnn_predict(*t, x[0]);
  }
  return sqann_predict(std::get<SqannModel>(m), x).y;
}

double sample_error(const Model& m, const Sample& s) { return max_error(predict(m, s.x), s.y); }

void AbsorptionConfig::validate() const {
  if (!(epsilon > 0.0)) {
    throw InvalidArgument("absorption tolerance epsilon must be positive");
  }
  if (max_rounds == 0) {
    throw InvalidArgument("max_rounds must be at least 1");
  }
}

std::vector<std::size_t> find_ood(const Model& m, const Dataset& external, const AbsorptionConfig& cfg) {
  const auto* sq = std::get_if<SqannModel>(&m);
  const bool weak = sq && cfg.criterion == OodCriterion::ErrorOrWeakActivation;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < external.size(); ++i) {
    const Sample& s = external[i];
    bool ood;
    if (sq) {
      const PredictionOutcome p = sqann_predict(*sq, s.x);
      ood = max_error(p.y, s.y) > cfg.epsilon || (weak && !p.strong());
    } else {
      ood = sample_error(m, s) > cfg.epsilon;
    }
    if (ood) {
      out.push_back(i);
    }
  }
  return out;
}

std::size_t AbsorptionReport::total_absorbed() const noexcept {
  std::size_t n = 0;
  for (const AbsorptionRound& r : rounds) {
    n += r.absorbed.size();
  }
  return n;
}

void AbsorptionReport::write_csv(std::ostream& os) const {
  os << "round,absorbed,fitting_size,external_max_error,external_mse\n";
  os << "0,0," << initial_fitting_size << ',' << format_number(initial_max_error) << ','
     << format_number(initial_mse) << '\n';
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const AbsorptionRound& round = rounds[r];
    os << r + 1 << ',' << round.absorbed.size() << ',' << round.fitting_size_after << ','
       << format_number(round.external_max_error_after) << ',' << format_number(round.external_mse_after)
       << '\n';
  }
}

ModelBuilder tnn_builder(double epsilon, double base_a, DummyGap dummy) {
  if (!(epsilon > 0.0)) {
    throw InvalidTolerance("TNN absorption tolerance must be positive");
  }
  return [=](const Dataset& d) -> Model {
    const OrderedDataset ordered = linear_order(d);
    double u = 0.0;
    for (const Sample& s : d) {
      for (double c : s.y) {
        u = std::max(u, std::abs(c));
      }
    }
    double a = base_a;
    const double half = epsilon / 2.0;
    // If half >= U (N + 1) every sharpness already meets it.
    if (u > 0.0 && half < u * static_cast<double>(d.size() + 1)) {
      a = std::max(a, required_sharpness(half, d.size(), u));
    }
    return build_tnn(ordered, a, dummy);
  };
}

ModelBuilder sqann_builder(SqannConfig cfg) {
  cfg.validate();
  return [cfg](const Dataset& d) -> Model { return build_sqann(d, cfg).model; };
}

Vector EnsembleModel::predict(std::span<const double> x) const {
  const auto* a = std::get_if<SqannModel>(&initial);
  const auto* b = std::get_if<SqannModel>(&current);
  if (!a || !b) {
    return interpnet::predict(current, x);
  }
  PredictionOutcome pa = sqann_predict(*a, x);
  PredictionOutcome pb = sqann_predict(*b, x);
  return pa.max_activation() > pb.max_activation() ? std::move(pa.y) : std::move(pb.y);
}

AbsorptionResult absorb_loop(const ModelBuilder& build, const Dataset& fitting, const Dataset& external,
                             const AbsorptionConfig& cfg) {
  cfg.validate();
  const Dataset ext = disjoint_indices(fitting, external);

  AbsorptionResult result{build(fitting), fitting, {}, std::nullopt};
  if (cfg.keep_initial) {
    result.ensemble = EnsembleModel{result.model, result.model};
  }
  const auto score = [&]() {
    if (result.ensemble) {
      return evaluate([&](const Vector& x) { return result.ensemble->predict(x); }, ext);
    }
    return evaluate([&](const Vector& x) { return predict(result.model, x); }, ext);
  };

  AbsorptionReport& report = result.report;
  report.initial_fitting_size = fitting.size();
  const Evaluation base = score();
  report.initial_max_error = base.max_error;
  report.initial_mse = base.mse;

  std::vector<bool> absorbed(ext.size(), false);
  for (std::size_t round = 0;; ++round) {
    std::vector<std::size_t> ood = find_ood(result.model, ext, cfg);
    std::erase_if(ood, [&](std::size_t i) { return absorbed[i]; });
    if (ood.empty()) {
      report.converged = true;
      break;
    }
    if (round == cfg.max_rounds) {
      break;
    }
    for (std::size_t i : ood) {
      absorbed[i] = true;
    }
    result.fitting = result.fitting.concat(ext.select(ood));
    result.model = build(result.fitting);
    if (result.ensemble) {
      result.ensemble->current = result.model;
    }
    const Evaluation ev = score();
    report.rounds.push_back({std::move(ood), result.fitting.size(), ev.max_error, ev.mse});
  }
  return result;
}

CfCheck cf_check(const Model& before, const Model& after, const Dataset& old_fitting, double epsilon) {
  const std::set<std::size_t> now = stored_indices(after);
  for (std::size_t idx : stored_indices(before)) {
    if (!now.count(idx)) {
      throw InvalidArgument("model_after does not contain sample " + std::to_string(idx) +
                            " stored in model_before");
    }
  }
  for (const Sample& s : old_fitting) {
    if (!now.count(s.index)) {
      throw InvalidArgument("model_after was not built on old fitting sample " +
                            std::to_string(s.index));
    }
  }
  const bool exact = std::holds_alternative<SqannModel>(after);
  CfCheck out;
  for (const Sample& s : old_fitting) {
    const double e = sample_error(after, s);
    out.max_error = std::max(out.max_error, e);
    if (exact ? e != 0.0 : !(e < epsilon)) {
      ++out.violations;
    }
  }
  out.ok = out.violations == 0;
  return out;
}

}  // namespace interpnet
