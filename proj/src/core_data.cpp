#include "interpnet/core_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_set>

#include "interpnet/errors.hpp"

namespace interpnet {

namespace {

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
}

}  // namespace

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) {
    return;
  }
  input_dim_ = samples_.front().x.size();
  output_dim_ = samples_.front().y.size();
  if (input_dim_ == 0 || output_dim_ == 0) {
    throw DataError("samples must have non-empty x and y");
  }
  std::unordered_set<std::size_t> seen;
  seen.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (s.x.size() != input_dim_ || s.y.size() != output_dim_) {
      throw DimensionMismatch("sample at position " + std::to_string(i) +
                              " has inconsistent dimensions");
    }
    if (!all_finite(s.x) || !all_finite(s.y)) {
      throw DataError("sample at position " + std::to_string(i) + " has a non-finite value");
    }
    if (!seen.insert(s.index).second) {
      throw DataError("duplicate sample index " + std::to_string(s.index));
    }
  }
}

Dataset Dataset::from_rows(const std::vector<Vector>& xs, const std::vector<Vector>& ys) {
  if (xs.size() != ys.size()) {
    throw DimensionMismatch("input and output row counts differ");
  }
  std::vector<Sample> samples;
  samples.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    samples.push_back(Sample{xs[i], ys[i], i});
  }
  return Dataset(std::move(samples));
}

Dataset Dataset::head(std::size_t n) const {
  n = std::min(n, samples_.size());
  return Dataset(std::vector<Sample>(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Dataset Dataset::tail(std::size_t n) const {
  n = std::min(n, samples_.size());
  return Dataset(std::vector<Sample>(samples_.begin() + static_cast<std::ptrdiff_t>(n), samples_.end()));
}

Dataset Dataset::concat(const Dataset& other) const {
  std::vector<Sample> all(samples_);
  all.insert(all.end(), other.samples_.begin(), other.samples_.end());
  return Dataset(std::move(all));
}

Dataset Dataset::select(std::span<const std::size_t> positions) const {
  std::vector<Sample> picked;
  picked.reserve(positions.size());
  for (std::size_t p : positions) {
    picked.push_back(samples_.at(p));
  }
  return Dataset(std::move(picked));
}

ValidationResult validate_dataset(const Dataset& d) {
  ValidationResult result;
  // Vector's operator< is lexicographic over doubles, which groups exactly
  // equal inputs together (inputs are finite, so no NaN ordering issues).
  std::map<Vector, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < d.size(); ++i) {
    groups[d[i].x].push_back(i);
  }
  for (const auto& [x, members] : groups) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const std::size_t i = std::min(members[a], members[b]);
        const std::size_t j = std::max(members[a], members[b]);
        if (d[i].y == d[j].y) {
          result.duplicates.emplace_back(i, j);
        } else {
          result.ill_defined.emplace_back(i, j);
        }
      }
    }
  }
  std::sort(result.ill_defined.begin(), result.ill_defined.end());
  std::sort(result.duplicates.begin(), result.duplicates.end());
  return result;
}

Vector ScalingParams::apply(std::span<const double> x) const {
  if (x.size() != min.size()) {
    throw DimensionMismatch("scaling expects " + std::to_string(min.size()) + " components, got " +
                            std::to_string(x.size()));
  }
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double range = max[i] - min[i];
    // A constant dimension keeps unit scale around 0.5, so fitting values
    // land on 0.5 and external deviations are not discarded.
    out[i] = range > 0.0 ? (x[i] - min[i]) / range : 0.5 + (x[i] - min[i]);
  }
  return out;
}

Vector ScalingParams::invert(std::span<const double> scaled) const {
  if (scaled.size() != min.size()) {
    throw DimensionMismatch("scaling dimension mismatch");
  }
  Vector out(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    const double range = max[i] - min[i];
    out[i] = range > 0.0 ? min[i] + scaled[i] * range : min[i] + (scaled[i] - 0.5);
  }
  return out;
}

Dataset ScalingParams::apply(const Dataset& d) const {
  std::vector<Sample> scaled;
  scaled.reserve(d.size());
  for (const Sample& s : d) {
    scaled.push_back(Sample{apply(s.x), s.y, s.index});
  }
  return Dataset(std::move(scaled));
}

ScalingParams fit_scaling(const Dataset& d) {
  if (d.empty()) {
    throw DataError("cannot fit scaling on an empty dataset");
  }
  ScalingParams p{d[0].x, d[0].x};
  for (const Sample& s : d) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      p.min[i] = std::min(p.min[i], s.x[i]);
      p.max[i] = std::max(p.max[i], s.x[i]);
    }
  }
  return p;
}

std::pair<Dataset, ScalingParams> min_max_scale(const Dataset& d) {
  ScalingParams p = fit_scaling(d);
  Dataset scaled = p.apply(d);
  return {std::move(scaled), std::move(p)};
}

OrderedDataset linear_order(const Dataset& d) {
  if (d.input_dim() != 1) {
    throw DimensionMismatch("linear ordering needs scalar inputs, got dimension " +
                            std::to_string(d.input_dim()));
  }
  std::vector<Sample> sorted(d.begin(), d.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Sample& a, const Sample& b) { return a.x[0] > b.x[0]; });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k].x[0] == sorted[k - 1].x[0]) {
      const std::string which = "samples " + std::to_string(sorted[k - 1].index) + " and " +
                                std::to_string(sorted[k].index);
      if (sorted[k].y != sorted[k - 1].y) {
        throw IllDefined(which + " share x with differing y");
      }
      throw DuplicateInput(which + " share x; strict ordering impossible");
    }
  }
  return OrderedDataset(Dataset(std::move(sorted)));
}

}  // namespace interpnet
