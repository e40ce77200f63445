#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace interpnet {

using Vector = std::vector<double>;

struct Sample {
  Vector x;
  Vector y;
  /// Position in the originally supplied dataset. Unique within a Dataset.
  std::size_t index = 0;
};

/// Ordered, immutable collection of samples sharing input/output dimensions.
///
/// Order is meaningful: SQANN construction consumes samples in this order and
/// TNN sorts its own copy.
class Dataset {
 public:
  Dataset() = default;

  /// Throws DataError on empty vectors, mismatched dimensions, non-finite
  /// components or repeated indices.
  explicit Dataset(std::vector<Sample> samples);

  /// Builds a dataset whose indices are the row positions 0..n-1.
  static Dataset from_rows(const std::vector<Vector>& xs, const std::vector<Vector>& ys);

  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return output_dim_; }

  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::span<const Sample> samples() const noexcept { return samples_; }
  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }

  /// First `n` samples (ordered prefix split), original indices kept.
  Dataset head(std::size_t n) const;
  /// Samples from position `n` onward, original indices kept.
  Dataset tail(std::size_t n) const;
  /// This dataset followed by `other`. Indices must stay unique.
  Dataset concat(const Dataset& other) const;
  /// Samples at the given positions, in the given order.
  Dataset select(std::span<const std::size_t> positions) const;

 private:
  std::vector<Sample> samples_;
  std::size_t input_dim_ = 0;
  std::size_t output_dim_ = 0;
};

using PositionPair = std::pair<std::size_t, std::size_t>;

struct ValidationResult {
  /// Pairs (i, j), i < j, of positions with identical x and differing y.
  std::vector<PositionPair> ill_defined;
  /// Pairs with identical x and identical y. Harmless, reported as warnings.
  std::vector<PositionPair> duplicates;

  bool ok() const noexcept { return ill_defined.empty(); }
};

/// Exact (bitwise component) comparison of inputs.
ValidationResult validate_dataset(const Dataset& d);

/// Per-dimension affine map onto [0,1]. Constant dimensions map to 0.5; other
/// values in such a dimension are shifted by the same offset, unscaled.
struct ScalingParams {
  Vector min;
  Vector max;

  bool empty() const noexcept { return min.empty(); }
  Vector apply(std::span<const double> x) const;
  Vector invert(std::span<const double> scaled) const;
  Dataset apply(const Dataset& d) const;
};

ScalingParams fit_scaling(const Dataset& d);

/// Scales `d` with parameters fitted on `d` itself.
std::pair<Dataset, ScalingParams> min_max_scale(const Dataset& d);

/// Scalar-input dataset sorted strictly descending by x.
class OrderedDataset {
 public:
  const Dataset& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  double x(std::size_t k) const { return data_[k].x[0]; }
  const Vector& y(std::size_t k) const { return data_[k].y; }

 private:
  friend OrderedDataset linear_order(const Dataset& d);
  explicit OrderedDataset(Dataset d) : data_(std::move(d)) {}
  Dataset data_;
};

/// Sorts a 1-D input dataset so that sample 0 has the largest x.
/// Throws DimensionMismatch for input_dim != 1, IllDefined if two samples
/// share x with differing y, DuplicateInput if they share x and y.
OrderedDataset linear_order(const Dataset& d);

}  // namespace interpnet
