#pragma once

namespace interpnet {

/// Parameters of the double selective activation.
struct DsaParams {
  double a1 = 0.001;  ///< width of the selective (rational) term
  double a2 = 0.5;    ///< width of the super-Gaussian term
  double r = 0.5;     ///< mixing weight of the super-Gaussian term

  /// Throws InvalidArgument unless a1 > 0, a2 > 0 and 0 <= r <= 1.
  void validate() const;
};

double sigmoid(double t);

/// a / (a + x^2). Peaks at exactly 1 for x = 0.
double selective_pi(double x, double a);

/// exp(-(x/a)^8).
double super_gaussian(double x, double a);

/// (1 - r) * selective_pi(x, a1) + r * super_gaussian(x, a2).
///
/// Even, equal to 1 only at 0 and strictly decreasing in |x|. With the default
/// parameters it exceeds 0.9 only for |x| < 0.0158 and falls below 0.1 past
/// |x| = 0.531, which gives the strong / moderate / weak response bands.
double dsa(double x, const DsaParams& p);

}  // namespace interpnet
