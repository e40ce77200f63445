#include "interpnet/activations.hpp"

#include <cmath>

#include "interpnet/errors.hpp"

namespace interpnet {

void DsaParams::validate() const {
  if (!(a1 > 0.0) || !(a2 > 0.0)) {
    throw InvalidArgument("dsa widths a1 and a2 must be positive");
  }
  if (!(r >= 0.0 && r <= 1.0)) {
    throw InvalidArgument("dsa mixing weight r must lie in [0, 1]");
  }
}

double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double selective_pi(double x, double a) { return a / (a + x * x); }

double super_gaussian(double x, double a) {
  double q = x / a;
  q *= q;  // ^2
  q *= q;  // ^4
  q *= q;  // ^8
  return std::exp(-q);
}

double dsa(double x, const DsaParams& p) {
  return (1.0 - p.r) * selective_pi(x, p.a1) + p.r * super_gaussian(x, p.a2);
}

}  // namespace interpnet
