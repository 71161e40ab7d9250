#include "nrlimit/norms.hpp"

namespace nrlimit {

double sobolev_weight(const Xi& xi, double s, bool homogeneous) {
  const double k2 = norm2(xi);
  if (homogeneous) {
    if (k2 == 0.0) return 0.0;
    return std::pow(k2, s);
  }
  return std::pow(1.0 + k2, s);
}

double integrate(const ScalarField& f) {
  double sum = 0.0;
  for (double v : f[0]) sum += v;
  return sum * f.lattice().cell_volume();
}

}  // namespace nrlimit
