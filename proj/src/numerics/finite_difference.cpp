#include "invscat/numerics/finite_difference.hpp"

#include "invscat/errors.hpp"

namespace invscat::numerics {

std::vector<double> central_difference(std::span<const double> values,
                                       double h) {
  const std::size_t n = values.size();
  if (n < 3) throw ValidationError("central_difference: need at least 3 values");
  if (!(h > 0.0)) throw ValidationError("central_difference: step must be positive");

  std::vector<double> d(n);
  const double inv = 1.0 / (2.0 * h);
  d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) * inv;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = (values[i + 1] - values[i - 1]) * inv;
  }
  d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) * inv;
  return d;
}

}  // namespace invscat::numerics
