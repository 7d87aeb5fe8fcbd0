#pragma once

#include <span>
#include <vector>

namespace invscat::numerics {

// First derivative of uniformly spaced samples, second order everywhere:
// central differences inside, three-point one-sided formulas at both ends.
std::vector<double> central_difference(std::span<const double> values,
                                       double h);

}  // namespace invscat::numerics
