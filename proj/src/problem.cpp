// SPDX-License-Identifier: Apache-2.0
#include "sdc/problem.hpp"

#include <algorithm>

namespace sdc {

double InnerSolveConfig::tolerance(double residual) const {
  return std::max(relative * residual, absolute);
}

void Problem::eval_split(const State&, double, State&, State&) const {
  throw std::logic_error(std::string(name()) + " has no implicit/explicit splitting");
}

}  // namespace sdc
