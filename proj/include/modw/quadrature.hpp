#pragma once

#include <vector>

namespace modw {

/// Gauss-Legendre nodes and weights on [-1, 1] (n in {8, 16, 24, 32, 48, 64}).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

}  // namespace modw
