#include "modw/quadrature.hpp"

#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "modw/errors.hpp"

namespace modw {

namespace {

template <unsigned N>
GaussRule expand()
{
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  GaussRule r;
  // Boost stores the non-negative half; node 0 is the origin for odd N.
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] == 0.0) continue;
    r.nodes.push_back(-x[i]);
    r.weights.push_back(w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.nodes.push_back(x[i]);
    r.weights.push_back(w[i]);
  }
  return r;
}

}  // namespace

GaussRule gauss_legendre(int n)
{
  switch (n) {
    case 8: return expand<8>();
    case 16: return expand<16>();
    case 24: return expand<24>();
    case 32: return expand<32>();
    case 48: return expand<48>();
    case 64: return expand<64>();
    default: throw ConfigError("unsupported Gauss-Legendre order " + std::to_string(n));
  }
}

}  // namespace modw
