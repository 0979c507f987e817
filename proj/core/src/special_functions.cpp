#include "dimercorr/special_functions.hpp"

#include <cmath>
#include <stdexcept>

#include "dimercorr/units.hpp"

namespace dimercorr::special {

cd trigamma(cd z) {
  if (!(z.real() > 0.0)) throw std::domain_error("trigamma: Re z must be positive");
  cd acc = 0.0;
  while (std::abs(z) < 20.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  const cd w = 1.0 / z;
  const cd w2 = w * w;
  // Bernoulli tail: B2k / z^(2k+1)
  const cd series =
      w + 0.5 * w2 +
      w2 * w * (1.0 / 6.0 + w2 * (-1.0 / 30.0 + w2 * (1.0 / 42.0 + w2 * (-1.0 / 30.0 + w2 * (5.0 / 66.0)))));
  return acc + series;
}

cd expint_e1(cd z) {
  if (z == cd(0.0)) throw std::domain_error("expint_e1: pole at zero");
  if (z.real() < 0.0 && std::abs(z.imag()) < 1e-300) throw std::domain_error("expint_e1: branch cut");
  constexpr double kEuler = 0.57721566490153286061;
  if (std::abs(z) < 2.0) {
    // -gamma - log z - sum (-z)^k / (k k!)
    cd sum = 0.0;
    cd term = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= -z / static_cast<double>(k);
      const cd add = term / static_cast<double>(k);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return -kEuler - std::log(z) - sum;
  }
  // Continued fraction, modified Lentz.
  constexpr double kTiny = 1e-300;
  cd b = z + 1.0;
  cd c = 1.0 / kTiny;
  cd d = 1.0 / b;
  cd h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-z);
  }
  throw std::runtime_error("expint_e1: continued fraction did not converge");
}

cd expint_e2(cd z) {
  if (z == cd(0.0)) return 1.0;
  return std::exp(-z) - z * expint_e1(z);
}

}  // namespace dimercorr::special
