#include "polya/special.hpp"

#include <cmath>

#include "polya/errors.hpp"

namespace polya {

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) throw Error(Errc::InvalidParameter, "hurwitz_zeta needs s > 1, q > 0");
  // B_{2j} / (2j)!
  static constexpr double kBernoulliOverFactorial[] = {
      1.0 / 12.0,
      -1.0 / 720.0,
      1.0 / 30240.0,
      -1.0 / 1209600.0,
      1.0 / 47900160.0,
      -691.0 / 1307674368000.0,
      1.0 / 74724249600.0,
      -3617.0 / 10670622842880000.0,
  };
  constexpr int kShift = 16;
  double direct = 0.0;
  for (int k = kShift - 1; k >= 0; --k) direct += std::pow(q + k, -s);
  const double x = q + kShift;
  double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  // Rising factorial s (s+1) ... (s+2j-2) times x^{-s-2j+1}.
  double rising = s;
  double power = std::pow(x, -s - 1.0);
  const double inv_x2 = 1.0 / (x * x);
  for (int j = 0; j < 8; ++j) {
    tail += kBernoulliOverFactorial[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power *= inv_x2;
  }
  return direct + tail;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace polya
