#pragma once

namespace kakeya::detail {

// 8-point Gauss-Legendre on [-1,1]
inline constexpr double kGx[4] = {0.1834346424956498, 0.5255324099163290,
                                  0.7966664774136267, 0.9602898564975363};
inline constexpr double kGw[4] = {0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};

// mean of g over [x0 - u, x0]; lets differences like f(x0) - f(x0-u) be
// formed as u * mean(f') without cancellation
template <class G>
double mean_over(const G& g, double x0, double u) {
  double c = x0 - 0.5 * u, r = 0.5 * u, s = 0.0;
  for (int i = 0; i < 4; ++i) s += kGw[i] * (g(c - r * kGx[i]) + g(c + r * kGx[i]));
  return 0.5 * s;
}

}  // namespace kakeya::detail
