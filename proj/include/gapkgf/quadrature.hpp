#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature for vector-valued
// integrands. The rule is open, so endpoint singularities are never sampled.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace gapkgf {

template <std::size_t N>
using Values = std::array<double, N>;

template <std::size_t N>
struct QuadratureResult {
  Values<N> value{};
  double error = 0;  // max over components
  int evaluations = 0;
  int subdivisions = 0;
  bool converged = false;
};

namespace detail {

// QUADPACK qk21 nodes and weights.
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452, 0.930157491355708226001207180059508,
    0.865063366688984510732096688423493, 0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784, 0.294392862701460198131126603103866,
    0.148874338981631210884826001129720, 0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390, 0.054755896574351996031381300244580,
    0.075039674810919952767043140916190, 0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707, 0.142775938577060080797094273138717,
    0.147739104901338491374841515972068, 0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kGaussWeights = {0.066671344308688137593568809893332,
                                                        0.149451349150580593145776339657697,
                                                        0.219086362515982043995534934228163,
                                                        0.269266719309996355091226921569469,
                                                        0.295524224714752870173892994651338};

template <std::size_t N>
struct Segment {
  double a = 0;
  double b = 0;
  Values<N> value{};
  double error = 0;
};

template <std::size_t N, typename F>
Segment<N> gauss_kronrod_21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Values<N> kronrod{};
  Values<N> gauss{};
  Values<N> abs_sum{};
  std::array<Values<N>, 21> samples{};

  samples[0] = f(center);
  for (std::size_t c = 0; c < N; ++c) {
    kronrod[c] = kKronrodWeights[10] * samples[0][c];
    abs_sum[c] = kKronrodWeights[10] * std::abs(samples[0][c]);
  }
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    samples[1 + 2 * j] = f(center - dx);
    samples[2 + 2 * j] = f(center + dx);
    for (std::size_t c = 0; c < N; ++c) {
      const double lo = samples[1 + 2 * j][c];
      const double hi = samples[2 + 2 * j][c];
      kronrod[c] += kKronrodWeights[j] * (lo + hi);
      abs_sum[c] += kKronrodWeights[j] * (std::abs(lo) + std::abs(hi));
      if (j % 2 == 1) gauss[c] += kGaussWeights[j / 2] * (lo + hi);
    }
  }

  Segment<N> seg{a, b, {}, 0.0};
  for (std::size_t c = 0; c < N; ++c) {
    const double mean = 0.5 * kronrod[c];
    double asc = kKronrodWeights[10] * std::abs(samples[0][c] - mean);
    for (std::size_t j = 0; j < 10; ++j)
      asc += kKronrodWeights[j] * (std::abs(samples[1 + 2 * j][c] - mean) + std::abs(samples[2 + 2 * j][c] - mean));
    seg.value[c] = kronrod[c] * half;
    double err = std::abs((kronrod[c] - gauss[c]) * half);
    const double resasc = asc * std::abs(half);
    if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double resabs = abs_sum[c] * std::abs(half);
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
    seg.error = std::max(seg.error, err);
  }
  return seg;
}

}  // namespace detail

/// Integrates f over [a, b] (a < b) to max(abs_tol, rel_tol * |I|_max),
/// bisecting the segment with the largest error estimate. The result is a
/// deterministic function of the inputs. converged is false when
/// max_subdivisions is exhausted; the best estimate is still returned.
template <std::size_t N, typename F>
QuadratureResult<N> integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol,
                                       int max_subdivisions) {
  QuadratureResult<N> result;
  if (!(b > a)) {
    result.converged = true;
    return result;
  }
  std::vector<detail::Segment<N>> segments{detail::gauss_kronrod_21<N>(f, a, b)};
  result.evaluations = 21;

  Values<N> total = segments.front().value;
  double total_error = segments.front().error;
  auto target = [&] {
    double scale = 0;
    for (double v : total) scale = std::max(scale, std::abs(v));
    return std::max(abs_tol, rel_tol * scale);
  };

  while (total_error > target() && result.subdivisions < max_subdivisions) {
    const auto worst = std::max_element(segments.begin(), segments.end(),
                                        [](const auto& x, const auto& y) { return x.error < y.error; });
    const double lo = worst->a;
    const double hi = worst->b;
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // interval exhausted at machine precision
    *worst = detail::gauss_kronrod_21<N>(f, lo, mid);
    segments.push_back(detail::gauss_kronrod_21<N>(f, mid, hi));
    result.evaluations += 42;
    ++result.subdivisions;
    total = {};
    total_error = 0;
    for (const auto& seg : segments) {
      for (std::size_t c = 0; c < N; ++c) total[c] += seg.value[c];
      total_error += seg.error;
    }
  }
  result.value = total;
  result.error = total_error;
  result.converged = total_error <= target();
  return result;
}

}  // namespace gapkgf
