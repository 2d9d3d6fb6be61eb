// Gauss-Laguerre rule for weight e^{-u} on [0, inf).
#ifndef NLATELE_QUADRATURE_HPP
#define NLATELE_QUADRATURE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "core.hpp"

namespace nlatele {

/// Nodes and natural-log weights. Weights of the outer nodes fall far below
/// the double range (w ~ e^{-u}), so they are only ever used as logs.
template <typename Scalar = double>
struct GaussLaguerreRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> log_weights;
};

namespace detail {

/// Evaluates L_n(x) and L_{n-1}(x) by the three-term recurrence, rescaling
/// to stay in range. Returns log|L_n|, sign and the ratio L_{n-1}/L_n.
template <typename Scalar>
struct LaguerreEval {
  Scalar log_abs;
  Scalar sign;
  Scalar prev_over_cur;
};

template <typename Scalar>
LaguerreEval<Scalar> laguerre_eval(int n, Scalar x) {
  using std::abs;
  using std::log;
  constexpr Scalar kBig = Scalar(1e100);
  Scalar lm1(0), l(1), log_scale(0);
  for (int j = 1; j <= n; ++j) {
    const Scalar next = ((Scalar(2 * j - 1) - x) * l - Scalar(j - 1) * lm1) / Scalar(j);
    lm1 = l;
    l = next;
    if (abs(l) > kBig) {
      l /= kBig;
      lm1 /= kBig;
      log_scale += log(kBig);
    }
  }
  return {log(abs(l)) + log_scale, l < Scalar(0) ? Scalar(-1) : Scalar(1), lm1 / l};
}

}  // namespace detail

/// n-point rule: Golub-Welsch eigenvalues as starting points, polished by
/// Newton on L_n, weights w_i = x_i / ((n+1) L_{n+1}(x_i))^2 in log form.
template <typename Scalar = double>
GaussLaguerreRule<Scalar> gauss_laguerre(int n) {
  using std::abs;
  using std::log;
  detail::require(n >= 1, "Gauss-Laguerre rule needs at least one node");

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diag(n), sub(n > 1 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) diag[i] = Scalar(2 * i + 1);
  for (int i = 0; i + 1 < n; ++i) sub[i] = Scalar(i + 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  GaussLaguerreRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.log_weights.resize(n);
  for (int i = 0; i < n; ++i) {
    Scalar x = eig.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {
      const auto ev = detail::laguerre_eval(n, x);
      // L_n'(x) = n (L_n - L_{n-1}) / x, so L_n / L_n' = x / (n (1 - ratio)).
      const Scalar step = x / (Scalar(n) * (Scalar(1) - ev.prev_over_cur));
      x -= step;
      if (abs(step) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * x) break;
    }
    const auto next = detail::laguerre_eval(n + 1, x);
    rule.nodes[i] = x;
    rule.log_weights[i] = log(x) - Scalar(2) * (log(Scalar(n + 1)) + next.log_abs);
  }
  return rule;
}

}  // namespace nlatele

#endif  // NLATELE_QUADRATURE_HPP
