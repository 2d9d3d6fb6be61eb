// Truncated Schmidt-diagonal two-mode pure states  N * sum_n k_n |n,n>.
#ifndef NLATELE_SCHMIDT_HPP
#define NLATELE_SCHMIDT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "core.hpp"

namespace nlatele {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Immutable truncated Schmidt-diagonal state.
///
/// Coefficients are kept unnormalized next to a separate normalization
/// constant, so closed-form resource coefficients can be stored verbatim.
/// `tail_bound` bounds the probability mass that lies above the cut;
/// the constructor enforces |N^2 sum k_n^2 - 1| <= tail_bound up to
/// summation rounding of 64 eps (D+1).
template <typename Scalar = double>
class SchmidtState {
 public:
  SchmidtState(VectorX<Scalar> coeffs, Scalar norm_const, Scalar tail_bound,
               std::string label = {})
      : coeffs_(std::move(coeffs)),
        norm_const_(norm_const),
        tail_bound_(tail_bound),
        label_(std::move(label)) {
    using std::abs;
    using std::isfinite;
    detail::require(coeffs_.size() >= 1, "Schmidt state needs dimension >= 1");
    for (Eigen::Index n = 0; n < coeffs_.size(); ++n)
      detail::require(isfinite(coeffs_[n]) && coeffs_[n] >= Scalar(0),
                      "Schmidt coefficients must be finite and non-negative");
    detail::require(isfinite(norm_const_) && norm_const_ > Scalar(0),
                    "normalization constant must be positive");
    detail::require(isfinite(tail_bound_) && tail_bound_ >= Scalar(0),
                    "tail bound must be non-negative");

    const Scalar defect = abs(norm_const_ * norm_const_ * coeffs_.squaredNorm() - Scalar(1));
    const Scalar slack = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                         Scalar(coeffs_.size() + 1);
    if (defect > tail_bound_ + slack)
      throw ValidationError("Schmidt state normalization defect exceeds its tail bound");
  }

  const VectorX<Scalar>& coeffs() const { return coeffs_; }
  Scalar norm_const() const { return norm_const_; }
  Scalar tail_bound() const { return tail_bound_; }
  const std::string& label() const { return label_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }

  /// Normalized amplitude N*k_n.
  Scalar amplitude(int n) const { return norm_const_ * coeffs_[n]; }

  /// The vacuum product state |0,0>.
  static SchmidtState vacuum() {
    return SchmidtState(VectorX<Scalar>::Ones(1), Scalar(1), Scalar(0), "vacuum");
  }

 private:
  VectorX<Scalar> coeffs_;
  Scalar norm_const_;
  Scalar tail_bound_;
  std::string label_;
};

using SchmidtStated = SchmidtState<double>;

/// p_n = N^2 k_n^2.
template <typename Scalar>
VectorX<Scalar> schmidt_probabilities(const SchmidtState<Scalar>& state) {
  const Scalar n2 = state.norm_const() * state.norm_const();
  return (n2 * state.coeffs().array().square()).matrix();
}

/// Smallest D > p (and <= max_dim) with chi^{2D} <= epsilon, the geometric
/// tail of a twin beam. Returns max_dim when the cap is hit; the caller then
/// owes tail_bound = chi^{2 max_dim}.
template <typename Scalar>
int required_dimension(Scalar chi, const TruncationPolicy& policy, int p = 0) {
  using std::ceil;
  using std::log;
  using std::pow;
  detail::require(chi > Scalar(0) && chi < Scalar(1), "chi must lie in (0,1)");
  detail::require(p >= 0, "threshold must be non-negative");
  policy.validate();

  const int floor_dim = p + 1;
  if (floor_dim >= policy.max_dim) return policy.max_dim;
  const Scalar x = chi * chi;
  const Scalar eps = Scalar(policy.epsilon);
  const Scalar guess = ceil(log(eps) / log(x));
  int d = guess > Scalar(policy.max_dim) ? policy.max_dim
                                         : std::max(1, static_cast<int>(guess));
  // The log-ratio guess can be off by one either way in floating point.
  while (d > 1 && pow(x, Scalar(d - 1)) <= eps) --d;
  while (d < policy.max_dim && pow(x, Scalar(d)) > eps) ++d;
  return std::clamp(d, floor_dim, policy.max_dim);
}

/// Memory bound for dense two-mode matrices.
inline constexpr int kMaxDenseDim = 2048;

/// D x D coefficient matrix with the normalized amplitudes on the diagonal.
template <typename Scalar>
MatrixX<Scalar> dense_two_mode(const SchmidtState<Scalar>& state) {
  if (state.dim() > kMaxDenseDim)
    throw ValidationError("dense two-mode matrix would exceed the memory bound");
  return (state.norm_const() * state.coeffs()).asDiagonal();
}

namespace detail {

/// Chooses the cut for a coefficient family whose full squared norm is known
/// in closed form. `coeff(n)` must eventually decay monotonically. The tail
/// is obtained by summing the discarded terms themselves, so it stays
/// accurate far below machine epsilon of the total.
template <typename Scalar, typename Coeff>
SchmidtState<Scalar> truncate_family(Coeff coeff, Scalar total_sq,
                                     const TruncationPolicy& policy, int min_dim,
                                     std::string label) {
  using std::sqrt;
  policy.validate();
  constexpr int kHardCap = 1 << 20;
  const Scalar negligible = total_sq * Scalar(1e-40);
  std::vector<Scalar> sq;
  Scalar prev = std::numeric_limits<Scalar>::infinity();
  for (int n = 0; n < kHardCap; ++n) {
    const Scalar k = coeff(n);
    const Scalar s = k * k;
    sq.push_back(s);
    if (n >= policy.max_dim && s < negligible && s <= prev) break;
    prev = s;
  }
  std::vector<Scalar> suffix(sq.size() + 1, Scalar(0));
  for (std::size_t i = sq.size(); i-- > 0;) suffix[i] = suffix[i + 1] + sq[i];

  int d = std::max(1, min_dim);
  while (d < policy.max_dim && suffix[d] / total_sq > Scalar(policy.epsilon)) ++d;
  d = std::min(d, policy.max_dim);

  VectorX<Scalar> k(d);
  for (int n = 0; n < d; ++n) k[n] = coeff(n);
  return SchmidtState<Scalar>(std::move(k), Scalar(1) / sqrt(total_sq),
                              suffix[d] / total_sq, std::move(label));
}

}  // namespace detail
}  // namespace nlatele

#endif  // NLATELE_SCHMIDT_HPP
