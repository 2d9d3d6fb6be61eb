// Entangled resources: twin beam, NLA-amplified twin beam, and the
// photon-subtracted / added-then-subtracted comparison states.
#ifndef NLATELE_RESOURCES_HPP
#define NLATELE_RESOURCES_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "schmidt.hpp"

namespace nlatele {

/// Squeezing parameter chi = tanh r of a two-mode squeezed vacuum.
template <typename Scalar = double>
struct TwbParams {
  Scalar chi;

  void validate() const {
    detail::require(chi > Scalar(0) && chi < Scalar(1), "chi must lie in (0,1)");
  }
  Scalar squeezing() const {
    using std::atanh;
    return atanh(chi);
  }
};

/// Noiseless linear amplifier: real gain g >= 1, Fock threshold p >= 0.
template <typename Scalar = double>
struct NlaConfig {
  Scalar gain = Scalar(1);
  int threshold = 0;

  void validate() const {
    using std::isfinite;
    detail::require(isfinite(gain) && gain >= Scalar(1), "NLA gain must be >= 1");
    detail::require(threshold >= 0, "NLA threshold must be non-negative");
  }
  /// Diagonal Kraus eigenvalue on |n>: g^{n-p} up to the threshold, 1 above.
  Scalar kraus(int n) const {
    using std::pow;
    return n <= threshold ? pow(gain, Scalar(n - threshold)) : Scalar(1);
  }
};

namespace detail {
inline std::string fmt_label(const char* fmt, double a, double b = 0, int c = 0) {
  char buf[96];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

template <typename Scalar>
Scalar one_minus_sq(Scalar chi) {
  return (Scalar(1) - chi) * (Scalar(1) + chi);
}
}  // namespace detail

template <typename Scalar>
SchmidtState<Scalar> make_twb(const TwbParams<Scalar>& params,
                              const TruncationPolicy& policy = {}) {
  using std::pow;
  using std::sqrt;
  params.validate();
  const int d = required_dimension(params.chi, policy, 0);
  VectorX<Scalar> k(d);
  for (int n = 0; n < d; ++n) k[n] = pow(params.chi, Scalar(n));
  return SchmidtState<Scalar>(std::move(k), sqrt(detail::one_minus_sq(params.chi)),
                              pow(params.chi, Scalar(2 * d)),
                              detail::fmt_label("twb chi=%g", double(params.chi)));
}

/// Heralding probability of the amplifier on a twin beam, in closed form:
/// (1-chi^2) g^{-2p} sum_{n<=p} (g chi)^{2n}  +  chi^{2(p+1)}.
template <typename Scalar>
Scalar success_probability(const TwbParams<Scalar>& params, const NlaConfig<Scalar>& nla) {
  using std::pow;
  params.validate();
  nla.validate();
  const int p = nla.threshold;
  const Scalar gx = nla.gain * params.chi;
  const Scalar head = detail::one_minus_sq(params.chi) * pow(nla.gain, Scalar(-2 * p)) *
                      detail::geometric_sum(gx * gx, p + 1);
  const Scalar tail = pow(params.chi, Scalar(2 * (p + 1)));
  return head + tail;
}

/// Amplified twin beam and its heralding probability.
template <typename Scalar>
std::pair<SchmidtState<Scalar>, Scalar> make_amplified_twb(const TwbParams<Scalar>& params,
                                                           const NlaConfig<Scalar>& nla,
                                                           const TruncationPolicy& policy = {}) {
  using std::pow;
  using std::sqrt;
  const Scalar ps = success_probability(params, nla);
  policy.validate();

  // Above the threshold the tail is chi^{2D}/P_s, so cut the twin-beam rule
  // at epsilon*P_s; the cut must sit above the threshold for that to hold.
  TruncationPolicy scaled = policy;
  scaled.epsilon = policy.epsilon * double(ps);
  if (!(scaled.epsilon > 0.0))
    throw NumericalGuardError("success probability underflows the truncation rule");
  const int d = required_dimension(params.chi, scaled, nla.threshold);

  VectorX<Scalar> k(d);
  for (int n = 0; n < d; ++n) k[n] = nla.kraus(n) * pow(params.chi, Scalar(n));
  // When the cap lands at or below the threshold the closed-form tail is
  // not geometric; measure it against the normalization instead.
  const Scalar n2 = detail::one_minus_sq(params.chi) / ps;
  const Scalar tail = d > nla.threshold
                          ? pow(params.chi, Scalar(2 * d)) / ps
                          : std::max(Scalar(0), Scalar(1) - n2 * k.squaredNorm());
  SchmidtState<Scalar> state(std::move(k), sqrt(n2), tail,
                             detail::fmt_label("nla g=%1$g p=%3$d chi=%2$g", double(nla.gain),
                                               double(params.chi), nla.threshold));
  return {std::move(state), ps};
}

/// a b applied to the twin beam: k_n = (n+1) chi^n.
template <typename Scalar>
SchmidtState<Scalar> make_photon_subtracted_twb(const TwbParams<Scalar>& params,
                                                const TruncationPolicy& policy = {}) {
  using std::pow;
  params.validate();
  const Scalar chi = params.chi;
  const Scalar x = chi * chi;
  const Scalar total = (Scalar(1) + x) / pow(Scalar(1) - x, Scalar(3));
  return detail::truncate_family<Scalar>(
      [chi](int n) { return Scalar(n + 1) * pow(chi, Scalar(n)); }, total, policy, 1,
      detail::fmt_label("photon-subtracted chi=%g", double(chi)));
}

/// a b a^dag b^dag applied to the twin beam: k_n = (n+1)^2 chi^n.
template <typename Scalar>
SchmidtState<Scalar> make_added_then_subtracted_twb(const TwbParams<Scalar>& params,
                                                    const TruncationPolicy& policy = {}) {
  using std::pow;
  params.validate();
  const Scalar chi = params.chi;
  const Scalar x = chi * chi;
  // sum (n+1)^4 x^n = (1 + 11x + 11x^2 + x^3) / (1-x)^5
  const Scalar total =
      (Scalar(1) + x * (Scalar(11) + x * (Scalar(11) + x))) / pow(Scalar(1) - x, Scalar(5));
  return detail::truncate_family<Scalar>(
      [chi](int n) { return Scalar(n + 1) * Scalar(n + 1) * pow(chi, Scalar(n)); }, total,
      policy, 1, detail::fmt_label("added-then-subtracted chi=%g", double(chi)));
}

}  // namespace nlatele

#endif  // NLATELE_RESOURCES_HPP
