// Entanglement, EPR-correlation and non-Gaussianity of Schmidt-diagonal states.
//
// Quadratures follow the vacuum-variance-1/2 convention, x = (a + a^dag)/sqrt2.
// For the zero-mean, real-coefficient family handled here the two-mode
// covariance matrix has diagonal blocks (1/2 + Nbar) I and cross block
// diag(c, -c) with c = <ab>, so both symplectic eigenvalues equal
// sqrt((1/2 + Nbar)^2 - c^2).
#ifndef NLATELE_METRICS_HPP
#define NLATELE_METRICS_HPP

#include <cmath>
#include <vector>

#include "resources.hpp"
#include "schmidt.hpp"

namespace nlatele {

template <typename Scalar = double>
struct CovarianceSummary {
  Scalar i1;      // 1/2 + Nbar
  Scalar i3;      // <a b>
  Scalar d_plus;  // symplectic eigenvalue of the reference Gaussian
};

template <typename Scalar = double>
struct MetricsReport {
  Scalar entropy;          // nats
  Scalar epr;              // Delta z^2
  Scalar non_gaussianity;  // nats
  Scalar mean_photon;
  Scalar cross_moment;
  VectorX<Scalar> photon_distribution;
};

/// Mean photon number per mode, sum n p_n.
template <typename Scalar>
Scalar mean_photon(const SchmidtState<Scalar>& state) {
  const VectorX<Scalar> p = schmidt_probabilities(state);
  Scalar acc(0);
  for (int n = 1; n < state.dim(); ++n) acc += Scalar(n) * p[n];
  return acc;
}

/// <a b> = sum_n N^2 k_n k_{n+1} (n+1).
template <typename Scalar>
Scalar cross_moment(const SchmidtState<Scalar>& state) {
  const auto& k = state.coeffs();
  Scalar acc(0);
  for (int n = 0; n + 1 < state.dim(); ++n) acc += k[n] * k[n + 1] * Scalar(n + 1);
  return state.norm_const() * state.norm_const() * acc;
}

/// Von Neumann entropy of either reduced mode, -sum p_n ln p_n.
template <typename Scalar>
Scalar entanglement_entropy(const SchmidtState<Scalar>& state) {
  const VectorX<Scalar> p = schmidt_probabilities(state);
  Scalar acc(0);
  for (int n = 0; n < state.dim(); ++n) acc -= detail::xlogx(p[n]);
  return acc < Scalar(0) ? Scalar(0) : acc;
}

/// Closed-form twin-beam entropy -ln(1-chi^2) - chi^2 ln(chi^2)/(1-chi^2).
template <typename Scalar>
Scalar twb_entropy_closed(const TwbParams<Scalar>& params) {
  using std::log;
  using std::log1p;
  params.validate();
  const Scalar x = params.chi * params.chi;
  return -log1p(-x) - x * log(x) / (Scalar(1) - x);
}

/// Delta z^2 = Var(x_a - x_b) + Var(p_a + p_b) = 2[1 + 2 Nbar - 2<ab>].
template <typename Scalar>
Scalar epr_correlation(const SchmidtState<Scalar>& state) {
  const Scalar v = Scalar(2) * (Scalar(1) + Scalar(2) * mean_photon(state) -
                                Scalar(2) * cross_moment(state));
  return v < Scalar(0) ? Scalar(0) : v;
}

/// h(x) = (x+1/2) ln(x+1/2) - (x-1/2) ln(x-1/2), h(1/2) = 0.
template <typename Scalar>
Scalar h_function(Scalar x) {
  const Scalar half(0.5);
  if (!(x >= half - Scalar(1e-12))) throw ValidationError("h(x) requires x >= 1/2");
  if (x <= half) return Scalar(0);
  return detail::xlogx(x + half) - detail::xlogx(x - half);
}

template <typename Scalar>
CovarianceSummary<Scalar> covariance_summary(const SchmidtState<Scalar>& state) {
  using std::sqrt;
  const Scalar i1 = Scalar(0.5) + mean_photon(state);
  const Scalar i3 = cross_moment(state);
  const Scalar det = (i1 - i3) * (i1 + i3);
  if (det < Scalar(0.25) - Scalar(1e-9))
    throw NumericalGuardError("reference Gaussian is unphysical: I1^2 - I3^2 < 1/4");
  const Scalar d = det > Scalar(0.25) ? sqrt(det) : Scalar(0.5);
  return {i1, i3, d};
}

/// The alternative sqrt(I1 + I3) form of the symplectic eigenvalue. It does
/// not vanish for the twin beam; exposed only for side-by-side inspection.
template <typename Scalar>
Scalar sum_form_dplus(const SchmidtState<Scalar>& state) {
  using std::sqrt;
  const auto cs = covariance_summary(state);
  return sqrt(cs.i1 + cs.i3);
}

/// Entropic non-Gaussianity of a pure state: entropy of its reference
/// Gaussian, 2 h(d_plus).
template <typename Scalar>
Scalar non_gaussianity(const SchmidtState<Scalar>& state) {
  return Scalar(2) * h_function(covariance_summary(state).d_plus);
}

template <typename Scalar>
MetricsReport<Scalar> metrics_report(const SchmidtState<Scalar>& state) {
  return {entanglement_entropy(state),  epr_correlation(state), non_gaussianity(state),
          mean_photon(state),           cross_moment(state),    schmidt_probabilities(state)};
}

}  // namespace nlatele

#endif  // NLATELE_METRICS_HPP
