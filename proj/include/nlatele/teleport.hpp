// Braunstein-Kimble teleportation of coherent states through a
// Schmidt-diagonal resource, in the transfer-operator picture:
//
//   T(beta) = (N / sqrt(pi)) sum_n k_n D(beta) |n><n| D(-beta),
//   |psi_out(beta)> = T(beta) |alpha>,   p(beta) = <psi_out|psi_out>,
//   F(beta) = |<alpha|T(beta)|alpha>|^2 / p(beta),
//   Fbar = int d^2beta |<alpha|T(beta)|alpha>|^2.
//
// Teleporter gain is unity throughout. Outputs are kept in the
// displaced-Fock frame: psi_out = D(beta) sum_n c_n |n>.
#ifndef NLATELE_TELEPORT_HPP
#define NLATELE_TELEPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "metrics.hpp"
#include "quadrature.hpp"
#include "resources.hpp"
#include "schmidt.hpp"

namespace nlatele {

template <typename Scalar>
using VectorXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar = double>
struct CoherentAmplitude {
  std::complex<Scalar> value;

  void validate() const {
    using std::abs;
    using std::isfinite;
    detail::require(isfinite(value.real()) && isfinite(value.imag()),
                    "coherent amplitude must be finite");
    detail::require(abs(value) <= Scalar(50), "coherent amplitude exceeds |alpha| <= 50");
  }
};

/// beta = x_- + i p_+.
template <typename Scalar = double>
struct HomodyneOutcome {
  std::complex<Scalar> value;

  void validate() const {
    using std::isfinite;
    detail::require(isfinite(value.real()) && isfinite(value.imag()),
                    "homodyne outcome must be finite");
  }
};

template <typename Scalar = double>
struct ConditionalOutput {
  VectorXc<Scalar> displaced_coeffs;
  std::complex<Scalar> beta;
  Scalar prob_density;
  bool truncation_warning = false;  // |c_{D-1}|^2 / p(beta) > 1e-8
};

/// Integration settings for the fidelity average and its oracles.
struct QuadratureSpec {
  int radial_nodes = 200;
  double grid_half_width = 8.0;
  int grid_points = 201;
  long mc_samples = 100000;
  std::uint64_t rng_seed = 20210601;

  void validate() const {
    detail::require(radial_nodes > 0, "radial_nodes must be positive");
    detail::require(grid_half_width > 0.0, "grid_half_width must be positive");
    detail::require(grid_points > 1, "grid_points must be > 1");
    detail::require(mc_samples > 0, "mc_samples must be positive");
  }
};

/// <n| D(beta) |alpha>
///   = (n!)^{-1/2} (alpha+beta)^n exp(-|alpha+beta|^2/2) exp((alpha* beta - alpha beta*)/2).
template <typename Scalar>
std::complex<Scalar> displaced_number_overlap(int n, std::complex<Scalar> beta,
                                              std::complex<Scalar> alpha) {
  using std::abs;
  using std::arg;
  using std::exp;
  using std::lgamma;
  using std::log;
  using std::norm;
  using std::polar;
  detail::require(n >= 0, "Fock index must be non-negative");
  const std::complex<Scalar> z = alpha + beta;
  const Scalar phase = (std::conj(alpha) * beta).imag();  // (a*b - a b*)/2 = i Im(a*b)
  if (z == std::complex<Scalar>(0)) return n == 0 ? polar(Scalar(1), phase) : Scalar(0);
  const Scalar log_mag =
      -norm(z) / Scalar(2) + Scalar(n) * log(abs(z)) - lgamma(Scalar(n + 1)) / Scalar(2);
  return polar(exp(log_mag), Scalar(n) * arg(z) + phase);
}

/// All overlaps <n|D(beta)|alpha>, n < dim, by upward recurrence.
template <typename Scalar>
VectorXc<Scalar> displaced_number_overlaps(int dim, std::complex<Scalar> beta,
                                           std::complex<Scalar> alpha) {
  using std::norm;
  using std::sqrt;
  VectorXc<Scalar> out(dim);
  const std::complex<Scalar> z = alpha + beta;
  if (norm(z) / Scalar(2) > Scalar(600)) {
    // e^{-|z|^2/2} underflows; evaluate each term in log form.
    for (int n = 0; n < dim; ++n) out[n] = displaced_number_overlap(n, beta, alpha);
    return out;
  }
  const Scalar phase = (std::conj(alpha) * beta).imag();
  out[0] = std::polar(std::exp(-norm(z) / Scalar(2)), phase);
  for (int n = 1; n < dim; ++n) out[n] = out[n - 1] * z / sqrt(Scalar(n));
  return out;
}

namespace detail {

/// p(beta) and <alpha|T(beta)|alpha> without materializing c_n.
template <typename Scalar>
struct TransferKernel {
  Scalar prob;
  std::complex<Scalar> diag;
};

template <typename Scalar>
TransferKernel<Scalar> transfer_kernel(const SchmidtState<Scalar>& resource,
                                       std::complex<Scalar> alpha, std::complex<Scalar> beta) {
  using std::norm;
  using std::sqrt;
  const VectorXc<Scalar> ov = displaced_number_overlaps(resource.dim(), -beta, alpha);
  const Scalar pref = resource.norm_const() / sqrt(std::numbers::pi_v<Scalar>);
  Scalar prob(0);
  std::complex<Scalar> diag(0);
  for (int n = 0; n < resource.dim(); ++n) {
    const std::complex<Scalar> c = pref * resource.coeffs()[n] * ov[n];
    prob += norm(c);
    diag += c * std::conj(ov[n]);
  }
  return {prob, diag};
}

template <typename Scalar>
Scalar fidelity_from_kernel(const TransferKernel<Scalar>& kern) {
  using std::norm;
  if (!(kern.prob > Scalar(1e-300)))
    throw NumericalGuardError("conditional fidelity undefined: outcome probability vanishes");
  return std::clamp(norm(kern.diag) / kern.prob, Scalar(0), Scalar(1));
}

}  // namespace detail

/// c_n = (N/sqrt(pi)) k_n <n|D(-beta)|alpha>.
template <typename Scalar>
ConditionalOutput<Scalar> transfer_apply(const SchmidtState<Scalar>& resource,
                                         const CoherentAmplitude<Scalar>& alpha,
                                         const HomodyneOutcome<Scalar>& beta) {
  using std::norm;
  using std::sqrt;
  alpha.validate();
  beta.validate();
  const VectorXc<Scalar> ov = displaced_number_overlaps(resource.dim(), -beta.value, alpha.value);
  const Scalar pref = resource.norm_const() / sqrt(std::numbers::pi_v<Scalar>);
  ConditionalOutput<Scalar> out;
  out.beta = beta.value;
  out.displaced_coeffs = ov;
  for (int n = 0; n < resource.dim(); ++n) out.displaced_coeffs[n] *= pref * resource.coeffs()[n];
  out.prob_density = out.displaced_coeffs.squaredNorm();
  const Scalar edge = norm(out.displaced_coeffs[resource.dim() - 1]);
  out.truncation_warning = out.prob_density > Scalar(0) && edge / out.prob_density > Scalar(1e-8);
  return out;
}

template <typename Scalar>
Scalar outcome_probability(const ConditionalOutput<Scalar>& out) {
  return out.prob_density;
}

template <typename Scalar>
Scalar conditional_fidelity(const SchmidtState<Scalar>& resource,
                            const CoherentAmplitude<Scalar>& alpha,
                            const HomodyneOutcome<Scalar>& beta) {
  alpha.validate();
  beta.validate();
  return detail::fidelity_from_kernel(detail::transfer_kernel(resource, alpha.value, beta.value));
}

/// Exact reduction of the outcome average:
///   Fbar = N^2 sum_{m,n} k_m k_n C(m+n, n) / 2^{m+n+1}.
/// Binomials are taken through lgamma so D ~ 10^3 stays in range.
template <typename Scalar>
Scalar average_fidelity_series(const SchmidtState<Scalar>& resource) {
  using std::exp;
  using std::lgamma;
  using std::log;
  const int d = resource.dim();
  const auto& k = resource.coeffs();
  std::vector<Scalar> lg(2 * d);
  for (int i = 0; i < 2 * d; ++i) lg[i] = lgamma(Scalar(i + 1));
  const Scalar ln2 = log(Scalar(2));

  std::vector<Scalar> rows(d);
  for (int m = 0; m < d; ++m) {
    if (k[m] == Scalar(0)) continue;
    Scalar acc = k[m] * k[m] * exp(lg[2 * m] - Scalar(2) * lg[m] - Scalar(2 * m + 1) * ln2);
    for (int n = m + 1; n < d; ++n)
      acc += Scalar(2) * k[m] * k[n] *
             exp(lg[m + n] - lg[m] - lg[n] - Scalar(m + n + 1) * ln2);
    rows[m] = acc;
  }
  return resource.norm_const() * resource.norm_const() * detail::pairwise_sum(rows);
}

/// Fbar = N^2 int_0^inf [sum_n k_n e^{-t} t^n / n!]^2 dt, by Gauss-Laguerre
/// in u = 2t. The integrand is then a polynomial of degree 2(D-1), so the
/// rule is exact once radial_nodes >= D.
template <typename Scalar>
Scalar average_fidelity_radial(const SchmidtState<Scalar>& resource, const QuadratureSpec& spec = {}) {
  using std::exp;
  using std::lgamma;
  using std::log;
  spec.validate();
  const auto rule = gauss_laguerre<Scalar>(spec.radial_nodes);
  const int d = resource.dim();
  const auto& k = resource.coeffs();
  std::vector<Scalar> log_terms(d);
  std::vector<Scalar> contrib(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Scalar lt = log(rule.nodes[i] / Scalar(2));
    Scalar mx = -std::numeric_limits<Scalar>::infinity();
    for (int n = 0; n < d; ++n) {
      log_terms[n] = k[n] > Scalar(0) ? log(k[n]) + Scalar(n) * lt - lgamma(Scalar(n + 1))
                                      : -std::numeric_limits<Scalar>::infinity();
      mx = std::max(mx, log_terms[n]);
    }
    Scalar s(0);
    for (int n = 0; n < d; ++n) s += exp(log_terms[n] - mx);
    const Scalar log_poly = mx + log(s);
    contrib[i] = exp(rule.log_weights[i] + Scalar(2) * log_poly);
  }
  return resource.norm_const() * resource.norm_const() * detail::pairwise_sum(contrib) /
         Scalar(2);
}

template <typename Scalar = double>
struct Grid2dResult {
  Scalar value;           // int d^2beta |<alpha|T|alpha>|^2
  Scalar probability;     // int d^2beta p(beta), should be 1
  Scalar boundary_ratio;  // max boundary integrand / max integrand
  bool boundary_warning;  // boundary_ratio > 1e-12
};

/// Direct trapezoidal evaluation of the outcome average on a square grid
/// centred on alpha. Uses the full complex transfer-operator path, so it
/// shares nothing with the radial reductions except the overlap formula.
template <typename Scalar>
Grid2dResult<Scalar> average_fidelity_grid2d(const SchmidtState<Scalar>& resource,
                                             const CoherentAmplitude<Scalar>& alpha,
                                             const QuadratureSpec& spec = {}) {
  using std::norm;
  alpha.validate();
  spec.validate();
  const int np = spec.grid_points;
  const Scalar hw = Scalar(spec.grid_half_width);
  const Scalar h = Scalar(2) * hw / Scalar(np - 1);
  auto weight = [np](int i) { return (i == 0 || i == np - 1) ? Scalar(0.5) : Scalar(1); };

  std::vector<Scalar> row_f(np), row_p(np), cells_f(np), cells_p(np);
  Scalar peak(0), edge(0);
  for (int j = 0; j < np; ++j) {
    const Scalar y = -hw + Scalar(j) * h;
    for (int i = 0; i < np; ++i) {
      const Scalar x = -hw + Scalar(i) * h;
      const std::complex<Scalar> beta = alpha.value + std::complex<Scalar>(x, y);
      const auto kern = detail::transfer_kernel(resource, alpha.value, beta);
      const Scalar f = norm(kern.diag);
      const Scalar w = weight(i) * weight(j);
      cells_f[i] = w * f;
      cells_p[i] = w * kern.prob;
      peak = std::max(peak, f);
      if (i == 0 || j == 0 || i == np - 1 || j == np - 1) edge = std::max(edge, f);
    }
    row_f[j] = detail::pairwise_sum(cells_f);
    row_p[j] = detail::pairwise_sum(cells_p);
  }
  Grid2dResult<Scalar> out;
  out.value = detail::pairwise_sum(row_f) * h * h;
  out.probability = detail::pairwise_sum(row_p) * h * h;
  out.boundary_ratio = peak > Scalar(0) ? edge / peak : Scalar(0);
  out.boundary_warning = out.boundary_ratio > Scalar(1e-12);
  return out;
}

template <typename Scalar = double>
struct SampledEstimate {
  Scalar estimate;
  Scalar std_error;
  long proposals;
};

/// Monte Carlo over outcomes: beta ~ p(beta) by rejection against an
/// isotropic Gaussian envelope around alpha, then the mean of F(beta).
///
/// The envelope variance s starts at 1 + 2 Nbar and is widened, if needed,
/// beyond the geometric decay rate of the coefficient tail, so p/q stays
/// bounded. The bound M is measured on a radial scan and asserted on every
/// proposal.
template <typename Scalar>
SampledEstimate<Scalar> average_fidelity_sampled(const SchmidtState<Scalar>& resource,
                                                 const CoherentAmplitude<Scalar>& alpha,
                                                 const QuadratureSpec& spec = {}) {
  using std::exp;
  using std::lgamma;
  using std::log;
  using std::sqrt;
  alpha.validate();
  spec.validate();
  detail::require(spec.mc_samples >= 1000, "Monte Carlo needs at least 10^3 samples");

  const int d = resource.dim();
  const auto& k = resource.coeffs();
  Scalar s = Scalar(1) + Scalar(2) * mean_photon(resource);
  if (d >= 2 && k[d - 2] > Scalar(0)) {
    const Scalar rho = (k[d - 1] / k[d - 2]) * (k[d - 1] / k[d - 2]);
    if (rho < Scalar(1)) s = std::max(s, Scalar(1.25) / (Scalar(1) - rho));
  }
  const Scalar n2 = resource.norm_const() * resource.norm_const();
  // log of (p/q)(t) with t = |beta - alpha|^2; the 1/pi cancels.
  std::vector<Scalar> base(d), lt(d);
  for (int n = 0; n < d; ++n)
    base[n] = k[n] > Scalar(0) ? Scalar(2) * log(k[n]) - lgamma(Scalar(n + 1))
                               : -std::numeric_limits<Scalar>::infinity();
  auto log_ratio = [&](Scalar t) {
    const Scalar log_t = t > Scalar(0) ? log(t) : Scalar(0);
    Scalar mx = -std::numeric_limits<Scalar>::infinity();
    for (int n = 0; n < d; ++n) {
      lt[n] = (t > Scalar(0) || n == 0) ? base[n] + Scalar(n) * log_t - t
                                        : -std::numeric_limits<Scalar>::infinity();
      mx = std::max(mx, lt[n]);
    }
    Scalar acc(0);
    for (int n = 0; n < d; ++n) acc += exp(lt[n] - mx);
    return log(n2 * s) + mx + log(acc) + t / s;
  };

  const int scan = 4000;
  const Scalar t_max = Scalar(60) * s + Scalar(4 * d);
  Scalar log_m = -std::numeric_limits<Scalar>::infinity();
  Scalar last = 0;
  for (int i = 0; i <= scan; ++i) {
    last = log_ratio(t_max * Scalar(i) / Scalar(scan));
    log_m = std::max(log_m, last);
  }
  if (!(last < log_m - log(Scalar(1e3))))
    throw NumericalGuardError("rejection envelope does not dominate the outcome density");
  log_m += log(Scalar(1.05));

  std::mt19937_64 gen(spec.rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Scalar sigma = sqrt(s / Scalar(2));

  long accepted = 0, proposals = 0;
  Scalar mean(0), m2(0);
  while (accepted < spec.mc_samples) {
    const Scalar dx = sigma * Scalar(normal(gen));
    const Scalar dy = sigma * Scalar(normal(gen));
    const Scalar u = Scalar(unif(gen));
    ++proposals;
    const Scalar lr = log_ratio(dx * dx + dy * dy) - log_m;
    if (lr > Scalar(0))
      throw NumericalGuardError("rejection bound violated by a proposal");
    if (log(u) >= lr) continue;
    const std::complex<Scalar> beta = alpha.value + std::complex<Scalar>(dx, dy);
    const Scalar f =
        detail::fidelity_from_kernel(detail::transfer_kernel(resource, alpha.value, beta));
    ++accepted;
    const Scalar delta = f - mean;
    mean += delta / Scalar(accepted);
    m2 += delta * (f - mean);
  }
  const Scalar var = m2 / Scalar(accepted - 1);
  return {mean, sqrt(var / Scalar(accepted)), proposals};
}

/// Twin-beam average fidelity (1 + chi)/2.
template <typename Scalar>
Scalar twb_average_fidelity_closed(const TwbParams<Scalar>& params) {
  params.validate();
  return (Scalar(1) + params.chi) / Scalar(2);
}

template <typename Scalar = double>
struct GainScan {
  std::vector<std::pair<Scalar, Scalar>> points;  // (g, Fbar)
  Scalar argmax_gain;
  Scalar max_fidelity;
};

template <typename Scalar>
GainScan<Scalar> gain_scan(const TwbParams<Scalar>& params, int threshold,
                           const std::vector<Scalar>& gains, const TruncationPolicy& policy = {}) {
  params.validate();
  detail::require(!gains.empty(), "gain grid must not be empty");
  for (std::size_t i = 0; i < gains.size(); ++i) {
    detail::require(gains[i] >= Scalar(1), "gain grid values must be >= 1");
    detail::require(i == 0 || gains[i] > gains[i - 1], "gain grid must be ascending");
  }
  GainScan<Scalar> out;
  out.max_fidelity = -1;
  for (Scalar g : gains) {
    const auto [state, ps] =
        make_amplified_twb(params, NlaConfig<Scalar>{g, threshold}, policy);
    const Scalar f = average_fidelity_series(state);
    out.points.emplace_back(g, f);
    if (f > out.max_fidelity) {
      out.max_fidelity = f;
      out.argmax_gain = g;
    }
  }
  return out;
}

enum class FidelityClass { classical, nonlocal, secure };

inline const char* to_string(FidelityClass c) {
  switch (c) {
    case FidelityClass::classical: return "classical";
    case FidelityClass::nonlocal: return "nonlocal";
    case FidelityClass::secure: return "secure";
  }
  return "?";
}

/// classical: Fbar <= 1/2; nonlocal: (1/2, 2/3]; secure: > 2/3.
template <typename Scalar>
FidelityClass classify_fidelity(Scalar fbar) {
  detail::require(fbar >= Scalar(0) && fbar <= Scalar(1), "fidelity must lie in [0,1]");
  if (fbar <= Scalar(0.5)) return FidelityClass::classical;
  if (fbar <= Scalar(2) / Scalar(3)) return FidelityClass::nonlocal;
  return FidelityClass::secure;
}

template <typename Scalar = double>
struct ChiInterval {
  Scalar lo;
  Scalar hi;
};

template <typename Scalar = double>
struct CrossoverResult {
  std::optional<Scalar> chi_c2;                      // first chi with Fbar_amp < Fbar_std
  std::optional<ChiInterval<Scalar>> secure_only;    // Fbar_amp > 2/3 >= Fbar_std
  std::vector<Scalar> chi;
  std::vector<Scalar> fbar_amplified;
  std::vector<Scalar> fbar_standard;
};

/// Absolute slack below which two fidelities count as equal.
inline constexpr double kFidelityTieSlack = 1e-12;

template <typename Scalar>
CrossoverResult<Scalar> crossover_find(int threshold, Scalar gain, const std::vector<Scalar>& chi_grid,
                                       const TruncationPolicy& policy = {}) {
  detail::require(!chi_grid.empty(), "chi grid must not be empty");
  for (std::size_t i = 0; i < chi_grid.size(); ++i) {
    detail::require(chi_grid[i] > Scalar(0) && chi_grid[i] < Scalar(1), "chi grid must lie in (0,1)");
    detail::require(i == 0 || chi_grid[i] > chi_grid[i - 1], "chi grid must be ascending");
  }
  CrossoverResult<Scalar> out;
  const Scalar two_thirds = Scalar(2) / Scalar(3);
  std::optional<ChiInterval<Scalar>> run;
  for (Scalar chi : chi_grid) {
    const TwbParams<Scalar> params{chi};
    const auto [amp, ps] = make_amplified_twb(params, NlaConfig<Scalar>{gain, threshold}, policy);
    const Scalar fa = average_fidelity_series(amp);
    const Scalar fs = average_fidelity_series(make_twb(params, policy));
    out.chi.push_back(chi);
    out.fbar_amplified.push_back(fa);
    out.fbar_standard.push_back(fs);

    if (!out.chi_c2 && fa < fs - Scalar(kFidelityTieSlack)) out.chi_c2 = chi;
    if (fa > two_thirds && fs <= two_thirds) {
      if (run) run->hi = chi;
      else run = ChiInterval<Scalar>{chi, chi};
    } else if (run) {
      if (!out.secure_only || run->hi - run->lo > out.secure_only->hi - out.secure_only->lo)
        out.secure_only = run;
      run.reset();
    }
  }
  if (run && (!out.secure_only || run->hi - run->lo > out.secure_only->hi - out.secure_only->lo))
    out.secure_only = run;
  return out;
}

}  // namespace nlatele

#endif  // NLATELE_TELEPORT_HPP
