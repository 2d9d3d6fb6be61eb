// Dense two-mode Fock-space engine used to cross-check the Schmidt fast
// paths. Deliberately brute force: every quantity is rebuilt from ladder
// matrices, explicit Kraus products, density matrices and matrix
// exponentials. Slow, small D only.
#ifndef NLATELE_ORACLE_HPP
#define NLATELE_ORACLE_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "metrics.hpp"
#include "resources.hpp"
#include "schmidt.hpp"
#include "teleport.hpp"

namespace nlatele::oracle {

template <typename Scalar>
using Complex = std::complex<Scalar>;
template <typename Scalar>
using MatrixXc = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

/// Amplitude matrix M with psi = sum_{m,n} M(m,n) |m>_a |n>_b.
template <typename Scalar = double>
struct DenseTwoModeState {
  MatrixXc<Scalar> amplitudes;

  int dim() const { return static_cast<int>(amplitudes.rows()); }

  static DenseTwoModeState from_schmidt(const SchmidtState<Scalar>& s) {
    return {dense_two_mode(s).template cast<Complex<Scalar>>()};
  }

  DenseTwoModeState normalized() const {
    return {amplitudes / amplitudes.norm()};
  }

  /// Zero-padded copy living in a larger Fock space.
  DenseTwoModeState padded(int dim) const {
    MatrixXc<Scalar> m = MatrixXc<Scalar>::Zero(dim, dim);
    const int d = std::min(dim, this->dim());
    m.topLeftCorner(d, d) = amplitudes.topLeftCorner(d, d);
    return {m};
  }
};

/// Single-mode ladder operators truncated to D levels.
template <typename Scalar = double>
struct LadderMatrices {
  MatrixXc<Scalar> annihilation;
  MatrixXc<Scalar> creation;
  MatrixXc<Scalar> number;
  MatrixXc<Scalar> x;
  MatrixXc<Scalar> p;

  explicit LadderMatrices(int dim) {
    using std::sqrt;
    annihilation = MatrixXc<Scalar>::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) annihilation(n - 1, n) = sqrt(Scalar(n));
    creation = annihilation.adjoint();
    number = creation * annihilation;
    const Scalar r = Scalar(1) / sqrt(Scalar(2));
    const Complex<Scalar> mi(0, -1);
    x = r * (annihilation + creation);
    p = (mi * r) * (annihilation - creation);
  }
};

/// <A (x) B> for operators acting on modes a and b.
template <typename Scalar>
Complex<Scalar> expect(const DenseTwoModeState<Scalar>& s, const MatrixXc<Scalar>& on_a,
                       const MatrixXc<Scalar>& on_b) {
  const auto& m = s.amplitudes;
  return (m.conjugate().cwiseProduct(on_a * m * on_b.transpose())).sum();
}

template <typename Scalar = double>
struct KrausResult {
  DenseTwoModeState<Scalar> state;
  Scalar probability;
};

/// Success branch of the amplifier on mode a: diagonal Kraus matrix applied
/// from the left, then renormalized.
template <typename Scalar>
KrausResult<Scalar> apply_kraus_nla(const DenseTwoModeState<Scalar>& s,
                                    const NlaConfig<Scalar>& nla) {
  nla.validate();
  MatrixXc<Scalar> kraus = MatrixXc<Scalar>::Zero(s.dim(), s.dim());
  for (int n = 0; n < s.dim(); ++n) kraus(n, n) = nla.kraus(n);
  DenseTwoModeState<Scalar> out{kraus * s.amplitudes};
  const Scalar prob = out.amplitudes.squaredNorm();
  return {out.normalized(), prob};
}

/// rho_a = Tr_b |psi><psi| = M M^dag.
template <typename Scalar>
MatrixXc<Scalar> reduced_density(const DenseTwoModeState<Scalar>& s) {
  return s.amplitudes * s.amplitudes.adjoint();
}

template <typename Scalar>
Scalar von_neumann_entropy(const MatrixXc<Scalar>& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXc<Scalar>> eig(rho, Eigen::EigenvaluesOnly);
  Scalar acc(0);
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    acc -= detail::xlogx(std::max(Scalar(0), eig.eigenvalues()[i]));
  return acc;
}

/// sigma_ij = 1/2 <{dR_i, dR_j}> with R = (x_a, p_a, x_b, p_b). Built in a
/// space one level larger than the state so products of two ladder
/// operators are exact on it.
template <typename Scalar>
Matrix4<Scalar> covariance_matrix(const DenseTwoModeState<Scalar>& state) {
  const int d = state.dim() + 1;
  const auto s = state.padded(d);
  const LadderMatrices<Scalar> lm(d);
  const MatrixXc<Scalar> id = MatrixXc<Scalar>::Identity(d, d);
  const std::array<std::pair<const MatrixXc<Scalar>*, bool>, 4> quad = {
      {{&lm.x, true}, {&lm.p, true}, {&lm.x, false}, {&lm.p, false}}};

  auto op_pair = [&](int i, int j) {
    // <R_i R_j> with each R acting on mode a (true) or b (false).
    const auto& [ri, ai] = quad[i];
    const auto& [rj, aj] = quad[j];
    if (ai && aj) return expect<Scalar>(s, (*ri) * (*rj), id);
    if (!ai && !aj) return expect<Scalar>(s, id, (*ri) * (*rj));
    if (ai) return expect<Scalar>(s, *ri, *rj);
    return expect<Scalar>(s, *rj, *ri);
  };
  std::array<Scalar, 4> mean{};
  for (int i = 0; i < 4; ++i)
    mean[i] = quad[i].second ? expect<Scalar>(s, *quad[i].first, id).real()
                             : expect<Scalar>(s, id, *quad[i].first).real();

  Matrix4<Scalar> sigma;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      sigma(i, j) = (op_pair(i, j) + op_pair(j, i)).real() / Scalar(2) - mean[i] * mean[j];
  return sigma;
}

/// Symplectic eigenvalues (d_plus >= d_minus): moduli of the spectrum of
/// i Omega sigma. Rejects sigma violating the uncertainty principle.
template <typename Scalar>
std::pair<Scalar, Scalar> symplectic_eigenvalues(const Matrix4<Scalar>& sigma) {
  using std::abs;
  Matrix4<Scalar> omega = Matrix4<Scalar>::Zero();
  omega(0, 1) = omega(2, 3) = Scalar(1);
  omega(1, 0) = omega(3, 2) = Scalar(-1);
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-9))
    throw ValidationError("covariance matrix must be symmetric");
  Eigen::EigenSolver<Matrix4<Scalar>> eig(omega * sigma, false);
  std::array<Scalar, 4> mods;
  for (int i = 0; i < 4; ++i) mods[i] = abs(eig.eigenvalues()[i]);
  std::sort(mods.begin(), mods.end(), std::greater<>());
  if (mods[3] < Scalar(0.5) - Scalar(1e-9))
    throw NumericalGuardError("covariance matrix is unphysical");
  return {mods[0], mods[2]};
}

/// exp(beta a^dag - beta* a) truncated to D levels.
template <typename Scalar>
MatrixXc<Scalar> dense_displacement(Complex<Scalar> beta, int dim) {
  detail::require(dim >= 1, "displacement dimension must be >= 1");
  const LadderMatrices<Scalar> lm(dim);
  const MatrixXc<Scalar> gen = beta * lm.creation - std::conj(beta) * lm.annihilation;
  return gen.exp();
}

/// Coherent-state vector |alpha> truncated to D levels.
template <typename Scalar>
Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1> coherent_vector(Complex<Scalar> alpha, int dim) {
  using std::exp;
  using std::norm;
  using std::sqrt;
  Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1> v(dim);
  v[0] = exp(-norm(alpha) / Scalar(2));
  for (int n = 1; n < dim; ++n) v[n] = v[n - 1] * alpha / sqrt(Scalar(n));
  return v;
}

// -- dense recomputation of the fast-path metrics ------------------------

template <typename Scalar>
Scalar mean_photon(const DenseTwoModeState<Scalar>& s) {
  const LadderMatrices<Scalar> lm(s.dim());
  return expect<Scalar>(s, lm.number, MatrixXc<Scalar>::Identity(s.dim(), s.dim())).real();
}

template <typename Scalar>
Complex<Scalar> cross_moment(const DenseTwoModeState<Scalar>& s) {
  const LadderMatrices<Scalar> lm(s.dim());
  return expect<Scalar>(s, lm.annihilation, lm.annihilation);
}

template <typename Scalar>
Scalar entanglement_entropy(const DenseTwoModeState<Scalar>& s) {
  return von_neumann_entropy(reduced_density(s));
}

/// Var(x_a - x_b) and Var(p_a + p_b) from the covariance matrix.
template <typename Scalar>
std::pair<Scalar, Scalar> epr_variances(const DenseTwoModeState<Scalar>& s) {
  const auto sig = covariance_matrix(s);
  return {sig(0, 0) + sig(2, 2) - Scalar(2) * sig(0, 2),
          sig(1, 1) + sig(3, 3) + Scalar(2) * sig(1, 3)};
}

template <typename Scalar>
Scalar epr_correlation(const DenseTwoModeState<Scalar>& s) {
  const auto [vx, vp] = epr_variances(s);
  return vx + vp;
}

/// Entropy of the reference Gaussian, h(d_+) + h(d_-).
template <typename Scalar>
Scalar non_gaussianity(const DenseTwoModeState<Scalar>& s) {
  const auto [dp, dm] = symplectic_eigenvalues(covariance_matrix(s));
  return h_function(std::max(dp, Scalar(0.5))) + h_function(std::max(dm, Scalar(0.5)));
}

/// a b applied to the state (photon subtraction on both modes), normalized.
template <typename Scalar>
DenseTwoModeState<Scalar> subtract_photon_pair(const DenseTwoModeState<Scalar>& s) {
  const LadderMatrices<Scalar> lm(s.dim());
  return DenseTwoModeState<Scalar>{lm.annihilation * s.amplitudes * lm.annihilation.transpose()}
      .normalized();
}

/// a^dag b^dag applied to the state in a space one level larger, normalized.
template <typename Scalar>
DenseTwoModeState<Scalar> add_photon_pair(const DenseTwoModeState<Scalar>& s) {
  const auto big = s.padded(s.dim() + 1);
  const LadderMatrices<Scalar> lm(big.dim());
  return DenseTwoModeState<Scalar>{lm.creation * big.amplitudes * lm.creation.transpose()}
      .normalized();
}

template <typename Scalar = double>
struct DenseTeleportResult {
  Scalar probability;
  Scalar fidelity;
};

/// p(beta) and F(beta) from an explicit transfer-operator matrix
/// (N/sqrt(pi)) sum_n k_n D(beta)|n><n|D(-beta) built with matrix
/// exponentials in a `work_dim`-level space.
template <typename Scalar>
DenseTeleportResult<Scalar> teleport(const SchmidtState<Scalar>& resource, Complex<Scalar> alpha,
                                     Complex<Scalar> beta, int work_dim) {
  using std::norm;
  using std::sqrt;
  detail::require(work_dim >= resource.dim(), "work dimension must cover the resource");
  const MatrixXc<Scalar> dp = dense_displacement(beta, work_dim);
  const MatrixXc<Scalar> dm = dense_displacement(-beta, work_dim);
  MatrixXc<Scalar> proj = MatrixXc<Scalar>::Zero(work_dim, work_dim);
  for (int n = 0; n < resource.dim(); ++n) proj(n, n) = resource.coeffs()[n];
  const MatrixXc<Scalar> t =
      (resource.norm_const() / sqrt(std::numbers::pi_v<Scalar>)) * dp * proj * dm;
  const auto in = coherent_vector(alpha, work_dim);
  const auto out = (t * in).eval();
  const Scalar prob = out.squaredNorm();
  const Scalar fid = norm(in.dot(out)) / prob;
  return {prob, fid};
}

}  // namespace nlatele::oracle

#endif  // NLATELE_ORACLE_HPP
