#include <doctest.h>

#include <cmath>
#include <random>

#include "nlatele/metrics.hpp"
#include "nlatele/oracle.hpp"

using namespace nlatele;

namespace {
double twb_epr(double chi) { return 2 * (1 - chi) / (1 + chi); }

SchmidtStated amplified(double chi, double g, int p) {
  return make_amplified_twb(TwbParams<double>{chi}, NlaConfig<double>{g, p}).first;
}
}  // namespace

TEST_CASE("mean_photon and cross_moment") {
  auto vac = SchmidtStated::vacuum();
  CHECK(mean_photon(vac) == 0.0);
  CHECK(cross_moment(vac) == 0.0);

  auto t = make_twb(TwbParams<double>{0.6});
  CHECK(mean_photon(t) == doctest::Approx(0.5625).epsilon(1e-12));
  CHECK(cross_moment(t) == doctest::Approx(0.9375).epsilon(1e-12));

  auto a1 = amplified(0.6, 1.0, 3);
  CHECK(mean_photon(a1) == doctest::Approx(mean_photon(t)).epsilon(1e-14));
}

TEST_CASE("property: |<ab>| <= sqrt(Nbar (Nbar + 1))") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> uc(0.02, 0.95), ug(1.0, 5.0);
  std::uniform_int_distribution<int> up(0, 6);
  for (int i = 0; i < 200; ++i) {
    auto s = amplified(uc(gen), ug(gen), up(gen));
    const double nb = mean_photon(s);
    CHECK(std::abs(cross_moment(s)) <= std::sqrt(nb * (nb + 1)) * (1 + 1e-12));
  }
}

TEST_CASE("entanglement entropy") {
  CHECK(entanglement_entropy(SchmidtStated::vacuum()) == 0.0);
  auto t = make_twb(TwbParams<double>{0.6});
  // -ln(0.64) - 0.36 ln(0.36) / 0.64
  CHECK(entanglement_entropy(t) == doctest::Approx(1.0209659293651590).epsilon(1e-12));
  for (double chi : {0.6, 0.9, 0.3}) {
    const double closed = twb_entropy_closed(TwbParams<double>{chi});
    CHECK(std::abs(entanglement_entropy(make_twb(TwbParams<double>{chi})) - closed) <= 1e-9);
  }
  CHECK(twb_entropy_closed(TwbParams<double>{1e-8}) < 1e-13);
  CHECK(entanglement_entropy(amplified(0.3, 3.0, 2)) >
        entanglement_entropy(make_twb(TwbParams<double>{0.3})));
}

TEST_CASE("EPR correlation") {
  CHECK(epr_correlation(SchmidtStated::vacuum()) == 2.0);
  CHECK(epr_correlation(make_twb(TwbParams<double>{0.5})) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(epr_correlation(make_twb(TwbParams<double>{0.6})) == doctest::Approx(0.5).epsilon(1e-12));
  for (double chi = 0.05; chi < 0.95; chi += 0.1)
    CHECK(epr_correlation(make_twb(TwbParams<double>{chi})) == doctest::Approx(twb_epr(chi)).epsilon(1e-10));
  // Strong amplification pushes past the separability value.
  CHECK(epr_correlation(amplified(0.4, 4.0, 4)) > 2.0);
}

TEST_CASE("h_function") {
  CHECK(h_function(0.5) == 0.0);
  CHECK(h_function(1.0) == doctest::Approx(0.9547712524422192).epsilon(1e-14));
  CHECK(h_function(1.5) == doctest::Approx(1.3862943611198906).epsilon(1e-14));
  CHECK(h_function(0.5 - 1e-13) == 0.0);
  CHECK_THROWS_AS(h_function(0.4), ValidationError);
  double prev = 0.0;
  for (double x = 0.5 + 1e-6; x < 20; x *= 1.3) {
    const double h = h_function(x);
    CHECK(h > prev);
    prev = h;
  }
}

TEST_CASE("covariance summary and non-Gaussianity") {
  auto vac = covariance_summary(SchmidtStated::vacuum());
  CHECK(vac.i1 == 0.5);
  CHECK(vac.i3 == 0.0);
  CHECK(vac.d_plus == 0.5);

  for (double chi = 0.05; chi < 0.95; chi += 0.05) {
    auto t = make_twb(TwbParams<double>{chi});
    CHECK(std::abs(covariance_summary(t).d_plus - 0.5) <= 1e-10);
    CHECK(non_gaussianity(t) <= 1e-9);
  }

  auto a = amplified(0.6, 2.0, 2);
  CHECK(covariance_summary(a).d_plus > 0.5);
  // Oracle values from an independent 40-digit evaluation.
  CHECK(covariance_summary(a).d_plus == doctest::Approx(0.865870844858628530).epsilon(1e-12));
  CHECK(non_gaussianity(a) == doctest::Approx(1.58748366536167032).epsilon(1e-11));

  // The sum form does not vanish on the Gaussian twin beam.
  CHECK(2 * h_function(sum_form_dplus(make_twb(TwbParams<double>{0.6}))) > 0.5);
}

TEST_CASE("non-Gaussianity has a single interior peak in chi (p=2, g=4)") {
  std::vector<double> ng;
  for (int i = 1; i <= 99; ++i) ng.push_back(non_gaussianity(amplified(0.01 * i, 4.0, 2)));
  int changes = 0;
  for (std::size_t i = 2; i < ng.size(); ++i)
    if ((ng[i] > ng[i - 1]) != (ng[i - 1] > ng[i - 2])) ++changes;
  CHECK(changes == 1);
  CHECK(ng.front() < ng[50]);
  CHECK(ng.back() < ng[50]);
}

TEST_CASE("metrics_report bundles the fields") {
  auto v = metrics_report(SchmidtStated::vacuum());
  CHECK(v.entropy == 0.0);
  CHECK(v.epr == 2.0);
  CHECK(v.non_gaussianity == 0.0);
  CHECK(v.mean_photon == 0.0);
  CHECK(v.cross_moment == 0.0);
  CHECK(v.photon_distribution.size() == 1);

  auto r = metrics_report(make_twb(TwbParams<double>{0.6}));
  CHECK(r.entropy == doctest::Approx(1.0209659293651590).epsilon(1e-12));
  CHECK(r.epr == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.non_gaussianity <= 1e-9);
  CHECK(r.mean_photon == doctest::Approx(0.5625).epsilon(1e-12));
  CHECK(r.cross_moment == doctest::Approx(0.9375).epsilon(1e-12));

  auto g1 = metrics_report(amplified(0.6, 1.0, 2));
  CHECK(std::abs(g1.entropy - r.entropy) <= 1e-12);
  CHECK(std::abs(g1.epr - r.epr) <= 1e-12);
  CHECK(std::abs(g1.mean_photon - r.mean_photon) <= 1e-12);
  CHECK(std::abs(g1.cross_moment - r.cross_moment) <= 1e-12);
  CHECK(std::abs(g1.non_gaussianity - r.non_gaussianity) <= 1e-12);
}

TEST_CASE("property: variance symmetry and dense agreement") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> uc(0.05, 0.6), ug(1.0, 4.0);
  std::uniform_int_distribution<int> up(0, 4);
  for (int i = 0; i < 20; ++i) {
    auto s = amplified(uc(gen), ug(gen), up(gen));
    if (s.dim() > 30) continue;
    auto d = oracle::DenseTwoModeState<double>::from_schmidt(s);
    auto [vx, vp] = oracle::epr_variances(d);
    CHECK(std::abs(vx - vp) <= 1e-10);
    CHECK(std::abs(vx - epr_correlation(s) / 2) <= 1e-10);
  }
}
