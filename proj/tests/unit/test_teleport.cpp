#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlatele/teleport.hpp"

using namespace nlatele;
using cd = std::complex<double>;

namespace {
SchmidtStated amplified(double chi, double g, int p) {
  return make_amplified_twb(TwbParams<double>{chi}, NlaConfig<double>{g, p}).first;
}
}  // namespace

TEST_CASE("displaced number overlaps") {
  const cd one(1.0, 0.0);
  // e^{-2} * 2 / 1
  CHECK(std::abs(displaced_number_overlap(1, one, one) - cd(0.2706705664732254, 0)) <= 1e-15);
  CHECK(std::abs(displaced_number_overlap(0, cd(0), cd(0)) - one) <= 1e-15);
  CHECK(std::abs(displaced_number_overlap(3, cd(0), cd(0))) == 0.0);
  CHECK_THROWS_AS(displaced_number_overlap(-1, one, one), ValidationError);

  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const cd a(u(gen), u(gen)), b(u(gen), u(gen));
    auto rec = displaced_number_overlaps(60, b, a);
    for (int n = 0; n < 60; ++n)
      CHECK(std::abs(rec[n] - displaced_number_overlap(n, b, a)) <= 1e-12);
  }
  // Far tail goes through the log form without underflow to NaN.
  auto far = displaced_number_overlaps(40, cd(40, 0), cd(1, 0));
  CHECK(far.allFinite());
}

TEST_CASE("property: overlaps form a unit vector over n") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const cd a(u(gen), u(gen)), b(u(gen), u(gen));
    CHECK(std::abs(displaced_number_overlaps(200, b, a).squaredNorm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("twin-beam conditional output closed forms") {
  const double chi = 0.6;
  auto t = make_twb(TwbParams<double>{chi});
  const CoherentAmplitude<double> alpha{cd(0.7, -0.3)};
  SUBCASE("beta = alpha") {
    auto out = transfer_apply(t, alpha, HomodyneOutcome<double>{alpha.value});
    CHECK(outcome_probability(out) == doctest::Approx(0.64 / std::numbers::pi).epsilon(1e-12));
    CHECK(conditional_fidelity(t, alpha, HomodyneOutcome<double>{alpha.value}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(out.truncation_warning);
  }
  SUBCASE("general beta") {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int i = 0; i < 50; ++i) {
      const cd beta = alpha.value + cd(u(gen), u(gen));
      const double tt = std::norm(beta - alpha.value);
      const HomodyneOutcome<double> b{beta};
      const double p = outcome_probability(transfer_apply(t, alpha, b));
      CHECK(p == doctest::Approx((1 - chi * chi) / std::numbers::pi * std::exp(-(1 - chi * chi) * tt))
                     .epsilon(1e-11));
      CHECK(conditional_fidelity(t, alpha, b) ==
            doctest::Approx(std::exp(-(1 - chi) * (1 - chi) * tt)).epsilon(1e-10));
    }
  }
}

TEST_CASE("vacuum resource teleports with fidelity 1/2 on average") {
  auto v = SchmidtStated::vacuum();
  CHECK(average_fidelity_series(v) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(average_fidelity_radial(v) == doctest::Approx(0.5).epsilon(1e-10));
  auto g = average_fidelity_grid2d(v, CoherentAmplitude<double>{cd(1.0, 0.5)});
  CHECK(g.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(g.probability == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("twin-beam average fidelity is (1 + chi)/2 on every route") {
  for (double chi : {0.1, 0.3, 0.6, 0.8}) {
    auto t = make_twb(TwbParams<double>{chi});
    const double closed = twb_average_fidelity_closed(TwbParams<double>{chi});
    CHECK(closed == doctest::Approx((1 + chi) / 2));
    // Truncation error of the average scales like chi^D, not chi^{2D}.
    CHECK(std::abs(average_fidelity_series(t) - closed) <= 2e-10);
    CHECK(std::abs(average_fidelity_radial(t) - average_fidelity_series(t)) <= 1e-11);
    // (1 - chi)/2 would sit below the classical bound.
    CHECK(average_fidelity_series(t) > 0.5);
  }
  auto g = average_fidelity_grid2d(make_twb(TwbParams<double>{0.5}), CoherentAmplitude<double>{cd(0.3, 0.0)});
  CHECK(std::abs(g.value - 0.75) <= 1e-8);
  CHECK(std::abs(g.probability - 1.0) <= 1e-8);
  CHECK_FALSE(g.boundary_warning);
}

TEST_CASE("property: series, radial and 2-D grid agree on amplified resources") {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> uc(0.05, 0.6), ug(1.0, 4.0);
  std::uniform_int_distribution<int> up(0, 4);
  for (int i = 0; i < 8; ++i) {
    auto s = amplified(uc(gen), ug(gen), up(gen));
    const double ser = average_fidelity_series(s);
    CHECK(std::abs(average_fidelity_radial(s) - ser) <= 1e-10);
    auto g = average_fidelity_grid2d(s, CoherentAmplitude<double>{cd(0.4, -0.2)});
    CHECK(std::abs(g.value - ser) <= 1e-7);
    CHECK(std::abs(g.probability - 1.0) <= 1e-6);
    CHECK(ser >= 0.0);
    CHECK(ser <= 1.0);
  }
}

TEST_CASE("average fidelity does not depend on alpha") {
  auto s = amplified(0.3, 3.0, 2);
  const double ref = average_fidelity_grid2d(s, CoherentAmplitude<double>{cd(0, 0)}).value;
  for (cd a : {cd(1.5, 0), cd(-0.7, 2.1), cd(0, -3)})
    CHECK(std::abs(average_fidelity_grid2d(s, CoherentAmplitude<double>{a}).value - ref) <= 1e-10);
}

TEST_CASE("Monte Carlo estimate") {
  auto s = amplified(0.5, 2.0, 2);
  const double ser = average_fidelity_series(s);
  QuadratureSpec spec;
  spec.mc_samples = 20000;
  auto a = average_fidelity_sampled(s, CoherentAmplitude<double>{cd(0.5, 0.5)}, spec);
  CHECK(std::abs(a.estimate - ser) <= 5 * a.std_error);
  CHECK(a.std_error > 0.0);
  CHECK(a.proposals >= spec.mc_samples);

  auto b = average_fidelity_sampled(s, CoherentAmplitude<double>{cd(0.5, 0.5)}, spec);
  CHECK(a.estimate == b.estimate);
  spec.rng_seed = 7;
  auto c = average_fidelity_sampled(s, CoherentAmplitude<double>{cd(0.5, 0.5)}, spec);
  CHECK(a.estimate != c.estimate);
  CHECK(std::abs(c.estimate - ser) <= 5 * c.std_error);

  spec.mc_samples = 10;
  CHECK_THROWS_AS(average_fidelity_sampled(s, CoherentAmplitude<double>{cd(0, 0)}, spec),
                  ValidationError);
}

TEST_CASE("invalid inputs") {
  auto t = make_twb(TwbParams<double>{0.5});
  CHECK_THROWS_AS(transfer_apply(t, CoherentAmplitude<double>{cd(60, 0)}, HomodyneOutcome<double>{cd(0, 0)}),
                  ValidationError);
  CHECK_THROWS_AS(
      transfer_apply(t, CoherentAmplitude<double>{cd(NAN, 0)}, HomodyneOutcome<double>{cd(0, 0)}),
      ValidationError);
  CHECK_THROWS_AS(
      transfer_apply(t, CoherentAmplitude<double>{cd(0, 0)}, HomodyneOutcome<double>{cd(INFINITY, 0)}),
      ValidationError);
  // Far enough out that every overlap underflows.
  CHECK_THROWS_AS(
      conditional_fidelity(t, CoherentAmplitude<double>{cd(0, 0)}, HomodyneOutcome<double>{cd(1e3, 0)}),
      NumericalGuardError);
  QuadratureSpec bad;
  bad.grid_points = 1;
  CHECK_THROWS_AS(average_fidelity_grid2d(t, CoherentAmplitude<double>{cd(0, 0)}, bad), ValidationError);
}

TEST_CASE("truncation warning on an undersized resource") {
  VectorX<double> k(3);
  k << 1.0, 0.9, 0.81;
  SchmidtStated s(k, 1.0 / k.norm(), 0.0);
  auto out = transfer_apply(s, CoherentAmplitude<double>{cd(0, 0)}, HomodyneOutcome<double>{cd(3, 0)});
  CHECK(out.truncation_warning);
}

TEST_CASE("gain scan at chi = 0.22, p = 2") {
  std::vector<double> gains;
  for (int i = 0; i <= 60; ++i) gains.push_back(1.0 + 0.05 * i);
  auto scan = gain_scan(TwbParams<double>{0.22}, 2, gains);
  REQUIRE(scan.points.size() == gains.size());
  CHECK(scan.points.front().second == doctest::Approx(0.61).epsilon(1e-9));
  CHECK(scan.argmax_gain == doctest::Approx(3.45).epsilon(1e-9));
  CHECK(scan.max_fidelity == doctest::Approx(0.76396).epsilon(1e-4));
  auto at = [&](double g) {
    for (auto [gg, f] : scan.points)
      if (std::abs(gg - g) < 1e-9) return f;
    return -1.0;
  };
  CHECK(at(2.0) == doctest::Approx(0.706166).epsilon(1e-5));
  CHECK(at(3.0) == doctest::Approx(0.758868).epsilon(1e-5));
  CHECK(at(4.0) == doctest::Approx(0.756361).epsilon(1e-5));
  CHECK_THROWS_AS(gain_scan(TwbParams<double>{0.22}, 2, std::vector<double>{2.0, 1.5}), ValidationError);
  CHECK_THROWS_AS(gain_scan(TwbParams<double>{0.22}, 2, std::vector<double>{0.5}), ValidationError);
}

TEST_CASE("gain scan at chi = 0.8: amplification hurts at large gain") {
  auto scan = gain_scan(TwbParams<double>{0.8}, 2, std::vector<double>{1.0, 1.5, 2.0, 3.0, 4.0});
  CHECK(scan.points[0].second == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(scan.points[1].second == doctest::Approx(0.895122).epsilon(1e-5));
  CHECK(scan.points[4].second == doctest::Approx(0.774208).epsilon(1e-5));
  for (std::size_t i = 2; i < scan.points.size(); ++i)
    CHECK(scan.points[i].second < scan.points[i - 1].second);
}

TEST_CASE("classify_fidelity") {
  CHECK(classify_fidelity(0.3) == FidelityClass::classical);
  CHECK(classify_fidelity(0.5) == FidelityClass::classical);
  CHECK(classify_fidelity(0.6) == FidelityClass::nonlocal);
  CHECK(classify_fidelity(2.0 / 3) == FidelityClass::nonlocal);
  CHECK(classify_fidelity(0.7) == FidelityClass::secure);
  CHECK(std::string(to_string(FidelityClass::secure)) == "secure");
  CHECK_THROWS_AS(classify_fidelity(1.2), ValidationError);
  CHECK_THROWS_AS(classify_fidelity(-0.1), ValidationError);
}

TEST_CASE("crossover_find") {
  std::vector<double> grid;
  for (int i = 1; i <= 190; ++i) grid.push_back(0.005 * i);
  SUBCASE("g = 2, p = 4") {
    auto r = crossover_find(4, 2.0, grid);
    REQUIRE(r.chi_c2);
    CHECK(*r.chi_c2 == doctest::Approx(0.6).epsilon(1e-12));
    REQUIRE(r.secure_only);
    CHECK(r.secure_only->lo == doctest::Approx(0.17).epsilon(1e-12));
    CHECK(r.secure_only->hi == doctest::Approx(0.33).epsilon(1e-12));
  }
  SUBCASE("g = 4, p = 4") {
    auto r = crossover_find(4, 4.0, grid);
    REQUIRE(r.chi_c2);
    CHECK(*r.chi_c2 == doctest::Approx(0.335).epsilon(1e-12));
    REQUIRE(r.secure_only);
    CHECK(r.secure_only->lo == doctest::Approx(0.085).epsilon(1e-12));
  }
  SUBCASE("g = 1 never crosses") {
    auto r = crossover_find(2, 1.0, grid);
    CHECK_FALSE(r.chi_c2);
    CHECK_FALSE(r.secure_only);
    for (std::size_t i = 0; i < r.chi.size(); ++i)
      CHECK(std::abs(r.fbar_amplified[i] - r.fbar_standard[i]) <= 1e-12);
  }
  CHECK_THROWS_AS(crossover_find(2, 2.0, std::vector<double>{0.5, 0.4}), ValidationError);
  CHECK_THROWS_AS(crossover_find(2, 2.0, std::vector<double>{}), ValidationError);
}

TEST_CASE("Gauss-Laguerre rule integrates monomials exactly") {
  auto r = gauss_laguerre<double>(40);
  for (int m = 0; m < 20; ++m) {
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += std::exp(r.log_weights[i]) * std::pow(r.nodes[i], m);
    CHECK(s == doctest::Approx(std::tgamma(m + 1.0)).epsilon(1e-11));
  }
  auto big = gauss_laguerre<double>(400);
  double w = 0;
  for (double lw : big.log_weights) w += std::exp(lw);
  CHECK(w == doctest::Approx(1.0).epsilon(1e-10));
}
