#include <cmath>

#include "nlatele/cli.hpp"

namespace nlatele::cli {

namespace {

/// Run-length summary of which resource is better along the chi grid.
/// `amp_better(i)` returns +1, -1 or 0 (tie).
template <typename Cmp>
nlohmann::json regions(const std::vector<double>& chi, Cmp cmp) {
  nlohmann::json out = nlohmann::json::array();
  auto label = [](int c) { return c > 0 ? "amplified" : c < 0 ? "standard" : "tie"; };
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= chi.size(); ++i) {
    if (i == chi.size() || cmp(i) != cmp(begin)) {
      out.push_back({{"chi_from", std::stod(format_number(chi[begin]))},
                     {"chi_to", std::stod(format_number(chi[i - 1]))},
                     {"better", label(cmp(begin))}});
      begin = i;
    }
  }
  return out;
}

}  // namespace

CrossoverReport report_crossover(double gain, int threshold, double step, const TruncationPolicy& policy) {
  detail::require(std::isfinite(step) && step > 0.0, "crossover step must be positive");
  detail::require(step < 0.95, "crossover step must be below 0.95");
  const auto chis = ChiRange{step, 0.95, step}.values();
  NlaConfig<double>{gain, threshold}.validate();

  CrossoverReport rep{gain, threshold, step, {}, {}, {}, {}};
  const auto fid = crossover_find(threshold, gain, chis, policy);
  rep.chi_c2 = fid.chi_c2;
  rep.secure_only = fid.secure_only;

  std::vector<double> epr_amp, epr_std;
  for (double chi : chis) {
    const TwbParams<double> tp{chi};
    auto [amp, ps] = make_amplified_twb(tp, NlaConfig<double>{gain, threshold}, policy);
    auto twb = make_twb(tp, policy);
    check_truncation(amp, policy);
    check_truncation(twb, policy);
    epr_amp.push_back(epr_correlation(amp));
    epr_std.push_back(epr_correlation(twb));
  }

  // Smaller EPR variance sum is better; larger fidelity is better.
  auto epr_cmp = [&](std::size_t i) {
    const double d = epr_std[i] - epr_amp[i];
    return d > kFidelityTieSlack ? 1 : d < -kFidelityTieSlack ? -1 : 0;
  };
  auto fid_cmp = [&](std::size_t i) {
    const double d = fid.fbar_amplified[i] - fid.fbar_standard[i];
    return d > kFidelityTieSlack ? 1 : d < -kFidelityTieSlack ? -1 : 0;
  };
  // The curves touch exactly at g chi = 1, so the crossover is the first
  // grid point whose ordering differs from the weak-squeezing end.
  for (std::size_t i = 1; i < chis.size(); ++i)
    if (epr_cmp(i) != epr_cmp(0)) {
      rep.chi_c1 = chis[i];
      break;
    }
  rep.regions = {{"epr", regions(chis, epr_cmp)}, {"fidelity", regions(chis, fid_cmp)}};
  return rep;
}

nlohmann::json to_json(const CrossoverReport& r) {
  auto num = [](double x) { return std::stod(format_number(x)); };
  nlohmann::json j;
  j["gain"] = num(r.gain);
  j["threshold"] = r.threshold;
  j["step"] = num(r.step);
  j["chi_c1"] = r.chi_c1 ? nlohmann::json(num(*r.chi_c1)) : nlohmann::json(nullptr);
  j["chi_c2"] = r.chi_c2 ? nlohmann::json(num(*r.chi_c2)) : nlohmann::json(nullptr);
  j["secure_only"] = r.secure_only
                         ? nlohmann::json{{"chi_lo", num(r.secure_only->lo)}, {"chi_hi", num(r.secure_only->hi)}}
                         : nlohmann::json(nullptr);
  j["regions"] = r.regions;
  return j;
}

}  // namespace nlatele::cli
