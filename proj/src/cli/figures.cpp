#include <array>
#include <string>

#include "nlatele/cli.hpp"

namespace nlatele::cli {

namespace {

constexpr std::array<const char*, 7> kFigureNames = {"fig1", "fig2", "fig3", "fig4",
                                                      "fig5", "fig6", "fig7"};

std::vector<double> default_chi_grid() { return ChiRange{}.values(); }

SchmidtStated amplified(double chi, double g, int p, const TruncationPolicy& policy, double* ps = nullptr) {
  auto [state, prob] = make_amplified_twb(TwbParams<double>{chi}, NlaConfig<double>{g, p}, policy);
  check_truncation(state, policy);
  if (ps) *ps = prob;
  return state;
}

struct Series {
  double g;
  int p;
};

const std::vector<Series> kSixConfigs = {{2, 2}, {3, 2}, {4, 2}, {2, 4}, {3, 4}, {4, 4}};

/// One metric of the amplified state over configs x chi grid, plus the
/// twin-beam reference curve under `<metric>_twb`.
template <typename Metric>
std::vector<SweepRow> chi_curves(const std::string& metric, const std::vector<Series>& configs,
                                 bool with_reference, Metric f, const TruncationPolicy& policy,
                                 int jobs) {
  const auto chis = default_chi_grid();
  const std::size_t nseries = configs.size() + (with_reference ? 1 : 0);
  return parallel_rows(nseries * chis.size(), jobs, [&](std::size_t i) {
    const std::size_t s = i / chis.size();
    const double chi = chis[i % chis.size()];
    if (s == configs.size()) {
      auto t = make_twb(TwbParams<double>{chi}, policy);
      check_truncation(t, policy);
      return std::vector<SweepRow>{{chi, 1.0, 0, metric + "_twb", f(t), ""}};
    }
    const auto [g, p] = configs[s];
    return std::vector<SweepRow>{{chi, g, p, metric, f(amplified(chi, g, p, policy)), ""}};
  });
}

}  // namespace

FigureId parse_figure_id(const std::string& id) {
  for (std::size_t i = 0; i < kFigureNames.size(); ++i)
    if (id == kFigureNames[i]) return static_cast<FigureId>(i);
  throw ValidationError("unknown figure '" + id + "' (expected fig1..fig7)");
}

const char* to_string(FigureId id) { return kFigureNames[static_cast<std::size_t>(id)]; }

FigureData figure_data(FigureId id, const TruncationPolicy& policy, int jobs) {
  policy.validate();
  FigureData fig{id, {}, {}, {}};
  switch (id) {
    case FigureId::fig1: {
      fig.caption = "photon-number distribution p_n at chi=0.6 p=2 for g in {1,2,3}; g=1 is the twin beam";
      const std::vector<double> gains = {1, 2, 3};
      fig.rows = parallel_rows(gains.size(), jobs, [&](std::size_t i) {
        const auto s = amplified(0.6, gains[i], 2, policy);
        const auto pn = schmidt_probabilities(s);
        std::vector<SweepRow> out;
        for (int n = 0; n < s.dim(); ++n) out.push_back({0.6, gains[i], 2, "pdist", pn[n], std::to_string(n)});
        return out;
      });
      break;
    }
    case FigureId::fig2:
      fig.caption = "entropic non-Gaussianity vs chi, p=2, g in {1.5,2,3,4}";
      fig.rows = chi_curves("ng", {{1.5, 2}, {2, 2}, {3, 2}, {4, 2}}, false,
                            [](const SchmidtStated& s) { return non_gaussianity(s); }, policy, jobs);
      break;
    case FigureId::fig3:
      fig.caption = "entanglement entropy vs chi, amplified g in {2,3,4} p in {2,4} and twin beam";
      fig.rows = chi_curves("entropy", kSixConfigs, true,
                            [](const SchmidtStated& s) { return entanglement_entropy(s); }, policy, jobs);
      break;
    case FigureId::fig4:
      fig.caption = "EPR variance sum vs chi, amplified g in {2,3,4} p in {2,4} and twin beam";
      fig.rows = chi_curves("epr", kSixConfigs, true,
                            [](const SchmidtStated& s) { return epr_correlation(s); }, policy, jobs);
      break;
    case FigureId::fig5: {
      fig.caption =
          "average fidelity vs chi: twin beam, photon-subtracted, added-then-subtracted, "
          "amplified g in {2,3,4} p in {2,4}";
      const auto chis = default_chi_grid();
      const std::size_t nseries = kSixConfigs.size() + 3;
      fig.rows = parallel_rows(nseries * chis.size(), jobs, [&](std::size_t i) {
        const std::size_t s = i / chis.size();
        const double chi = chis[i % chis.size()];
        const TwbParams<double> tp{chi};
        auto baseline = [&](const SchmidtStated& st, const char* name) {
          check_truncation(st, policy);
          return std::vector<SweepRow>{{chi, 1.0, 0, name, average_fidelity_series(st), ""}};
        };
        if (s == kSixConfigs.size()) return baseline(make_twb(tp, policy), "fbar_twb");
        if (s == kSixConfigs.size() + 1)
          return baseline(make_photon_subtracted_twb(tp, policy), "fbar_subtracted");
        if (s == kSixConfigs.size() + 2)
          return baseline(make_added_then_subtracted_twb(tp, policy), "fbar_added_subtracted");
        const auto [g, p] = kSixConfigs[s];
        double ps = 0;
        const auto st = amplified(chi, g, p, policy, &ps);
        return std::vector<SweepRow>{{chi, g, p, "fbar", average_fidelity_series(st), format_number(ps)}};
      });
      break;
    }
    case FigureId::fig6: {
      fig.caption = "average fidelity vs gain g in [1,4] step 0.05, chi in {0.22,0.4,0.6,0.8}, p in {2,4}";
      const std::vector<double> chis = {0.22, 0.4, 0.6, 0.8};
      const std::vector<int> ps = {2, 4};
      std::vector<double> gains;
      for (int i = 0; i <= 60; ++i) gains.push_back(1.0 + 0.05 * i);
      const std::size_t ng = gains.size();
      fig.rows = parallel_rows(chis.size() * ps.size() * ng, jobs, [&](std::size_t i) {
        const double g = gains[i % ng];
        const int p = ps[(i / ng) % ps.size()];
        const double chi = chis[i / (ng * ps.size())];
        double prob = 0;
        const auto st = amplified(chi, g, p, policy, &prob);
        return std::vector<SweepRow>{{chi, g, p, "fbar", average_fidelity_series(st), format_number(prob)}};
      });
      break;
    }
    case FigureId::fig7: {
      fig.caption =
          "average fidelity classes (classical <= 1/2 < nonlocal <= 2/3 < secure), amplified g=2 p=4 "
          "vs twin beam";
      const auto res = crossover_find(4, 2.0, default_chi_grid(), policy);
      for (std::size_t i = 0; i < res.chi.size(); ++i) {
        const double chi = res.chi[i];
        fig.rows.push_back({chi, 2.0, 4, "fbar", res.fbar_amplified[i],
                            to_string(classify_fidelity(res.fbar_amplified[i]))});
        fig.rows.push_back({chi, 1.0, 0, "fbar_twb", res.fbar_standard[i],
                            to_string(classify_fidelity(res.fbar_standard[i]))});
      }
      if (res.secure_only)
        fig.comments.push_back("secure_only_interval: " + format_number(res.secure_only->lo) + "," +
                               format_number(res.secure_only->hi));
      else
        fig.comments.push_back("secure_only_interval: none");
      break;
    }
  }
  sort_rows(fig.rows);
  return fig;
}

std::string render_figure(const FigureData& fig, Format format) {
  if (format == Format::json) {
    nlohmann::json j;
    j["figure"] = to_string(fig.id);
    j["caption"] = fig.caption;
    j["comments"] = fig.comments;
    j["rows"] = to_json(fig.rows);
    return j.dump(2) + "\n";
  }
  std::vector<std::string> comments;
  comments.push_back(std::string("figure:") + to_string(fig.id) + " paper_caption:" + fig.caption);
  comments.insert(comments.end(), fig.comments.begin(), fig.comments.end());
  return to_csv(fig.rows, comments);
}

}  // namespace nlatele::cli
