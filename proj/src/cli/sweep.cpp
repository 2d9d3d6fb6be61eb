#include <tuple>

#include "nlatele/cli.hpp"

namespace nlatele::cli {

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  const auto chis = spec.chi_range.values();

  struct Point {
    double chi;
    double g;
    int p;
  };
  std::vector<Point> points;
  for (int p : spec.thresholds)
    for (double g : spec.gains)
      for (double chi : chis) points.push_back({chi, g, p});

  auto rows = parallel_rows(points.size(), jobs, [&](std::size_t i) {
    const auto [chi, g, p] = points[i];
    const auto [state, ps] =
        make_amplified_twb(TwbParams<double>{chi}, NlaConfig<double>{g, p}, spec.truncation);
    check_truncation(state, spec.truncation);

    std::vector<SweepRow> out;
    auto emit = [&](const char* metric, double value, std::string extra = {}) {
      out.push_back({chi, g, p, metric, value, std::move(extra)});
    };
    for (Output o : spec.outputs) {
      switch (o) {
        case Output::entropy: emit("entropy", entanglement_entropy(state)); break;
        case Output::epr: emit("epr", epr_correlation(state)); break;
        case Output::ng: emit("ng", non_gaussianity(state)); break;
        case Output::psucc: emit("psucc", ps); break;
        case Output::pdist: {
          const auto pn = schmidt_probabilities(state);
          for (int n = 0; n < state.dim(); ++n) emit("pdist", pn[n], std::to_string(n));
          break;
        }
        case Output::fbar: emit("fbar", average_fidelity_series(state), format_number(ps)); break;
        case Output::fbar_grid2d: {
          const auto res = average_fidelity_grid2d(state, CoherentAmplitude<double>{spec.alpha},
                                                   spec.quadrature);
          emit("fbar_grid2d", res.value, res.boundary_warning ? "boundary_warning" : "");
          break;
        }
      }
    }
    return out;
  });
  sort_rows(rows);

  if (!spec.out_path.empty()) {
    const std::string body =
        spec.format == Format::csv ? to_csv(rows) : to_json(rows).dump(2) + "\n";
    write_atomic(spec.out_path, body);
  }
  return rows;
}

}  // namespace nlatele::cli
