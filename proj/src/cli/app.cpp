#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "nlatele/cli.hpp"

namespace nlatele::cli {

namespace {

struct Settings {
  double chi = 0.6;
  double gain = 1.0;
  int threshold = 0;
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  double epsilon = TruncationPolicy{}.epsilon;
  int max_dim = TruncationPolicy{}.max_dim;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = QuadratureSpec{}.rng_seed;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  double chi_start = ChiRange{}.start;
  double chi_stop = ChiRange{}.stop;
  double chi_step = ChiRange{}.step;
  std::vector<double> gains;
  std::vector<int> thresholds;
  std::vector<std::string> outputs;

  long mc_samples = QuadratureSpec{}.mc_samples;
  int radial_nodes = QuadratureSpec{}.radial_nodes;
  int grid_points = QuadratureSpec{}.grid_points;
  double grid_half_width = QuadratureSpec{}.grid_half_width;

  TruncationPolicy policy() const {
    TruncationPolicy p{epsilon, max_dim};
    p.validate();
    return p;
  }
  QuadratureSpec quadrature() const {
    QuadratureSpec q{radial_nodes, grid_half_width, grid_points, mc_samples, seed};
    q.validate();
    return q;
  }
  Format out_format() const { return parse_format(format); }
  std::complex<double> alpha() const { return {alpha_re, alpha_im}; }
};

std::string config_path_from_argv(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

/// Flat JSON object whose keys are the long option names (dashes or
/// underscores). Values land in `s` before flags are parsed, so flags win.
void load_config(const std::string& path, Settings& s) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config file must hold a flat JSON object");

  const std::map<std::string, std::function<void(const nlohmann::json&)>> setters = {
      {"chi", [&](const auto& v) { s.chi = v.template get<double>(); }},
      {"gain", [&](const auto& v) { s.gain = v.template get<double>(); }},
      {"threshold", [&](const auto& v) { s.threshold = v.template get<int>(); }},
      {"alpha-re", [&](const auto& v) { s.alpha_re = v.template get<double>(); }},
      {"alpha-im", [&](const auto& v) { s.alpha_im = v.template get<double>(); }},
      {"epsilon", [&](const auto& v) { s.epsilon = v.template get<double>(); }},
      {"max-dim", [&](const auto& v) { s.max_dim = v.template get<int>(); }},
      {"out", [&](const auto& v) { s.out = v.template get<std::string>(); }},
      {"format", [&](const auto& v) { s.format = v.template get<std::string>(); }},
      {"seed", [&](const auto& v) { s.seed = v.template get<std::uint64_t>(); }},
      {"jobs", [&](const auto& v) { s.jobs = v.template get<int>(); }},
      {"chi-start", [&](const auto& v) { s.chi_start = v.template get<double>(); }},
      {"chi-stop", [&](const auto& v) { s.chi_stop = v.template get<double>(); }},
      {"chi-step", [&](const auto& v) { s.chi_step = v.template get<double>(); }},
      {"gains", [&](const auto& v) { s.gains = v.template get<std::vector<double>>(); }},
      {"thresholds", [&](const auto& v) { s.thresholds = v.template get<std::vector<int>>(); }},
      {"outputs", [&](const auto& v) { s.outputs = v.template get<std::vector<std::string>>(); }},
      {"mc-samples", [&](const auto& v) { s.mc_samples = v.template get<long>(); }},
      {"radial-nodes", [&](const auto& v) { s.radial_nodes = v.template get<int>(); }},
      {"grid-points", [&](const auto& v) { s.grid_points = v.template get<int>(); }},
      {"grid-half-width", [&](const auto& v) { s.grid_half_width = v.template get<double>(); }},
  };
  for (const auto& [key, value] : j.items()) {
    std::string k = key;
    std::replace(k.begin(), k.end(), '_', '-');
    const auto it = setters.find(k);
    if (it == setters.end()) throw ValidationError("unknown config key '" + key + "'");
    try {
      it->second(value);
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("config key '" + key + "' has the wrong type");
    }
  }
}

void emit(const Settings& s, const std::string& text) {
  if (s.out.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to standard output");
  } else {
    write_atomic(s.out, text);
  }
}

std::string render_rows(const Settings& s, const std::vector<SweepRow>& rows) {
  return s.out_format() == Format::csv ? to_csv(rows) : to_json(rows).dump(2) + "\n";
}

SchmidtStated selected_state(const Settings& s, double* ps = nullptr) {
  auto [state, prob] =
      make_amplified_twb(TwbParams<double>{s.chi}, NlaConfig<double>{s.gain, s.threshold}, s.policy());
  check_truncation(state, s.policy());
  if (ps) *ps = prob;
  return state;
}

void cmd_twb(const Settings& s) {
  const TwbParams<double> tp{s.chi};
  auto t = make_twb(tp, s.policy());
  check_truncation(t, s.policy());
  std::vector<SweepRow> rows = {
      {s.chi, 1, 0, "entropy", entanglement_entropy(t), ""},
      {s.chi, 1, 0, "entropy_closed", twb_entropy_closed(tp), ""},
      {s.chi, 1, 0, "epr", epr_correlation(t), ""},
      {s.chi, 1, 0, "ng", non_gaussianity(t), ""},
      {s.chi, 1, 0, "nbar", mean_photon(t), ""},
      {s.chi, 1, 0, "cross_moment", cross_moment(t), ""},
      {s.chi, 1, 0, "fbar", average_fidelity_series(t), ""},
      {s.chi, 1, 0, "fbar_closed", twb_average_fidelity_closed(tp), ""},
      {s.chi, 1, 0, "dim", double(t.dim()), ""},
      {s.chi, 1, 0, "tail_bound", t.tail_bound(), ""},
  };
  sort_rows(rows);
  emit(s, render_rows(s, rows));
}

void cmd_amplify(const Settings& s) {
  double ps = 0;
  const auto st = selected_state(s, &ps);
  std::vector<SweepRow> rows = {
      {s.chi, s.gain, s.threshold, "psucc", ps, ""},
      {s.chi, s.gain, s.threshold, "dim", double(st.dim()), ""},
      {s.chi, s.gain, s.threshold, "tail_bound", st.tail_bound(), ""},
  };
  const auto pn = schmidt_probabilities(st);
  for (int n = 0; n < st.dim(); ++n) rows.push_back({s.chi, s.gain, s.threshold, "pdist", pn[n], std::to_string(n)});
  sort_rows(rows);
  emit(s, render_rows(s, rows));
}

void cmd_metrics(const Settings& s, bool show_sum_form) {
  const auto st = selected_state(s);
  const auto cov = covariance_summary(st);
  std::vector<SweepRow> rows = {
      {s.chi, s.gain, s.threshold, "entropy", entanglement_entropy(st), ""},
      {s.chi, s.gain, s.threshold, "epr", epr_correlation(st), ""},
      {s.chi, s.gain, s.threshold, "ng", non_gaussianity(st), ""},
      {s.chi, s.gain, s.threshold, "nbar", mean_photon(st), ""},
      {s.chi, s.gain, s.threshold, "cross_moment", cross_moment(st), ""},
      {s.chi, s.gain, s.threshold, "d_plus", cov.d_plus, ""},
  };
  if (show_sum_form) {
    const double d = sum_form_dplus(st);
    rows.push_back({s.chi, s.gain, s.threshold, "d_plus_sum_form", d, ""});
    rows.push_back({s.chi, s.gain, s.threshold, "ng_sum_form", 2 * h_function(d), ""});
  }
  sort_rows(rows);
  emit(s, render_rows(s, rows));
}

void cmd_teleport(const Settings& s, const std::optional<double>& beta_re,
                  const std::optional<double>& beta_im) {
  double ps = 0;
  const auto st = selected_state(s, &ps);
  const auto q = s.quadrature();
  const CoherentAmplitude<double> alpha{s.alpha()};
  alpha.validate();
  const auto grid = average_fidelity_grid2d(st, alpha, q);
  const auto mc = average_fidelity_sampled(st, alpha, q);
  std::vector<SweepRow> rows = {
      {s.chi, s.gain, s.threshold, "fbar", average_fidelity_series(st), format_number(ps)},
      {s.chi, s.gain, s.threshold, "fbar_radial", average_fidelity_radial(st, q), ""},
      {s.chi, s.gain, s.threshold, "fbar_grid2d", grid.value, grid.boundary_warning ? "boundary_warning" : ""},
      {s.chi, s.gain, s.threshold, "fbar_mc", mc.estimate, "stderr=" + format_number(mc.std_error)},
  };
  if (beta_re || beta_im) {
    const HomodyneOutcome<double> beta{{beta_re.value_or(0.0), beta_im.value_or(0.0)}};
    const auto out = transfer_apply(st, alpha, beta);
    const std::string warn = out.truncation_warning ? "truncation_warning" : "";
    rows.push_back({s.chi, s.gain, s.threshold, "prob_density", outcome_probability(out), warn});
    rows.push_back({s.chi, s.gain, s.threshold, "fidelity_beta", conditional_fidelity(st, alpha, beta), warn});
  }
  sort_rows(rows);
  emit(s, render_rows(s, rows));
}

void cmd_sweep(const Settings& s) {
  SweepSpec spec;
  spec.chi_range = {s.chi_start, s.chi_stop, s.chi_step};
  spec.gains = s.gains.empty() ? std::vector<double>{s.gain} : s.gains;
  spec.thresholds = s.thresholds.empty() ? std::vector<int>{s.threshold} : s.thresholds;
  spec.alpha = s.alpha();
  spec.truncation = s.policy();
  spec.quadrature = s.quadrature();
  if (!s.outputs.empty()) {
    spec.outputs.clear();
    for (const auto& o : s.outputs) spec.outputs.push_back(parse_output(o));
  }
  spec.format = s.out_format();
  spec.out_path = s.out;
  const auto rows = run_sweep(spec, s.jobs);
  if (s.out.empty()) emit(s, render_rows(s, rows));
}

void cmd_figure(const Settings& s, const std::string& id) {
  const auto fig = figure_data(parse_figure_id(id), s.policy(), s.jobs);
  emit(s, render_figure(fig, s.out_format()));
}

void cmd_crossover(const Settings& s, double step) {
  const auto rep = report_crossover(s.gain, s.threshold, step, s.policy());
  emit(s, to_json(rep).dump(2) + "\n");
}

int fail(int code, const std::string& what) {
  std::cerr << "error: " << what << "\n";
  return code;
}

}  // namespace

int run(int argc, char** argv) {
  Settings s;
  CLI::App app{"Simulation of amplified twin-beam resources and coherent-state teleportation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config;
  app.add_option("--config", config, "flat JSON file with option defaults");
  app.add_option("--chi", s.chi, "squeezing parameter chi in (0,1)");
  app.add_option("--gain", s.gain, "amplifier gain g >= 1");
  app.add_option("--threshold", s.threshold, "amplifier threshold p >= 0");
  app.add_option("--alpha-re", s.alpha_re, "real part of the input coherent amplitude");
  app.add_option("--alpha-im", s.alpha_im, "imaginary part of the input coherent amplitude");
  app.add_option("--epsilon", s.epsilon, "truncation tail mass");
  app.add_option("--max-dim", s.max_dim, "truncation dimension cap");
  app.add_option("--out", s.out, "output file (default: standard output)");
  app.add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", s.seed, "Monte Carlo seed");
  app.add_option("--jobs", s.jobs, "worker threads");
  app.add_option("--mc-samples", s.mc_samples, "Monte Carlo accepted samples");
  app.add_option("--radial-nodes", s.radial_nodes, "Gauss-Laguerre nodes");
  app.add_option("--grid-points", s.grid_points, "2-D grid points per axis");
  app.add_option("--grid-half-width", s.grid_half_width, "2-D grid half width");

  auto* twb = app.add_subcommand("twb", "twin-beam metrics at --chi");
  auto* amplify = app.add_subcommand("amplify", "amplified state: success probability and p_n");
  auto* metrics = app.add_subcommand("metrics", "entropy, EPR, non-Gaussianity of the selected state");
  bool show_sum_form = false;
  metrics->add_flag("--show-sum-form", show_sum_form, "also print d_+ = sqrt(I1 + I3) and its 2h()");
  auto* teleport = app.add_subcommand("teleport", "average fidelity on every route; optional single outcome");
  std::optional<double> beta_re, beta_im;
  teleport->add_option("--beta-re", beta_re, "outcome real part");
  teleport->add_option("--beta-im", beta_im, "outcome imaginary part");
  auto* sweep = app.add_subcommand("sweep", "metric grid over chi x gains x thresholds");
  sweep->add_option("--chi-start", s.chi_start);
  sweep->add_option("--chi-stop", s.chi_stop);
  sweep->add_option("--chi-step", s.chi_step);
  sweep->add_option("--gains", s.gains, "comma-separated gains")->delimiter(',');
  sweep->add_option("--thresholds", s.thresholds, "comma-separated thresholds")->delimiter(',');
  sweep->add_option("--outputs", s.outputs, "entropy,epr,ng,pdist,fbar,fbar_grid2d,psucc")->delimiter(',');
  auto* figure = app.add_subcommand("figure", "figure data fig1..fig7");
  std::string figure_id;
  figure->add_option("id", figure_id, "fig1..fig7")->required();
  auto* crossover = app.add_subcommand("crossover", "EPR and fidelity crossovers, secure-only interval (JSON)");
  double step = ChiRange{}.step;
  crossover->add_option("--step", step, "chi grid step");

  try {
    const std::string cfg = config_path_from_argv(argc, argv);
    if (!cfg.empty()) load_config(cfg, s);
  } catch (const ValidationError& e) {
    return fail(2, e.what());
  } catch (const IoError& e) {
    return fail(4, e.what());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (s.jobs < 1) throw ValidationError("--jobs must be >= 1");
    if (*twb) cmd_twb(s);
    else if (*amplify) cmd_amplify(s);
    else if (*metrics) cmd_metrics(s, show_sum_form);
    else if (*teleport) cmd_teleport(s, beta_re, beta_im);
    else if (*sweep) cmd_sweep(s);
    else if (*figure) cmd_figure(s, figure_id);
    else if (*crossover) cmd_crossover(s, step);
  } catch (const ValidationError& e) {
    return fail(2, e.what());
  } catch (const NumericalGuardError& e) {
    return fail(3, e.what());
  } catch (const IoError& e) {
    return fail(4, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  return 0;
}

}  // namespace nlatele::cli
