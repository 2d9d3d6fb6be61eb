// Command-line front end: sweeps, figure data, crossover reports.
#ifndef NLATELE_CLI_HPP
#define NLATELE_CLI_HPP

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlatele/core.hpp"
#include "nlatele/teleport.hpp"

namespace nlatele::cli {

/// Unreadable input or unwritable output. Maps to exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Output { entropy, epr, ng, pdist, fbar, fbar_grid2d, psucc };
enum class Format { csv, json };

Output parse_output(const std::string& name);
const char* to_string(Output o);
Format parse_format(const std::string& name);

struct ChiRange {
  double start = 0.005;
  double stop = 0.95;
  double step = 0.005;

  void validate() const;
  std::vector<double> values() const;
};

struct SweepSpec {
  ChiRange chi_range;
  std::vector<double> gains{1.0};
  std::vector<int> thresholds{0};
  std::complex<double> alpha{0.0, 0.0};
  TruncationPolicy truncation;
  QuadratureSpec quadrature;
  std::vector<Output> outputs{Output::entropy, Output::epr, Output::ng, Output::fbar,
                              Output::psucc};
  Format format = Format::csv;
  std::string out_path;

  void validate() const;
};

struct SweepRow {
  double chi;
  double g;
  int p;
  std::string metric;
  double value;
  std::string extra;
};

/// Stable sort by (metric, p, g, chi); rows sharing a key keep their order.
void sort_rows(std::vector<SweepRow>& rows);

/// 12 significant digits.
std::string format_number(double x);

std::string to_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& comments = {});
nlohmann::json to_json(const std::vector<SweepRow>& rows);

/// Writes through a temporary sibling file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

/// Runs `task(i)` for i < n on up to `jobs` threads and concatenates the
/// results in index order. The first failure by index is rethrown.
std::vector<SweepRow> parallel_rows(std::size_t n, int jobs,
                                    const std::function<std::vector<SweepRow>(std::size_t)>& task);

/// Throws NumericalGuardError when the truncation cap left more tail mass
/// than the policy allows.
void check_truncation(const SchmidtStated& state, const TruncationPolicy& policy);

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs = 1);

enum class FigureId { fig1, fig2, fig3, fig4, fig5, fig6, fig7 };

FigureId parse_figure_id(const std::string& id);
const char* to_string(FigureId id);

struct FigureData {
  FigureId id;
  std::string caption;
  std::vector<std::string> comments;  // extra header lines after the caption
  std::vector<SweepRow> rows;
};

FigureData figure_data(FigureId id, const TruncationPolicy& policy = {}, int jobs = 1);
std::string render_figure(const FigureData& fig, Format format);

struct CrossoverReport {
  double gain;
  int threshold;
  double step;
  std::optional<double> chi_c1;
  std::optional<double> chi_c2;
  std::optional<ChiInterval<double>> secure_only;
  nlohmann::json regions;
};

CrossoverReport report_crossover(double gain, int threshold, double step,
                                 const TruncationPolicy& policy = {});
nlohmann::json to_json(const CrossoverReport& report);

/// Parses arguments, runs the subcommand and returns the process exit code:
/// 0 success, 2 validation, 3 numerical guard, 4 I/O.
int run(int argc, char** argv);

}  // namespace nlatele::cli

#endif  // NLATELE_CLI_HPP
