#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <tuple>

#include <unistd.h>

#include "nlatele/cli.hpp"

namespace nlatele::cli {

namespace {
const char* const kOutputNames[] = {"entropy", "epr", "ng", "pdist", "fbar", "fbar_grid2d", "psucc"};
}

Output parse_output(const std::string& name) {
  for (int i = 0; i < 7; ++i)
    if (name == kOutputNames[i]) return static_cast<Output>(i);
  throw ValidationError("unknown output '" + name + "'");
}

const char* to_string(Output o) { return kOutputNames[static_cast<int>(o)]; }

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ValidationError("unknown format '" + name + "' (expected csv or json)");
}

void ChiRange::validate() const {
  detail::require(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step),
                  "chi range must be finite");
  detail::require(start > 0.0 && stop < 1.0, "chi range must lie in (0,1)");
  detail::require(start <= stop, "chi range start must not exceed stop");
  detail::require(step > 0.0, "chi step must be positive");
}

std::vector<double> ChiRange::values() const {
  validate();
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  detail::require(n <= 1000000, "chi grid is too large");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

void SweepSpec::validate() const {
  chi_range.validate();
  detail::require(!gains.empty(), "gain list must not be empty");
  for (double g : gains) detail::require(std::isfinite(g) && g >= 1.0, "gains must be >= 1");
  detail::require(!thresholds.empty(), "threshold list must not be empty");
  for (int p : thresholds) detail::require(p >= 0, "thresholds must be non-negative");
  detail::require(!outputs.empty(), "output list must not be empty");
  truncation.validate();
  quadrature.validate();
  CoherentAmplitude<double>{alpha}.validate();
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.metric, a.p, a.g, a.chi) < std::tie(b.metric, b.p, b.g, b.chi);
  });
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string to_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "chi,g,p,metric,value,extra\n";
  for (const auto& r : rows) {
    out += format_number(r.chi) + ',' + format_number(r.g) + ',' + std::to_string(r.p) + ',' +
           r.metric + ',' + format_number(r.value) + ',' + r.extra + '\n';
  }
  return out;
}

nlohmann::json to_json(const std::vector<SweepRow>& rows) {
  auto num = [](double x) { return std::stod(format_number(x)); };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"chi", num(r.chi)},
                   {"g", num(r.g)},
                   {"p", r.p},
                   {"metric", r.metric},
                   {"value", num(r.value)},
                   {"extra", r.extra}});
  return arr;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into '" + path + "'");
  }
}

std::vector<SweepRow> parallel_rows(std::size_t n, int jobs,
                                    const std::function<std::vector<SweepRow>(std::size_t)>& task) {
  detail::require(jobs >= 1, "--jobs must be >= 1");
  std::vector<std::vector<SweepRow>> parts(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        parts[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto nthreads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<SweepRow> out;
  for (auto& p : parts) {
    for (auto& r : p) {
      if (!std::isfinite(r.value))
        throw NumericalGuardError("non-finite value for metric " + r.metric);
      out.push_back(std::move(r));
    }
  }
  return out;
}

void check_truncation(const SchmidtStated& state, const TruncationPolicy& policy) {
  if (state.tail_bound() > policy.epsilon)
    throw NumericalGuardError("truncation cap reached for " + state.label() + ": tail " +
                              format_number(state.tail_bound()) + " exceeds epsilon " +
                              format_number(policy.epsilon) + "; raise max_dim");
}

}  // namespace nlatele::cli
