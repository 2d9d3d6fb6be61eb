// Shared error types, truncation policy and small numeric helpers.
#ifndef NLATELE_CORE_HPP
#define NLATELE_CORE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlatele {

/// Bad input: out-of-domain parameter, malformed grid, inconsistent state.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical guard tripped: truncation mass, physicality, vanishing
/// probability. Signals either a bad parameter regime or a numerics bug.
class NumericalGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How far the Fock basis is cut. `epsilon` bounds the discarded
/// probability mass, `max_dim` caps the number of retained levels.
struct TruncationPolicy {
  double epsilon = 1e-14;
  int max_dim = 1024;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw ValidationError("truncation epsilon must lie in (0,1)");
    if (max_dim < 8) throw ValidationError("truncation max_dim must be >= 8");
  }
};

namespace detail {

inline void require(bool cond, const char* what) {
  if (!cond) throw ValidationError(what);
}

/// x*ln(x) with the 0*ln(0) = 0 convention.
template <typename Scalar>
Scalar xlogx(Scalar x) {
  using std::log;
  return x > Scalar(0) ? x * log(x) : Scalar(0);
}

/// sum_{n=0}^{m-1} x^n for x > 0, stable near x = 1.
template <typename Scalar>
Scalar geometric_sum(Scalar x, int m) {
  using std::expm1;
  using std::log;
  if (m <= 0) return Scalar(0);
  if (x == Scalar(1)) return Scalar(m);
  const Scalar lx = log(x);
  return expm1(Scalar(m) * lx) / expm1(lx);
}

/// Pairwise (cascade) summation in a fixed tree order; the result depends
/// only on the input sequence, never on who computed the terms.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
  constexpr std::size_t kLeaf = 16;
  if (xs.size() <= kLeaf) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs.data(), xs.size()));
}

}  // namespace detail
}  // namespace nlatele

#endif  // NLATELE_CORE_HPP
