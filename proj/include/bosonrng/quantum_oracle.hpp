#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bosonrng::oracle {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline constexpr unsigned kMaxAmplitudeSteps = 16;
inline constexpr unsigned kMaxEnumerationSteps = 20;

/// One branch of the joint mode/atom state |n, m> |record>. Bit i of
/// `record` is 1 when the i-th atom gave its photon to the blue mode (atom
/// left in |b>), 0 for red (|r>). Distinct records are orthogonal.
struct AmplitudeTerm {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint32_t record = 0;
  double amplitude = 0.0;
};

struct AmplitudeState {
  std::uint64_t n0 = 0;
  std::uint64_t m0 = 0;
  unsigned step = 0;
  std::vector<AmplitudeTerm> terms;

  double norm_squared() const;
  /// Atom record as a string over {b, r}, first atom first.
  std::string record_string(const AmplitudeTerm& term) const;
};

/// Mutation hook for self-checks: scales the blue-branch amplitude factor by
/// (1 + blue_branch_distortion) on every branching.
struct EvolveOptions {
  double blue_branch_distortion = 0.0;
};

/// Applies the stimulated-emission branching `steps` times starting from
/// |n0, m0>|e, e, ...>:
///   |n,m>|rec> -> sqrt((n+1)/(n+m+2)) |n+1,m>|rec,b> + sqrt((m+1)/(n+m+2)) |n,m+1>|rec,r>
/// Atom records are kept in full (2^steps terms), so steps <= 16.
AmplitudeState evolve_amplitudes(std::uint64_t n0, std::uint64_t m0, unsigned steps,
                                 const EvolveOptions& options = {});

/// Outcome probabilities keyed by the number of photons added to the blue mode.
using OutcomeProbabilities = std::map<std::uint64_t, double>;

/// Sums |amplitude|^2 over terms with equal blue additions. Records are
/// orthogonal, so no cross terms appear.
OutcomeProbabilities marginal_counts(const AmplitudeState& state);

/// Exact law of the blue additions after k classical urn steps.
struct PathDistribution {
  std::map<std::uint64_t, Rational> by_blue_count;

  Rational total() const;
  OutcomeProbabilities to_double() const;
};

/// Sums the exact products of transition probabilities over all 2^k paths.
PathDistribution enumerate_paths(std::uint64_t b0, std::uint64_t r0, unsigned steps);

/// Visits every path (bit i = 1 when step i adds blue) with its exact
/// probability. Same cap as enumerate_paths.
void visit_paths(std::uint64_t b0, std::uint64_t r0, unsigned steps,
                 const std::function<void(std::uint32_t path, std::uint64_t blue_added,
                                          const Rational& probability)>& visit);

/// Largest per-outcome absolute difference; outcomes missing on one side
/// count as probability zero there.
double equivalence_gap(const OutcomeProbabilities& amplitudes, const PathDistribution& paths);

}  // namespace bosonrng::oracle
