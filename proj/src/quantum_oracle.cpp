#include "bosonrng/quantum_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "bosonrng/error.hpp"

namespace bosonrng::oracle {

double AmplitudeState::norm_squared() const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.amplitude * t.amplitude;
  return sum;
}

std::string AmplitudeState::record_string(const AmplitudeTerm& term) const {
  std::string s(step, 'r');
  for (unsigned i = 0; i < step; ++i) {
    if ((term.record >> i) & 1u) s[i] = 'b';
  }
  return s;
}

AmplitudeState evolve_amplitudes(std::uint64_t n0, std::uint64_t m0, unsigned steps,
                                 const EvolveOptions& options) {
  if (steps > kMaxAmplitudeSteps) {
    throw ConfigError("evolve_amplitudes: at most " + std::to_string(kMaxAmplitudeSteps) +
                      " steps are supported");
  }
  AmplitudeState state{n0, m0, 0, {AmplitudeTerm{n0, m0, 0, 1.0}}};
  for (unsigned s = 0; s < steps; ++s) {
    std::vector<AmplitudeTerm> next;
    next.reserve(state.terms.size() * 2);
    for (const auto& t : state.terms) {
      const double denom = static_cast<double>(t.n + t.m) + 2.0;
      const double to_blue = std::sqrt((static_cast<double>(t.n) + 1.0) / denom) *
                             (1.0 + options.blue_branch_distortion);
      const double to_red = std::sqrt((static_cast<double>(t.m) + 1.0) / denom);
      next.push_back({t.n + 1, t.m, t.record | (1u << s), t.amplitude * to_blue});
      next.push_back({t.n, t.m + 1, t.record, t.amplitude * to_red});
    }
    state.terms = std::move(next);
    state.step = s + 1;
  }
  return state;
}

OutcomeProbabilities marginal_counts(const AmplitudeState& state) {
  OutcomeProbabilities out;
  for (const auto& t : state.terms) out[t.n - state.n0] += t.amplitude * t.amplitude;
  return out;
}

Rational PathDistribution::total() const {
  Rational sum = 0;
  for (const auto& [j, p] : by_blue_count) sum += p;
  return sum;
}

OutcomeProbabilities PathDistribution::to_double() const {
  OutcomeProbabilities out;
  for (const auto& [j, p] : by_blue_count) out[j] = p.convert_to<double>();
  return out;
}

namespace {

void check_cap(unsigned steps) {
  if (steps > kMaxEnumerationSteps) {
    throw ConfigError("path enumeration: at most " + std::to_string(kMaxEnumerationSteps) +
                      " steps are supported");
  }
}

// Every path of length k shares the denominator (N+2)(N+3)...(N+k+1),
// N = b0 + r0, so only numerators are carried through the recursion.
Integer common_denominator(std::uint64_t b0, std::uint64_t r0, unsigned steps) {
  Integer d = 1;
  for (unsigned i = 0; i < steps; ++i) d *= Integer(b0 + r0 + 2 + i);
  return d;
}

template <class Leaf>
void descend(std::uint64_t blue, std::uint64_t red, unsigned depth, unsigned steps, std::uint32_t path,
             const Integer& numerator, std::uint64_t b0, Leaf& leaf) {
  if (depth == steps) {
    leaf(path, blue - b0, numerator);
    return;
  }
  descend(blue + 1, red, depth + 1, steps, path | (1u << depth), numerator * Integer(blue + 1), b0,
          leaf);
  descend(blue, red + 1, depth + 1, steps, path, numerator * Integer(red + 1), b0, leaf);
}

}  // namespace

PathDistribution enumerate_paths(std::uint64_t b0, std::uint64_t r0, unsigned steps) {
  check_cap(steps);
  std::map<std::uint64_t, Integer> numerators;
  auto leaf = [&](std::uint32_t, std::uint64_t j, const Integer& num) { numerators[j] += num; };
  descend(b0, r0, 0, steps, 0u, Integer(1), b0, leaf);
  const Integer denom = common_denominator(b0, r0, steps);
  PathDistribution out;
  for (const auto& [j, num] : numerators) out.by_blue_count[j] = Rational(num, denom);
  return out;
}

void visit_paths(std::uint64_t b0, std::uint64_t r0, unsigned steps,
                 const std::function<void(std::uint32_t, std::uint64_t, const Rational&)>& visit) {
  check_cap(steps);
  const Integer denom = common_denominator(b0, r0, steps);
  auto leaf = [&](std::uint32_t path, std::uint64_t j, const Integer& num) {
    visit(path, j, Rational(num, denom));
  };
  descend(b0, r0, 0, steps, 0u, Integer(1), b0, leaf);
}

double equivalence_gap(const OutcomeProbabilities& amplitudes, const PathDistribution& paths) {
  double gap = 0.0;
  const auto exact = paths.to_double();
  for (const auto& [j, p] : amplitudes) {
    const auto it = exact.find(j);
    gap = std::max(gap, std::abs(p - (it == exact.end() ? 0.0 : it->second)));
  }
  for (const auto& [j, p] : exact) {
    if (!amplitudes.contains(j)) gap = std::max(gap, std::abs(p));
  }
  return gap;
}

}  // namespace bosonrng::oracle
