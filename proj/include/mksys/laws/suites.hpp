#pragma once

#include <optional>

#include "mksys/laws/generators.hpp"

namespace mksys {

struct LawSuiteConfig {
  std::string suite;
  std::size_t cases = 100;
  std::uint64_t seed = 1;
  std::size_t max_size = 0;  // 0: the suite's own default
  std::size_t max_horizon = 3;
  unsigned threads = 0;      // 0: hardware concurrency
};

struct SuiteResult {
  std::string suite;
  std::size_t cases = 0, passed = 0, checks = 0;
  std::optional<std::size_t> first_failure;
  std::string detail;
  Json counterexample;  // a loadable model file for the first failing case
  std::vector<std::string> notes;

  bool ok() const { return passed == cases; }
};

const std::vector<std::string>& suite_names();
SuiteResult run_suite(const LawSuiteConfig& cfg);
Json suite_result_to_json(const SuiteResult& r);

struct ExhaustiveResult {
  std::size_t checked = 0, failures = 0;
  std::string detail;
  bool ok() const { return failures == 0; }
};

// All 64 deterministic lenses between 2-element interfaces, every triple.
ExhaustiveResult exhaustive_lens_associativity();
// The 16 time-invariant deterministic machines on constant 2-element
// objects at T = 2: associativity over triples, interchange over quadruples.
ExhaustiveResult exhaustive_mealy_laws();

// Lifted composites over 2-element instances where some but not all inner
// interface objects are units, with S and I2 constant.
struct CoherenceSearch {
  std::size_t instances = 0, failures = 0;
  Json first_failure;
};
CoherenceSearch search_coherence_counterexamples();

// phi^n by summing over every state and input path of the one-step data.
std::vector<Rational> enumerate_phi(const OpenSystem& o, std::size_t n);

}  // namespace mksys
