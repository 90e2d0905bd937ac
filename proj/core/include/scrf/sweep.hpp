#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "scrf/adversaries.hpp"

namespace scrf {

// Splits [0, count) into contiguous chunks, one per worker; body(chunk, begin, end).
void parallel_chunks(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);
unsigned default_threads();

enum class Scheme { large, small };
std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

struct SweepConfig {
  Scheme scheme = Scheme::large;
  Rational epsilon{1, 10};
  std::uint32_t length = 4;  // |pi0|
  std::uint32_t protocols = 20;
  std::uint64_t runs = 1000;
  AdversarySpec adversary;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware
  bool instrument = true;
  std::optional<std::uint32_t> fragment_base;
};

struct SweepSummary {
  std::uint64_t runs = 0;
  std::uint64_t failures = 0;
  InvariantReport invariants;
  std::uint64_t max_corruptions[2]{};
  std::uint64_t budget[2]{};
  std::uint64_t over_budget_flags = 0;
  std::uint64_t max_uncorrupted_fragments = 0;
  std::uint32_t rounds = 0;
  std::optional<std::string> first_failure;

  void merge(const SweepSummary& other);
};

struct TrialSetup {
  std::uint64_t protocol_seed;
  Input x, y;
  std::uint64_t adversary_seed;
};
TrialSetup trial_setup(const SweepConfig& config, std::uint64_t trial);

SweepSummary run_sweep(const SweepConfig& config);

}  // namespace scrf
