#include "scrf/sweep.hpp"

#include <stdexcept>

namespace scrf {

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_chunks(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (threads == 0) threads = default_threads();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (chunks == 1) {
    body(0, 0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = count * c / chunks;
    const std::size_t end = count * (c + 1) / chunks;
    pool.emplace_back([&body, c, begin, end] { body(c, begin, end); });
  }
  for (auto& t : pool) t.join();
}

std::string_view to_string(Scheme s) { return s == Scheme::large ? "large" : "small"; }

Scheme scheme_from_string(std::string_view s) {
  if (s == "large") return Scheme::large;
  if (s == "small") return Scheme::small;
  throw std::invalid_argument("scheme must be 'large' or 'small'");
}

void SweepSummary::merge(const SweepSummary& o) {
  runs += o.runs;
  failures += o.failures;
  invariants.merge(o.invariants);
  for (int p = 0; p < 2; ++p) {
    max_corruptions[p] = std::max(max_corruptions[p], o.max_corruptions[p]);
    budget[p] = std::max(budget[p], o.budget[p]);
  }
  over_budget_flags += o.over_budget_flags;
  max_uncorrupted_fragments = std::max(max_uncorrupted_fragments, o.max_uncorrupted_fragments);
  rounds = std::max(rounds, o.rounds);
  if (!first_failure) first_failure = o.first_failure;
}

TrialSetup trial_setup(const SweepConfig& config, std::uint64_t trial) {
  const auto protocol_index = trial % std::max<std::uint32_t>(1, config.protocols);
  const auto mix = derive_seed(config.seed, trial);
  const auto domain = RandomAlternatingProtocol::kInputDomain;
  return {derive_seed(config.seed ^ 0x5eedULL, 1000ULL * config.length + protocol_index), mix % domain,
          (mix / domain) % domain, derive_seed(mix, 0xad7ULL)};
}

namespace {

template <class Symbol, class Sim>
void run_range(const SweepConfig& config, std::size_t begin, std::size_t end, SweepSummary& out, Sim&& sim,
               SymbolTraits<Symbol> traits) {
  SimConfig sc = config.scheme == Scheme::large ? SimConfig::large(config.epsilon) : SimConfig::small(config.epsilon);
  sc.instrument = config.instrument;
  sc.fragment_base = config.fragment_base;
  for (std::size_t t = begin; t < end; ++t) {
    const auto setup = trial_setup(config, t);
    RandomAlternatingProtocol pi0(config.length, setup.protocol_seed);
    auto adversary = make_adversary<Symbol>(config.adversary, setup.adversary_seed, traits);
    const auto r = sim(sc, pi0, setup.x, setup.y, *adversary);
    ++out.runs;
    out.rounds = std::max(out.rounds, r.n);
    if (r.failed()) {
      ++out.failures;
      if (!out.first_failure) out.first_failure = "trial " + std::to_string(t);
    }
    out.invariants.merge(r.invariants);
    for (int p = 0; p < 2; ++p) {
      out.max_corruptions[p] = std::max(out.max_corruptions[p], r.corruptions[p]);
      out.budget[p] = std::max(out.budget[p], r.budget[p]);
    }
    out.over_budget_flags += r.flags.over_budget;
    out.max_uncorrupted_fragments = std::max(out.max_uncorrupted_fragments, r.uncorrupted_fragments);
  }
}

}  // namespace

SweepSummary run_sweep(const SweepConfig& config) {
  std::vector<SweepSummary> parts(std::max(1u, config.threads == 0 ? default_threads() : config.threads));
  parallel_chunks(config.runs, static_cast<unsigned>(parts.size()), [&](std::size_t c, std::size_t b, std::size_t e) {
    if (config.scheme == Scheme::large) {
      run_range<LargeSymbol>(config, b, e, parts[c],
                             [](auto&&... a) { return simulate_large(a...); }, SymbolTraits<LargeSymbol>{});
    } else {
      const auto base = config.fragment_base.value_or(fragment_base(config.epsilon));
      run_range<SmallSymbol>(config, b, e, parts[c],
                             [](auto&&... a) { return simulate_small(a...); }, SymbolTraits<SmallSymbol>{base});
    }
  });
  SweepSummary total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace scrf
