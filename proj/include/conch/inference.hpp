#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "conch/interpreter.hpp"
#include "conch/query.hpp"

namespace conch {

struct QueryResult {
  Value value;
  std::uint64_t attempts = 0;
};

/// Rejection sampling: each attempt evaluates the definitions afresh in a
/// new child of `base`, then the condition; the first attempt whose
/// condition is #t returns the query expression evaluated in that attempt's
/// environment.
///
/// Throws ExhaustionError after `max_attempts` rejections. A non-boolean
/// condition is an EvalError. Evaluation errors propagate with the attempt
/// number prepended.
QueryResult rejection_query(Interpreter& interp, const QuerySpec& spec, const EnvPtr& base, Rng& rng,
                            std::uint64_t max_attempts);

struct SampleFailure {
  std::size_t index = 0;
  std::exception_ptr error;
  std::string message;
};

struct SampleReport {
  std::vector<Value> samples;
  std::uint64_t total_attempts = 0;
  double acceptance_rate = 0.0;
  std::chrono::duration<double> wall_time{};
  /// Set when some sample failed; `samples` then holds the samples before it.
  std::optional<SampleFailure> failure;

  bool ok() const { return !failure; }
};

struct RunOptions {
  std::uint64_t max_attempts = 1'000'000;
  unsigned threads = 1;
};

/// Draws `n` accepted samples. Sample `i` uses `Rng::stream(seed, i)`, so
/// the result does not depend on `options.threads`.
///
/// The interpreter's knowledge and `base` are only read during the run.
SampleReport run_samples(Interpreter& interp, const QuerySpec& spec, std::size_t n, const EnvPtr& base,
                         std::uint64_t seed, const RunOptions& options = {});

}  // namespace conch
