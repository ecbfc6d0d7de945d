#include "conch/inference.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "conch/reader.hpp"

namespace conch {

QueryResult rejection_query(Interpreter& interp, const QuerySpec& spec, const EnvPtr& base, Rng& rng,
                            std::uint64_t max_attempts) {
  if (max_attempts < 1) throw EvalError("rejection-query: max attempts must be at least 1");
  EvalContext ctx{&rng, true, nullptr};
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    EnvPtr env = Env::make(base);
    try {
      for (const auto& def : spec.definitions) interp.eval(def, env, ctx);
      Value cond = interp.eval(spec.condition, env, ctx);
      const auto* accepted = cond.get_if<bool>();
      if (!accepted)
        throw EvalError("rejection-query condition must be a boolean, got " + show(cond), spec.condition.location());
      if (*accepted) return {interp.eval(spec.query, env, ctx), attempt};
    } catch (Error& e) {
      e.add_context("attempt " + std::to_string(attempt));
      throw;
    }
  }
  throw ExhaustionError("rejection-query: no sample satisfied " + print(spec.condition) + " in " +
                            std::to_string(max_attempts) + " attempts",
                        max_attempts);
}

namespace {

struct Outcome {
  Value value;
  std::uint64_t attempts = 0;
  std::exception_ptr error;
  std::string message;
};

Outcome draw_one(Interpreter& interp, const QuerySpec& spec, const EnvPtr& base, std::uint64_t seed,
                 std::size_t index, std::uint64_t max_attempts) {
  Rng rng = Rng::stream(seed, index);
  Outcome out;
  try {
    QueryResult r = rejection_query(interp, spec, base, rng, max_attempts);
    out.value = std::move(r.value);
    out.attempts = r.attempts;
  } catch (const ExhaustionError& e) {
    out.attempts = e.attempts();
    out.error = std::current_exception();
    out.message = e.what();
  } catch (const std::exception& e) {
    out.error = std::current_exception();
    out.message = e.what();
  }
  return out;
}

}  // namespace

SampleReport run_samples(Interpreter& interp, const QuerySpec& spec, std::size_t n, const EnvPtr& base,
                         std::uint64_t seed, const RunOptions& options) {
  if (n < 1) throw EvalError("run_samples: sample count must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  std::vector<Outcome> outcomes(n);

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      outcomes[i] = draw_one(interp, spec, base, seed, i, options.max_attempts);
      if (outcomes[i].error) {
        outcomes.resize(i + 1);
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_failure{n};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          if (i > first_failure.load()) break;
          outcomes[i] = draw_one(interp, spec, base, seed, i, options.max_attempts);
          if (outcomes[i].error) {
            std::size_t seen = first_failure.load();
            while (i < seen && !first_failure.compare_exchange_weak(seen, i)) {
            }
          }
        }
      });
    }
    pool.clear();
    if (first_failure.load() < n) outcomes.resize(first_failure.load() + 1);
  }

  SampleReport report;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    report.total_attempts += outcomes[i].attempts;
    if (outcomes[i].error) {
      report.failure = SampleFailure{i, outcomes[i].error, outcomes[i].message};
      break;
    }
    report.samples.push_back(std::move(outcomes[i].value));
  }
  report.acceptance_rate =
      report.total_attempts ? static_cast<double>(report.samples.size()) / static_cast<double>(report.total_attempts)
                            : 0.0;
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace conch
