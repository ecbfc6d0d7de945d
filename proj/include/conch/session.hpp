#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "conch/inference.hpp"
#include "conch/interpreter.hpp"

namespace conch {

enum class OutputFormat { Plain, Records };

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitLanguageError = 1,
  kExitInferenceError = 2,
  kExitUsage = 3,
};

struct SessionConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 1;
  std::uint64_t max_attempts = 1'000'000;
  bool rewrite = true;
  /// Empty means the built-in prelude / rule set.
  std::vector<std::string> preludes;
  std::vector<std::string> rule_files;
  /// Skip the built-in prelude and rules when no files are given.
  bool bare = false;
  std::string context = "default";
  OutputFormat output = OutputFormat::Plain;
  bool stats = false;
  /// Print a histogram of each query's samples with this many real bins.
  std::optional<int> histogram_bins;
  unsigned threads = 1;

  nlohmann::json to_json() const;
};

/// Statistics of one top-level rejection-query.
struct QueryStats {
  int ordinal = 0;
  std::size_t samples = 0;
  std::uint64_t attempts = 0;
  double acceptance_rate = 0.0;
  double seconds = 0.0;
  OptimizationReport optimizer;
  std::optional<SExpr> rewritten_query;
  std::optional<std::string> error;

  nlohmann::json to_json() const;
};

/// Built-in knowledge shipped with the tool.
std::string_view default_prelude();
std::string_view default_rules();

/// One interpreter session: knowledge, a seeded random stream, and output.
///
/// Top-level `rejection-query` forms run `config.samples` times through
/// `run_samples`, each query on its own seed drawn from the session stream.
/// Other forms evaluate once; non-unspecified results are printed.
class Session {
 public:
  Session(SessionConfig config, std::ostream& out);

  /// Loads preludes and rule files (or the built-in ones) and activates the
  /// configured context. Throws on bad files.
  void load_knowledge();
  void run_text(std::string_view text);
  void run_form(const SExpr& form);
  /// Writes the trailing summary record (records output only).
  void finish(const std::optional<std::string>& error = std::nullopt);

  void reseed(std::uint64_t seed);

  Interpreter& interpreter() { return interp_; }
  const SessionConfig& config() const { return config_; }
  const std::vector<QueryStats>& query_stats() const { return stats_; }

  void print_concepts(std::ostream& os) const;
  void print_rules(std::ostream& os) const;
  void print_stats(std::ostream& os, const QueryStats& stats) const;

 private:
  void run_query(const SExpr& form);
  void emit_value(const Value& v);

  SessionConfig config_;
  std::ostream& out_;
  Interpreter interp_;
  Rng rng_;
  std::vector<QueryStats> stats_;
  int value_count_ = 0;
};

/// Maps an exception to an exit code.
int exit_code_for(const std::exception& e);

/// Runs a program file end to end; errors go to `err`.
int run_file(const std::string& path, const SessionConfig& config, std::ostream& out, std::ostream& err);
/// Same as run_file on in-memory program text.
int run_source(std::string_view text, const SessionConfig& config, std::ostream& out, std::ostream& err);

/// Interactive loop. Meta-commands: `:stats`, `:concepts`, `:rules`,
/// `:context NAME`, `:seed N`, `:quit`.
void repl(const SessionConfig& config, std::istream& in, std::ostream& out, std::ostream& err, bool prompt = true);

/// Frequency table. Discrete values get one row per distinct value; when the
/// values are numbers and at least one is real they are binned into `bins`
/// equal-width intervals over the observed range.
std::string histogram(std::span<const Value> values, int bins = 10);

}  // namespace conch
