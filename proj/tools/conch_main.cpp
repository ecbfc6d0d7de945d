// conch: run probabilistic programs with concept knowledge and rewrite rules.

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conch/session.hpp"

int main(int argc, char** argv) {
  conch::SessionConfig config;
  std::vector<std::string> files;
  std::string output = "plain";
  bool no_rewrite = false;
  bool interactive = false;
  int bins = 0;

  CLI::App app{"conch: a Church-style probabilistic language with concepts and rewrite rules"};
  app.add_option("files", files, "Program files, evaluated in order in one session");
  app.add_option("--seed", config.seed, "Session seed")->capture_default_str();
  app.add_option("--samples", config.samples, "Samples per top-level rejection-query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-attempts", config.max_attempts, "Rejection attempts allowed per sample")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--no-rewrite", no_rewrite, "Disable condition rewriting (blind rejection sampling)");
  app.add_option("--prelude", config.preludes, "Knowledge file; repeatable; replaces the built-in prelude")
      ->check(CLI::ExistingFile);
  app.add_option("--rules", config.rule_files, "Rule file; repeatable; replaces the built-in rules")
      ->check(CLI::ExistingFile);
  app.add_flag("--bare", config.bare, "Do not load the built-in prelude or rules");
  app.add_option("--context", config.context, "Active weight context")->capture_default_str();
  app.add_flag("--stats", config.stats, "Report acceptance statistics and optimizer activity");
  app.add_option("--output", output, "Output format")
      ->check(CLI::IsMember({"plain", "records"}))
      ->capture_default_str();
  app.add_option("--histogram", bins, "Print a histogram of each query's samples using N bins for reals")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", config.threads, "Worker threads for sampling; results do not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--repl", interactive, "Start an interactive session (default when no files are given)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return conch::kExitUsage;
  }

  config.rewrite = !no_rewrite;
  config.output = output == "records" ? conch::OutputFormat::Records : conch::OutputFormat::Plain;
  if (bins > 0) config.histogram_bins = bins;

  if (interactive || files.empty()) {
    conch::repl(config, std::cin, std::cout, std::cerr);
    return conch::kExitOk;
  }

  if (files.size() == 1) return conch::run_file(files.front(), config, std::cout, std::cerr);

  std::string combined;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot open " << path << '\n';
      return conch::kExitUsage;
    }
    combined.append(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    combined += '\n';
  }
  return conch::run_source(combined, config, std::cout, std::cerr);
}
