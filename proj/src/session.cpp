#include "conch/session.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "conch/reader.hpp"

namespace conch {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string percent(std::size_t count, std::size_t total) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * static_cast<double>(count) / static_cast<double>(total));
  return buf;
}

}  // namespace

nlohmann::json SessionConfig::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["samples"] = samples;
  j["max_attempts"] = max_attempts;
  j["rewrite"] = rewrite;
  j["preludes"] = preludes;
  j["rules"] = rule_files;
  j["bare"] = bare;
  j["context"] = context;
  j["output"] = output == OutputFormat::Plain ? "plain" : "records";
  j["stats"] = stats;
  j["threads"] = threads;
  return j;
}

nlohmann::json QueryStats::to_json() const {
  nlohmann::json j;
  j["query"] = ordinal;
  j["samples"] = samples;
  j["attempts"] = attempts;
  j["acceptance_rate"] = acceptance_rate;
  nlohmann::json opt;
  opt["fired"] = optimizer.fired;
  if (optimizer.fired) {
    opt["variable"] = optimizer.variable;
    auto& chain = opt["chain"] = nlohmann::json::array();
    for (const auto& step : optimizer.chain) chain.push_back(print(step));
    opt["original_definition"] = print(*optimizer.original_definition);
    opt["rewritten_definition"] = print(*optimizer.rewritten_definition);
  }
  if (rewritten_query) opt["rewritten_query"] = print(*rewritten_query);
  j["optimizer"] = opt;
  if (error) j["error"] = *error;
  return j;
}

Session::Session(SessionConfig config, std::ostream& out) : config_(std::move(config)), out_(out), rng_(config_.seed) {
  interp_.options().max_attempts = config_.max_attempts;
  interp_.options().rewrite = config_.rewrite;
}

void Session::load_knowledge() {
  if (config_.preludes.empty()) {
    if (!config_.bare) interp_.eval_program(default_prelude(), rng_);
  } else {
    for (const auto& path : config_.preludes) {
      try {
        interp_.eval_program(read_file(path), rng_);
      } catch (Error& e) {
        e.add_context("prelude " + path);
        throw;
      }
    }
  }
  if (config_.rule_files.empty()) {
    if (!config_.bare) interp_.rules().load(default_rules());
  } else {
    for (const auto& path : config_.rule_files) {
      try {
        interp_.rules().load(read_file(path));
      } catch (Error& e) {
        e.add_context("rules " + path);
        throw;
      }
    }
  }
  interp_.store().set_context(config_.context);
}

void Session::run_text(std::string_view text) {
  for (const auto& form : parse(text)) run_form(form);
}

void Session::run_form(const SExpr& form) {
  if (form.head_symbol() && *form.head_symbol() == "rejection-query") {
    run_query(form);
    return;
  }
  Value v = interp_.eval(form, interp_.global(), rng_);
  if (!v.is<Unspecified>()) emit_value(v);
}

void Session::emit_value(const Value& v) {
  if (config_.output == OutputFormat::Plain) {
    out_ << show(v) << '\n';
  } else {
    nlohmann::json j{{"type", "value"}, {"index", value_count_}, {"value", show(v)}};
    out_ << j.dump() << '\n';
  }
  ++value_count_;
}

void Session::run_query(const SExpr& form) {
  QueryStats st;
  st.ordinal = static_cast<int>(stats_.size()) + 1;
  QuerySpec spec = QuerySpec::from_form(form);
  try {
    if (config_.rewrite) {
      OptimizedQuery opt = optimize_query(spec, interp_.rules(), interp_.store());
      st.optimizer = opt.report;
      if (opt.report.fired) st.rewritten_query = opt.spec.to_form();
      spec = std::move(opt.spec);
    }
  } catch (Error& e) {
    e.locate(form.location());
    st.error = e.what();
    stats_.push_back(st);
    throw;
  }

  const std::uint64_t seed = rng_.next_u64();
  SampleReport report =
      run_samples(interp_, spec, config_.samples, interp_.global(), seed, {config_.max_attempts, config_.threads});

  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    if (config_.output == OutputFormat::Plain) {
      out_ << show(report.samples[i]) << '\n';
    } else {
      nlohmann::json j{{"type", "sample"}, {"query", st.ordinal}, {"index", i}, {"value", show(report.samples[i])}};
      out_ << j.dump() << '\n';
    }
  }
  st.samples = report.samples.size();
  st.attempts = report.total_attempts;
  st.acceptance_rate = report.acceptance_rate;
  st.seconds = report.wall_time.count();
  if (report.failure) st.error = report.failure->message;
  stats_.push_back(st);

  if (config_.output == OutputFormat::Plain) {
    if (config_.histogram_bins && !report.samples.empty()) out_ << histogram(report.samples, *config_.histogram_bins);
    if (config_.stats) print_stats(out_, st);
  }
  if (report.failure) {
    try {
      std::rethrow_exception(report.failure->error);
    } catch (Error& e) {
      e.add_context("sample " + std::to_string(report.failure->index));
      e.locate(form.location());
      throw;
    }
  }
}

void Session::finish(const std::optional<std::string>& error) {
  if (config_.output != OutputFormat::Records) return;
  nlohmann::json j;
  j["type"] = "summary";
  j["config"] = config_.to_json();
  auto& queries = j["queries"] = nlohmann::json::array();
  for (const auto& st : stats_) queries.push_back(st.to_json());
  j["status"] = error ? "error" : "ok";
  if (error) j["error"] = *error;
  out_ << j.dump() << '\n';
}

void Session::reseed(std::uint64_t seed) {
  config_.seed = seed;
  rng_ = Rng(seed);
}

void Session::print_stats(std::ostream& os, const QueryStats& st) const {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.3f", st.seconds);
  os << "; query " << st.ordinal << ": " << st.samples << " samples, " << st.attempts << " attempts, acceptance rate "
     << format_real(st.acceptance_rate) << ", " << secs << " s\n";
  if (!config_.rewrite) {
    os << "; optimizer: disabled\n";
  } else if (!st.optimizer.fired) {
    os << "; optimizer: no rewrite\n";
  } else {
    os << "; optimizer: solved for " << st.optimizer.variable << '\n';
    for (const auto& step : st.optimizer.chain) os << ";   " << print(step) << '\n';
    os << ";   " << print(*st.optimizer.original_definition) << " => " << print(*st.optimizer.rewritten_definition)
       << '\n';
    os << "; rewritten: " << print(*st.rewritten_query) << '\n';
  }
  if (st.error) os << "; failed: " << *st.error << '\n';
}

void Session::print_concepts(std::ostream& os) const {
  const ConceptStore& store = interp_.store();
  os << "; context " << store.active_context() << '\n';
  for (std::uint32_t i = 0; i < store.concept_count(); ++i) {
    ConceptId id{i};
    os << store.name(id) << '\n';
    for (const auto& wl : store.instances_of(id))
      os << "  " << store.describe_source(wl.link->source) << "  " << format_real(wl.weight) << '\n';
  }
}

void Session::print_rules(std::ostream& os) const {
  for (const auto& rule : interp_.rules().rules()) os << print(rule.to_form()) << '\n';
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InferenceError*>(&e)) return kExitInferenceError;
  return kExitLanguageError;
}

int run_source(std::string_view text, const SessionConfig& config, std::ostream& out, std::ostream& err) {
  Session session(config, out);
  try {
    session.load_knowledge();
    session.run_text(text);
    session.finish();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    session.finish(std::string(e.what()));
    return exit_code_for(e);
  }
}

int run_file(const std::string& path, const SessionConfig& config, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::ostringstream diag;
  int code = run_source(text, config, out, diag);
  if (code != kExitOk) {
    std::string message = diag.str();
    const std::string prefix = "error: ";
    if (message.rfind(prefix, 0) == 0) message = prefix + path + ":" + message.substr(prefix.size());
    err << message;
  }
  return code;
}

namespace {

// Parenthesis depth of `text`, or nullopt while a string literal is open.
std::optional<int> open_depth(const std::string& text) {
  try {
    int depth = 0;
    for (const auto& t : tokenize(text)) {
      if (t.kind == Token::Kind::LParen) ++depth;
      if (t.kind == Token::Kind::RParen) --depth;
    }
    return depth;
  } catch (const SyntaxError& e) {
    if (e.message().find("unterminated string") != std::string::npos) return std::nullopt;
    return 0;
  }
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void repl(const SessionConfig& config, std::istream& in, std::ostream& out, std::ostream& err, bool prompt) {
  SessionConfig cfg = config;
  cfg.output = OutputFormat::Plain;
  Session session(cfg, out);
  try {
    session.load_knowledge();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }

  std::string buffer, line;
  while (true) {
    if (prompt) out << (buffer.empty() ? "> " : "... ") << std::flush;
    if (!std::getline(in, line)) break;
    const std::string cmd = trim(line);
    if (buffer.empty() && !cmd.empty() && cmd[0] == ':') {
      std::istringstream words(cmd);
      std::string verb, arg;
      words >> verb >> arg;
      try {
        if (verb == ":quit" || verb == ":q") break;
        if (verb == ":stats") {
          if (session.query_stats().empty()) out << "; no queries yet\n";
          else session.print_stats(out, session.query_stats().back());
        } else if (verb == ":concepts") {
          session.print_concepts(out);
        } else if (verb == ":rules") {
          session.print_rules(out);
        } else if (verb == ":context") {
          if (arg.empty()) out << "; context " << session.interpreter().store().active_context() << '\n';
          else session.interpreter().store().set_context(arg);
        } else if (verb == ":seed") {
          session.reseed(std::stoull(arg));
        } else {
          err << "error: unknown command " << verb << '\n';
        }
      } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
      }
      continue;
    }
    buffer += line;
    buffer += '\n';
    auto depth = open_depth(buffer);
    if (!depth || *depth > 0) continue;
    try {
      session.run_text(buffer);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
    }
    buffer.clear();
  }
}

std::string histogram(std::span<const Value> values, int bins) {
  if (values.empty()) return "";
  std::ostringstream os;
  const bool numeric = std::all_of(values.begin(), values.end(), [](const Value& v) { return v.is_number(); });
  const bool any_real = std::any_of(values.begin(), values.end(), [](const Value& v) { return v.is<double>(); });

  if (numeric && any_real) {
    std::vector<double> xs;
    for (const auto& v : values) xs.push_back(to_double(v));
    const double lo = *std::min_element(xs.begin(), xs.end());
    const double hi = *std::max_element(xs.begin(), xs.end());
    if (lo == hi || bins <= 1) {
      os << "[" << format_real(lo) << ", " << format_real(hi) << "] : " << xs.size() << " ("
         << percent(xs.size(), xs.size()) << ")\n";
      return os.str();
    }
    const double width = (hi - lo) / bins;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double x : xs) {
      auto b = static_cast<std::size_t>(std::floor((x - lo) / width));
      ++counts[std::min(b, counts.size() - 1)];
    }
    for (int b = 0; b < bins; ++b) {
      const double left = lo + width * b;
      const double right = b + 1 == bins ? hi : lo + width * (b + 1);
      os << "[" << format_real(left) << ", " << format_real(right) << (b + 1 == bins ? "]" : ")") << " : "
         << counts[b] << " (" << percent(counts[b], xs.size()) << ")\n";
    }
    return os.str();
  }

  const bool integral = std::all_of(values.begin(), values.end(), [](const Value& v) { return v.is<Integer>(); });
  std::vector<std::pair<std::string, std::size_t>> rows;
  if (integral) {
    std::map<Integer, std::size_t> counts;
    for (const auto& v : values) ++counts[std::get<Integer>(v.data)];
    for (const auto& [k, c] : counts) rows.emplace_back(k.str(), c);
  } else {
    std::map<std::string, std::size_t> counts;
    for (const auto& v : values) ++counts[show(v)];
    rows.assign(counts.begin(), counts.end());
  }
  for (const auto& [label, c] : rows) os << label << " : " << c << " (" << percent(c, values.size()) << ")\n";
  return os.str();
}

}  // namespace conch
