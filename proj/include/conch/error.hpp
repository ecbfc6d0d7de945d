#pragma once

#include <exception>
#include <optional>
#include <string>

namespace conch {

/// Source position of a token or form. `line == 0` means unknown.
struct Location {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  std::string str() const;
};

/// Base of every error raised by the language runtime.
class Error : public std::exception {
 public:
  explicit Error(std::string message, std::optional<Location> where = std::nullopt);

  const char* what() const noexcept override { return rendered_.c_str(); }
  const std::string& message() const { return message_; }
  const std::optional<Location>& location() const { return where_; }

  /// Attaches a location if none is recorded yet.
  void locate(Location where);
  /// Prefixes the message with extra context, e.g. "attempt 12".
  void add_context(const std::string& context);

 private:
  void render();

  std::string message_;
  std::optional<Location> where_;
  std::string rendered_;
};

/// Lexical or syntactic error in program text.
class SyntaxError : public Error {
 public:
  using Error::Error;
};

/// Unbound symbols, type and arity errors, misuse of special forms.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Inference ran out of budget or hit an impossible condition. Maps to exit code 2.
class InferenceError : public Error {
 public:
  using Error::Error;
};

class ExhaustionError : public InferenceError {
 public:
  ExhaustionError(std::string message, unsigned long long attempts)
      : InferenceError(std::move(message)), attempts_(attempts) {}
  unsigned long long attempts() const { return attempts_; }

 private:
  unsigned long long attempts_;
};

class ZeroProbabilityError : public InferenceError {
 public:
  using InferenceError::InferenceError;
};

/// `(sample c)` exceeded its depth or node budget.
class BudgetExhausted : public InferenceError {
 public:
  using InferenceError::InferenceError;
};

}  // namespace conch
