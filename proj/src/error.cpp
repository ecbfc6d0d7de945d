#include "conch/error.hpp"

namespace conch {

std::string Location::str() const {
  if (!known()) return "?";
  return std::to_string(line) + ":" + std::to_string(column);
}

Error::Error(std::string message, std::optional<Location> where)
    : message_(std::move(message)), where_(where) {
  if (where_ && !where_->known()) where_.reset();
  render();
}

void Error::locate(Location where) {
  if (!where_ && where.known()) {
    where_ = where;
    render();
  }
}

void Error::add_context(const std::string& context) {
  message_ = context + ": " + message_;
  render();
}

void Error::render() {
  rendered_ = where_ ? where_->str() + ": " + message_ : message_;
}

}  // namespace conch
