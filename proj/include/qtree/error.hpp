#pragma once

#include <stdexcept>
#include <string>

namespace qtree {

// Every library failure carries a short machine-readable kind next to the
// human message; the CLI prints both as JSON.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

} // namespace qtree
