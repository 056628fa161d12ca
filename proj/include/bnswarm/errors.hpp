#pragma once

#include <stdexcept>

namespace bnswarm {

// Bad experiment setup: invalid parameter combinations, unplaceable robots,
// missing referenced files. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bnswarm
