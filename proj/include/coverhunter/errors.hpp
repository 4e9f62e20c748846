#pragma once

#include <stdexcept>
#include <string>

namespace coverhunter {

/// A configured cap (cosets, search nodes, group order, time) was exceeded.
/// Never means "the answer is negative", only "not established within bound".
class ResourceLimit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace coverhunter
