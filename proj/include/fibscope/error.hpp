#pragma once

#include <stdexcept>
#include <string>

namespace fibscope {

/// Failure of a well-formed request on mathematical grounds (starvation,
/// degenerate presentation, ...). Distinct from argument misuse.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fibscope
