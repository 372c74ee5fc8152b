#pragma once

#include <stdexcept>
#include <string>

namespace censtest {

// Thrown for invalid inputs and unusable configurations. Messages are meant
// to be shown to the user as-is.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace censtest
