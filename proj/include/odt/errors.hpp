#pragma once

#include <stdexcept>
#include <string>

namespace odt {

/// Raised when a solver produces non-finite iterates.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by file I/O (missing inputs, unwritable paths, bad magic).
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when rotation-center calibration is undefined (e.g. constant trace).
class calibration_error : public std::runtime_error {
public:
    explicit calibration_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace odt
