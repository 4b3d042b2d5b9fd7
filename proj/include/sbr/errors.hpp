#pragma once

#include <stdexcept>
#include <string>

namespace sbr {

/// Observation window does not cover the samples a convolution needs.
/// The message names the needed index range and what was available.
class missing_data_error : public std::runtime_error {
public:
    explicit missing_data_error(const std::string& what) : std::runtime_error(what) {}
};

class dimension_mismatch : public std::invalid_argument {
public:
    explicit dimension_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace sbr
