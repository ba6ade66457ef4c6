#pragma once

#include <stdexcept>
#include <string>

namespace fraclip {

/// Thrown when an integral that must be finite diverges (non-integrable
/// weight singularity or kernel tail).
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a request exceeds the desk-scale caps the numerics support.
class desk_scale_error : public std::invalid_argument {
public:
    explicit desk_scale_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace fraclip
