#pragma once

#include <stdexcept>
#include <string>

namespace dsflow {

/// Bad argument (index out of range, invalid dimension, malformed input).
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Curvature left the admissible cone: the quotient F is no longer defined.
struct degeneracy_error : std::runtime_error {
    explicit degeneracy_error(const std::string& msg, double margin = 0.0)
        : std::runtime_error(msg), margin(margin) {}
    double margin;
};

/// The graph stopped being spacelike (upsilon^2 fell below the floor).
struct spacelike_error : std::runtime_error {
    explicit spacelike_error(const std::string& msg, double margin = 0.0)
        : std::runtime_error(msg), margin(margin) {}
    double margin;
};

/// A time step produced an inadmissible hypersurface.
struct flow_breakdown_error : std::runtime_error {
    explicit flow_breakdown_error(const std::string& msg, double margin = 0.0)
        : std::runtime_error(msg), margin(margin) {}
    double margin;
};

/// Rejection sampler ran out of attempts.
struct sampler_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file; message carries file name and line number.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dsflow
