#pragma once

#include <stdexcept>
#include <string>

namespace nac {

/* Error taxonomy mirrored by the C API status codes.  Internal code throws;
 * the C boundary translates. */
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* bad argument to an operation (out-of-range order, wrong dimensions, ...) */
struct argument_error : error {
    using error::error;
};

/* generator/structure parameters outside their admissible range */
struct config_error : error {
    using error::error;
};

/* data value on or outside the boundary of the open unit hypercube */
struct boundary_error : error {
    explicit boundary_error(const std::string& msg, long row = -1)
        : error(msg), row(row) {}
    long row;  // 0-based offending row, -1 if not row-addressed
};

/* structure outside what the evaluator supports (nesting pair, depth > 3, ...) */
struct unsupported_error : error {
    using error::error;
};

/* malformed structure text / CSV */
struct parse_error : error {
    using error::error;
};

/* malformed or inconsistent numeric data */
struct data_error : error {
    using error::error;
};

}  // namespace nac
