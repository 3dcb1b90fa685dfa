#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heisttrace {

// Input-class failure: bad files, malformed records, violated preconditions.
// The CLI maps these to exit code 1; everything else is an internal error (2).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse failure tied to a specific line of an input file.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    std::size_t line;
};

}  // namespace heisttrace
