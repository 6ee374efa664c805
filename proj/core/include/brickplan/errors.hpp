#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace brickplan {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (LDraw models, JSON artifacts). `line` is 1-based
// when known, 0 otherwise.
struct ParseError : Error {
    int line = 0;
    ParseError(const std::string& what, int line_no = 0) : Error(what), line(line_no) {}
};

// A model references a part id that is not in the part table.
struct UnknownPartError : Error {
    std::string part_id;
    UnknownPartError(const std::string& what, std::string part)
        : Error(what), part_id(std::move(part)) {}
};

// Invalid option values or option combinations.
struct ConfigError : Error {
    using Error::Error;
};

// A file could not be read or written.
struct IoError : Error {
    using Error::Error;
};

// The model cannot be planned (empty, not grounded, not one assembly).
struct PlanningError : Error {
    using Error::Error;
};

// A brick is rotated off the orthogonal stud grid.
struct OrientationError : Error {
    using Error::Error;
};

// Ill-formed plan structure: black box signature mismatch, duplicate box
// ids, wires consumed before they exist.
struct StructuralError : Error {
    using Error::Error;
};

}  // namespace brickplan
