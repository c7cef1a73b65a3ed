#pragma once

#include <stdexcept>
#include <string>

namespace fairline {

// Base class for everything this library throws on bad input or bad state.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input documents (score CSV, item spec files). Messages carry
// 1-based row/column positions where applicable.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input that violates a domain invariant.
struct ValidationError : Error {
    using Error::Error;
};

// All examinees tied on the total score: regression is undefined.
struct DegenerateCohortError : Error {
    using Error::Error;
};

// The elimination loop removed every item; no fair set remains.
struct ConsensusCollapseError : Error {
    using Error::Error;
};

}  // namespace fairline
