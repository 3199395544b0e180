#pragma once

#include <stdexcept>
#include <string>

namespace gapbench {

// Base for all recoverable errors raised by the library.  The CLI maps
// ValidationError to exit code 2 and TooLargeToEnumerate to exit code 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct TooLargeToEnumerate : Error {
    using Error::Error;
};

struct DuplicateEdge : ValidationError { using ValidationError::ValidationError; };
struct SelfLoop : ValidationError { using ValidationError::ValidationError; };
struct WeightOutOfRange : ValidationError { using ValidationError::ValidationError; };
struct BadVertexId : ValidationError { using ValidationError::ValidationError; };
struct BadParams : ValidationError { using ValidationError::ValidationError; };
struct WrongModelKind : ValidationError { using ValidationError::ValidationError; };
struct InconsistentPartial : ValidationError { using ValidationError::ValidationError; };
struct DegenerateLevel : ValidationError { using ValidationError::ValidationError; };
struct NotEnoughCandidates : ValidationError { using ValidationError::ValidationError; };
struct AllKnownInfected : ValidationError { using ValidationError::ValidationError; };
struct InequalityCheckFailed : ValidationError { using ValidationError::ValidationError; };
struct ConfigError : ValidationError { using ValidationError::ValidationError; };

}  // namespace gapbench
