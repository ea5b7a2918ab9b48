#pragma once

#include <stdexcept>
#include <string>

namespace hardcore {

// Error taxonomy. The CLI maps these onto its exit-code contract:
//   2 parse errors, 3 domain precondition violations, 4 failed searches,
//   5 internal contract violations (always a bug, never expected).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };

// Domain preconditions (exit 3).
struct DomainError : Error { using Error::Error; };
struct ConstructionError : DomainError { using DomainError::DomainError; };
struct DegenerateMap : DomainError { using DomainError::DomainError; };
struct PoleError : DomainError { using DomainError::DomainError; };
struct NotADisk : DomainError { using DomainError::DomainError; };
struct NotATree : DomainError { using DomainError::DomainError; };
struct OracleLimit : DomainError { using DomainError::DomainError; };
struct DegreeBound : DomainError { using DomainError::DomainError; };
struct GeometryPrecondition : DomainError { using DomainError::DomainError; };
struct DegenerateSeed : DomainError { using DomainError::DomainError; };
struct WrongBranch : DomainError { using DomainError::DomainError; };
struct ExceptionalParameter : DomainError { using DomainError::DomainError; };

// A search ran out of budget without a certificate (exit 4).
struct SearchFailed : Error { using Error::Error; };

// A certified lemma contract was violated at runtime (exit 5).
struct InternalError : Error { using Error::Error; };

} // namespace hardcore
