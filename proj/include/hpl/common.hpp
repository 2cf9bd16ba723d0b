#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hpl {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bounded rejection sampling ran out of retries; the request is too tight for
// the field size (or the constraints are unsatisfiable).
struct RetriesExhausted : Error {
  using Error::Error;
};

// Linear-system solution space does not have the expected dimension 1.
struct NotUnique : Error {
  using Error::Error;
};

struct NotOnQuadric : Error {
  using Error::Error;
};

// A component's variant invariants fail (direction equal to base point, node
// off its lines, point off its plane, degenerate span).
struct DegenerateComponent : Error {
  using Error::Error;
};

// Component meets the reference quadric in a way the residual/trace rule
// table does not cover (tangent line, non-split intersection, unlisted case).
struct UnsupportedIncidence : Error {
  using Error::Error;
};

// Requested parameters leave no room for a non-negative split.
struct Infeasible : Error {
  using Error::Error;
};

struct UndefinedCriticalValue : Error {
  using Error::Error;
};

// A certificate's internal cross-checks disagree; this is a test failure,
// not a recoverable state.
struct CertificateMismatch : Error {
  using Error::Error;
};

}  // namespace hpl
