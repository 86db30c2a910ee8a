#pragma once

#include <stdexcept>
#include <string>

namespace vne {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// shortest_path_len on a disconnected pair.
struct Unreachable : Error {
  using Error::Error;
};

struct EmptyCandidateSet : Error {
  using Error::Error;
};

/// Instance/mapping/partition file could not be parsed; message carries
/// line and field context.
struct ParseError : Error {
  using Error::Error;
};

struct VirtualLargerThanSubstrate : Error {
  using Error::Error;
};

/// Requested partition size outside 1..|V|.
struct InfeasibleK : Error {
  using Error::Error;
};

struct StructurallyInvalidMapping : Error {
  using Error::Error;
};

/// LP/MIP engine failure (singular basis, malformed model, ...).
struct BackendFailure : Error {
  using Error::Error;
};

/// Solver output could not be decomposed into placements + loop-free paths.
struct ExtractionFailure : Error {
  using Error::Error;
};

/// Brute-force oracle guard (n_r <= 6, n_s <= 12).
struct TooLarge : Error {
  using Error::Error;
};

/// Price-and-Branch: fewer substrate parts than virtual parts.
struct PartCountMismatch : Error {
  using Error::Error;
};

}  // namespace vne
