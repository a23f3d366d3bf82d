#pragma once

#include <stdexcept>
#include <string>

namespace adacurv {

/// Error categories surfaced by the library. The CLI maps these to
/// machine-parsable one-line diagnostics.
enum class Errc {
  EmptyCloud,
  InvalidCoordinate,
  InvalidRadius,
  InvalidArgument,
  InsufficientNeighbors,
  DegenerateWeights,
  DegenerateNeighborhood,
  NoUsableScale,
  InvalidCount,
  InvalidSurface,
  ShapeMismatch,
  EmptyInput,
  InvalidValue,
  UndefinedCorrelation,
  FormatError,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptyCloud: return "EmptyCloud";
    case Errc::InvalidCoordinate: return "InvalidCoordinate";
    case Errc::InvalidRadius: return "InvalidRadius";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InsufficientNeighbors: return "InsufficientNeighbors";
    case Errc::DegenerateWeights: return "DegenerateWeights";
    case Errc::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case Errc::NoUsableScale: return "NoUsableScale";
    case Errc::InvalidCount: return "InvalidCount";
    case Errc::InvalidSurface: return "InvalidSurface";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InvalidValue: return "InvalidValue";
    case Errc::UndefinedCorrelation: return "UndefinedCorrelation";
    case Errc::FormatError: return "FormatError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace adacurv
