#pragma once

#include <stdexcept>
#include <string>

namespace pterm {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A DNF conversion exceeded its disjunct cap.
class EncodingBlowup : public Error {
 public:
  using Error::Error;
};

/// Malformed interchange document. `path()` is a JSON pointer to the
/// offending field.
class FormatError : public Error {
 public:
  FormatError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Certificate shape does not fit the program (locations, dimension,
/// level range).
class StructuralMismatch : public Error {
 public:
  using Error::Error;
};

/// Program is outside the class accepted by the general algorithm.
class NotLinPPStar : public Error {
 public:
  using Error::Error;
};

/// Bounded-support synthesis requested for a program sampling from an
/// unbounded distribution.
class NotBSP : public Error {
 public:
  using Error::Error;
};

/// Endpoint resolution of a nondeterministic sup/inf was requested while the
/// relevant coefficient is still an LP unknown.
class UnresolvedSup : public Error {
 public:
  using Error::Error;
};

class UnresolvedInf : public Error {
 public:
  using Error::Error;
};

/// Farkas encoding was handed an antecedent that still has strict rows.
class InfeasibleAntecedentNotRelaxed : public Error {
 public:
  using Error::Error;
};

}  // namespace pterm
