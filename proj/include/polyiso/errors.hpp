#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polyiso {

/// Base of every error raised by the library. `offending()` carries the edge
/// (or vertex, or walk-slot) ids the message refers to, when there are any.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::vector<int> offending = {})
      : std::runtime_error(what), offending_(std::move(offending)) {}

  const std::vector<int>& offending() const noexcept { return offending_; }

 private:
  std::vector<int> offending_;
};

#define POLYISO_DEFINE_ERROR(Name) \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

POLYISO_DEFINE_ERROR(InvalidMatrix);
POLYISO_DEFINE_ERROR(SizeMismatch);
POLYISO_DEFINE_ERROR(BrokenWalk);
POLYISO_DEFINE_ERROR(BadIncidence);
POLYISO_DEFINE_ERROR(NotBoundaryTriangle);
POLYISO_DEFINE_ERROR(NotADisk);
POLYISO_DEFINE_ERROR(DegenerateBoundary);
POLYISO_DEFINE_ERROR(InvalidLengths);
POLYISO_DEFINE_ERROR(DegeneratePolygon);
POLYISO_DEFINE_ERROR(SamplingFailed);
POLYISO_DEFINE_ERROR(InconsistentCycles);
POLYISO_DEFINE_ERROR(CollinearTriangle);
POLYISO_DEFINE_ERROR(InconsistentData);
POLYISO_DEFINE_ERROR(NotOrientable);
POLYISO_DEFINE_ERROR(TooFewVertices);
POLYISO_DEFINE_ERROR(SingularBoundary);
POLYISO_DEFINE_ERROR(ParseError);

#undef POLYISO_DEFINE_ERROR

}  // namespace polyiso
