#pragma once

#include <stdexcept>
#include <string>

namespace degen {

/// Root of every failure raised by the library. Each subclass names one
/// failure mode so callers can react to it specifically.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DEGEN_ERROR(Name)                  \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

DEGEN_ERROR(InvalidArgument);
DEGEN_ERROR(SingularPencil);
DEGEN_ERROR(IllConditioned);
DEGEN_ERROR(NoConvergence);
DEGEN_ERROR(NotInDomain);
DEGEN_ERROR(NonLinearMap);
DEGEN_ERROR(InsufficientDecay);
DEGEN_ERROR(TruncationDominates);
DEGEN_ERROR(Diverged);
DEGEN_ERROR(ConsistencyMissing);
DEGEN_ERROR(InadmissibleExponents);
DEGEN_ERROR(GateRejected);
DEGEN_ERROR(DegenerateGrid);
DEGEN_ERROR(UnknownEntry);
DEGEN_ERROR(ValidationError);

#undef DEGEN_ERROR

/// Malformed input file; carries the offending location.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error("parse error at " + where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace degen
