#pragma once

#include <stdexcept>
#include <string>

namespace phigamma {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define PHIGAMMA_ERROR(Name)                                              \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(#Name, what) {}        \
  };

PHIGAMMA_ERROR(WindowUnderflow)
PHIGAMMA_ERROR(NotAUnit)
PHIGAMMA_ERROR(PrecisionTooLow)
PHIGAMMA_ERROR(CocycleDivergence)
PHIGAMMA_ERROR(NotEtale)
PHIGAMMA_ERROR(RankMismatch)
PHIGAMMA_ERROR(LimitNotStabilized)
PHIGAMMA_ERROR(NotPsiZero)
PHIGAMMA_ERROR(NegativeTailResidual)
PHIGAMMA_ERROR(NotPsiOne)
PHIGAMMA_ERROR(DegreeOverflow)
PHIGAMMA_ERROR(UnknownSuite)
PHIGAMMA_ERROR(ConfigInvalid)
PHIGAMMA_ERROR(ParseError)
PHIGAMMA_ERROR(ValidationError)

#undef PHIGAMMA_ERROR

}  // namespace phigamma
