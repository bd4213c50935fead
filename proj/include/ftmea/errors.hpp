#pragma once

#include <stdexcept>
#include <string>

namespace ftmea {

// Base for all library errors. Subclasses carry no extra state; the
// message holds the offending id/net/line so callers can print it as-is.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define FTMEA_ERROR_TYPE(Name)                                \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& msg)                     \
        : Error(std::string(#Name) + ": " + msg) {}           \
  }

// risk-model
FTMEA_ERROR_TYPE(MalformedCsv);
FTMEA_ERROR_TYPE(RatingOutOfRange);
FTMEA_ERROR_TYPE(DuplicateId);
FTMEA_ERROR_TYPE(DanglingReference);

// correlation
FTMEA_ERROR_TYPE(CoefficientOutOfRange);
FTMEA_ERROR_TYPE(UnknownId);
FTMEA_ERROR_TYPE(WrongKind);
FTMEA_ERROR_TYPE(InconsistentWorksheet);

// netlist-ir
FTMEA_ERROR_TYPE(SyntaxError);
FTMEA_ERROR_TYPE(UndrivenNet);
FTMEA_ERROR_TYPE(MultiplyDrivenNet);
FTMEA_ERROR_TYPE(CombinationalLoop);
FTMEA_ERROR_TYPE(UnknownGateKind);
FTMEA_ERROR_TYPE(UnknownNet);

// scoap / structural-cdcf
FTMEA_ERROR_TYPE(EmptyNetSet);
FTMEA_ERROR_TYPE(ScoreOverflow);

// rpn-engine
FTMEA_ERROR_TYPE(UnknownClassLabel);

// fault-sim
FTMEA_ERROR_TYPE(IncompleteVector);
FTMEA_ERROR_TYPE(ExhaustiveLimitExceeded);

#undef FTMEA_ERROR_TYPE

}  // namespace ftmea
