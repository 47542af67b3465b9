#pragma once

#include <stdexcept>
#include <string>

namespace kad {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NegativeEntry : Error { using Error::Error; };
struct AllZero : Error { using Error::Error; };
struct TooShort : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct EmptyConditioningSet : Error { using Error::Error; };
struct ParameterOutOfRange : Error { using Error::Error; };
struct DegenerateBudget : Error { using Error::Error; };
struct VocabularyTooLarge : Error { using Error::Error; };
struct ZeroResidual : Error { using Error::Error; };
struct StreamExhausted : Error { using Error::Error; };
struct DegenerateNumerator : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct InconsistentVocab : Error { using Error::Error; };
struct NoEligibleInstances : Error { using Error::Error; };

} // namespace kad
