#pragma once
#include <stdexcept>
#include <string>

// Error taxonomy.  Two families:
//   InputError  -- the caller handed us something invalid (CLI exit code 2)
//   BudgetError -- the request is well-formed but exceeds a configured cap
//                  or rejection budget (CLI exit code 3)
// Everything else (internal inconsistencies) is a plain std::runtime_error
// and indicates a bug.

namespace zetagcd {

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define ZETAGCD_INPUT_ERROR(NAME)                                             \
    struct NAME : InputError {                                                \
        using InputError::InputError;                                         \
    }
#define ZETAGCD_BUDGET_ERROR(NAME)                                            \
    struct NAME : BudgetError {                                               \
        using BudgetError::BudgetError;                                       \
    }

// finite fields
ZETAGCD_INPUT_ERROR(NotPrime);
ZETAGCD_INPUT_ERROR(DegreeZero);
ZETAGCD_INPUT_ERROR(FieldMismatch);
ZETAGCD_INPUT_ERROR(DivisionByZero);
ZETAGCD_BUDGET_ERROR(EnumerationCapExceeded);

// polynomials
ZETAGCD_INPUT_ERROR(BothZero);
ZETAGCD_INPUT_ERROR(ZeroInput);
ZETAGCD_INPUT_ERROR(NonUnitConstantTerm);
ZETAGCD_INPUT_ERROR(NotCoprimeExponents);
ZETAGCD_INPUT_ERROR(NoConsistentMatching);
ZETAGCD_INPUT_ERROR(AmbiguousMatching);

// varieties / pencils
ZETAGCD_INPUT_ERROR(NotHomogeneous);
ZETAGCD_INPUT_ERROR(NonIntegralCoefficient);
ZETAGCD_INPUT_ERROR(WeilCheckFailed);
ZETAGCD_INPUT_ERROR(DegenerateHyperplane);
ZETAGCD_INPUT_ERROR(NotLefschetz);
ZETAGCD_BUDGET_ERROR(RejectionBudgetExceeded);

// pipeline
ZETAGCD_INPUT_ERROR(GroundTruthMismatchDegree);

// groups
ZETAGCD_INPUT_ERROR(SizeMismatch);
ZETAGCD_INPUT_ERROR(EmptyCoset);
ZETAGCD_INPUT_ERROR(ZeroVector);
ZETAGCD_INPUT_ERROR(NotIsometry);
ZETAGCD_INPUT_ERROR(CharTwo);
ZETAGCD_BUDGET_ERROR(ClosureCapExceeded);

// torsion / complexes
ZETAGCD_INPUT_ERROR(NotAComplex);
ZETAGCD_INPUT_ERROR(ModeRequiresD2);
ZETAGCD_BUDGET_ERROR(IncomparableAtPrecision);

#undef ZETAGCD_INPUT_ERROR
#undef ZETAGCD_BUDGET_ERROR

} // namespace zetagcd
