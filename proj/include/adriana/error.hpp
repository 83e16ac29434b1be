#pragma once

#include <stdexcept>
#include <string>

namespace adriana {

enum class ErrorCode {
    // parsing / ingest
    MalformedHeader,
    RaggedRow,
    NonNumericCount,
    EmptyDocument,
    CountryNotFound,
    DateGap,
    // stationarity
    SeriesTooShort,
    MissingSeeds,
    ConstantSeries,
    SingularRegression,
    DegenerateRange,
    EmptyPartition,
    TooFewSamples,
    // seir
    ZeroGamma,
    StepProducedNaN,
    // des
    UnsortedArrivals,
    // surrogates
    NonFiniteLoss,
    EmptyTrainingSet,
    NotANeuralSpec,
    SingularDesign,
    HorizonTooLarge,
    WindowSizeMismatch,
    // metrics
    LengthMismatch,
    ConstantActuals,
    MixedScales,
    // pipeline / misc
    IncompleteRun,
    InvalidConfig,
    IoError,
};

const char* to_string(ErrorCode code);

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace adriana
