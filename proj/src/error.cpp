#include "adriana/error.hpp"

namespace adriana {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::RaggedRow: return "RaggedRow";
    case ErrorCode::NonNumericCount: return "NonNumericCount";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::CountryNotFound: return "CountryNotFound";
    case ErrorCode::DateGap: return "DateGap";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::MissingSeeds: return "MissingSeeds";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::SingularRegression: return "SingularRegression";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::EmptyPartition: return "EmptyPartition";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ZeroGamma: return "ZeroGamma";
    case ErrorCode::StepProducedNaN: return "StepProducedNaN";
    case ErrorCode::UnsortedArrivals: return "UnsortedArrivals";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::NotANeuralSpec: return "NotANeuralSpec";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorCode::WindowSizeMismatch: return "WindowSizeMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConstantActuals: return "ConstantActuals";
    case ErrorCode::MixedScales: return "MixedScales";
    case ErrorCode::IncompleteRun: return "IncompleteRun";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace adriana
