#include "sheafctx/error.hpp"

namespace sheafctx {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::AntichainViolation: return "AntichainViolation";
    case ErrorCode::CoverIncomplete: return "CoverIncomplete";
    case ErrorCode::EmptyContext: return "EmptyContext";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NotASubcontext: return "NotASubcontext";
    case ErrorCode::SemiringMismatch: return "SemiringMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::PartialMap: return "PartialMap";
    case ErrorCode::OverlappingContexts: return "OverlappingContexts";
    case ErrorCode::ScenarioMismatch: return "ScenarioMismatch";
    case ErrorCode::NonRationalModel: return "NonRationalModel";
    case ErrorCode::MissingPair: return "MissingPair";
    case ErrorCode::OutcomeNotNumeric: return "OutcomeNotNumeric";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotUnitVector: return "NotUnitVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonCommutingContext: return "NonCommutingContext";
    case ErrorCode::InconsistentSharedObservable: return "InconsistentSharedObservable";
    case ErrorCode::NonCommutingParties: return "NonCommutingParties";
    case ErrorCode::SpectrumOutOfRange: return "SpectrumOutOfRange";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidCone: return "InvalidCone";
    case ErrorCode::NotOnePlusOne: return "NotOnePlusOne";
    case ErrorCode::ZeroProjection: return "ZeroProjection";
    case ErrorCode::OverlappingFactors: return "OverlappingFactors";
    case ErrorCode::RegionsShareSites: return "RegionsShareSites";
    case ErrorCode::RegionsNotSeparated: return "RegionsNotSeparated";
    case ErrorCode::NonCommutingAcrossRegions: return "NonCommutingAcrossRegions";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace sheafctx
