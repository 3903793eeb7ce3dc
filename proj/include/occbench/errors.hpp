#pragma once

#include <stdexcept>
#include <string>

namespace occbench {

enum class ErrorCode {
  SchemaError,
  ValidationError,
  UnknownVideo,
  UnknownClass,
  ScoreOutOfRange,
  EmptyTube,
  EmptyRegion,
  OutOfCalibratedRange,
  DecodeError,
  EmptySprite,
  UnknownCategory,
  Unfittable,
  SeverityUnreachable,
  MotionSplitViolation,
  MissingSprite,
  DimensionMismatch,
  IndivisibleDims,
  ProbabilityOutOfRange,
  LengthMismatch,
  NoGroundTruth,
  ZeroCleanBaseline,
  ZeroDenominator,
  MismatchedThresholds,
  IoError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownVideo: return "UnknownVideo";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::EmptyTube: return "EmptyTube";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::OutOfCalibratedRange: return "OutOfCalibratedRange";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::EmptySprite: return "EmptySprite";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::Unfittable: return "Unfittable";
    case ErrorCode::SeverityUnreachable: return "SeverityUnreachable";
    case ErrorCode::MotionSplitViolation: return "MotionSplitViolation";
    case ErrorCode::MissingSprite: return "MissingSprite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndivisibleDims: return "IndivisibleDims";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoGroundTruth: return "NoGroundTruth";
    case ErrorCode::ZeroCleanBaseline: return "ZeroCleanBaseline";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::MismatchedThresholds: return "MismatchedThresholds";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

/// Base exception for all library failures; carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <ErrorCode Code>
class CodedError : public Error {
 public:
  explicit CodedError(const std::string& message) : Error(Code, message) {}
};

using SchemaError = CodedError<ErrorCode::SchemaError>;
using UnknownVideoError = CodedError<ErrorCode::UnknownVideo>;
using UnknownClassError = CodedError<ErrorCode::UnknownClass>;
using ScoreOutOfRangeError = CodedError<ErrorCode::ScoreOutOfRange>;
using EmptyTubeError = CodedError<ErrorCode::EmptyTube>;
using EmptyRegionError = CodedError<ErrorCode::EmptyRegion>;
using OutOfCalibratedRangeError = CodedError<ErrorCode::OutOfCalibratedRange>;
using DecodeError = CodedError<ErrorCode::DecodeError>;
using EmptySpriteError = CodedError<ErrorCode::EmptySprite>;
using UnknownCategoryError = CodedError<ErrorCode::UnknownCategory>;
using UnfittableError = CodedError<ErrorCode::Unfittable>;
using SeverityUnreachableError = CodedError<ErrorCode::SeverityUnreachable>;
using MotionSplitViolationError = CodedError<ErrorCode::MotionSplitViolation>;
using MissingSpriteError = CodedError<ErrorCode::MissingSprite>;
using DimensionMismatchError = CodedError<ErrorCode::DimensionMismatch>;
using IndivisibleDimsError = CodedError<ErrorCode::IndivisibleDims>;
using ProbabilityOutOfRangeError = CodedError<ErrorCode::ProbabilityOutOfRange>;
using LengthMismatchError = CodedError<ErrorCode::LengthMismatch>;
using NoGroundTruthError = CodedError<ErrorCode::NoGroundTruth>;
using ZeroCleanBaselineError = CodedError<ErrorCode::ZeroCleanBaseline>;
using ZeroDenominatorError = CodedError<ErrorCode::ZeroDenominator>;
using MismatchedThresholdsError = CodedError<ErrorCode::MismatchedThresholds>;
using IoError = CodedError<ErrorCode::IoError>;

/// Invariant violation located inside a manifest or prediction document.
class ValidationError : public Error {
 public:
  ValidationError(std::string video_id, std::string tube_id, long frame_index,
                  const std::string& message)
      : Error(ErrorCode::ValidationError, format_location(video_id, tube_id, frame_index, message)),
        video_id_(std::move(video_id)),
        tube_id_(std::move(tube_id)),
        frame_index_(frame_index) {}

  explicit ValidationError(const std::string& message)
      : Error(ErrorCode::ValidationError, message), frame_index_(-1) {}

  const std::string& video_id() const noexcept { return video_id_; }
  const std::string& tube_id() const noexcept { return tube_id_; }
  long frame_index() const noexcept { return frame_index_; }  // -1 when not frame-specific

 private:
  static std::string format_location(const std::string& video_id, const std::string& tube_id,
                                     long frame_index, const std::string& message) {
    std::string out = message + " (video=" + (video_id.empty() ? "?" : video_id);
    if (!tube_id.empty()) out += ", tube=" + tube_id;
    if (frame_index >= 0) out += ", frame=" + std::to_string(frame_index);
    out += ")";
    return out;
  }

  std::string video_id_;
  std::string tube_id_;
  long frame_index_;
};

}  // namespace occbench
