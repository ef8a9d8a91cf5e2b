#pragma once

#include <stdexcept>
#include <string>

namespace quadclip {

enum class ErrorCode {
  NonPlanarFace,
  NotWatertight,
  DegenerateFace,
  InvertedOrientation,
  InvalidCylinder,
  OutOfDomain,
  TangencyAmbiguous,
  DegenerateConic,
  NudgeExhausted,
  NonPositiveWeight,
  SingularWeight,
  OutOfRange,
  IoFailure,
  BadConfig,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code_(c) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace quadclip
