#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace worldtraj {

enum class ErrorKind {
  InvalidArgument,
  InvalidRotation,
  DegenerateConfiguration,
  NonPositiveScale,
  LengthMismatch,
  NonIdentityFirstFrame,
  WrongFrame,
  EmptyCorpus,
  NonFiniteLoss,
  CorruptModel,
  ArchitectureMismatch,
  InvalidFraction,
  InvalidFov,
  EmptyRange,
  SubjectBehindCamera,
  SubjectOutOfView,
  TooShort,
  Io,
  UnsupportedVersion,
  Config,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. `stage` is filled in by the pipeline driver so a
/// failure can be traced to the step that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string stage = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

  Error with_stage(std::string stage) const;

 private:
  ErrorKind kind_;
  std::string stage_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace worldtraj
