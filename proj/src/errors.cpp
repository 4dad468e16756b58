#include "worldtraj/errors.hpp"

namespace worldtraj {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidRotation: return "InvalidRotation";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonIdentityFirstFrame: return "NonIdentityFirstFrame";
    case ErrorKind::WrongFrame: return "WrongFrame";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::CorruptModel: return "CorruptModel";
    case ErrorKind::ArchitectureMismatch: return "ArchitectureMismatch";
    case ErrorKind::InvalidFraction: return "InvalidFraction";
    case ErrorKind::InvalidFov: return "InvalidFov";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::SubjectBehindCamera: return "SubjectBehindCamera";
    case ErrorKind::SubjectOutOfView: return "SubjectOutOfView";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::Io: return "Io";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

namespace {
std::string format_message(ErrorKind kind, const std::string& message,
                           const std::string& stage) {
  std::string out(to_string(kind));
  if (!stage.empty()) out += " [" + stage + "]";
  out += ": " + message;
  return out;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::string stage)
    : std::runtime_error(format_message(kind, message, stage)),
      kind_(kind),
      stage_(std::move(stage)),
      detail_(message) {}

Error Error::with_stage(std::string stage) const {
  return Error(kind_, detail_, std::move(stage));
}

}  // namespace worldtraj
