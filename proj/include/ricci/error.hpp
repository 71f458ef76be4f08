#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ricci {

enum class Errc {
  InvalidArgument,
  GridTooCoarse,
  NonPositiveProfile,
  NoTip,
  BetaOutOfRange,
  NonIntegrableFactor,
  NotEmbeddable,
  StepUnderflow,
  OnSeparatrix,
  BranchMismatch,
  Unclassifiable,
  DegenerateTangency,
  ClosureResidualTooLarge,
  ProfileCollapsed,
  StabilityViolation,
  NotClosed,
  NotCritical,
  LeftAdmissibleRegion,
  TailTooShort,
  Io,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what, std::optional<std::size_t> index = std::nullopt,
        std::vector<std::string> diagnostics = {})
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code), index_(index), diagnostics_(std::move(diagnostics)) {}

  Errc code() const { return code_; }
  std::optional<std::size_t> index() const { return index_; }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
  Errc code_;
  std::optional<std::size_t> index_;
  std::vector<std::string> diagnostics_;
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::NonPositiveProfile: return "NonPositiveProfile";
    case Errc::NoTip: return "NoTip";
    case Errc::BetaOutOfRange: return "BetaOutOfRange";
    case Errc::NonIntegrableFactor: return "NonIntegrableFactor";
    case Errc::NotEmbeddable: return "NotEmbeddable";
    case Errc::StepUnderflow: return "StepUnderflow";
    case Errc::OnSeparatrix: return "OnSeparatrix";
    case Errc::BranchMismatch: return "BranchMismatch";
    case Errc::Unclassifiable: return "Unclassifiable";
    case Errc::DegenerateTangency: return "DegenerateTangency";
    case Errc::ClosureResidualTooLarge: return "ClosureResidualTooLarge";
    case Errc::ProfileCollapsed: return "ProfileCollapsed";
    case Errc::StabilityViolation: return "StabilityViolation";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotCritical: return "NotCritical";
    case Errc::LeftAdmissibleRegion: return "LeftAdmissibleRegion";
    case Errc::TailTooShort: return "TailTooShort";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ricci
