#include "cubefm/errors.hpp"

namespace cubefm {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::FocalPointProjection: return "FocalPointProjection";
    case Errc::RankDeficientCamera: return "RankDeficientCamera";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::DegenerateCloud: return "DegenerateCloud";
    case Errc::NonAffinePoint: return "NonAffinePoint";
    case Errc::CoincidentCenters: return "CoincidentCenters";
    case Errc::IdenticallyZeroPencil: return "IdenticallyZeroPencil";
    case Errc::DependentInputs: return "DependentInputs";
    case Errc::PencilOfQuadrics: return "PencilOfQuadrics";
    case Errc::NoQuadric: return "NoQuadric";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::AtInfinity: return "AtInfinity";
    case Errc::ExhaustedRetries: return "ExhaustedRetries";
    case Errc::DegenerateIntersection: return "DegenerateIntersection";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message, int kernel_dim)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      kernel_dim_(kernel_dim) {}

}  // namespace cubefm
