#include "rfe/error.hpp"

namespace rfe {

std::string_view to_string(Errc code)
{
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidSymbol: return "InvalidSymbol";
    case Errc::OrderParity: return "OrderParity";
    case Errc::NotSmaller: return "NotSmaller";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroOnGrid: return "ZeroOnGrid";
    case Errc::RealRoot: return "RealRoot";
    case Errc::WrongCount: return "WrongCount";
    case Errc::NonPositiveRadius: return "NonPositiveRadius";
    case Errc::NonPositiveRadial: return "NonPositiveRadial";
    case Errc::DomainNotVisible: return "DomainNotVisible";
    case Errc::CoincidentPoints: return "CoincidentPoints";
    case Errc::PointInsideDomain: return "PointInsideDomain";
    case Errc::ResidualTooLarge: return "ResidualTooLarge";
    case Errc::UnsupportedDomain: return "UnsupportedDomain";
    case Errc::UnsupportedMu: return "UnsupportedMu";
    case Errc::TraceMismatch: return "TraceMismatch";
    case Errc::TruncationTooSmall: return "TruncationTooSmall";
    case Errc::OnSurface: return "OnSurface";
    case Errc::BoxTooSmall: return "BoxTooSmall";
    case Errc::DegenerateNorm: return "DegenerateNorm";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingArtifact: return "MissingArtifact";
    }
    return "Unknown";
}

} // namespace rfe
