#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rfe {

enum class Errc {
    InvalidArgument,
    InvalidSymbol,
    OrderParity,
    NotSmaller,
    DimensionMismatch,
    ZeroOnGrid,
    RealRoot,
    WrongCount,
    NonPositiveRadius,
    NonPositiveRadial,
    DomainNotVisible,
    CoincidentPoints,
    PointInsideDomain,
    ResidualTooLarge,
    UnsupportedDomain,
    UnsupportedMu,
    TraceMismatch,
    TruncationTooSmall,
    OnSurface,
    BoxTooSmall,
    DegenerateNorm,
    ParseError,
    MissingArtifact,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace rfe
