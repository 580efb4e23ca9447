#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace nucleus {

enum class ErrorCode {
    NonSymmetric,
    InvalidParams,
    Singular,
    Degenerate,
    RangeError,
    DegenerateLaminate,
    NotRankOne,
    InvalidMeasure,
    BarycenterMismatch,
    NotUnit,
    AmbiguousEmax,
    AssumptionUnmet,
    NumericalFailure,
    ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as this exception. `site` is filled in by the
// specimen analysis when an error is attributable to a particular site group.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string site = {})
        : std::runtime_error(message), code_(code), site_(std::move(site)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& site() const noexcept { return site_; }

    Error with_site(std::string site) const { return Error(code_, what(), std::move(site)); }

private:
    ErrorCode code_;
    std::string site_;
};

}  // namespace nucleus
