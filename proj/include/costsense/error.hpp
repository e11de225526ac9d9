#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace costsense {

enum class ErrorKind {
    invalid_argument,
    invalid_outcome,
    incoherent_costs,
    domain,
    context,
    infeasible_scenario,
    infeasible_moments,
    degenerate,
    no_solution,
    precondition,
    inconsistent_ranking,
    ingestion,
    insufficient_data,
    config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace costsense
