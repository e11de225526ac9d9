#include "costsense/error.hpp"

namespace costsense {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::invalid_outcome: return "invalid-outcome";
        case ErrorKind::incoherent_costs: return "incoherent-costs";
        case ErrorKind::domain: return "domain";
        case ErrorKind::context: return "context";
        case ErrorKind::infeasible_scenario: return "infeasible-scenario";
        case ErrorKind::infeasible_moments: return "infeasible-moments";
        case ErrorKind::degenerate: return "degenerate";
        case ErrorKind::no_solution: return "no-solution";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::inconsistent_ranking: return "inconsistent-ranking";
        case ErrorKind::ingestion: return "ingestion";
        case ErrorKind::insufficient_data: return "insufficient-data";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace costsense
