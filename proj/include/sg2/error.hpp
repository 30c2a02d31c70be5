#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sg2 {

enum class error_kind {
    reject_not_coprime,
    reject_order,
    overflow,
    not_member,
    out_of_domain,
    residue_mismatch,
    unbound_variable,
    parse_error,
    invalid_system,
    degenerate_denominator,
    config_rejected,
    sink_failure,
    empty_input,
    coprimality_violation,
    incoherent_profile,
    inverse_missing,
    insufficient_profile,
    not_subtractable,
    not_divisible,
    unsupported,
    witness_construction_failed,
    unsatisfiable_spec,
};

constexpr std::string_view to_string(error_kind k) {
    switch (k) {
    case error_kind::reject_not_coprime: return "RejectNotCoprime";
    case error_kind::reject_order: return "RejectOrder";
    case error_kind::overflow: return "Overflow";
    case error_kind::not_member: return "NotMember";
    case error_kind::out_of_domain: return "OutOfDomain";
    case error_kind::residue_mismatch: return "ResidueMismatch";
    case error_kind::unbound_variable: return "UnboundVariable";
    case error_kind::parse_error: return "ParseError";
    case error_kind::invalid_system: return "InvalidSystem";
    case error_kind::degenerate_denominator: return "DegenerateDenominator";
    case error_kind::config_rejected: return "ConfigRejected";
    case error_kind::sink_failure: return "SinkFailure";
    case error_kind::empty_input: return "EmptyInput";
    case error_kind::coprimality_violation: return "CoprimalityViolation";
    case error_kind::incoherent_profile: return "IncoherentProfile";
    case error_kind::inverse_missing: return "InverseMissing";
    case error_kind::insufficient_profile: return "InsufficientProfile";
    case error_kind::not_subtractable: return "NotSubtractable";
    case error_kind::not_divisible: return "NotDivisible";
    case error_kind::unsupported: return "Unsupported";
    case error_kind::witness_construction_failed: return "WitnessConstructionFailed";
    case error_kind::unsatisfiable_spec: return "UnsatisfiableSpec";
    }
    return "Unknown";
}

/// Every domain failure in the library is reported through this type; `kind()`
/// is the stable machine-readable tag, `what()` the human message.
class error : public std::runtime_error {
public:
    error(error_kind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

[[noreturn]] inline void fail(error_kind kind, const std::string& message) {
    throw error(kind, message);
}

} // namespace sg2
