#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asfilt {

enum class errc {
  invalid_argument,
  model_mismatch,
  precision_insufficient,
  not_attained,
  not_monogenic,
  not_generically_etale,
  non_unit_leading_coefficient,
  etale_roots_present,
  schema_error,
  constant_term_error,
  enumeration_too_large,
  composition_overflow,
  no_valid_epsilon,
  theorem_violation,
};

constexpr std::string_view to_string(errc code) {
  switch (code) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::model_mismatch: return "ModelMismatch";
    case errc::precision_insufficient: return "PrecisionInsufficient";
    case errc::not_attained: return "NotAttained";
    case errc::not_monogenic: return "NotMonogenic";
    case errc::not_generically_etale: return "NotGenericallyEtale";
    case errc::non_unit_leading_coefficient: return "NonUnitLeadingCoefficient";
    case errc::etale_roots_present: return "EtaleRootsPresent";
    case errc::schema_error: return "SchemaError";
    case errc::constant_term_error: return "ConstantTermError";
    case errc::enumeration_too_large: return "EnumerationTooLarge";
    case errc::composition_overflow: return "CompositionOverflow";
    case errc::no_valid_epsilon: return "NoValidEpsilon";
    case errc::theorem_violation: return "TheoremViolation";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace asfilt
