#ifndef LOWEROP_ERRORS_HPP
#define LOWEROP_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace lowerop {

// Domain error with a stable machine-readable code. The CLI maps codes
// one-to-one into error reports, so they must not change casually.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message,
          std::optional<long> index = std::nullopt)
        : std::runtime_error(index ? message + " (index " + std::to_string(*index) + ")"
                                   : message),
          code_(std::move(code)),
          index_(index) {}

    const std::string& code() const noexcept { return code_; }
    std::optional<long> index() const noexcept { return index_; }

private:
    std::string code_;
    std::optional<long> index_;
};

namespace errc {
inline constexpr const char* field_mismatch = "FieldMismatch";
inline constexpr const char* degenerate_affine = "DegenerateAffine";
inline constexpr const char* degree_violation = "DegreeViolation";
inline constexpr const char* horizon_exceeded = "HorizonExceeded";
inline constexpr const char* not_degree_nonincreasing = "NotDegreeNonincreasing";
inline constexpr const char* bad_parameter = "BadParameter";
inline constexpr const char* not_isomorphism = "NotIsomorphism";
inline constexpr const char* not_lowering = "NotLowering";
inline constexpr const char* empty_result = "EmptyResult";
inline constexpr const char* need_more_coeffs = "NeedMoreCoeffs";
inline constexpr const char* not_monic = "NotMonic";
inline constexpr const char* no_classical_solution = "NoClassicalSolution";
inline constexpr const char* inadmissible_pair = "InadmissiblePair";
inline constexpr const char* not_regular = "NotRegular";
inline constexpr const char* no_solution = "NoSolution";
inline constexpr const char* not_a_fixed_point = "NotAFixedPoint";
inline constexpr const char* no_fixed_point_sequence = "NoFixedPointSequence";
inline constexpr const char* division_by_zero = "DivisionByZero";
inline constexpr const char* parse_error = "ParseError";
inline constexpr const char* self_test_failure = "SelfTestFailure";
}  // namespace errc

}  // namespace lowerop

#endif
