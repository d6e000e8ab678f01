#pragma once

#include <stdexcept>
#include <string>

namespace nasp {

/// Error kinds surfaced by the library. Every throwing operation documents
/// which kinds it can raise; tests match on the kind, not the message.
enum class errc {
    division_by_zero,
    config_mismatch,
    precision_exhausted,
    denominator_not_unit,
    nonzero_constant_term,
    singular_jacobian,
    non_integral_coefficient,
    non_integral_rescale,
    bad_constant_term,
    convergence_domain,
    prime_mismatch,
    overlapping_cells,
    support_mismatch,
    depth_overflow,
    gradient_vanishes,
    budget_exhausted,
    not_critical,
    degenerate_hessian,
    degenerate_critical_class,
    not_critical_over_q,
    degenerate_hessian_over_q,
    bad_prime,
    syntax_error,
    non_polynomial,
    constant_not_scalar,
    invalid_argument,
};

const char* errc_name(errc k);

class Error : public std::runtime_error {
  public:
    Error(errc kind, const std::string& what)
        : std::runtime_error(std::string(errc_name(kind)) + ": " + what), kind_(kind) {}

    errc kind() const { return kind_; }

  private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) { throw Error(kind, what); }

} // namespace nasp
