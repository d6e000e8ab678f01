#pragma once

#include <map>

#include "nasp/series.hpp"

namespace nasp {

/// Polynomial with exact rational coefficients: the prime-independent form of
/// a phase, reduced into each local field on demand.
struct QPoly {
    int nvars = 1;
    std::map<Monomial, mpq_class, GradedLexLess> coeffs;

    static QPoly zero(int n) { return QPoly{n, {}}; }
    static QPoly constant(int n, const mpq_class& c);
    static QPoly variable(int n, int i);

    void add_term(const Monomial& m, const mpq_class& c);
    int degree() const;

    friend QPoly operator+(const QPoly& a, const QPoly& b);
    friend QPoly operator-(const QPoly& a, const QPoly& b);
    friend QPoly operator*(const QPoly& a, const QPoly& b);
    QPoly operator-() const;
    QPoly pow(long e) const;

    QPoly derivative(int i) const;
    mpq_class eval(const std::vector<mpq_class>& x) const;
    std::vector<mpq_class> gradient_at(const std::vector<mpq_class>& x) const;
    std::vector<std::vector<mpq_class>> hessian_at(const std::vector<mpq_class>& x) const;

    /// Reduction into a local field; coefficients must land in O.
    MultiSeries to_series(const FieldConfig& cfg, int degree_cutoff) const;

    /// Canonical graded-lex text form, e.g. "x1^2 + 3/4*x1*x2".
    std::string to_string() const;

    bool operator==(const QPoly&) const = default;
};

} // namespace nasp
