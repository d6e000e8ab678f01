#pragma once

#include <map>
#include <string>
#include <vector>

#include "nasp/localfield.hpp"

namespace nasp {

using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

/// Graded-lexicographic order: lower total degree first, then descending
/// lexicographic on exponent vectors (so x1^2 precedes x1*x2 precedes x2^2).
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a > b;
    }
};

class SeriesMap;

/// Truncated power series in n variables over the valuation ring: every
/// coefficient has ord >= 0, monomials of total degree > degree_cutoff are
/// dropped. `truncation_free` marks values that represent an actual
/// polynomial rather than a truncation of an infinite series.
class MultiSeries {
  public:
    MultiSeries() = default;
    MultiSeries(FieldConfig cfg, int nvars, int degree_cutoff);

    static MultiSeries constant(FieldConfig cfg, int nvars, int degree_cutoff, const LocalNum& c);
    static MultiSeries variable(FieldConfig cfg, int nvars, int degree_cutoff, int i);

    const FieldConfig& config() const { return cfg_; }
    int nvars() const { return nvars_; }
    int degree_cutoff() const { return cutoff_; }
    bool truncation_free() const { return exact_; }
    const std::map<Monomial, LocalNum, GradedLexLess>& coeffs() const { return c_; }

    /// Insert/accumulate a coefficient (degree- and integrality-checked).
    void add_term(const Monomial& m, const LocalNum& c);
    LocalNum coeff(const Monomial& m) const; ///< exact zero when absent
    LocalNum constant_term() const;
    int degree() const; ///< max stored total degree, -1 for zero
    bool is_zero_to_precision() const;
    /// Min ord_floor over stored coefficients (kInfOrd when none); with the
    /// integrality invariant this is >= 0.
    long min_coeff_ord_floor() const;
    /// Min ord_floor over coefficients of total degree >= d.
    long min_coeff_ord_floor_from_degree(int d) const;

    MultiSeries operator-() const;
    friend MultiSeries operator+(const MultiSeries& a, const MultiSeries& b);
    friend MultiSeries operator-(const MultiSeries& a, const MultiSeries& b);
    friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);
    MultiSeries scaled(const LocalNum& c) const;

    MultiSeries derivative(int i) const;
    SeriesMap gradient() const;
    std::vector<std::vector<MultiSeries>> hessian() const;

    /// Truncated composition s(m_1, ..., m_n); every component of m must have
    /// zero constant term.
    MultiSeries compose(const SeriesMap& m) const;

    /// Exact Taylor shift x -> x + c for integral c; preserves truncation_free.
    MultiSeries recenter(const std::vector<LocalNum>& c) const;

    /// Multiplicative inverse of a series with unit constant term.
    MultiSeries inverse() const;
    /// Square root with constant term 1 (errc::bad_constant_term otherwise).
    MultiSeries sqrt_series() const;

    /// Certified evaluation on the open polydisc: every coordinate must have
    /// ord >= 1. Returns the value and a floor below which the truncation
    /// error provably vanishes.
    struct Eval {
        LocalNum value;
        long error_floor;
    };
    Eval eval(const std::vector<LocalNum>& point) const;

    /// Exact evaluation of a truncation-free polynomial at any integral point.
    LocalNum eval_exact(const std::vector<LocalNum>& point) const;

    std::string to_string(const std::vector<std::string>& names = {}) const;

    void set_truncation_free(bool v) { exact_ = v; }

  private:
    void check_compatible(const MultiSeries& o) const;

    FieldConfig cfg_{};
    int nvars_ = 0;
    int cutoff_ = 0;
    bool exact_ = true;
    std::map<Monomial, LocalNum, GradedLexLess> c_;
};

/// Tuple of series sharing variables and cutoff: an analytic map to O^m.
class SeriesMap {
  public:
    SeriesMap() = default;
    explicit SeriesMap(std::vector<MultiSeries> comps);

    static SeriesMap identity(FieldConfig cfg, int n, int degree_cutoff);
    /// Linear map x -> A x for an integral matrix A.
    static SeriesMap linear(FieldConfig cfg, int degree_cutoff, const std::vector<std::vector<LocalNum>>& A);

    int nvars() const { return comps_.empty() ? 0 : comps_[0].nvars(); }
    int size() const { return static_cast<int>(comps_.size()); }
    const MultiSeries& operator[](int i) const { return comps_[static_cast<size_t>(i)]; }
    const std::vector<MultiSeries>& components() const { return comps_; }

    bool has_zero_constant_terms() const;
    SeriesMap compose(const SeriesMap& inner) const;
    std::vector<std::vector<MultiSeries>> jacobian() const;
    std::vector<LocalNum> eval_exact(const std::vector<LocalNum>& point) const;

  private:
    std::vector<MultiSeries> comps_;
};

/// Newton inversion of an analytic map with g(0) = 0 and unit Jacobian;
/// the result h satisfies g(h) = h(g) = id up to the degree cutoff.
SeriesMap invert_map(const SeriesMap& g);

/// x -> w^(-beta) g(w^beta x), with integrality of the result enforced.
SeriesMap rescale_map(const SeriesMap& g, long beta);

// Dense linear algebra over the local field, unit-pivot Gaussian elimination.
LocalNum det_local(std::vector<std::vector<LocalNum>> a);
std::vector<std::vector<LocalNum>> inv_local(std::vector<std::vector<LocalNum>> a);
std::vector<LocalNum> matvec(const std::vector<std::vector<LocalNum>>& a, const std::vector<LocalNum>& x);

/// Determinant of a small matrix of series (Laplace expansion).
MultiSeries det_series(const std::vector<std::vector<MultiSeries>>& a);

} // namespace nasp
