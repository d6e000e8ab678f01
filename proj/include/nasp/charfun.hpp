#pragma once

#include <vector>

#include "nasp/cyclotomic.hpp"
#include "nasp/localfield.hpp"
#include "nasp/series.hpp"

namespace nasp {

/// Coset c + (w^depth O)^n described by the digit window [base, depth) of its
/// canonical representative. base == depth means the representative is 0.
/// Negative positions encode centers outside O^n (Fourier images).
struct Coset {
    long base = 0;
    long depth = 0;
    std::vector<std::vector<int64_t>> center; // [n][depth - base]

    static Coset polydisc(int nvars, long depth);
    /// Representative from local numbers (digits taken on [min(ord,0), depth)).
    static Coset from_point(const std::vector<LocalNum>& x, long depth);

    int nvars() const { return static_cast<int>(center.size()); }
    long width() const { return depth - base; }
    long digit(int coord, long pos) const;
    /// Canonical form: strip zero columns at the bottom of the window.
    Coset normalized() const;

    bool operator==(const Coset& o) const;
    /// Do the two cosets intersect? (Cosets either nest or are disjoint.)
    bool meets(const Coset& o) const;
    bool contains(const Coset& o) const; ///< o subset of this
    /// Membership of an exact-enough point; needs digits known to `depth`.
    bool contains_point(const std::vector<LocalNum>& x) const;
    Coset child(const std::vector<int64_t>& digits_at_depth) const;
    /// The coset of -c + (w^depth O)^n.
    Coset negated(const FieldConfig& cfg) const;
    std::vector<LocalNum> representative(const FieldConfig& cfg) const;
    mpq_class volume(long p) const; ///< Haar volume p^(-n depth)
};

struct Cell {
    Coset coset;
    CycloNum value;
};

/// The fixed additive character: trivial on m_K, nontrivial on O_K.
/// padic: Psi(x) = zeta_{p^M}^u with M = max(0, 1 - ord x) and u the integer
/// carried by the digits of x in positions [ord x, 0];
/// laurent: Psi(x) = zeta_p^(coefficient of t^0).
CycloNum psi(const LocalNum& x);

/// Constancy depth of u -> Psi(lambda u^2) on O:
/// max{0, 1 - ord lambda, ceil((1 - ord lambda)/2)}.
long psi_square_depth(const LocalNum& lambda);

class Region;

/// Schwartz-Bruhat function: finitely many disjoint cosets with exact
/// cyclotomic values; zero off the listed cells.
class StepFunction {
  public:
    StepFunction() = default;
    StepFunction(FieldConfig cfg, int nvars, std::vector<Cell> cells);

    static StepFunction zero(FieldConfig cfg, int nvars);
    static StepFunction indicator(FieldConfig cfg, int nvars, const Coset& c);

    const FieldConfig& config() const { return cfg_; }
    int nvars() const { return nvars_; }
    const std::vector<Cell>& cells() const { return cells_; }
    bool is_zero() const { return cells_.empty(); }
    long max_depth() const; ///< 0 for the zero function
    long min_base() const;

    CycloNum eval(const std::vector<LocalNum>& x) const;
    StepFunction product(const StepFunction& o) const;
    StepFunction restrict(const Region& omega) const;
    StepFunction reflected() const;
    StepFunction scaled(const CycloNum& v) const;
    friend StepFunction operator+(const StepFunction& a, const StepFunction& b);

    /// Normal form: siblings with equal values merge into their parent;
    /// zero-valued cells are dropped. Evaluation is unchanged.
    StepFunction merged() const;

    mpq_class support_volume() const;

  private:
    FieldConfig cfg_{};
    int nvars_ = 0;
    std::vector<Cell> cells_;
};

/// Finite disjoint union of cosets inside O^n (integration domains).
class Region {
  public:
    Region() = default;
    Region(FieldConfig cfg, int nvars, std::vector<Coset> cosets);
    static Region full(FieldConfig cfg, int nvars); ///< O^n

    const FieldConfig& config() const { return cfg_; }
    int nvars() const { return nvars_; }
    const std::vector<Coset>& cosets() const { return cosets_; }

    bool contains_support(const StepFunction& phi) const;
    bool contains_point(const std::vector<LocalNum>& x) const;
    /// Cosets of `this` minus the given balls (exact set difference).
    Region minus(const std::vector<Coset>& balls) const;

  private:
    FieldConfig cfg_{};
    int nvars_ = 0;
    std::vector<Coset> cosets_;
};

} // namespace nasp
