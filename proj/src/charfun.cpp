#include "nasp/charfun.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace nasp {

Coset Coset::polydisc(int nvars, long depth) {
    Coset c;
    c.base = depth;
    c.depth = depth;
    c.center.assign(static_cast<size_t>(nvars), {});
    return c;
}

Coset Coset::from_point(const std::vector<LocalNum>& x, long depth) {
    Coset c;
    c.depth = depth;
    c.base = depth;
    for (const auto& xi : x) c.base = std::min(c.base, std::min(xi.ord_floor(), depth));
    for (const auto& xi : x) {
        std::vector<int64_t> d;
        for (long pos = c.base; pos < depth; ++pos) d.push_back(xi.digit_at(pos));
        c.center.push_back(std::move(d));
    }
    return c.normalized();
}

long Coset::digit(int coord, long pos) const {
    if (pos < base || pos >= depth) return 0;
    return center[static_cast<size_t>(coord)][static_cast<size_t>(pos - base)];
}

Coset Coset::normalized() const {
    long lo = depth;
    for (const auto& d : center)
        for (size_t k = 0; k < d.size(); ++k)
            if (d[k] != 0) {
                lo = std::min(lo, base + static_cast<long>(k));
                break;
            }
    if (lo == base) return *this;
    Coset c;
    c.base = lo;
    c.depth = depth;
    for (const auto& d : center) {
        std::vector<int64_t> nd;
        if (static_cast<long>(d.size()) > lo - base)
            nd.assign(d.begin() + static_cast<long>(lo - base), d.end());
        c.center.push_back(std::move(nd));
    }
    return c;
}

bool Coset::operator==(const Coset& o) const {
    if (depth != o.depth || nvars() != o.nvars()) return false;
    long lo = std::min(base, o.base);
    for (int i = 0; i < nvars(); ++i)
        for (long pos = lo; pos < depth; ++pos)
            if (digit(i, pos) != o.digit(i, pos)) return false;
    return true;
}

bool Coset::meets(const Coset& o) const {
    long d = std::min(depth, o.depth);
    long lo = std::min(base, o.base);
    for (int i = 0; i < nvars(); ++i)
        for (long pos = lo; pos < d; ++pos)
            if (digit(i, pos) != o.digit(i, pos)) return false;
    return true;
}

bool Coset::contains(const Coset& o) const { return depth <= o.depth && meets(o); }

bool Coset::contains_point(const std::vector<LocalNum>& x) const {
    for (int i = 0; i < nvars(); ++i) {
        const LocalNum& xi = x[static_cast<size_t>(i)];
        long lo = std::min(base, std::min(xi.ord_floor(), depth));
        for (long pos = lo; pos < depth; ++pos)
            if (xi.digit_at(pos) != digit(i, pos)) return false;
    }
    return true;
}

Coset Coset::child(const std::vector<int64_t>& digits_at_depth) const {
    Coset c = *this;
    for (size_t i = 0; i < c.center.size(); ++i) {
        c.center[i].resize(static_cast<size_t>(c.depth - c.base), 0);
        c.center[i].push_back(digits_at_depth[i]);
    }
    ++c.depth;
    return c;
}

Coset Coset::negated(const FieldConfig& cfg) const {
    Coset c = *this;
    for (auto& d : c.center) {
        if (cfg.kind == Kind::laurent) {
            for (auto& v : d) v = (cfg.p - v) % cfg.p;
        } else {
            size_t k = 0;
            while (k < d.size() && d[k] == 0) ++k;
            if (k < d.size()) {
                d[k] = cfg.p - d[k];
                for (++k; k < d.size(); ++k) d[k] = cfg.p - 1 - d[k];
            }
        }
    }
    return c.normalized();
}

std::vector<LocalNum> Coset::representative(const FieldConfig& cfg) const {
    // The representative is the exact finite expansion; pad with known zeros.
    std::vector<LocalNum> x;
    for (const auto& d : center) {
        std::vector<int64_t> ds(d.begin(), d.end());
        while (ds.size() < static_cast<size_t>(cfg.precision) + static_cast<size_t>(width())) ds.push_back(0);
        x.push_back(LocalNum::from_digits(cfg, base, std::move(ds)));
    }
    return x;
}

mpq_class Coset::volume(long p) const {
    long e = depth * nvars();
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
    return e >= 0 ? mpq_class(1, pw) : mpq_class(pw);
}

CycloNum psi(const LocalNum& x) {
    const FieldConfig& cfg = x.config();
    if (x.is_zero()) return CycloNum::one(cfg.p);
    if (x.known_floor() < 1) fail(errc::precision_exhausted, "psi needs digits down to position 0");
    if (cfg.kind == Kind::laurent) return CycloNum::zeta_pow(cfg.p, 1, x.digit_at(0));
    if (x.is_pseudo_zero() || x.ord() >= 1) return CycloNum::one(cfg.p);
    long v = x.ord();
    int M = static_cast<int>(1 - v);
    long u = 0;
    for (long pos = 0; pos >= v; --pos) u = u * cfg.p + x.digit_at(pos);
    return CycloNum::zeta_pow(cfg.p, M, u);
}

long psi_square_depth(const LocalNum& lambda) {
    if (lambda.is_zero()) return 0;
    long s = lambda.ord();
    long half = (1 - s) >= 0 ? (1 - s + 1) / 2 : (1 - s) / 2; // ceil((1-s)/2)
    return std::max({0L, 1 - s, half});
}

namespace {

void for_each_digit_column(long p, int n, const std::function<void(const std::vector<int64_t>&)>& fn) {
    std::vector<int64_t> col(static_cast<size_t>(n), 0);
    while (true) {
        fn(col);
        int i = 0;
        while (i < n && ++col[static_cast<size_t>(i)] == p) col[static_cast<size_t>(i++)] = 0;
        if (i == n) break;
    }
}

} // namespace

StepFunction::StepFunction(FieldConfig cfg, int nvars, std::vector<Cell> cells) : cfg_(cfg), nvars_(nvars) {
    for (auto& c : cells) {
        if (c.coset.nvars() != nvars) fail(errc::invalid_argument, "cell arity mismatch");
        if (c.value.prime() != cfg.p) fail(errc::prime_mismatch, "cell value over the wrong prime");
        if (c.value.is_zero()) continue;
        c.coset = c.coset.normalized();
        cells_.push_back(std::move(c));
    }
    for (size_t i = 0; i < cells_.size(); ++i)
        for (size_t j = i + 1; j < cells_.size(); ++j)
            if (cells_[i].coset.meets(cells_[j].coset))
                fail(errc::overlapping_cells, "step-function cells are not disjoint");
}

StepFunction StepFunction::zero(FieldConfig cfg, int nvars) { return StepFunction(cfg, nvars, {}); }

StepFunction StepFunction::indicator(FieldConfig cfg, int nvars, const Coset& c) {
    return StepFunction(cfg, nvars, {Cell{c, CycloNum::one(cfg.p)}});
}

long StepFunction::max_depth() const {
    long d = 0;
    for (const auto& c : cells_) d = std::max(d, c.coset.depth);
    return d;
}

long StepFunction::min_base() const {
    long b = 0;
    for (const auto& c : cells_) b = std::min(b, c.coset.base);
    return b;
}

CycloNum StepFunction::eval(const std::vector<LocalNum>& x) const {
    for (const auto& c : cells_)
        if (c.coset.contains_point(x)) return c.value;
    return CycloNum::zero(cfg_.p);
}

StepFunction StepFunction::product(const StepFunction& o) const {
    if (nvars_ != o.nvars_ || !(cfg_ == o.cfg_)) fail(errc::config_mismatch, "step-function product mismatch");
    std::vector<Cell> out;
    for (const auto& a : cells_)
        for (const auto& b : o.cells_) {
            if (!a.coset.meets(b.coset)) continue;
            const Coset& deeper = a.coset.depth >= b.coset.depth ? a.coset : b.coset;
            out.push_back(Cell{deeper, a.value * b.value});
        }
    return StepFunction(cfg_, nvars_, std::move(out));
}

StepFunction StepFunction::restrict(const Region& omega) const {
    std::vector<Cell> out;
    for (const auto& a : cells_)
        for (const auto& r : omega.cosets()) {
            if (!a.coset.meets(r)) continue;
            const Coset& deeper = a.coset.depth >= r.depth ? a.coset : r;
            out.push_back(Cell{deeper, a.value});
        }
    return StepFunction(cfg_, nvars_, std::move(out));
}

StepFunction StepFunction::reflected() const {
    std::vector<Cell> out;
    for (const auto& c : cells_) out.push_back(Cell{c.coset.negated(cfg_), c.value});
    return StepFunction(cfg_, nvars_, std::move(out));
}

StepFunction StepFunction::scaled(const CycloNum& v) const {
    std::vector<Cell> out;
    for (const auto& c : cells_) out.push_back(Cell{c.coset, c.value * v});
    return StepFunction(cfg_, nvars_, std::move(out));
}

StepFunction operator+(const StepFunction& a, const StepFunction& b) {
    if (a.nvars_ != b.nvars_ || !(a.cfg_ == b.cfg_)) fail(errc::config_mismatch, "step-function sum mismatch");
    // Insert cells one by one, splitting whichever side is coarser on overlap.
    std::vector<Cell> acc;
    std::vector<Cell> queue;
    for (const auto& c : a.cells_) queue.push_back(c);
    for (const auto& c : b.cells_) queue.push_back(c);
    while (!queue.empty()) {
        Cell cur = queue.back();
        queue.pop_back();
        if (cur.value.is_zero()) continue;
        bool placed = false;
        for (size_t i = 0; i < acc.size(); ++i) {
            if (!acc[i].coset.meets(cur.coset)) continue;
            if (acc[i].coset.depth == cur.coset.depth) {
                acc[i].value = acc[i].value + cur.value;
                if (acc[i].value.is_zero()) acc.erase(acc.begin() + static_cast<long>(i));
                placed = true;
                break;
            }
            if (acc[i].coset.depth < cur.coset.depth) {
                // Split the resident cell one level and retry.
                Cell resident = acc[i];
                acc.erase(acc.begin() + static_cast<long>(i));
                for_each_digit_column(a.cfg_.p, a.nvars_, [&](const std::vector<int64_t>& col) {
                    queue.push_back(Cell{resident.coset.child(col), resident.value});
                });
                queue.push_back(cur);
            } else {
                for_each_digit_column(a.cfg_.p, a.nvars_, [&](const std::vector<int64_t>& col) {
                    queue.push_back(Cell{cur.coset.child(col), cur.value});
                });
            }
            placed = true;
            break;
        }
        if (!placed) acc.push_back(cur);
    }
    return StepFunction(a.cfg_, a.nvars_, std::move(acc)).merged();
}

StepFunction StepFunction::merged() const {
    auto parent_of = [](const Coset& c) {
        Coset parent = c;
        --parent.depth;
        if (c.width() > 0)
            for (auto& d : parent.center) d.pop_back();
        else
            --parent.base;
        return parent.normalized();
    };
    std::vector<Cell> cur = cells_;
    bool changed = true;
    while (changed) {
        changed = false;
        // Bucket by parent coset (depth - 1) and merge complete sibling sets.
        std::map<std::pair<long, std::vector<std::vector<int64_t>>>, std::vector<size_t>> buckets;
        for (size_t i = 0; i < cur.size(); ++i) {
            Coset parent = parent_of(cur[i].coset);
            buckets[{parent.depth, parent.center}].push_back(i);
        }
        long pn = 1;
        for (int i = 0; i < nvars_; ++i) pn *= cfg_.p;
        for (auto& [key, idx] : buckets) {
            if (static_cast<long>(idx.size()) != pn) continue;
            bool equal = true;
            for (size_t k = 1; k < idx.size(); ++k)
                if (!(cur[idx[k]].value == cur[idx[0]].value)) { equal = false; break; }
            if (!equal) continue;
            Cell merged_cell{parent_of(cur[idx[0]].coset), cur[idx[0]].value};
            std::vector<Cell> next;
            std::vector<bool> drop(cur.size(), false);
            for (size_t k : idx) drop[k] = true;
            for (size_t i = 0; i < cur.size(); ++i)
                if (!drop[i]) next.push_back(cur[i]);
            next.push_back(merged_cell);
            cur = std::move(next);
            changed = true;
            break;
        }
    }
    return StepFunction(cfg_, nvars_, std::move(cur));
}

mpq_class StepFunction::support_volume() const {
    mpq_class v = 0;
    for (const auto& c : cells_) v += c.coset.volume(cfg_.p);
    return v;
}

Region::Region(FieldConfig cfg, int nvars, std::vector<Coset> cosets) : cfg_(cfg), nvars_(nvars) {
    for (auto& c : cosets) {
        if (c.nvars() != nvars) fail(errc::invalid_argument, "region coset arity mismatch");
        if (c.depth < 0 || c.base < 0) fail(errc::invalid_argument, "region cosets must lie inside O^n");
        cosets_.push_back(c.normalized());
    }
    for (size_t i = 0; i < cosets_.size(); ++i)
        for (size_t j = i + 1; j < cosets_.size(); ++j)
            if (cosets_[i].meets(cosets_[j])) fail(errc::overlapping_cells, "region cosets are not disjoint");
}

Region Region::full(FieldConfig cfg, int nvars) { return Region(cfg, nvars, {Coset::polydisc(nvars, 0)}); }

bool Region::contains_support(const StepFunction& phi) const {
    for (const auto& cell : phi.cells()) {
        mpq_class covered = 0;
        for (const auto& r : cosets_) {
            if (!cell.coset.meets(r)) continue;
            const Coset& deeper = cell.coset.depth >= r.depth ? cell.coset : r;
            covered += deeper.volume(cfg_.p);
        }
        if (covered != cell.coset.volume(cfg_.p)) return false;
    }
    return true;
}

bool Region::contains_point(const std::vector<LocalNum>& x) const {
    for (const auto& c : cosets_)
        if (c.contains_point(x)) return true;
    return false;
}

namespace {

void subtract_balls(const FieldConfig& cfg, const Coset& c, const std::vector<Coset>& balls,
                    std::vector<Coset>& out) {
    bool any = false;
    for (const auto& b : balls) {
        if (!c.meets(b)) continue;
        if (b.contains(c)) return; // fully removed
        any = true;
    }
    if (!any) {
        out.push_back(c);
        return;
    }
    for_each_digit_column(cfg.p, c.nvars(), [&](const std::vector<int64_t>& col) {
        subtract_balls(cfg, c.child(col), balls, out);
    });
}

} // namespace

Region Region::minus(const std::vector<Coset>& balls) const {
    std::vector<Coset> out;
    for (const auto& c : cosets_) subtract_balls(cfg_, c, balls, out);
    return Region(cfg_, nvars_, std::move(out));
}

} // namespace nasp
