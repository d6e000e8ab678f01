#include "nasp/stationary.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <thread>

namespace nasp {

NonstationaryBound nonstationary_bound(const MultiSeries& f, const StepFunction& phi, const Region& region,
                                       long long budget) {
    const FieldConfig& cfg = f.config();
    int n = f.nvars();
    SeriesMap grad = f.gradient();

    // Pieces of region ∩ supp phi, refined to the deeper side.
    std::vector<Coset> pieces;
    long phi_depth = 0;
    for (const auto& cell : phi.cells())
        for (const auto& r : region.cosets()) {
            if (!cell.coset.meets(r)) continue;
            const Coset& deeper = cell.coset.depth >= r.depth ? cell.coset : r;
            pieces.push_back(deeper);
            phi_depth = std::max(phi_depth, deeper.depth);
        }
    if (pieces.empty()) fail(errc::invalid_argument, "empty region: no nonstationary piece");

    long V = -LocalNum::kInfOrd;
    long long used = 0;
    std::function<void(const Coset&)> visit = [&](const Coset& c) {
        if (++used > budget) fail(errc::budget_exhausted, "nonstationary subdivision budget exceeded");
        if (c.depth > cfg.precision)
            fail(errc::gradient_vanishes, "gradient valuation undecidable at working precision");
        auto rep = c.representative(cfg);
        long det_min = LocalNum::kInfOrd;
        bool all_zero = true;
        for (const auto& g : grad.components()) {
            LocalNum v = g.eval_exact(rep);
            if (!v.is_zero()) all_zero = false;
            if (v.is_zero_to_precision()) continue;
            if (v.ord() < c.depth) det_min = std::min(det_min, v.ord());
        }
        if (all_zero) fail(errc::gradient_vanishes, "critical point inside the nonstationary region");
        if (det_min < LocalNum::kInfOrd) {
            V = std::max(V, det_min);
            return;
        }
        std::vector<int64_t> col(static_cast<size_t>(n), 0);
        while (true) {
            visit(c.child(col));
            size_t i = 0;
            while (i < col.size() && ++col[i] == cfg.p) col[i++] = 0;
            if (i == col.size()) break;
        }
    };
    for (const auto& piece : pieces) visit(piece);

    long Mp = f.min_coeff_ord_floor_from_degree(2);
    long n1 = -phi_depth - V;
    if (Mp < LocalNum::kInfOrd) n1 = std::min(n1, 1 - 2 * phi_depth - Mp);
    return NonstationaryBound{n1, V, Mp, phi_depth};
}

ThetaBound theta_support_bound(const StepFunction& phi, const MorseData& md) {
    const FieldConfig& cfg = phi.config();
    int n = phi.nvars();
    long depth_theta = std::max(phi.max_depth(), md.alpha);
    long beta = 1 - depth_theta;

    SeriesMap Tinv = invert_map(md.T);
    if (!unit_jacobian_certificate(Tinv))
        fail(errc::singular_jacobian, "|det Jac T^-1| is not identically 1 on the polydisc");

    // theta as an explicit step function on (w^alpha O)^n.
    std::vector<Cell> cells;
    std::function<void(const Coset&)> build = [&](const Coset& c) {
        if (c.depth < depth_theta) {
            std::vector<int64_t> col(static_cast<size_t>(n), 0);
            while (true) {
                build(c.child(col));
                size_t i = 0;
                while (i < col.size() && ++col[i] == cfg.p) col[i++] = 0;
                if (i == col.size()) break;
            }
            return;
        }
        auto y = c.representative(cfg);
        std::vector<LocalNum> x = md.center;
        for (int i = 0; i < n; ++i) {
            auto ev = Tinv[i].eval(y);
            x[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + ev.value;
        }
        CycloNum v = phi.eval(x);
        if (!v.is_zero()) cells.push_back(Cell{c, v});
    };
    build(Coset::polydisc(n, md.alpha));
    StepFunction theta(cfg, n, std::move(cells));

    bool certified = true;
    Coset support = Coset::polydisc(n, beta);
    StepFunction theta_hat = fourier(theta);
    for (const auto& cell : theta_hat.cells())
        if (!support.contains(cell.coset)) certified = false;
    return ThetaBound{beta, certified};
}

CycloNum PhaseCertificate::closed_rhs(const LocalNum& lambda) const {
    CycloNum total = CycloNum::zero(cfg.p);
    for (const auto& pt : points) {
        CycloNum term = psi(lambda * pt.f_value) * pt.phi_value;
        for (const auto& a : pt.md.units) term = term * gauss_closed(lambda * a, alpha);
        total = total + term;
    }
    return total;
}

PhaseCertificate stationary_phase(const MultiSeries& f, const StepFunction& phi, const Region& omega,
                                  long long budget) {
    const FieldConfig& cfg = f.config();
    int n = f.nvars();
    if (!(phi.config() == cfg) || !(omega.config() == cfg))
        fail(errc::config_mismatch, "certificate inputs disagree on the field");
    if (!omega.contains_support(phi)) fail(errc::support_mismatch, "supp phi must lie inside Omega");

    auto points = find_critical_points(f, omega);

    // Minimal alpha >= 1 with disjoint polydiscs inside Omega.
    long alpha = 0;
    std::vector<Coset> balls;
    for (long a = 1; a <= cfg.precision && alpha == 0; ++a) {
        std::vector<Coset> cand;
        bool ok = true;
        for (const auto& x : points) {
            Coset b = Coset::from_point(x, a);
            if (!omega.contains_support(StepFunction::indicator(cfg, n, b))) ok = false;
            cand.push_back(std::move(b));
        }
        for (size_t i = 0; i < cand.size() && ok; ++i)
            for (size_t j = i + 1; j < cand.size() && ok; ++j)
                if (cand[i].meets(cand[j])) ok = false;
        if (ok) {
            alpha = a;
            balls = std::move(cand);
        }
    }
    if (alpha == 0 && !points.empty()) fail(errc::precision_exhausted, "no separating radius at working precision");
    if (alpha == 0) alpha = 1;

    PhaseCertificate cert;
    cert.cfg = cfg;
    cert.nvars = n;
    cert.alpha = alpha;

    long N = LocalNum::kInfOrd;
    for (const auto& x : points) {
        CriticalPointData cp{morse_normal_form(f, x, alpha), f.eval_exact(x), phi.eval(x), 0, {}};
        auto tb = theta_support_bound(phi, cp.md);
        if (!tb.certified) fail(errc::precision_exhausted, "theta-hat support certificate failed");
        cp.beta = tb.beta;
        for (const auto& a : cp.md.units) {
            long n2 = std::min(cp.beta - a.ord() - alpha, 2 * cp.beta - a.ord() - 1);
            cp.n2.push_back(n2);
            N = std::min(N, n2);
        }
        cert.points.push_back(std::move(cp));
    }

    Region outside = omega.minus(balls);
    if (!outside.cosets().empty() && !phi.restrict(outside).is_zero()) {
        auto nb = nonstationary_bound(f, phi, outside, budget);
        cert.n1 = nb.n1;
        N = std::min(N, nb.n1);
    }
    cert.N = N;
    return cert;
}

VerifyReport verify_certificate(const PhaseCertificate& cert, const MultiSeries& f, const StepFunction& phi,
                                const Region& omega, const std::vector<long>& ords, const std::vector<long>& units,
                                long long budget, int threads) {
    const FieldConfig& cfg = f.config();
    std::vector<long> us = units;
    if (us.empty())
        for (long u = 1; u < cfg.p; ++u) us.push_back(u);

    std::vector<std::pair<long, long>> jobs;
    for (long o : ords)
        for (long u : us) jobs.emplace_back(o, u);

    auto run_one = [&](std::pair<long, long> job) {
        auto [o, u] = job;
        LocalNum lambda = LocalNum::unit_rep(cfg, u, o);
        CycloNum brute = oscillatory_brute(f, phi, lambda, omega, {.budget = budget});
        CycloNum closed = cert.closed_rhs(lambda);
        return VerifyRecord{o, u, brute == closed, brute, closed};
    };

    VerifyReport rep;
    if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads > 1 && jobs.size() > 1) {
        std::vector<std::future<VerifyRecord>> futs;
        for (const auto& j : jobs) futs.push_back(std::async(std::launch::async, run_one, j));
        for (auto& fu : futs) rep.records.push_back(fu.get());
    } else {
        for (const auto& j : jobs) rep.records.push_back(run_one(j));
    }
    for (const auto& r : rep.records) rep.all_equal = rep.all_equal && r.equal;
    return rep;
}

} // namespace nasp
