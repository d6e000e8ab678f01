#include "nasp/qpoly.hpp"

#include <sstream>

namespace nasp {

QPoly QPoly::constant(int n, const mpq_class& c) {
    QPoly q{n, {}};
    q.add_term(Monomial(static_cast<size_t>(n), 0), c);
    return q;
}

QPoly QPoly::variable(int n, int i) {
    QPoly q{n, {}};
    Monomial m(static_cast<size_t>(n), 0);
    m[static_cast<size_t>(i)] = 1;
    q.add_term(m, 1);
    return q;
}

void QPoly::add_term(const Monomial& m, const mpq_class& c0) {
    if (static_cast<int>(m.size()) != nvars) fail(errc::invalid_argument, "monomial arity mismatch");
    mpq_class c = c0;
    c.canonicalize();
    if (c == 0) return;
    auto it = coeffs.find(m);
    if (it == coeffs.end()) {
        coeffs.emplace(m, std::move(c));
    } else {
        it->second += c;
        if (it->second == 0) coeffs.erase(it);
    }
}

int QPoly::degree() const {
    int d = 0;
    for (const auto& [m, c] : coeffs) d = std::max(d, total_degree(m));
    return d;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
    if (a.nvars != b.nvars) fail(errc::invalid_argument, "arity mismatch");
    QPoly r = a;
    for (const auto& [m, c] : b.coeffs) r.add_term(m, c);
    return r;
}

QPoly QPoly::operator-() const {
    QPoly r{nvars, {}};
    for (const auto& [m, c] : coeffs) r.coeffs.emplace(m, -c);
    return r;
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.nvars != b.nvars) fail(errc::invalid_argument, "arity mismatch");
    QPoly r{a.nvars, {}};
    Monomial m(static_cast<size_t>(a.nvars), 0);
    for (const auto& [ma, ca] : a.coeffs)
        for (const auto& [mb, cb] : b.coeffs) {
            for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    return r;
}

QPoly QPoly::pow(long e) const {
    QPoly r = QPoly::constant(nvars, 1);
    for (long i = 0; i < e; ++i) r = r * *this;
    return r;
}

QPoly QPoly::derivative(int i) const {
    QPoly r{nvars, {}};
    for (const auto& [m, c] : coeffs) {
        if (m[static_cast<size_t>(i)] == 0) continue;
        Monomial d = m;
        --d[static_cast<size_t>(i)];
        r.add_term(d, c * m[static_cast<size_t>(i)]);
    }
    return r;
}

mpq_class QPoly::eval(const std::vector<mpq_class>& x) const {
    mpq_class acc = 0;
    for (const auto& [m, c] : coeffs) {
        mpq_class t = c;
        for (size_t i = 0; i < x.size(); ++i)
            for (int e = 0; e < m[i]; ++e) t *= x[i];
        acc += t;
    }
    return acc;
}

std::vector<mpq_class> QPoly::gradient_at(const std::vector<mpq_class>& x) const {
    std::vector<mpq_class> g;
    for (int i = 0; i < nvars; ++i) g.push_back(derivative(i).eval(x));
    return g;
}

std::vector<std::vector<mpq_class>> QPoly::hessian_at(const std::vector<mpq_class>& x) const {
    std::vector<std::vector<mpq_class>> h(static_cast<size_t>(nvars));
    for (int i = 0; i < nvars; ++i)
        for (int j = 0; j < nvars; ++j) h[static_cast<size_t>(i)].push_back(derivative(i).derivative(j).eval(x));
    return h;
}

MultiSeries QPoly::to_series(const FieldConfig& cfg, int degree_cutoff) const {
    MultiSeries s(cfg, nvars, degree_cutoff);
    for (const auto& [m, c] : coeffs) {
        if (total_degree(m) > degree_cutoff)
            fail(errc::invalid_argument, "phase degree exceeds the cutoff");
        s.add_term(m, LocalNum::from_rational(cfg, c));
    }
    return s;
}

std::string QPoly::to_string() const {
    if (coeffs.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : coeffs) {
        mpq_class a = c;
        if (!first) {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        } else if (a < 0) {
            os << "-";
            a = -a;
        }
        bool unit_coeff = a == 1 && total_degree(m) > 0;
        if (!unit_coeff) os << a.get_str();
        bool printed = !unit_coeff;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (printed) os << "*";
            os << "x" << i + 1;
            if (m[i] > 1) os << "^" << m[i];
            printed = true;
        }
        first = false;
    }
    return os.str();
}

} // namespace nasp
