#include "nasp/json_io.hpp"

#include <sstream>

namespace nasp {

mpq_class mpq_from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) fail(errc::syntax_error, "malformed rational '" + s + "'");
    q.canonicalize();
    return q;
}

Json cyclo_to_json(const CycloNum& v) {
    Json j;
    j["p"] = v.prime();
    j["M"] = v.level();
    Json coeffs = Json::array();
    for (const auto& c : v.coeffs()) coeffs.push_back(c.get_str());
    j["coeffs"] = coeffs;
    auto [re, im] = v.embed_complex();
    j["approx"] = {re, im};
    return j;
}

Json step_to_json(const StepFunction& f) {
    Json j;
    j["n"] = f.nvars();
    Json cells = Json::array();
    for (const auto& cell : f.cells()) {
        Json c;
        Json center = Json::array();
        for (const auto& x : cell.coset.representative(f.config())) center.push_back(x.to_string());
        c["center"] = center;
        c["depth"] = cell.coset.depth;
        c["value"] = cyclo_to_json(cell.value);
        cells.push_back(std::move(c));
    }
    j["cells"] = cells;
    return j;
}

Json morse_to_json(const MorseData& md) {
    Json j;
    Json center = Json::array(), units = Json::array(), T = Json::array();
    for (const auto& x : md.center) center.push_back(x.to_string());
    for (const auto& a : md.units) units.push_back(a.to_string());
    for (const auto& t : md.T.components()) T.push_back(t.to_string());
    j["center"] = center;
    j["units"] = units;
    j["T"] = T;
    j["alpha"] = md.alpha;
    if (md.residual_floor >= LocalNum::kInfOrd)
        j["residual_floor"] = "exact";
    else
        j["residual_floor"] = md.residual_floor;
    return j;
}

Json certificate_to_json(const PhaseCertificate& cert) {
    Json j;
    j["n"] = cert.nvars;
    j["alpha"] = cert.alpha;
    if (cert.n1.has_value())
        j["N1"] = *cert.n1;
    else
        j["N1"] = nullptr;
    j["N"] = cert.N;
    j["gamma"] = cert.gamma;
    Json pts = Json::array();
    for (const auto& pt : cert.points) {
        Json p;
        Json center = Json::array(), units = Json::array(), n2 = Json::array();
        for (const auto& x : pt.md.center) center.push_back(x.to_string());
        for (const auto& a : pt.md.units) units.push_back(a.to_string());
        for (long v : pt.n2) n2.push_back(v);
        p["center"] = center;
        p["units"] = units;
        p["f_value"] = pt.f_value.to_string();
        p["phi_value"] = cyclo_to_json(pt.phi_value);
        p["beta"] = pt.beta;
        p["N2"] = n2;
        p["residual_floor"] = pt.md.residual_floor >= LocalNum::kInfOrd ? Json("exact") : Json(pt.md.residual_floor);
        pts.push_back(std::move(p));
    }
    j["points"] = pts;
    return j;
}

Json verify_record_to_json(const VerifyRecord& r) {
    Json j;
    j["ord"] = r.ord;
    j["unit"] = r.unit;
    j["equal"] = r.equal;
    j["brute"] = cyclo_to_json(r.brute);
    j["closed"] = cyclo_to_json(r.closed);
    return j;
}

Json uniform_formula_to_json(const UniformFormula& uf) {
    Json j;
    j["n"] = uf.nvars;
    Json x0 = Json::array(), a = Json::array(), bad = Json::array();
    for (const auto& q : uf.x0) x0.push_back(q.get_str());
    for (const auto& q : uf.a) a.push_back(q.get_str());
    for (long p : uf.bad_primes) bad.push_back(p);
    j["x0"] = x0;
    j["f_at_x0"] = uf.f_at_x0.get_str();
    j["a"] = a;
    j["alpha"] = uf.alpha;
    j["bad_primes"] = bad;
    Json symbols = Json::array();
    for (const auto& q : uf.a) symbols.push_back("G(" + q.get_str() + ", " + std::to_string(uf.alpha) + ")");
    j["gauss_symbols"] = symbols;
    return j;
}

Json uniform_report_to_json(const UniformPrimeReport& r) {
    Json j;
    j["p"] = r.p;
    j["kind"] = r.kind == Kind::padic ? "padic" : "laurent";
    switch (r.status) {
        case UniformStatus::ok: j["status"] = "ok"; break;
        case UniformStatus::bad_prime: j["status"] = "bad_prime"; break;
        case UniformStatus::mismatch: j["status"] = "mismatch"; break;
        case UniformStatus::failed: j["status"] = "failed"; break;
    }
    j["N"] = r.N;
    j["lambdas_checked"] = r.lambdas_checked;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json double_fourier_to_json(const DoubleFourierReport& r) {
    Json j;
    j["kappa"] = r.kappa.get_str();
    j["scalar_ok"] = r.scalar_ok;
    j["plancherel_ok"] = r.plancherel_ok;
    j["hathat"] = step_to_json(r.hathat);
    return j;
}

StepSpec step_spec_from_json(const Json& j) {
    StepSpec spec;
    spec.nvars = j.at("n").get<int>();
    for (const auto& c : j.at("cells")) {
        StepSpec::SCell cell;
        for (const auto& s : c.at("center")) cell.center.push_back(mpq_from_string(s.get<std::string>()));
        if (static_cast<int>(cell.center.size()) != spec.nvars)
            fail(errc::invalid_argument, "cell center arity mismatch");
        cell.depth = c.at("depth").get<long>();
        cell.value = c.contains("value") ? mpq_from_string(c.at("value").get<std::string>()) : mpq_class(1);
        spec.cells.push_back(std::move(cell));
    }
    return spec;
}

RegionSpec region_spec_from_json(const Json& j) {
    RegionSpec spec;
    spec.nvars = j.at("n").get<int>();
    if (!j.contains("cosets")) return spec;
    for (const auto& c : j.at("cosets")) {
        RegionSpec::SCoset coset;
        for (const auto& s : c.at("center")) coset.center.push_back(mpq_from_string(s.get<std::string>()));
        if (static_cast<int>(coset.center.size()) != spec.nvars)
            fail(errc::invalid_argument, "coset center arity mismatch");
        coset.depth = c.at("depth").get<long>();
        spec.cosets.push_back(std::move(coset));
    }
    return spec;
}

} // namespace nasp
