#pragma once

#include "monogap/dobsch.hpp"
#include "monogap/falsify.hpp"
#include "monogap/function_expr.hpp"
#include "monogap/interval.hpp"
#include "monogap/loewner.hpp"
#include "monogap/psd.hpp"
#include "monogap/rng.hpp"
#include "monogap/roots.hpp"
#include "monogap/symf.hpp"

#include <json.hpp>

#include <string>

namespace monogap::report {

using nlohmann::json;  // std::map storage: keys serialize sorted, no extra work

/// Every rational is reported in both exact and decimal form; the decimal is
/// the 17-significant-digit string, so round-tripping through a double is safe.
inline json rational_json(const Rational& q) {
    return json{{"num", q.numerator().str()}, {"den", q.denominator().str()}, {"dec", q.decimal_string()}};
}

inline json interval_json(const Interval& I) {
    json j;
    j["str"] = I.str();
    j["lo"] = I.bounded_below() ? rational_json(I.lo()) : json("-inf");
    j["hi"] = I.bounded_above() ? rational_json(I.hi()) : json("inf");
    return j;
}

inline json poly_json(const Poly& p) {
    json coeffs = json::array();
    for (int k = 0; k <= p.degree(); ++k) coeffs.push_back(rational_json(p.coeff(k)));
    return json{{"coefficients", coeffs}, {"expr", FunctionExpr::poly(p).print()}};
}

inline json rvec_json(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back(rational_json(q));
    return a;
}

inline json matrixq_json(const SymMatrix<Rational>& m) {
    json rows = json::array();
    for (int i = 0; i < m.order(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.order(); ++j) row.push_back(rational_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json matrixf_json(const SymMatrixF& m) {
    json rows = json::array();
    for (int i = 0; i < m.order(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.order(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json bracket_json(const RootBracket& b) {
    return json{{"lo", rational_json(b.lo)}, {"hi", rational_json(b.hi)}, {"sign_change", b.sign_change}};
}

inline json verdict_json(const PsdVerdict& v) {
    json j;
    j["verdict"] = to_string(v.verdict);
    if (!v.leading_minors.empty()) j["leading_minors"] = rvec_json(v.leading_minors);
    if (!v.elementary_symmetric.empty()) j["elementary_symmetric"] = rvec_json(v.elementary_symmetric);
    if (v.first_nonpositive_minor) j["first_nonpositive_minor"] = *v.first_nonpositive_minor;
    if (v.minor_witness) j["minor_witness"] = json{{"indices", v.minor_witness->indices}, {"det", rational_json(v.minor_witness->det)}};
    if (v.vector_witness) j["vector_witness"] = json{{"v", rvec_json(v.vector_witness->v)}, {"value", rational_json(v.vector_witness->value)}};
    return j;
}

inline json loewner_witness_json(const LoewnerWitness& w) {
    return json{{"nodes", rvec_json(w.nodes)}, {"verdict", verdict_json(w.verdict)}};
}

inline json alpha_lower_json(const AlphaResult& a) {
    json j;
    j["finite"] = a.finite;
    j["value"] = a.finite ? json(a.value) : json("inf");
    if (a.bracket) j["bracket"] = bracket_json(*a.bracket);
    if (a.finite) j["minor_index"] = a.minor_index;
    return j;
}

inline json alpha_upper_json(const AlphaUpperResult& a) {
    json j;
    j["finite"] = a.finite;
    j["value"] = a.finite ? json(a.value) : json("inf");
    if (a.finite) j["value_exact"] = rational_json(a.value_exact);
    if (a.witness) j["witness"] = loewner_witness_json(*a.witness);
    j["tuples_tried"] = a.tuples_tried;
    return j;
}

inline json pair_witness_json(const PairWitness& w) {
    json j;
    j["x"] = matrixf_json(w.x);
    j["y"] = matrixf_json(w.y);
    j["function"] = w.function.print();
    j["min_eig_order"] = w.min_eig_order;
    j["min_eig_gap"] = w.min_eig_gap;
    j["spectra_x"] = w.spectra_x;
    j["spectra_y"] = w.spectra_y;
    j["seed"] = w.seed;
    j["trial_index"] = w.trial_index;
    return j;
}

inline json certificate_json(const GapCertificate& c) {
    json j;
    j["n"] = c.n;
    j["hankel_pd"] = verdict_json(c.hankel_pd);
    j["alpha"] = alpha_lower_json(c.alpha);
    j["alpha_rat"] = rational_json(c.alpha_rat);
    if (c.trailing_det) j["trailing_det"] = poly_json(*c.trailing_det);
    if (c.trailing_not_psd) {
        j["trailing_not_psd"] = verdict_json(*c.trailing_not_psd);
        j["trailing_sample_t"] = rational_json(c.trailing_sample_t);
    }
    if (c.square_witness) j["square_witness"] = loewner_witness_json(*c.square_witness);
    j["hypothesis_ok"] = c.hypothesis_ok;
    if (c.hypothesis_witness) j["hypothesis_witness"] = rational_json(*c.hypothesis_witness);
    j["valid"] = c.valid;
    if (!c.failing_component.empty()) j["failing_component"] = c.failing_component;
    return j;
}

inline json make_report(const std::string& command, json inputs, json result) {
    json j;
    j["schema_version"] = "1";
    j["command"] = command;
    j["inputs"] = std::move(inputs);
    j["result"] = std::move(result);
    return j;
}

inline json make_seeded_report(const std::string& command, json inputs, json result, std::uint64_t seed) {
    json j = make_report(command, std::move(inputs), std::move(result));
    j["seed"] = seed;
    j["generator"] = Rng::kGeneratorName;
    return j;
}

}  // namespace monogap::report
