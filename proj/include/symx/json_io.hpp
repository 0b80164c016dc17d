#pragma once

#include "decompose.hpp"
#include "errors.hpp"
#include "poly.hpp"
#include "tensor.hpp"
#include "vandermonde.hpp"
#include "variety.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <optional>
#include <string>

namespace symx {

using Json = nlohmann::json;

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << "\n";
}

namespace detail {
inline double json_num(const Json& j, const char* what) {
    if (!j.is_number()) throw IoError(std::string("expected a number for ") + what);
    return j.get<double>();
}

inline Complex json_complex_pair(const Json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2)
        return Complex(json_num(j[0], "re"), json_num(j[1], "im"));
    throw IoError("expected a number or [re, im] pair");
}

/// Exact dyadic rational from a double.
inline Rational rational_from_double(double x) {
    if (x == 0.0) return Rational(0);
    if (!std::isfinite(x)) throw IoError("non-finite number in input");
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    long long mant = (long long)std::ldexp(m, 53);
    exp -= 53;
    Rational q(mant);
    boost::multiprecision::cpp_int two(2);
    if (exp >= 0) {
        q *= Rational(boost::multiprecision::pow(two, exp));
    } else {
        q /= Rational(boost::multiprecision::pow(two, -exp));
    }
    return q;
}
}  // namespace detail

/// Tensor JSON: {"n": int, "d": int, "entries": [{"alpha": [...], "re": x,
/// "im": y}, ...]}. Omitted labels are zero; duplicate labels are an error.
inline SymTensor<Complex> tensor_from_json(const Json& j) {
    if (!j.contains("n") || !j.contains("d")) throw IoError("tensor: missing n or d");
    int n = j["n"].get<int>(), d = j["d"].get<int>();
    if (n < 1 || d < 1) throw IoError("tensor: n and d must be positive");
    SymTensor<Complex> t(n, d);
    std::set<MultiIndex, CanonicalLess> seen;
    for (const auto& e : j.value("entries", Json::array())) {
        if (!e.contains("alpha")) throw IoError("tensor entry: missing alpha");
        MultiIndex a = e["alpha"].get<std::vector<int>>();
        if ((int)a.size() != n) throw IoError("tensor entry: alpha must have n parts");
        if (mi_degree(a) > d) throw IoError("tensor entry: |alpha| exceeds d");
        if (!seen.insert(a).second) throw IoError("tensor entry: duplicate alpha " + mi_to_string(a));
        double re = e.contains("re") ? detail::json_num(e["re"], "re") : 0.0;
        double im = e.contains("im") ? detail::json_num(e["im"], "im") : 0.0;
        t.set(a, Complex(re, im));
    }
    return t;
}

/// Exact twin of tensor_from_json (doubles are dyadic, so this is lossless).
inline SymTensor<Rational> tensor_from_json_exact(const Json& j) {
    SymTensor<Complex> tc = tensor_from_json(j);
    for (auto& v : tc.val)
        if (v.imag() != 0.0) throw IoError("tensor: exact path needs real entries");
    SymTensor<Rational> t(tc.n, tc.d);
    for (int i = 0; i < tc.size(); ++i) t.val[i] = detail::rational_from_double(tc.val[i].real());
    return t;
}

inline Json tensor_to_json(const SymTensor<Complex>& t) {
    Json entries = Json::array();
    for (int i = 0; i < t.size(); ++i) {
        if (t.val[i] == Complex(0, 0)) continue;
        Json e;
        e["alpha"] = t.labels[i];
        e["re"] = t.val[i].real();
        e["im"] = t.val[i].imag();
        entries.push_back(std::move(e));
    }
    return Json{{"n", t.n}, {"d", t.d}, {"entries", std::move(entries)}};
}

/// Poly JSON: {"nvars": int, "terms": [{"exp": [...], "re": x, "im": y}]}.
inline Poly<Complex> poly_from_json(const Json& j) {
    if (!j.contains("nvars")) throw IoError("poly: missing nvars");
    int nv = j["nvars"].get<int>();
    Poly<Complex> p(nv);
    for (const auto& t : j.value("terms", Json::array())) {
        if (!t.contains("exp")) throw IoError("poly term: missing exp");
        MultiIndex e = t["exp"].get<std::vector<int>>();
        if ((int)e.size() != nv) throw IoError("poly term: exp must have nvars parts");
        double re = t.contains("re") ? detail::json_num(t["re"], "re") : 0.0;
        double im = t.contains("im") ? detail::json_num(t["im"], "im") : 0.0;
        p.add_term(std::move(e), Complex(re, im));
    }
    return p;
}

inline Json poly_to_json(const Poly<Complex>& p) {
    Json terms = Json::array();
    for (auto& [a, c] : p.terms)
        terms.push_back(Json{{"exp", a}, {"re", c.real()}, {"im", c.imag()}});
    return Json{{"nvars", p.nvars}, {"terms", std::move(terms)}};
}

/// Variety JSON: {"n": int, "generators": [poly in x_0..x_n, ...],
/// "dimX": int?, "witness": [[coord, ...], ...]?}.
inline VarietySpec<Complex> variety_from_json(const Json& j) {
    if (!j.contains("n")) throw IoError("variety: missing n");
    int n = j["n"].get<int>();
    std::vector<Poly<Complex>> gens;
    for (const auto& g : j.value("generators", Json::array())) {
        Poly<Complex> p = poly_from_json(g);
        if (p.nvars != n + 1) throw IoError("variety: generators must have n+1 variables");
        gens.push_back(std::move(p));
    }
    std::optional<int> dimX;
    if (j.contains("dimX")) dimX = j["dimX"].get<int>();
    std::vector<std::vector<Complex>> witness;
    for (const auto& w : j.value("witness", Json::array())) {
        std::vector<Complex> pt;
        for (const auto& c : w) pt.push_back(detail::json_complex_pair(c));
        witness.push_back(std::move(pt));
    }
    try {
        return make_variety<Complex>(n, std::move(gens), dimX, std::move(witness));
    } catch (const Error& e) {
        throw IoError(e.what());
    }
}

/// Exact twin; requires real entries in every generator.
inline VarietySpec<Rational> variety_from_json_exact(const Json& j) {
    VarietySpec<Complex> Xc = variety_from_json(j);
    std::vector<Poly<Rational>> gens;
    for (auto& g : Xc.gens_h) {
        Poly<Rational> p(g.nvars);
        for (auto& [a, c] : g.terms) {
            if (c.imag() != 0.0) throw IoError("variety: exact path needs real coefficients");
            p.add_term(a, detail::rational_from_double(c.real()));
        }
        gens.push_back(std::move(p));
    }
    return make_variety<Rational>(Xc.n, std::move(gens), Xc.dimX);
}

inline Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

inline Json decomposition_result_to_json(const DecompositionResult& res) {
    Json lambdas = Json::array(), points = Json::array();
    for (auto& l : res.decomposition.lambdas) lambdas.push_back(complex_to_json(l));
    for (auto& v : res.decomposition.points) {
        Json pt = Json::array();
        for (auto& c : v) pt.push_back(complex_to_json(c));
        points.push_back(std::move(pt));
    }
    Json out{{"rank", res.rank_used},
             {"lambdas", std::move(lambdas)},
             {"points", std::move(points)},
             {"abs_error", res.abs_error},
             {"rel_error", res.rel_error},
             {"variety_violation", res.on_variety_violation},
             {"solver_residual", res.solver_residual},
             {"used_generic_change", res.used_generic_change},
             {"seed", res.seed}};
    if (!res.decomposition.hom_lambdas.empty()) {
        Json hom = Json::array();
        for (size_t t = 0; t < res.decomposition.hom_lambdas.size(); ++t) {
            Json pt = Json::array();
            for (auto& c : res.decomposition.hom_points[t]) pt.push_back(complex_to_json(c));
            hom.push_back(Json{{"lambda", complex_to_json(res.decomposition.hom_lambdas[t])},
                               {"point", std::move(pt)}});
        }
        out["hom_terms"] = std::move(hom);
    }
    return out;
}

/// Multiway JSON: {"k": int, "d": int, "entries": [[re, im], ...]} with
/// (d+1)^k entries, row-major, first index slowest.
inline MultiwayTensor multiway_from_json(const Json& j) {
    if (!j.contains("k") || !j.contains("d")) throw IoError("multiway: missing k or d");
    MultiwayTensor t(j["k"].get<int>(), j["d"].get<int>());
    const auto& es = j.value("entries", Json::array());
    if (es.size() != t.entries.size())
        throw IoError("multiway: expected " + std::to_string(t.entries.size()) + " entries");
    for (size_t i = 0; i < t.entries.size(); ++i) t.entries[i] = detail::json_complex_pair(es[i]);
    return t;
}

inline Json multiway_to_json(const MultiwayTensor& t) {
    Json entries = Json::array();
    for (auto& e : t.entries) entries.push_back(complex_to_json(e));
    return Json{{"k", t.k}, {"d", t.d}, {"entries", std::move(entries)}};
}

inline Json vandermonde_to_json(const VandermondeDecomposition& v) {
    Json terms = Json::array();
    for (auto& t : v.terms) {
        Json modes = Json::array();
        for (auto& [a, b] : t.modes)
            modes.push_back(Json::array({complex_to_json(a), complex_to_json(b)}));
        terms.push_back(Json{{"weight", complex_to_json(t.weight)}, {"modes", std::move(modes)}});
    }
    return Json{{"k", v.k},
                {"d", v.d},
                {"rank", v.terms.size()},
                {"terms", std::move(terms)},
                {"rel_error", v.rel_error},
                {"consistency", v.consistency}};
}

}  // namespace symx
