#pragma once
// Serialization: a flat JSON schema for expressions and solved families
// (deterministic term order, exact integer fractions as strings), matching
// parsers for round-trips, and a LaTeX emitter for human-readable output.
//
// Expression schema:
//   { "n": 2, "terms": [ { "q": [..], "p": [..],
//       "coeff": { "num": "..", "den": "..", "tpow": [..], "exppow": [..],
//                  "params": { "name": power, .. } } }, .. ] }
// Each entry is one monomial: positions^q * momenta^p * a single coefficient
// monomial.  A sum with several coefficient monomials on the same (q, p)
// repeats the pair.  Term order is the container order of the expression
// maps, which is canonical, so equal expressions serialize byte-identically.

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "viete/deform.hpp"
#include "viete/painleve.hpp"
#include "viete/phase.hpp"

namespace viete {

using json = nlohmann::ordered_json;

// ------------------------------------------------------------------ to JSON

inline json mono_to_json(const Mono& m, const Rational& c) {
    json j;
    j["num"] = numerator(c).str();
    j["den"] = denominator(c).str();
    j["tpow"] = m.tp;
    j["exppow"] = m.ep;
    json params = json::object();
    for (const auto& [id, pw] : m.pp) params[symtab().name(id)] = pw;
    j["params"] = std::move(params);
    return j;
}

inline json coeff_to_json(const CoeffExpr& f) {
    json terms = json::array();
    for (const auto& [m, c] : f.terms) terms.push_back(mono_to_json(m, c));
    return json{{"terms", std::move(terms)}};
}

inline json expr_to_json(const PhaseExpr& f) {
    json terms = json::array();
    for (const auto& [pm, coeff] : f.terms)
        for (const auto& [m, c] : coeff.terms) {
            json t;
            t["q"] = pm.q;
            t["p"] = pm.p;
            t["coeff"] = mono_to_json(m, c);
            terms.push_back(std::move(t));
        }
    return json{{"n", f.n}, {"terms", std::move(terms)}};
}

inline json system_to_json(const DeformedSystem& sys) {
    json j;
    j["n"] = sys.n;
    j["m"] = sys.m;
    j["side"] = sys.magnetic ? "magnetic" : "ordinary";
    json zeta = json::array();
    for (const auto& [key, f] : sys.zeta)
        if (key.first != key.second)
            zeta.push_back(json{{"row", key.first},
                                {"col", key.second},
                                {"value", coeff_to_json(f)}});
    j["zeta"] = std::move(zeta);
    json funcs = json::array();
    for (const auto& [idx, f] : sys.funcs)
        funcs.push_back(json{{"index", idx}, {"value", coeff_to_json(f)}});
    j["funcs"] = std::move(funcs);
    if (sys.magnetic) j["e"] = coeff_to_json(sys.e_func);
    json rows = json::array();
    for (int r = 1; r <= sys.n; ++r) rows.push_back(expr_to_json(sys.rows[r]));
    j["rows"] = std::move(rows);
    return j;
}

// ---------------------------------------------------------------- from JSON

inline Rational rational_from_json(const json& j) {
    Integer num(j.at("num").get<std::string>());
    Integer den(j.at("den").get<std::string>());
    if (den == 0) throw std::domain_error("rational: zero denominator");
    return Rational(num) / Rational(den);
}

inline std::pair<Mono, Rational> mono_from_json(const json& j) {
    Mono m;
    m.tp = j.at("tpow").get<std::vector<int>>();
    m.ep = j.at("exppow").get<std::vector<int>>();
    for (const auto& [name, pw] : j.at("params").items())
        m.pp.emplace_back(symtab().ensure(name), pw.get<int>());
    std::sort(m.pp.begin(), m.pp.end(), [](const auto& a, const auto& b) {
        return symtab().name(a.first) < symtab().name(b.first);
    });
    m.strip();
    return {std::move(m), rational_from_json(j)};
}

inline CoeffExpr coeff_from_json(const json& j) {
    CoeffExpr f;
    for (const json& t : j.at("terms")) {
        auto [m, c] = mono_from_json(t);
        f.add_term(std::move(m), c);
    }
    return f;
}

inline PhaseExpr expr_from_json(const json& j) {
    PhaseExpr f(j.at("n").get<int>());
    for (const json& t : j.at("terms")) {
        PhaseMono pm;
        pm.q = t.at("q").get<std::vector<int>>();
        pm.p = t.at("p").get<std::vector<int>>();
        if ((int)pm.q.size() != f.n || (int)pm.p.size() != f.n)
            throw std::domain_error("expression term has wrong arity");
        auto [m, c] = mono_from_json(t.at("coeff"));
        CoeffExpr cf;
        cf.add_term(std::move(m), c);
        f.add_term(pm, cf);
    }
    return f;
}

inline DeformedSystem system_from_json(const json& j) {
    DeformedSystem sys;
    sys.n = j.at("n").get<int>();
    sys.m = j.at("m").get<int>();
    sys.magnetic = j.at("side").get<std::string>() == "magnetic";
    for (int r = 1; r <= sys.n; ++r) sys.zeta[{r, r}] = CoeffExpr::one();
    for (const json& z : j.at("zeta"))
        sys.zeta[{z.at("row").get<int>(), z.at("col").get<int>()}] =
            coeff_from_json(z.at("value"));
    for (const json& f : j.at("funcs"))
        sys.funcs[f.at("index").get<int>()] = coeff_from_json(f.at("value"));
    if (sys.magnetic) sys.e_func = coeff_from_json(j.at("e"));
    sys.rows.assign(sys.n + 1, PhaseExpr::zero(sys.n));
    int r = 1;
    for (const json& row : j.at("rows")) {
        if (r > sys.n) throw std::domain_error("too many rows");
        sys.rows[r++] = expr_from_json(row);
    }
    if (r != sys.n + 1) throw std::domain_error("too few rows");
    return sys;
}

// ------------------------------------------------------------------- LaTeX

namespace detail {

/// Translate an internal symbol name into LaTeX.
inline std::string latex_symbol(const std::string& name) {
    auto subscripted = [](const std::string& head, const std::string& sub) {
        return head + "_{" + sub + "}";
    };
    if (name == "bbar") return "\\bar{b}";
    auto us = name.find('_');
    if (us != std::string::npos && us > 0)
        return subscripted(name.substr(0, us), name.substr(us + 1));
    auto br = name.find('[');
    if (br != std::string::npos) {
        std::string head = name.substr(0, br);
        auto close = name.find(']', br);
        std::string sub = name.substr(br + 1, close - br - 1);
        if (head == "zeta") head = "\\zeta";
        if (head == "C") head = "c";
        if (head == "D") head = "d";
        return subscripted(head, sub) + "(t)";
    }
    auto hash = name.find('#');
    if (hash != std::string::npos) return name.substr(0, hash) + "(t)";
    return name;
}

inline void latex_power(std::ostringstream& os, const std::string& base,
                        int e) {
    os << base;
    if (e != 1) os << "^{" << e << "}";
}

} // namespace detail

inline std::string latex(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    std::string s = numerator(r) < 0 ? "-" : "";
    return s + "\\tfrac{" + Integer(abs(numerator(r))).str() + "}{" +
           denominator(r).str() + "}";
}

namespace detail {

/// Shared monomial body: everything except the rational prefix.
inline std::string latex_mono_body(const Mono& m) {
    std::ostringstream os;
    for (std::size_t j = 0; j < m.tp.size(); ++j)
        if (m.tp[j]) latex_power(os, "t_{" + std::to_string(j + 1) + "}", m.tp[j]);
    for (std::size_t j = 0; j < m.ep.size(); ++j)
        if (m.ep[j]) {
            os << "e^{";
            if (m.ep[j] != 1) os << m.ep[j];
            os << "t_{" << j + 1 << "}}";
        }
    for (const auto& [id, e] : m.pp)
        latex_power(os, latex_symbol(symtab().name(id)), e);
    return os.str();
}

inline void latex_term(std::ostringstream& os, bool& first, const Rational& c,
                       const std::string& body) {
    Rational cc = c;
    if (first) {
        if (cc < 0) {
            os << "-";
            cc = -cc;
        }
    } else {
        os << (cc < 0 ? " - " : " + ");
        if (cc < 0) cc = -cc;
    }
    first = false;
    if (cc != 1 || body.empty()) os << latex(cc);
    os << body;
}

} // namespace detail

inline std::string latex(const CoeffExpr& f) {
    if (f.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.terms)
        detail::latex_term(os, first, c, detail::latex_mono_body(m));
    return os.str();
}

inline std::string latex(const OdePoly& f) {
    if (f.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.terms) {
        // The coefficient is itself a sum; brace it when that matters.
        std::string cs = latex(c);
        std::ostringstream body;
        if (m.x) detail::latex_power(body, "x", m.x);
        if (m.xt) {
            body << "(x')";
            if (m.xt != 1) body << "^{" << m.xt << "}";
        }
        if (m.s) detail::latex_power(body, "s", m.s);
        if (m.es) {
            body << "e^{";
            if (m.es != 1) body << m.es;
            body << "s}";
        }
        bool naked = c.terms.size() == 1;
        std::string piece;
        if ((cs == "1" || cs == "-1") && !body.str().empty())
            piece = (cs == "-1" ? "-" : "") + body.str();
        else if (naked)
            piece = cs + body.str();
        else
            piece = "\\left(" + cs + "\\right)" + body.str();
        if (first)
            os << piece;
        else if (piece.size() && piece[0] == '-')
            os << " - " << piece.substr(1);
        else
            os << " + " << piece;
        first = false;
    }
    return os.str();
}

inline std::string latex(const OdePair& e) {
    std::string lhs = latex(e.M);
    if (lhs == "1") return "x'' = " + latex(e.R);
    return "\\left(" + lhs + "\\right) x'' = " + latex(e.R);
}

inline std::string latex(const PhaseExpr& f) {
    if (f.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [pm, coeff] : f.terms) {
        std::ostringstream phase;
        for (int i = 0; i < f.n; ++i)
            if (pm.q[i])
                detail::latex_power(phase, "q_{" + std::to_string(i + 1) + "}",
                                    pm.q[i]);
        for (int i = 0; i < f.n; ++i)
            if (pm.p[i])
                detail::latex_power(phase, "p_{" + std::to_string(i + 1) + "}",
                                    pm.p[i]);
        for (const auto& [m, c] : coeff.terms)
            detail::latex_term(os, first, c,
                               detail::latex_mono_body(m) + phase.str());
    }
    return os.str();
}

} // namespace viete
