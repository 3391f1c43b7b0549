// viete — construct, certify, transform, and numerically probe families of
// commuting time-dependent Hamiltonian flows, in exact arithmetic.
//
// Exit codes: 0 success, 2 invalid configuration or input,
//             3 certification failure, 4 numerical blow-up.

#include "CLI11.hpp"
#include "viete/io.hpp"
#include "viete/numeric.hpp"
#include "viete/systems.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace viete;
using json = nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitCertify = 3;
constexpr int kExitBlowup = 4;

// ------------------------------------------------------------------ output

/// Resolve a user-supplied output path against VIETE_OUT_DIR when relative.
std::filesystem::path resolve_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("VIETE_OUT_DIR"))
            return std::filesystem::path(dir) / p;
    }
    return p;
}

/// Write to stdout, or to the resolved file when a path is given.
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::path p = resolve_out(out_path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::domain_error("cannot open output file " + p.string());
    f << text;
}

// ------------------------------------------------------------- formatting

std::string func_label(const DeformedSystem& sys, int idx) {
    return std::string(sys.magnetic ? "d_" : "c_") + std::to_string(idx);
}

std::string text_system(const DeformedSystem& sys) {
    std::ostringstream os;
    os << "n = " << sys.n << "  m = " << sys.m << "  side = "
       << (sys.magnetic ? "magnetic" : "ordinary") << "\n";
    for (const auto& [key, f] : sys.zeta)
        if (key.first != key.second)
            os << "zeta[" << key.first << "," << key.second << "] = "
               << f.str() << "\n";
    for (const auto& [idx, f] : sys.funcs)
        os << func_label(sys, idx) << " = " << f.str() << "\n";
    if (sys.magnetic) os << "e = " << sys.e_func.str() << "\n";
    for (int r = 1; r <= sys.n; ++r)
        os << "H_" << r << " = " << sys.rows[r].str() << "\n";
    return os.str();
}

std::string latex_system(const DeformedSystem& sys) {
    std::ostringstream os;
    for (const auto& [key, f] : sys.zeta)
        if (key.first != key.second)
            os << "\\zeta_{" << key.first << "," << key.second << "}(t) = "
               << latex(f) << " \\\\\n";
    char fl = sys.magnetic ? 'd' : 'c';
    for (const auto& [idx, f] : sys.funcs)
        os << fl << "_{" << idx << "}(t) = " << latex(f) << " \\\\\n";
    if (sys.magnetic) os << "e(t) = " << latex(sys.e_func) << " \\\\\n";
    for (int r = 1; r <= sys.n; ++r)
        os << "H_{" << r << "} = " << latex(sys.rows[r]) << " \\\\\n";
    return os.str();
}

std::string render_system(const DeformedSystem& sys, const std::string& fmt) {
    if (fmt == "json") return system_to_json(sys).dump(2) + "\n";
    if (fmt == "latex") return latex_system(sys);
    return text_system(sys);
}

// ------------------------------------------------------------- arg parsing

/// Accept both "a_5" and "a5" (also "a-1"/"a_-1", "bbar") for parameter names.
std::string normalize_param(const std::string& name) {
    if (symtab().lookup(name)) return name;
    if (name.size() > 1 && name.find('_') == std::string::npos) {
        std::string alt = name.substr(0, 1) + "_" + name.substr(1);
        if (symtab().lookup(alt)) return alt;
    }
    return name;
}

/// Parse "IDX=NUM" or "IDX=NUM/DEN" into an index/rational pair.
std::pair<int, Rational> parse_target(const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos)
        throw std::domain_error("target must look like IDX=VALUE: " + s);
    int idx = std::stoi(s.substr(0, eq));
    std::string val = s.substr(eq + 1);
    auto slash = val.find('/');
    Integer num(slash == std::string::npos ? val : val.substr(0, slash));
    Rational r(num);
    if (slash != std::string::npos) r /= Rational(Integer(val.substr(slash + 1)));
    return {idx, r};
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

// -------------------------------------------------------------------- gen

int cmd_gen(int n, int m, const std::string& family, const std::string& fmt,
            const std::string& out) {
    if (n < 1 || m < 0 || m > n + 1) {
        std::cerr << "error: need n >= 1 and 0 <= m <= n+1\n";
        return kExitConfig;
    }
    DeformedSystem sys;
    sys.n = n;
    sys.m = m;
    sys.magnetic = (family == "magnetic");
    for (int r = 1; r <= n; ++r) sys.zeta.emplace(std::make_pair(r, r), CoeffExpr::one());
    SystemSpec spec;
    spec.n = n;
    spec.m = m;
    spec.magnetic = sys.magnetic;
    if (family == "potential") {
        for (int a = -m; a <= 2 * n - m + 2; ++a)
            spec.coeffs.emplace(a, CoeffExpr::param("a_" + std::to_string(a)));
    } else if (family == "magnetic") {
        for (int g = 0; g <= n + 1; ++g)
            spec.coeffs.emplace(g, CoeffExpr::param("b_" + std::to_string(g)));
        spec.e_coeff = CoeffExpr::param("bbar");
    }
    sys.funcs = spec.coeffs;
    sys.e_func = spec.e_coeff;
    sys.rows.push_back(PhaseExpr::zero(n));
    for (int r = 1; r <= n; ++r) sys.rows.push_back(assemble(spec, r));
    sys.members = sys.rows;
    emit(render_system(sys, fmt), out);
    return 0;
}

// ----------------------------------------------------------------- deform

int cmd_deform(int n, int m, bool magnetic, const std::vector<std::string>& free_names,
               const std::string& fmt, const std::string& out) {
    if (n < 1 || m < 0 || m > n + 1) {
        std::cerr << "error: need n >= 1 and 0 <= m <= n+1\n";
        return kExitConfig;
    }
    DeformedSystem sys;
    try {
        sys = solve_deformation(n, m, magnetic);
    } catch (const std::runtime_error& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kExitCertify;
    }
    if (!free_names.empty()) {
        std::set<int> keep;
        for (const std::string& raw : free_names) {
            std::string name = normalize_param(raw);
            auto id = symtab().lookup(name);
            if (!id) {
                std::cerr << "error: unknown constant " << raw << "\n";
                return kExitConfig;
            }
            keep.insert(*id);
        }
        std::set<int> present;
        auto scan = [&](const CoeffExpr& f) {
            for (const auto& [mono, c] : f.terms)
                for (const auto& [id, pow] : mono.pp)
                    if (!symtab().time_dependent(id)) present.insert(id);
        };
        for (const auto& [idx, f] : sys.funcs) scan(f);
        scan(sys.e_func);
        std::map<int, CoeffExpr> zero;
        for (int id : present)
            if (!keep.count(id)) zero.emplace(id, CoeffExpr::zero());
        for (auto& [idx, f] : sys.funcs) f = f.subst_syms(zero);
        sys.e_func = sys.e_func.subst_syms(zero);
        for (auto& row : sys.rows) row = row.subst_syms(zero);
        for (auto& h : sys.members) h = h.subst_syms(zero);
    }
    emit(render_system(sys, fmt), out);
    return 0;
}

// ------------------------------------------------------------------ check

int cmd_check(const std::string& in_path, const std::string& fmt,
              const std::string& out) {
    json j;
    try {
        if (in_path == "-") {
            j = json::parse(std::cin);
        } else {
            std::ifstream f(in_path, std::ios::binary);
            if (!f) throw std::domain_error("cannot open " + in_path);
            j = json::parse(f);
        }
    } catch (const json::exception& e) {
        std::cerr << "error: bad input: " << e.what() << "\n";
        return kExitConfig;
    }
    DeformedSystem sys = system_from_json(j);
    CertifyReport rep = certify_rows(sys.rows, sys.n);
    bool pass = sys.magnetic ? rep.weak : rep.exact;
    std::ostringstream os;
    if (fmt == "json") {
        json r;
        r["side"] = sys.magnetic ? "magnetic" : "ordinary";
        r["pass"] = pass;
        r["exact"] = rep.exact;
        json pairs = json::array();
        for (const auto& pr : rep.pairs)
            pairs.push_back(json{{"r", pr.r},
                                 {"s", pr.s},
                                 {"zero", pr.zero},
                                 {"phase_independent", pr.phase_independent}});
        r["pairs"] = std::move(pairs);
        os << r.dump(2) << "\n";
    } else {
        for (const auto& pr : rep.pairs)
            os << "pair (" << pr.r << "," << pr.s << "): "
               << (pr.zero ? "zero"
                           : pr.phase_independent ? "time-only remainder"
                                                  : "FAIL")
               << "\n";
        os << (pass ? "PASS" : "FAIL") << "\n";
        if (!pass)
            for (const auto& pr : rep.pairs)
                if (!(sys.magnetic ? pr.phase_independent : pr.zero)) {
                    os << "first failing pair: (" << pr.r << "," << pr.s << ")\n";
                    break;
                }
    }
    emit(os.str(), out);
    return pass ? 0 : kExitCertify;
}

// -------------------------------------------------------------------- map

int cmd_map(int n, int m, const std::vector<std::string>& targets,
            const std::string& fmt, const std::string& out) {
    if (n < 1 || m < 0 || m > n + 1) {
        std::cerr << "error: need n >= 1 and 0 <= m <= n+1\n";
        return kExitConfig;
    }
    if (!targets.empty()) {
        std::map<int, CoeffExpr> goal;
        for (const std::string& t : targets) {
            auto [idx, val] = parse_target(t);
            goal.emplace(idx, CoeffExpr::from(val));
        }
        TargetWitness w = magnetic_witness(n, m, goal);
        std::ostringstream os;
        if (fmt == "json") {
            json r;
            r["n"] = n;
            r["m"] = m;
            r["representable"] = w.exists;
            if (!w.exists) r["obstruction"] = w.obstruction;
            if (w.exists) {
                r["explicit_values"] = w.explicit_values;
                json b = json::array();
                for (const auto& [g, v] : w.b)
                    b.push_back(json{{"index", g}, {"value", coeff_to_json(v)}});
                r["b"] = std::move(b);
                r["ebar"] = coeff_to_json(w.ebar);
            }
            os << r.dump(2) << "\n";
        } else {
            os << "representable: " << (w.exists ? "yes" : "no") << "\n";
            if (!w.exists) os << "obstruction: " << w.obstruction << "\n";
            if (w.exists) {
                for (const auto& [g, v] : w.b)
                    os << "b_" << g << " = " << v.str() << "\n";
                os << "bbar = " << w.ebar.str() << "\n";
            }
        }
        emit(os.str(), out);
        return 0;
    }
    CanonicalMap M;
    try {
        M = build_map(n, m);
    } catch (const std::runtime_error& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kExitCertify;
    }
    MapReport rep = verify_map(M);
    std::ostringstream os;
    if (fmt == "json") {
        json r;
        r["n"] = n;
        r["m"] = m;
        r["ok"] = rep.ok;
        json amap = json::array();
        for (const auto& [alpha, v] : M.a_values)
            amap.push_back(json{{"index", alpha}, {"value", coeff_to_json(v)}});
        r["a_map"] = std::move(amap);
        json shift = json::array();
        for (const auto& s : M.shift) shift.push_back(expr_to_json(s));
        r["shift"] = std::move(shift);
        json offs = json::array();
        for (int rr = 1; rr <= n; ++rr)
            offs.push_back(coeff_to_json(rep.row_offsets[rr]));
        r["row_offsets"] = std::move(offs);
        if (!rep.issues.empty()) r["issues"] = rep.issues;
        os << r.dump(2) << "\n";
    } else if (fmt == "latex") {
        for (const auto& [alpha, v] : M.a_values)
            os << "a_{" << alpha << "} = " << latex(v) << " \\\\\n";
        for (std::size_t i = 0; i < M.shift.size(); ++i)
            os << "s_{" << i + 1 << "} = " << latex(M.shift[i]) << " \\\\\n";
    } else {
        os << "n = " << n << "  m = " << m << "\n";
        os << "flat: " << (rep.ok ? "yes" : "no") << "\n";
        for (const auto& issue : rep.issues) os << "issue: " << issue << "\n";
        for (const auto& [alpha, v] : M.a_values)
            os << "a_" << alpha << " = " << v.str() << "\n";
        for (std::size_t i = 0; i < M.shift.size(); ++i)
            os << "s_" << i + 1 << " = " << M.shift[i].str() << "\n";
        for (int rr = 1; rr <= n; ++rr)
            os << "offset_" << rr << " = " << rep.row_offsets[rr].str() << "\n";
    }
    emit(os.str(), out);
    return rep.ok ? 0 : kExitCertify;
}

// --------------------------------------------------------------- painleve

json reduction_to_json(const OdeReduction& r, const LineWitness& w) {
    json j;
    j["name"] = r.name;
    j["m"] = r.m;
    json a = json::array();
    for (const auto& [idx, v] : r.a)
        a.push_back(json{{"index", idx}, {"value", coeff_to_json(v)}});
    j["a"] = std::move(a);
    j["frame"] = r.frame.str();
    j["change"] = r.change;
    j["reduced"] = r.reduced.str();
    j["target"] = r.target.str();
    json c;
    for (const auto& [k, v] : r.constants) c[k] = coeff_to_json(v);
    j["constants"] = std::move(c);
    j["matches"] = r.matches;
    j["linear_side"] = json{{"representable", w.exists}};
    if (!w.exists) j["linear_side"]["obstruction"] = w.obstruction;
    if (w.exists) {
        json b = json::array();
        for (const auto& [g, v] : w.b)
            b.push_back(json{{"index", g}, {"value", coeff_to_json(v)}});
        j["linear_side"]["b"] = std::move(b);
        j["linear_side"]["ebar"] = coeff_to_json(w.ebar);
    }
    return j;
}

int cmd_painleve(const std::string& target, bool derivation,
                 const std::string& fmt, const std::string& out) {
    std::vector<OdeReduction> reds = all_reductions();
    if (target != "all") {
        std::vector<OdeReduction> pick;
        for (auto& r : reds)
            if (r.name == target) pick.push_back(std::move(r));
        reds = std::move(pick);
    }
    bool all_match = true;
    std::ostringstream os;
    json arr = json::array();
    for (const OdeReduction& r : reds) {
        all_match = all_match && r.matches;
        LineWitness w = line_witness(r.m, r.a);
        if (fmt == "json") {
            arr.push_back(reduction_to_json(r, w));
        } else if (fmt == "latex") {
            os << "\\paragraph{" << r.name << "}\n";
            if (derivation) {
                for (const auto& [idx, v] : r.a)
                    os << "a_{" << idx << "} = " << latex(v) << " \\quad ";
                os << "(m = " << r.m << ")\\\\\n";
                os << latex(r.frame) << " \\\\\n";
                os << "\\text{" << r.change << "} \\\\\n";
                os << latex(r.reduced) << " \\\\\n";
            }
            os << latex(r.target) << " \\\\\n";
            for (const auto& [k, v] : r.constants)
                os << "\\text{" << k << "} = " << latex(v) << " \\quad ";
            os << "\\text{" << (r.matches ? "exact" : "MISMATCH") << "}\\\\\n";
        } else {
            os << r.name << "  (m = " << r.m << ")\n";
            if (derivation) {
                for (const auto& [idx, v] : r.a)
                    os << "  a_" << idx << " = " << v.str() << "\n";
                os << "  start:   " << r.frame.str() << "\n";
                os << "  change:  " << r.change << "\n";
                os << "  reduced: " << r.reduced.str() << "\n";
            }
            os << "  target:  " << r.target.str() << "\n";
            for (const auto& [k, v] : r.constants)
                os << "  " << k << " = " << v.str() << "\n";
            os << "  exact match: " << (r.matches ? "yes" : "NO") << "\n";
            os << "  linear side: "
               << (w.exists ? "representable" : "not representable") << "\n";
            if (!w.exists) os << "    " << w.obstruction << "\n";
            if (w.exists) {
                for (const auto& [g, v] : w.b)
                    os << "    b_" << g << " = " << v.str() << "\n";
                os << "    bbar = " << w.ebar.str() << "\n";
            }
        }
    }
    if (fmt == "json") os << arr.dump(2) << "\n";
    emit(os.str(), out);
    if (reds.empty()) {
        std::cerr << "error: no reduction named " << target << "\n";
        return kExitConfig;
    }
    return all_match ? 0 : kExitCertify;
}

// --------------------------------------------------------------- simulate

int cmd_simulate(const std::string& in_path, const std::vector<std::string>& sets,
                 const std::string& start_s, const std::string& t0_s,
                 const std::string& box_s, double h, const std::string& fmt,
                 const std::string& out) {
    json j;
    try {
        std::ifstream f(in_path, std::ios::binary);
        if (!f) throw std::domain_error("cannot open " + in_path);
        j = json::parse(f);
    } catch (const json::exception& e) {
        std::cerr << "error: bad input: " << e.what() << "\n";
        return kExitConfig;
    }
    DeformedSystem sys = system_from_json(j);
    const int n = sys.n;

    std::map<int, double> params;
    for (const std::string& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::domain_error("--set needs NAME=VALUE: " + s);
        std::string name = normalize_param(s.substr(0, eq));
        auto id = symtab().lookup(name);
        if (!id) throw std::domain_error("unknown parameter " + s.substr(0, eq));
        params[*id] = std::stod(s.substr(eq + 1));
    }

    std::vector<double> start = parse_doubles(start_s);
    if ((int)start.size() != 2 * n)
        throw std::domain_error("--start needs q1..qn,p1..pn (" +
                                std::to_string(2 * n) + " numbers)");
    std::vector<double> box = parse_doubles(box_s);
    if ((int)box.size() == 1) box.assign(n, box[0]);
    if ((int)box.size() != n)
        throw std::domain_error("--box needs one displacement per time axis");
    FlowState s0;
    s0.q.assign(start.begin(), start.begin() + n);
    s0.p.assign(start.begin() + n, start.end());
    s0.t.assign(n, 0.0);
    if (!t0_s.empty()) {
        s0.t = parse_doubles(t0_s);
        if ((int)s0.t.size() != n)
            throw std::domain_error("--t0 needs one value per time axis");
    }

    std::vector<PhaseExpr> members(sys.rows.begin() + 1, sys.rows.end());
    MultiFlow M(members, params);

    std::vector<double> h_start(n);
    for (int r = 1; r <= n; ++r) h_start[r - 1] = M.hamiltonian(s0, r);
    double disc = path_discrepancy(M, s0, box, h);
    std::vector<int> order(n);
    for (int r = 1; r <= n; ++r) order[r - 1] = r;
    FlowState end = M.run(s0, order, box, h);
    std::vector<double> drift(n);
    for (int r = 1; r <= n; ++r)
        drift[r - 1] = box[r - 1] == 0 ? 0.0
                                       : conservation_drift(M, s0, r, box[r - 1], h);

    bool finite = std::isfinite(disc);
    for (double v : end.q) finite = finite && std::isfinite(v);
    for (double v : end.p) finite = finite && std::isfinite(v);
    for (double v : drift) finite = finite && std::isfinite(v);
    for (double v : h_start) finite = finite && std::isfinite(v);

    std::ostringstream os;
    if (fmt == "json") {
        json r;
        r["n"] = n;
        r["h"] = h;
        r["hamiltonians"] = h_start;
        r["endpoint"] = json{{"q", end.q}, {"p", end.p}, {"t", end.t}};
        r["path_discrepancy"] = disc;
        r["drift"] = drift;
        r["finite"] = finite;
        os << r.dump(2) << "\n";
    } else {
        os.precision(15);
        for (int r = 1; r <= n; ++r)
            os << "H_" << r << "(start) = " << h_start[r - 1] << "\n";
        os << "endpoint q =";
        for (double v : end.q) os << " " << v;
        os << "\nendpoint p =";
        for (double v : end.p) os << " " << v;
        os << "\npath discrepancy = " << disc << "\n";
        for (int r = 1; r <= n; ++r)
            os << "drift_" << r << " = " << drift[r - 1] << "\n";
        if (!finite) os << "BLOW-UP\n";
    }
    emit(os.str(), out);
    if (!finite) {
        std::cerr << "numerical blow-up\n";
        return kExitBlowup;
    }
    return 0;
}

// -------------------------------------------------------------- reproduce

struct GoldenCase {
    int n, m;
    bool magnetic;
    std::string name() const {
        return "n" + std::to_string(n) + "m" + std::to_string(m) + "_" +
               (magnetic ? "magnetic" : "ordinary") + ".json";
    }
};

std::vector<GoldenCase> golden_cases() {
    std::vector<GoldenCase> cases;
    for (int n = 2; n <= 3; ++n)
        for (int m = 0; m <= n + 1; ++m)
            for (bool mag : {false, true}) cases.push_back({n, m, mag});
    return cases;
}

int cmd_reproduce(std::string dir, bool write) {
    if (dir.empty()) {
        if (const char* env = std::getenv("VIETE_GOLDEN_DIR")) dir = env;
#ifdef VIETE_GOLDEN_DIR
        if (dir.empty()) dir = VIETE_GOLDEN_DIR;
#endif
    }
    if (dir.empty()) {
        std::cerr << "error: no golden directory (use --dir or VIETE_GOLDEN_DIR)\n";
        return kExitConfig;
    }
    std::filesystem::path base(dir);
    bool fail = false;
    for (const GoldenCase& gc : golden_cases()) {
        DeformedSystem sys = solve_deformation(gc.n, gc.m, gc.magnetic);
        std::string fresh = system_to_json(sys).dump(2) + "\n";
        std::filesystem::path p = base / gc.name();
        if (write) {
            std::filesystem::create_directories(base);
            std::ofstream f(p, std::ios::binary);
            if (!f) throw std::domain_error("cannot write " + p.string());
            f << fresh;
            std::cout << "wrote " << p.string() << "\n";
            continue;
        }
        std::ifstream f(p, std::ios::binary);
        if (!f) {
            std::cout << "MISSING " << gc.name() << "\n";
            fail = true;
            continue;
        }
        std::stringstream buf;
        buf << f.rdbuf();
        if (buf.str() == fresh) {
            std::cout << "ok " << gc.name() << "\n";
        } else {
            std::cout << "MISMATCH " << gc.name() << "\n";
            fail = true;
        }
    }
    return fail ? kExitCertify : 0;
}

} // namespace

// ------------------------------------------------------------------- main

int main(int argc, char** argv) {
    CLI::App app{"exact families of commuting time-dependent Hamiltonian flows"};
    app.require_subcommand(1);

    std::string fmt = "text", out_path;
    int n = 2, m = 0;
    auto add_common = [&](CLI::App* sub, bool dims) {
        sub->add_option("--format", fmt, "text, json, or latex")
            ->check(CLI::IsMember({"text", "json", "latex"}));
        sub->add_option("--output", out_path,
                        "write to this file (relative paths resolve against "
                        "VIETE_OUT_DIR) instead of stdout");
        if (dims) {
            sub->add_option("--n", n, "number of degrees of freedom")->required();
            sub->add_option("--m", m, "family index, 0..n+1")->required();
        }
    };

    CLI::App* gen = app.add_subcommand(
        "gen", "print an autonomous family with symbolic constants");
    std::string family = "potential";
    add_common(gen, true);
    gen->add_option("--family", family, "geodesic, potential, or magnetic")
        ->check(CLI::IsMember({"geodesic", "potential", "magnetic"}));

    CLI::App* deform = app.add_subcommand(
        "deform", "solve the time-dependent mixing that makes the family flat");
    bool want_ord = false, want_mag = false;
    std::vector<std::string> free_names;
    add_common(deform, true);
    deform->add_flag("--ordinary", want_ord, "potential representation");
    deform->add_flag("--magnetic", want_mag, "momentum-linear representation");
    deform->add_option("--free", free_names,
                       "keep only these integration constants symbolic; zero the rest");

    CLI::App* check = app.add_subcommand(
        "check", "re-certify a system file (exit 3 when flatness fails)");
    std::string in_path;
    add_common(check, false);
    check->add_option("--input", in_path, "system JSON file, or - for stdin")
        ->required();

    CLI::App* mapc = app.add_subcommand(
        "map", "connect the momentum-linear and potential representations");
    std::vector<std::string> targets;
    add_common(mapc, true);
    mapc->add_option("--target", targets,
                     "IDX=VALUE pairs: ask whether the potential member with "
                     "these coefficients has a momentum-linear preimage");

    CLI::App* panl = app.add_subcommand(
        "painleve", "reduce one-dimensional members to the classical equations");
    std::string target = "all";
    bool derivation = false;
    add_common(panl, false);
    panl->add_option("--target", target, "PI, PII, PIII, PIV, or all")
        ->check(CLI::IsMember({"PI", "PII", "PIII", "PIV", "all"}));
    panl->add_flag("--show-derivation", derivation,
                   "include the member, the starting equation, and the change "
                   "of variables");

    CLI::App* sim = app.add_subcommand(
        "simulate", "integrate the flows numerically and measure "
                    "path independence");
    std::vector<std::string> sets;
    std::string start_s, t0_s, box_s = "0.1";
    double step_h = 1e-4;
    add_common(sim, false);
    sim->add_option("--input", in_path, "system JSON file")->required();
    sim->add_option("--set", sets, "bind a constant, NAME=VALUE");
    sim->add_option("--start", start_s, "initial point q1..qn,p1..pn")->required();
    sim->add_option("--t0", t0_s, "initial times (default all zero)");
    sim->add_option("--box", box_s,
                    "time displacement per axis (one value, or one per axis)");
    sim->add_option("--step", step_h, "integrator step size");

    CLI::App* rep = app.add_subcommand(
        "reproduce", "regenerate the bundled reference outputs and compare");
    std::string golden_dir;
    bool write_golden = false;
    rep->add_option("--dir", golden_dir, "reference directory");
    rep->add_flag("--write", write_golden, "write instead of compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen(n, m, family, fmt, out_path);
        if (deform->parsed()) {
            if (want_ord == want_mag) {
                std::cerr << "error: pick exactly one of --ordinary / --magnetic\n";
                return kExitConfig;
            }
            return cmd_deform(n, m, want_mag, free_names, fmt, out_path);
        }
        if (check->parsed()) return cmd_check(in_path, fmt, out_path);
        if (mapc->parsed()) return cmd_map(n, m, targets, fmt, out_path);
        if (panl->parsed()) return cmd_painleve(target, derivation, fmt, out_path);
        if (sim->parsed())
            return cmd_simulate(in_path, sets, start_s, t0_s, box_s, step_h, fmt,
                                out_path);
        if (rep->parsed()) return cmd_reproduce(golden_dir, write_golden);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
