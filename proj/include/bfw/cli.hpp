#pragma once

// Subcommand front end. Reports are single-line JSON on stdout and always carry a "config"
// object; tables go to --out when given. Exit codes: 0 ok, 2 verdict failure, 3 parse error,
// 4 numeric non-convergence.

#include "bfw/algebra.hpp"
#include "bfw/calculus.hpp"
#include "bfw/io.hpp"
#include "bfw/spectrum.hpp"
#include "bfw/weights.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <regex>

namespace bfw::cli {

using nlohmann::json;

enum Exit : int { ok = 0, failed = 2, parse_error = 3, no_convergence = 4 };

struct RunConfig {
    std::string command;
    std::string group;
    std::string weight;       // mini-language text, or empty when weight_file is used
    std::string weight_file;
    int N = 64;               // label cutoff
    int depth = 12;           // validation depth
    double tolerance = 1e-9;
    std::string out, svg;
    std::string format = "json";

    json to_json() const {
        json j{{"command", command}, {"group", group}};
        if (!weight.empty()) j["weight"] = weight;
        if (!weight_file.empty()) j["weight_file"] = weight_file;
        return j;
    }
};

namespace detail {

inline IrrepLabel label_arg(const GroupDual& g, const std::string& text) {
    try {
        return g.parse_label(text);
    } catch (const ParseError&) {
        // bare integers name the obvious label of rank-one families
        if (text.empty() || text.find_first_not_of("-0123456789") != std::string::npos) throw;
        switch (g.family()) {
            case Family::su2: return g.parse_label("pi:" + text);
            case Family::so3: return g.parse_label("so3:" + text);
            case Family::semidirect: return g.parse_label("pi:" + text);
            case Family::torus: return g.parse_label("t:(" + text + ")");
            default: throw;
        }
    }
}

/// Element recipe: a JSON file, or a '+'-separated sum of [c*]one | [c*]char:LABEL.
inline OperatorField element_arg(const GroupDual& g, const std::string& spec) {
    if (spec.size() > 5 && spec.compare(spec.size() - 5, 5, ".json") == 0) {
        const OperatorField u = io::element_from_json(io::read_json_file(spec));
        if (!(u.dual() == g)) throw FamilyMismatch(spec + " holds an element of " + u.dual().name());
        return u;
    }
    OperatorField u(g);
    for (const auto& raw : weights::detail::split_top(spec, '+')) {
        std::string term = bfw::detail::trim(raw);
        double c = 1;
        if (const auto star = term.find('*'); star != std::string::npos) {
            c = weights::detail::parse_double(term.substr(0, star), "element coefficient");
            term = bfw::detail::trim(term.substr(star + 1));
        }
        if (term == "one") u = u + OperatorField::one(g) * cplx(c);
        else if (term.rfind("char:", 0) == 0) u = u + OperatorField::character(g, label_arg(g, term.substr(5))) * cplx(c);
        else throw ParseError("unknown element term '" + term + "'");
    }
    return u;
}

inline Weight weight_arg(const GroupDual& g, const RunConfig& c) {
    if (!c.weight_file.empty()) return weights::from_json(g, io::read_json_file(c.weight_file));
    if (c.weight.empty()) throw ParseError("--weight or --weight-file is required");
    return weights::parse(g, c.weight);
}

inline json labels_json(const std::array<IrrepLabel, 3>& t) { return {t[0].str(), t[1].str(), t[2].str()}; }

inline std::optional<double> poly_alpha(const std::string& spec) {
    static const std::regex re(R"(^\s*poly:alpha=([-+0-9.eE]+)\s*$)");
    std::smatch m;
    if (std::regex_match(spec, m, re)) return weights::detail::parse_double(m[1], "poly");
    if (spec == "const:1" || spec == "const") return 0.0;
    return std::nullopt;
}

inline LieElement lie_arg(const GroupDual& g, const std::string& name) {
    if (name.size() < 2 || name[0] != 'e') throw ParseError("Lie direction must look like e1, e2, ...");
    const int k = bfw::detail::parse_int(name.substr(1), "Lie direction");
    switch (g.family()) {
        case Family::su2:
        case Family::so3: {
            if (k < 1 || k > 3) throw ParseError("su2 directions are e1, e2, e3");
            LieElement e = LieElement::su2(su2_casimir_basis()[k - 1]);
            e.family = g.family();
            return e;
        }
        case Family::torus: {
            if (k < 1 || k > g.rank()) throw ParseError("torus directions are e1..e" + std::to_string(g.rank()));
            std::vector<cplx> x(g.rank(), 0.0);
            x[k - 1] = 1;
            return LieElement::torus(x);
        }
        case Family::semidirect:
            if (k != 1) throw ParseError("the semidirect product has the single direction e1");
            return LieElement::semidirect(1.0);
        default: throw Unsupported("derivation scans need a non-product group");
    }
}

inline void emit(std::ostream& out, const RunConfig& c, const std::string& text) {
    if (c.out.empty()) out << text;
    else io::write_text_file(c.out, text);
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------

inline int cmd_validate_weight(const RunConfig& c, std::ostream& out) {
    const GroupDual g = GroupDual::parse(c.group);
    const WeightReport r = validate(detail::weight_arg(g, c), c.depth, c.tolerance);
    json j{{"config", c.to_json()}, {"descriptor", r.descriptor}, {"depth", r.depth}, {"labels_checked", r.labels_checked},
           {"tolerance", r.tolerance}, {"violation", r.violation}, {"trivial_value", r.trivial_value},
           {"symmetry_residual", r.symmetry_residual}, {"infimum", r.infimum}, {"pass", r.pass}};
    j["config"]["depth"] = c.depth;
    if (r.infimum_label) j["infimum_label"] = r.infimum_label->str();
    if (r.witness) j["witness"] = detail::labels_json(*r.witness);
    j["failures"] = json::array();
    for (const auto& [t, e] : r.failures) j["failures"].push_back({{"triple", detail::labels_json(t)}, {"excess", e}});
    out << j.dump() << '\n';
    return r.pass ? ok : failed;
}

inline int cmd_growth(const RunConfig& c, const std::vector<std::string>& probes, bool rows, std::ostream& out) {
    const GroupDual g = GroupDual::parse(c.group);
    const Weight w = detail::weight_arg(g, c);
    LabelSet labels;
    for (const auto& p : probes) labels.push_back(detail::label_arg(g, p));
    if (labels.empty()) labels = g.default_generators();
    json j{{"config", c.to_json()}, {"certificates", json::array()}};
    j["config"]["N"] = c.N;
    bool exponential = false;
    for (const auto& a : labels) {
        const GrowthCertificate cert = growth_rate(w, a, c.N);
        json cj{{"probe", a.str()}, {"rate", cert.rate}, {"rho_hat", cert.rho_hat}, {"exponential", cert.exponential}};
        if (rows) {
            cj["rows"] = json::array();
            for (const auto& r : cert.rows) cj["rows"].push_back({r.n, r.root, r.running_inf});
        }
        exponential = exponential || cert.exponential;
        j["certificates"].push_back(cj);
    }
    j["exponential"] = exponential;
    out << j.dump() << '\n';
    return ok;
}

inline int cmd_spectrum(const RunConfig& c, const std::vector<std::string>& probes, const std::string& point,
                        std::ostream& out) {
    const GroupDual g = GroupDual::parse(c.group);
    const Weight w = detail::weight_arg(g, c);
    LabelSet extra;
    for (const auto& p : probes) extra.push_back(detail::label_arg(g, p));
    const SpectrumDescription d = spectrum_bounds(w, c.N, extra);
    if (c.format == "csv") {
        detail::emit(out, c, d.to_csv());
        return ok;
    }
    json j = d.to_json();
    j["config"] = c.to_json();
    j["config"]["N"] = c.N;
    int code = ok;
    if (!point.empty()) {
        const auto th = SpectrumPoint::from_data(io::point_from_json(g, io::read_json_file(point)));
        const Membership m = membership(th, w, c.N);
        j["membership"] = {{"margin", bfw::detail::round12(m.margin)}, {"member", m.member}, {"certified", m.certified},
                           {"argmax", m.argmax ? m.argmax->str() : ""}};
        j["config"]["point"] = point;
        if (!m.member) code = failed;
    }
    detail::emit(out, c, j.dump() + '\n');
    return code;
}

inline int cmd_norm(const RunConfig& c, const std::string& u_spec, std::ostream& out) {
    const GroupDual g = GroupDual::parse(c.group);
    const Weight w = detail::weight_arg(g, c);
    const OperatorField u = detail::element_arg(g, u_spec);
    json j{{"config", c.to_json()}, {"a_omega", norm_a_omega(u, w)}, {"a", norm_a(u)}, {"l2_omega", norm_l2_omega(u, w)},
           {"support", u.terms().size()}};
    j["config"]["u"] = u_spec;
    out << j.dump() << '\n';
    return ok;
}

inline int cmd_multiply(const RunConfig& c, const std::string& u_spec, const std::string& v_spec, std::ostream& out) {
    const GroupDual g = GroupDual::parse(c.group);
    const OperatorField uv = multiply(detail::element_arg(g, u_spec), detail::element_arg(g, v_spec));
    json j = io::element_to_json(uv);
    j["config"] = c.to_json();
    j["config"]["u"] = u_spec;
    j["config"]["v"] = v_spec;
    detail::emit(out, c, j.dump() + '\n');
    return ok;
}

inline int cmd_factorize(const RunConfig& c, const std::string& u_spec, std::string w1_spec, std::string w2_spec,
                         std::ostream& out) {
    const GroupDual g = GroupDual::parse(c.group);
    if (w1_spec.empty()) w1_spec = c.weight;
    if (w2_spec.empty()) w2_spec = c.weight;
    if (w1_spec.empty() || w2_spec.empty()) throw ParseError("factorize needs --weight or both --w1 and --w2");
    const Weight w1 = weights::parse(g, w1_spec), w2 = weights::parse(g, w2_spec);
    const Weight w = weights::power(weights::product(w1, w2), 0.5);
    const OperatorField u = detail::element_arg(g, u_spec);
    const Factorization fz = factorize(u, w1, w2);
    const OperatorField back = convolve(fz.f, fz.g);
    double scale = 0, dev = 0;
    for (const auto& [l, m] : u.terms()) {
        scale = std::max(scale, linalg::max_abs(m));
        dev = std::max(dev, linalg::max_abs(Matrix(back.at(l) - m)));
    }
    const double a = norm_a_omega(u, w), lf = norm_l2_omega(fz.f, w2), lg = norm_l2_omega(fz.g, w1);
    const double rel = scale > 0 ? dev / scale : dev;
    json j{{"config", c.to_json()}, {"f", io::element_to_json(fz.f)}, {"g", io::element_to_json(fz.g)},
           {"a_omega", a}, {"l2_f", lf}, {"l2_g", lg}, {"reconstruction", rel}};
    j["config"]["u"] = u_spec;
    j["config"]["w1"] = w1_spec;
    j["config"]["w2"] = w2_spec;
    j["config"]["tolerance"] = c.tolerance;
    const bool pass = rel <= c.tolerance && a <= lf * lg + c.tolerance;
    j["pass"] = pass;
    detail::emit(out, c, j.dump() + '\n');
    return pass ? ok : failed;
}

struct ExpCurveArgs {
    std::string u = "char:1";
    std::optional<double> alpha;
    double tmin = 1, tmax = 64;
    int max_cutoff = 400;
    double tolerance = 1e-6;
};

inline int cmd_expcurve(const RunConfig& c, const ExpCurveArgs& a, std::ostream& out) {
    const GroupDual g = GroupDual::parse(c.group);
    const Weight w = detail::weight_arg(g, c);
    const std::optional<double> alpha = a.alpha ? a.alpha : detail::poly_alpha(c.weight);
    if (!alpha) throw ParseError("expcurve needs --alpha unless the weight is poly:alpha=...");
    if (!(a.tmin > 0) || a.tmax < a.tmin) throw ParseError("expcurve needs 0 < tmin <= tmax");
    std::vector<double> ts;
    for (double t = a.tmin; t <= a.tmax * (1 + 1e-12); t *= 2) ts.push_back(t);
    ExpOptions opt;
    opt.max_cutoff = a.max_cutoff;
    opt.tolerance = a.tolerance;
    const GrowthCurve curve = growth_curve(detail::element_arg(g, a.u), w, *alpha, ts, opt);
    if (!c.out.empty()) io::write_text_file(c.out, curve.to_csv());
    if (!c.svg.empty()) io::write_text_file(c.svg, curve.to_svg());
    double defect = 0;
    int cutoff = 0;
    for (const auto& r : curve.rows) {
        defect = std::max(defect, r.tail);
        cutoff = std::max(cutoff, r.cutoff);
    }
    json j{{"config", c.to_json()}, {"slope", curve.slope}, {"exponent", curve.exponent}, {"constant", curve.constant},
           {"max_defect", defect}, {"max_cutoff_used", cutoff}, {"points", curve.rows.size()}, {"pass", curve.pass}};
    j["config"].update({{"u", a.u}, {"alpha", *alpha}, {"tmin", a.tmin}, {"tmax", a.tmax}, {"max_cutoff", a.max_cutoff},
                        {"tolerance", a.tolerance}});
    if (c.out.empty()) out << curve.to_csv();
    out << j.dump() << '\n';
    return curve.pass ? ok : failed;
}

inline int cmd_derivation(const RunConfig& c, const std::string& x, std::ostream& out) {
    const GroupDual g = GroupDual::parse(c.group);
    const auto rows = derivation_bound_scan(detail::lie_arg(g, x), detail::weight_arg(g, c), c.N);
    std::ostringstream os;
    os.precision(17);
    os << "n,sup\n";
    for (const auto& r : rows) os << r.n << ',' << r.sup << '\n';
    detail::emit(out, c, os.str());
    if (!c.out.empty()) {
        json j{{"config", c.to_json()}, {"final", rows.back().sup}};
        j["config"].update({{"N", c.N}, {"X", x}});
        out << j.dump() << '\n';
    }
    return ok;
}

inline int cmd_nu_check(const RunConfig& c, const std::string& u_spec, const std::string& t_spec, int samples,
                        std::ostream& out) {
    const GroupDual g = GroupDual::parse(c.group);
    const Weight w = detail::weight_arg(g, c);
    const OperatorField u = detail::element_arg(g, u_spec);
    const OperatorField t = detail::element_arg(g, t_spec);
    const NuDecomposition nu = nu_decompose(u, w);
    const PairingCheck pc = pairing_identity_check(t, u, w);
    // reconstruction on pairs from a small quadrature rule
    const Grid grid = quadrature_grid(g, 3);
    const std::size_t n = std::min<std::size_t>(grid.points.size(), std::max(1, samples));
    double recon = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const PointData& s = grid.points[i * grid.points.size() / n];
            const PointData& r = grid.points[k * grid.points.size() / n];
            recon = std::max(recon, std::abs(nu_eval(nu, s, r) - evaluate(u, s.compose(r.inverse()))));
        }
    const double mass = std::max(std::abs(nu.phi_mass - nu.a_norm), std::abs(nu.psi_mass - nu.a_norm));
    const bool pass = mass <= c.tolerance && recon <= c.tolerance && pc.residual <= c.tolerance;
    json j{{"config", c.to_json()}, {"phi_mass", nu.phi_mass}, {"psi_mass", nu.psi_mass}, {"a_omega", nu.a_norm},
           {"mass_residual", mass}, {"reconstruction_residual", recon}, {"pairing_residual", pc.residual},
           {"terms", nu.terms.size()}, {"pass", pass}};
    j["config"].update({{"u", u_spec}, {"T", t_spec}, {"samples", n}, {"tolerance", c.tolerance}});
    out << j.dump() << '\n';
    return pass ? ok : failed;
}

// ---------------------------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Beurling-Fourier algebra workbench"};
    app.require_subcommand(1);
    RunConfig c;

    auto add_group = [&](CLI::App* s) { s->add_option("--group", c.group, "torus:n, su2, so3, semidirect or a product")->required(); };
    auto add_weight = [&](CLI::App* s) {
        auto* a = s->add_option("--weight", c.weight, "weight recipe, e.g. poly:alpha=1");
        auto* b = s->add_option("--weight-file", c.weight_file, "weight JSON file");
        a->excludes(b);
    };
    auto add_out = [&](CLI::App* s) { s->add_option("--out", c.out, "output file (stdout when omitted)"); };

    auto* vw = app.add_subcommand("validate-weight", "check submultiplicativity, symmetry and omega(1) >= 1");
    add_group(vw);
    add_weight(vw);
    vw->add_option("--depth", c.depth, "word-length depth")->capture_default_str()->check(CLI::PositiveNumber);
    double vw_tol = 1e-12, fa_tol = 1e-12, nc_tol = 1e-9;
    vw->add_option("--tol", vw_tol, "violation tolerance")->capture_default_str();

    std::vector<std::string> probes;
    bool rows = false;
    auto* gr = app.add_subcommand("growth", "growth certificates along probe labels");
    add_group(gr);
    add_weight(gr);
    gr->add_option("--N", c.N, "tensor power depth")->capture_default_str()->check(CLI::PositiveNumber);
    gr->add_option("--probe", probes, "probe label (repeatable)");
    gr->add_flag("--rows", rows, "include the per-n rows");

    std::string point;
    auto* sp = app.add_subcommand("spectrum", "radii of the Gelfand spectrum");
    add_group(sp);
    add_weight(sp);
    sp->add_option("--N", c.N, "growth depth and membership cutoff")->capture_default_str()->check(CLI::PositiveNumber);
    sp->add_option("--probe", probes, "extra probe label (repeatable)");
    sp->add_option("--point", point, "point JSON file to test for membership");
    sp->add_option("--format", c.format, "json or csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
    add_out(sp);

    std::string u_spec = "char:1", v_spec, t_spec = "one", w1, w2, x = "e3";
    auto* nm = app.add_subcommand("norm", "A_omega, A and L2_omega norms of an element");
    add_group(nm);
    add_weight(nm);
    nm->add_option("--u", u_spec, "element: file.json or sum of [c*]one / [c*]char:LABEL")->required();

    auto* mu = app.add_subcommand("multiply", "pointwise product of two elements");
    add_group(mu);
    mu->add_option("--u", u_spec, "first element")->required();
    mu->add_option("--v", v_spec, "second element")->required();
    add_out(mu);

    auto* fa = app.add_subcommand("factorize", "u = f * g with f in L2_{w2}, g in L2_{w1}");
    add_group(fa);
    fa->add_option("--weight", c.weight, "weight used for both factors");
    fa->add_option("--w1", w1, "weight of g");
    fa->add_option("--w2", w2, "weight of f");
    fa->add_option("--u", u_spec, "element")->required();
    fa->add_option("--tol", fa_tol, "reconstruction tolerance")->capture_default_str();
    add_out(fa);

    ExpCurveArgs ea;
    double alpha_opt = 0;
    auto* ec = app.add_subcommand("expcurve", "||exp(itu)||_{A_omega} against (1+|t|)^(d/2+alpha)");
    add_group(ec);
    add_weight(ec);
    ec->add_option("--u", ea.u, "real element")->capture_default_str();
    auto* alpha_flag = ec->add_option("--alpha", alpha_opt, "polynomial exponent (read from poly weights)");
    ec->add_option("--tmin", ea.tmin, "first t; t doubles up to tmax")->capture_default_str();
    ec->add_option("--tmax", ea.tmax, "last t")->capture_default_str();
    ec->add_option("--max-cutoff", ea.max_cutoff, "cap on the adaptive cutoff")->capture_default_str();
    ec->add_option("--tol", ea.tolerance, "Parseval defect tolerance")->capture_default_str();
    ec->add_option("--out", c.out, "CSV file (t,norm,bound,cutoff,tail)");
    ec->add_option("--svg", c.svg, "log-log plot");

    auto* de = app.add_subcommand("derivation", "running sup of ||d pi(X)|| / omega(pi) by word length");
    add_group(de);
    add_weight(de);
    de->add_option("--X", x, "basis direction e1, e2, ...")->capture_default_str();
    de->add_option("--N", c.N, "word-length cutoff")->capture_default_str()->check(CLI::NonNegativeNumber);
    add_out(de);

    int m = 0;
    double alpha = 0;
    auto* sd = app.add_subcommand("synth-degree", "floor(m/2 + alpha) + 1");
    sd->add_option("--m", m, "manifold dimension")->required();
    sd->add_option("--alpha", alpha, "weight exponent")->required();

    int samples = 12;
    auto* nc = app.add_subcommand("nu-check", "N-decomposition masses, reconstruction and pairing identity");
    add_group(nc);
    add_weight(nc);
    nc->add_option("--u", u_spec, "element")->required();
    nc->add_option("--T", t_spec, "functional, as an element")->capture_default_str();
    nc->add_option("--samples", samples, "grid points per side")->capture_default_str();
    nc->add_option("--tol", nc_tol, "residual tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return parse_error;
    }

    try {
        CLI::App* s = app.get_subcommands().front();
        c.command = s->get_name();
        c.tolerance = s == vw ? vw_tol : s == fa ? fa_tol : nc_tol;
        if (s == vw) return cmd_validate_weight(c, out);
        if (s == gr) return cmd_growth(c, probes, rows, out);
        if (s == sp) return cmd_spectrum(c, probes, point, out);
        if (s == nm) return cmd_norm(c, u_spec, out);
        if (s == mu) return cmd_multiply(c, u_spec, v_spec, out);
        if (s == fa) return cmd_factorize(c, u_spec, w1, w2, out);
        if (s == ec) {
            if (alpha_flag->count()) ea.alpha = alpha_opt;
            return cmd_expcurve(c, ea, out);
        }
        if (s == de) return cmd_derivation(c, x, out);
        if (s == sd) {
            out << synthesis_degree(m, alpha) << '\n';
            return ok;
        }
        if (s == nc) return cmd_nu_check(c, u_spec, t_spec, samples, out);
    } catch (const InsufficientCutoff& e) {
        err << "error: " << e.what() << '\n';
        return no_convergence;
    } catch (const QuadratureError& e) {
        err << "error: " << e.what() << '\n';
        return no_convergence;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return parse_error;
    } catch (const WeightSpecError& e) {
        err << "parse error: " << e.what() << '\n';
        return parse_error;
    } catch (const FamilyMismatch& e) {
        err << "parse error: " << e.what() << '\n';
        return parse_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failed;
    }
    return failed;
}

}  // namespace bfw::cli
