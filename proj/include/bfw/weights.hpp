#pragma once

// Weights on dual objects: recipes, validation, growth certificates, restriction and quotient.

#include "bfw/errors.hpp"
#include "bfw/group.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <array>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace bfw {

/// Positive function on the labels of a dual, evaluated in log space and memoized.
class Weight {
public:
    using LogFn = std::function<double(const IrrepLabel&)>;

    struct Flags {
        bool symmetric = false;
        bool bounded = false;
        bool monotone = false;  // nondecreasing along pi_0, pi_1, ... (used for restriction certificates)
    };

    Weight(GroupDual dual, std::string descriptor, LogFn log_fn, Flags flags)
        : impl_(std::make_shared<Impl>(std::move(dual), std::move(descriptor), std::move(log_fn), flags)) {}

    const GroupDual& dual() const { return impl_->dual; }
    const std::string& descriptor() const { return impl_->descriptor; }
    bool claimed_symmetric() const { return impl_->flags.symmetric; }
    bool claimed_bounded() const { return impl_->flags.bounded; }
    bool monotone() const { return impl_->flags.monotone; }
    const Flags& flags() const { return impl_->flags; }
    const std::vector<std::string>& warnings() const { return impl_->warnings; }

    double log_value(const IrrepLabel& a) const {
        impl_->dual.require(a);
        const std::string key = a.str();
        {
            std::shared_lock lock(impl_->mu);
            if (auto it = impl_->memo.find(key); it != impl_->memo.end()) return it->second;
        }
        const double v = impl_->log_fn(a);
        if (!std::isfinite(v)) throw WeightSpecError("weight " + impl_->descriptor + " is not finite and positive at " + key);
        std::unique_lock lock(impl_->mu);
        impl_->memo.emplace(key, v);
        return v;
    }

    double operator()(const IrrepLabel& a) const { return std::exp(log_value(a)); }
    double value(const IrrepLabel& a) const { return std::exp(log_value(a)); }

    /// Weight of a reducible representation: the max over its support.
    double log_value(const LabelSet& support) const {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& l : support) best = std::max(best, log_value(l));
        return best;
    }

    Weight with_warning(std::string w) const {
        Weight out = *this;
        auto copy = std::make_shared<Impl>(impl_->dual, impl_->descriptor, impl_->log_fn, impl_->flags);
        copy->warnings = impl_->warnings;
        copy->warnings.push_back(std::move(w));
        out.impl_ = std::move(copy);
        return out;
    }

private:
    struct Impl {
        Impl(GroupDual d, std::string desc, LogFn f, Flags fl)
            : dual(std::move(d)), descriptor(std::move(desc)), log_fn(std::move(f)), flags(fl) {}
        GroupDual dual;
        std::string descriptor;
        LogFn log_fn;
        Flags flags;
        std::vector<std::string> warnings;
        mutable std::shared_mutex mu;
        mutable std::unordered_map<std::string, double> memo;
    };
    std::shared_ptr<Impl> impl_;
};

namespace weights {

inline Weight constant(const GroupDual& g, double c) {
    if (!(c >= 1.0) || !std::isfinite(c)) throw WeightSpecError("const weight needs c >= 1");
    const double lc = std::log(c);
    std::ostringstream d;
    d << "const:" << c;
    return Weight(g, d.str(), [lc](const IrrepLabel&) { return lc; }, {true, true, true});
}

inline Weight dimension(const GroupDual& g) {
    return Weight(g, "dim", [g](const IrrepLabel& a) { return std::log(double(g.dim(a))); }, {true, true, true});
}

/// (1 + tau_S)^alpha.
inline Weight polynomial(const GroupDual& g, double alpha, std::optional<LabelSet> gens = std::nullopt) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw WeightSpecError("poly weight needs alpha > 0");
    const bool custom = gens.has_value();
    LabelSet s = custom ? *gens : g.default_generators();
    if (s.empty()) throw WeightSpecError("poly weight needs a nonempty generating set");
    for (const auto& l : s)
        if (!g.contains(l)) throw WeightSpecError("generator " + l.str() + " does not belong to " + g.name());
    std::set<IrrepLabel> closed;
    for (const auto& l : s) closed.insert(g.conjugate(l));
    const bool symmetric = LabelSet(closed.begin(), closed.end()) == s;
    std::ostringstream d;
    d << "poly:alpha=" << alpha;
    if (custom) {
        d << ";S=";
        for (std::size_t i = 0; i < s.size(); ++i) d << (i ? "|" : "") << s[i].str();
    }
    const bool monotone = !custom && (g.family() == Family::su2 || g.family() == Family::so3);
    return Weight(
        g, d.str(), [g, s, alpha](const IrrepLabel& a) { return alpha * std::log1p(double(g.word_length(a, s))); },
        {symmetric, true, monotone});
}

namespace detail {

inline double exp_log(const GroupDual& g, const IrrepLabel& a, double lp, double lq) {
    switch (g.family()) {
        case Family::torus: {
            double s = 0;
            for (int m : a.weights()) s += m > 0 ? m * lp : -m * lq;
            return s;
        }
        case Family::su2: return a.index() * lp;
        case Family::so3: return 2 * a.index() * lp;
        case Family::semidirect: return a.kind() == SemidirectKind::twodim ? a.index() * lp : 0.0;
        case Family::product: return exp_log(g.left(), a.left(), lp, lq) + exp_log(g.right(), a.right(), lp, lq);
    }
    return 0.0;
}

}  // namespace detail

/// Exponential weight omega_theta(pi) = ||pi(theta)|| for the positive point with parameter lambda.
/// On tori the weight is prod_i lambda_i^{|mu_i|} with lambda_neg used for negative coordinates.
inline Weight exponential(const GroupDual& g, double lambda, std::optional<double> lambda_neg = std::nullopt) {
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw WeightSpecError("exp weight needs lambda >= 1");
    const double ln = lambda_neg.value_or(lambda);
    if (!(ln >= 1.0) || !std::isfinite(ln)) throw WeightSpecError("exp weight needs lambda_neg >= 1");
    const double lp = std::log(lambda), lq = std::log(ln);
    std::ostringstream d;
    d << "exp:lambda=" << lambda;
    if (lambda_neg) d << ";lambda_neg=" << ln;
    auto fn = [g, lp, lq](const IrrepLabel& a) { return detail::exp_log(g, a, lp, lq); };
    return Weight(g, d.str(), fn, {lp == lq, true, true});
}

inline Weight product(const Weight& a, const Weight& b) {
    if (!(a.dual() == b.dual())) throw FamilyMismatch("product of weights on different duals");
    Weight::Flags f{a.claimed_symmetric() && b.claimed_symmetric(), a.claimed_bounded() && b.claimed_bounded(),
                    a.monotone() && b.monotone()};
    return Weight(a.dual(), "prod(" + a.descriptor() + "," + b.descriptor() + ")",
                  [a, b](const IrrepLabel& l) { return a.log_value(l) + b.log_value(l); }, f);
}

/// omega^alpha; a weight for every alpha > 0 since submultiplicativity is preserved by powers.
inline Weight power(const Weight& w, double alpha) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw WeightSpecError("pow weight needs alpha > 0");
    std::ostringstream d;
    d << "pow(" << w.descriptor() << "," << alpha << ")";
    return Weight(w.dual(), d.str(), [w, alpha](const IrrepLabel& l) { return alpha * w.log_value(l); }, w.flags());
}

/// Explicit values by label string, with an optional default for unlisted labels.
inline Weight table(const GroupDual& g, const std::map<std::string, double>& values, std::optional<double> fallback) {
    std::map<IrrepLabel, double> logs;
    for (const auto& [k, v] : values) {
        if (!(v > 0) || !std::isfinite(v)) throw WeightSpecError("table weight value for " + k + " must be positive");
        logs[g.parse_label(k)] = std::log(v);
    }
    if (fallback && (!(*fallback > 0) || !std::isfinite(*fallback)))
        throw WeightSpecError("table weight default must be positive");
    const std::optional<double> lf = fallback ? std::optional<double>(std::log(*fallback)) : std::nullopt;
    auto fn = [logs, lf](const IrrepLabel& a) {
        if (auto it = logs.find(a); it != logs.end()) return it->second;
        if (lf) return *lf;
        throw WeightSpecError("table weight has no value for " + a.str());
    };
    return Weight(g, "table", fn, {false, false, false});
}

namespace detail {

inline std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == sep && depth == 0) {
            out.push_back(bfw::detail::trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(bfw::detail::trim(cur));
    return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
    const std::string t = bfw::detail::trim(s);
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw ParseError("bad number '" + t + "' in " + what);
    }
    if (pos != t.size()) throw ParseError("bad number '" + t + "' in " + what);
    return v;
}

// "alpha=1.5;S=pi:1|pi:2" -> {alpha: 1.5, S: pi:1|pi:2}
inline std::map<std::string, std::string> parse_params(const std::string& body, const std::string& what) {
    std::map<std::string, std::string> out;
    if (bfw::detail::trim(body).empty()) return out;
    for (const auto& item : split_top(body, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value in " + what + ": " + item);
        out[bfw::detail::trim(item.substr(0, eq))] = bfw::detail::trim(item.substr(eq + 1));
    }
    return out;
}

inline void reject_unknown(const std::map<std::string, std::string>& p, std::initializer_list<const char*> known,
                           const std::string& what) {
    for (const auto& [k, v] : p) {
        bool ok = false;
        for (const char* n : known) ok = ok || k == n;
        if (!ok) throw ParseError("unknown parameter '" + k + "' for " + what);
    }
}

}  // namespace detail

/// Mini-language: const:c | dim | poly:alpha=a[;S=l1|l2] | exp:lambda=l[;lambda_neg=m] | prod(w,w,...) | pow(w,a).
inline Weight parse(const GroupDual& g, const std::string& text) {
    const std::string s = bfw::detail::trim(text);
    auto fn_args = [&](const std::string& name) -> std::optional<std::vector<std::string>> {
        if (s.rfind(name + "(", 0) != 0 || s.back() != ')') return std::nullopt;
        return detail::split_top(s.substr(name.size() + 1, s.size() - name.size() - 2), ',');
    };
    if (auto args = fn_args("prod")) {
        if (args->size() < 2) throw ParseError("prod needs at least two weights");
        Weight w = parse(g, (*args)[0]);
        for (std::size_t i = 1; i < args->size(); ++i) w = product(w, parse(g, (*args)[i]));
        return w;
    }
    if (auto args = fn_args("pow")) {
        if (args->size() != 2) throw ParseError("pow needs (weight, exponent)");
        return power(parse(g, (*args)[0]), detail::parse_double((*args)[1], "pow"));
    }
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "dim") {
        if (!body.empty()) throw ParseError("dim takes no parameters");
        return dimension(g);
    }
    if (head == "const") {
        if (body.empty()) return constant(g, 1.0);
        const auto eq = body.find('=');
        return constant(g, detail::parse_double(eq == std::string::npos ? body : body.substr(eq + 1), "const"));
    }
    if (head == "poly") {
        const auto p = detail::parse_params(body, "poly");
        detail::reject_unknown(p, {"alpha", "S"}, "poly");
        if (!p.count("alpha")) throw ParseError("poly needs alpha=");
        std::optional<LabelSet> gens;
        if (p.count("S")) {
            std::set<IrrepLabel> set;
            for (const auto& l : detail::split_top(p.at("S"), '|')) set.insert(g.parse_label(l));
            gens = LabelSet(set.begin(), set.end());
        }
        return polynomial(g, detail::parse_double(p.at("alpha"), "poly"), gens);
    }
    if (head == "exp") {
        const auto p = detail::parse_params(body, "exp");
        detail::reject_unknown(p, {"lambda", "lambda_neg"}, "exp");
        if (!p.count("lambda")) throw ParseError("exp needs lambda=");
        std::optional<double> neg;
        if (p.count("lambda_neg")) neg = detail::parse_double(p.at("lambda_neg"), "exp");
        return exponential(g, detail::parse_double(p.at("lambda"), "exp"), neg);
    }
    throw ParseError("unknown weight recipe '" + text + "'");
}

/// JSON mirror of the grammar, e.g. {"type":"prod","args":[{"type":"dim"},{"type":"poly","alpha":1}]};
/// a JSON string is read with the mini-language.
inline Weight from_json(const GroupDual& g, const nlohmann::json& j) {
    if (j.is_string()) return parse(g, j.get<std::string>());
    if (!j.is_object() || !j.contains("type")) throw ParseError("weight JSON needs a \"type\" field");
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "const") return constant(g, j.value("c", 1.0));
        if (type == "dim") return dimension(g);
        if (type == "poly") {
            std::optional<LabelSet> gens;
            if (j.contains("S")) {
                std::set<IrrepLabel> set;
                for (const auto& l : j.at("S")) set.insert(g.parse_label(l.get<std::string>()));
                gens = LabelSet(set.begin(), set.end());
            }
            return polynomial(g, j.at("alpha").get<double>(), gens);
        }
        if (type == "exp") {
            std::optional<double> neg;
            if (j.contains("lambda_neg")) neg = j.at("lambda_neg").get<double>();
            return exponential(g, j.at("lambda").get<double>(), neg);
        }
        if (type == "prod") {
            const auto& args = j.at("args");
            if (!args.is_array() || args.size() < 2) throw ParseError("prod needs an args array of >= 2 weights");
            Weight w = from_json(g, args[0]);
            for (std::size_t i = 1; i < args.size(); ++i) w = product(w, from_json(g, args[i]));
            return w;
        }
        if (type == "pow") return power(from_json(g, j.at("base")), j.at("alpha").get<double>());
        if (type == "table") {
            std::map<std::string, double> values;
            for (const auto& [k, v] : j.at("values").items()) values[k] = v.get<double>();
            std::optional<double> def;
            if (j.contains("default")) def = j.at("default").get<double>();
            return table(g, values, def);
        }
        throw ParseError("unknown weight type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed weight JSON: ") + e.what());
    }
}

}  // namespace weights

inline Weight make_weight(const GroupDual& g, const std::string& spec) { return weights::parse(g, spec); }

struct WeightReport {
    std::string descriptor;
    int depth = 0;
    std::size_t labels_checked = 0;
    double tolerance = 1e-12;
    double violation = 0;  // max (omega(sigma) / (omega(pi) omega(pi')) - 1)^+
    std::optional<std::array<IrrepLabel, 3>> witness;  // worst (sigma, pi, pi')
    std::vector<std::pair<std::array<IrrepLabel, 3>, double>> failures;  // first few triples above tolerance
    double infimum = std::numeric_limits<double>::infinity();
    std::optional<IrrepLabel> infimum_label;
    double trivial_value = 1;
    double symmetry_residual = 0;
    bool pass = true;
};

/// Checks submultiplicativity on all pairs with word length <= depth, plus symmetry and omega(1) >= 1.
inline WeightReport validate(const Weight& w, int depth, double tol = 1e-12) {
    if (depth < 1) throw Error("validation depth must be >= 1");
    const GroupDual& g = w.dual();
    WeightReport r;
    r.descriptor = w.descriptor();
    r.depth = depth;
    r.tolerance = tol;
    const LabelSet labels = g.labels_up_to(depth);
    r.labels_checked = labels.size();
    std::vector<double> logs(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        logs[i] = w.log_value(labels[i]);
        const double v = std::exp(logs[i]);
        if (v < r.infimum) {
            r.infimum = v;
            r.infimum_label = labels[i];
        }
        const double vc = w.value(g.conjugate(labels[i]));
        r.symmetry_residual = std::max(r.symmetry_residual, std::abs(vc - v) / v);
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i; j < labels.size(); ++j)
            for (const auto& [s, m] : g.fuse(labels[i], labels[j])) {
                const double excess = std::expm1(w.log_value(s) - logs[i] - logs[j]);
                if (excess > tol && r.failures.size() < 64)
                    r.failures.push_back({{s, labels[i], labels[j]}, excess});
                if (excess > r.violation) {
                    r.violation = excess;
                    r.witness = std::array<IrrepLabel, 3>{s, labels[i], labels[j]};
                }
            }
    r.trivial_value = w.value(g.trivial());
    r.pass = r.violation <= tol && r.trivial_value >= 1.0 - tol &&
             (!w.claimed_symmetric() || r.symmetry_residual <= tol);
    return r;
}

struct GrowthRow {
    int n;
    double root;           // omega(pi^{(x)n})^{1/n}
    double running_inf;
};

struct GrowthCertificate {
    IrrepLabel label;
    std::vector<GrowthRow> rows;
    double rho_hat = 1;    // min over n <= N: an upper bound for rho_omega(pi)
    double rate = 1;       // extrapolated limit, clamped to [1, rho_hat]
    bool exponential = false;
};

inline constexpr double eps_class = 1e-3;

namespace detail {

// Fits log W(n) = a n + b log n + c through three points and returns exp(a).
inline double extrapolated_rate(const std::vector<double>& log_w, int n_max) {
    if (n_max < 8) return std::exp(log_w[n_max] / n_max);
    const int n1 = n_max / 4, n2 = n_max / 2, n3 = n_max;
    Eigen::Matrix3d a;
    Eigen::Vector3d y;
    const int ns[3] = {n1, n2, n3};
    for (int i = 0; i < 3; ++i) {
        a(i, 0) = ns[i];
        a(i, 1) = std::log(double(ns[i]));
        a(i, 2) = 1.0;
        y(i) = log_w[ns[i]];
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
    return std::exp(c(0));
}

}  // namespace detail

/// rho_omega(pi) evidence: omega(pi^{(x)n}) = max of omega over the support of pi^{(x)n}.
inline GrowthCertificate growth_rate(const Weight& w, const IrrepLabel& a, int n_max, double eps = eps_class,
                                     std::size_t cap = 2'000'000) {
    if (n_max < 1) throw Error("growth depth must be >= 1");
    const GroupDual& g = w.dual();
    g.require(a);
    GrowthCertificate c{a, {}, 1, 1, false};
    std::vector<double> log_w(n_max + 1, 0.0);
    double inf = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        log_w[n] = w.log_value(g.tensor_power_support({a}, n, cap));
        const double root = std::exp(log_w[n] / n);
        inf = std::min(inf, root);
        c.rows.push_back({n, root, inf});
    }
    c.rho_hat = inf;
    c.rate = std::clamp(detail::extrapolated_rate(log_w, n_max), 1.0, std::max(1.0, inf));
    c.exponential = c.rate > 1 + eps;
    return c;
}

struct GrowthClassification {
    bool exponential = false;
    std::optional<IrrepLabel> witness;
    double rho_hat = 1;  // at the witness, or the max over generators
    double rate = 1;
    std::vector<GrowthCertificate> certificates;
};

inline GrowthClassification classify_growth(const Weight& w, const LabelSet& gens, int n_max, double eps = eps_class) {
    GrowthClassification out;
    for (const auto& s : gens) out.certificates.push_back(growth_rate(w, s, n_max, eps));
    for (const auto& c : out.certificates) {
        if (c.exponential && (!out.exponential || c.rate > out.rate)) {
            out.exponential = true;
            out.witness = c.label;
            out.rho_hat = c.rho_hat;
            out.rate = c.rate;
        }
    }
    if (!out.exponential)
        for (const auto& c : out.certificates) {
            out.rho_hat = std::max(out.rho_hat, c.rho_hat);
            out.rate = std::max(out.rate, c.rate);
        }
    return out;
}

inline GrowthClassification classify_growth(const Weight& w, int n_max, double eps = eps_class) {
    return classify_growth(w, w.dual().default_generators(), n_max, eps);
}

/// omega_T(chi_k) = inf{omega(pi_n) : chi_k in pi_n|_T, n <= cap} on the diagonal torus of SU(2).
/// Exact when the weight is monotone in n (the infimum sits at n = |k|); otherwise a warning is attached.
inline Weight restrict_weight(const Weight& w, int cap) {
    if (w.dual().family() != Family::su2) throw UnsupportedBranching("restriction is only available for su2 over torus:1");
    const GroupDual t = GroupDual::torus(1);
    const bool exact = w.monotone();
    auto fn = [w, cap, exact](const IrrepLabel& chi) {
        const int k = std::abs(chi.weights()[0]);
        if (k > cap) throw CapExceeded("character " + chi.str() + " lies beyond the restriction cap", cap);
        if (exact) return w.log_value(IrrepLabel::su2(k));
        double best = std::numeric_limits<double>::infinity();
        for (int n = k; n <= cap; n += 2) best = std::min(best, w.log_value(IrrepLabel::su2(n)));
        return best;
    };
    Weight out(t, "restrict(" + w.descriptor() + ")", fn, {true, w.claimed_bounded(), false});
    if (!exact)
        out = out.with_warning("infimum truncated at n <= " + std::to_string(cap) + " without a monotonicity certificate");
    return out;
}

/// omega^N(l) = omega(pi_{2l}) on SO(3) = SU(2)/{+-I}.
inline Weight quotient_weight(const Weight& w) {
    if (w.dual().family() != Family::su2) throw UnsupportedBranching("quotient weights are only available for su2 onto so3");
    const GroupDual q = GroupDual::so3();
    const GroupDual g = w.dual();
    auto fn = [w, g, q](const IrrepLabel& l) { return w.log_value(quotient_lift(g, q, l)); };
    return Weight(q, "quotient(" + w.descriptor() + ")", fn, w.flags());
}

}  // namespace bfw
