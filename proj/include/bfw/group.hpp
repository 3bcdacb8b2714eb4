#pragma once

// Dual objects of T^n, SU(2), SO(3), T x| Z2 and finite products, as fusion rings.

#include "bfw/errors.hpp"
#include "bfw/label.hpp"
#include "bfw/linalg.hpp"
#include "bfw/point.hpp"
#include "bfw/su2.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bfw {

/// One isometry V: H_sigma -> H_a (x) H_b, rows indexed i*d_b + j.
struct Intertwiner {
    IrrepLabel sigma;
    Matrix v;
};

struct IntertwinerSet {
    IrrepLabel a, b;
    std::vector<Intertwiner> maps;
};

using LabelSet = std::vector<IrrepLabel>;  // sorted, unique

class GroupDual;

namespace detail {

/// S^{(x)k} layers for a fixed generating set, grown on demand.
struct WordLengthTable {
    LabelSet generators;
    std::vector<LabelSet> layers;
    std::map<IrrepLabel, int> first_seen;
};

struct DualState {
    std::mutex mu;
    std::map<std::pair<std::string, std::string>, std::shared_ptr<const IntertwinerSet>> intertwiners;
    std::map<std::string, std::shared_ptr<WordLengthTable>> word_tables;
};

inline std::string key_of(const LabelSet& s) {
    std::string k;
    for (const auto& l : s) k += l.str() + ";";
    return k;
}

inline Fusion canonical(std::map<IrrepLabel, int> m) {
    Fusion f;
    f.reserve(m.size());
    for (auto& [l, c] : m)
        if (c > 0) f.emplace_back(l, c);
    return f;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Splits "x×y" or "x*y" at the first top-level separator; returns false if none.
inline bool split_product(const std::string& s, std::string& left, std::string& right) {
    static const std::string times = "×";
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (depth == 0) {
            std::size_t len = 0;
            if (c == '*') len = 1;
            else if (s.compare(i, times.size(), times) == 0) len = times.size();
            if (len) {
                left = trim(s.substr(0, i));
                right = trim(s.substr(i + len));
                return true;
            }
        }
    }
    return false;
}

inline std::string strip_parens(std::string s) {
    s = trim(s);
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        bool wraps = true;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            else if (s[i] == ')') --depth;
            if (depth == 0) {
                wraps = false;
                break;
            }
        }
        if (!wraps) break;
        s = trim(s.substr(1, s.size() - 2));
    }
    return s;
}

inline int parse_int(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t.empty()) throw ParseError("empty integer in " + what);
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(t, &pos);
    } catch (const std::exception&) {
        throw ParseError("bad integer '" + t + "' in " + what);
    }
    if (pos != t.size()) throw ParseError("bad integer '" + t + "' in " + what);
    return v;
}

}  // namespace detail

/// Fusion-ring description of a compact group's dual.
///
/// Values are cheap to copy and share their internal caches; all operations are
/// safe to call concurrently.
class GroupDual {
public:
    static GroupDual torus(int rank) {
        if (rank < 1) throw Error("torus rank must be >= 1");
        GroupDual g(Family::torus);
        g.rank_ = rank;
        return g;
    }
    static GroupDual su2() { return GroupDual(Family::su2); }
    static GroupDual so3() { return GroupDual(Family::so3); }
    static GroupDual semidirect() { return GroupDual(Family::semidirect); }
    static GroupDual product(const GroupDual& a, const GroupDual& b) {
        GroupDual g(Family::product);
        g.parts_ = std::make_shared<const std::pair<GroupDual, GroupDual>>(a, b);
        return g;
    }

    /// "torus:2", "su2", "so3", "semidirect", and products "su2×torus:1" (or '*').
    static GroupDual parse(const std::string& text) {
        const std::string s = detail::strip_parens(text);
        std::string l, r;
        if (detail::split_product(s, l, r)) return product(parse(l), parse(r));
        if (s == "su2" || s == "SU2") return su2();
        if (s == "so3" || s == "SO3") return so3();
        if (s == "semidirect" || s == "txz2" || s == "TxZ2") return semidirect();
        if (s.rfind("torus", 0) == 0) {
            if (s == "torus") return torus(1);
            if (s.size() > 6 && s[5] == ':') return torus(detail::parse_int(s.substr(6), "group spec"));
        }
        throw ParseError("unknown group '" + text + "'");
    }

    Family family() const { return family_; }
    int rank() const { return rank_; }
    const GroupDual& left() const { return parts_->first; }
    const GroupDual& right() const { return parts_->second; }

    std::string name() const {
        switch (family_) {
            case Family::torus: return "torus:" + std::to_string(rank_);
            case Family::su2: return "su2";
            case Family::so3: return "so3";
            case Family::semidirect: return "semidirect";
            case Family::product: {
                auto side = [](const GroupDual& g) {
                    return g.family() == Family::product ? "(" + g.name() + ")" : g.name();
                };
                return side(left()) + "×" + side(right());
            }
        }
        return {};
    }

    bool operator==(const GroupDual& o) const {
        if (family_ != o.family_) return false;
        if (family_ == Family::torus) return rank_ == o.rank_;
        if (family_ == Family::product) return left() == o.left() && right() == o.right();
        return true;
    }

    /// Dimension of the group (number of Lie-algebra coordinates).
    int lie_dimension() const {
        switch (family_) {
            case Family::torus: return rank_;
            case Family::su2:
            case Family::so3: return 3;
            case Family::semidirect: return 1;
            case Family::product: return left().lie_dimension() + right().lie_dimension();
        }
        return 0;
    }

    bool contains(const IrrepLabel& a) const {
        if (a.family() != family_) return false;
        switch (family_) {
            case Family::torus: return static_cast<int>(a.weights().size()) == rank_;
            case Family::product: return left().contains(a.left()) && right().contains(a.right());
            default: return true;
        }
    }

    void require(const IrrepLabel& a) const {
        if (!contains(a)) throw FamilyMismatch("label " + a.str() + " does not belong to " + name());
    }

    IrrepLabel trivial() const {
        switch (family_) {
            case Family::torus: return IrrepLabel::torus(std::vector<int>(rank_, 0));
            case Family::su2: return IrrepLabel::su2(0);
            case Family::so3: return IrrepLabel::so3(0);
            case Family::semidirect: return IrrepLabel::semidirect_trivial();
            case Family::product: return IrrepLabel::product(left().trivial(), right().trivial());
        }
        return IrrepLabel::su2(0);
    }

    int dim(const IrrepLabel& a) const {
        require(a);
        switch (family_) {
            case Family::torus: return 1;
            case Family::su2: return a.index() + 1;
            case Family::so3: return 2 * a.index() + 1;
            case Family::semidirect: return a.kind() == SemidirectKind::twodim ? 2 : 1;
            case Family::product: return left().dim(a.left()) * right().dim(a.right());
        }
        return 1;
    }

    IrrepLabel conjugate(const IrrepLabel& a) const {
        require(a);
        switch (family_) {
            case Family::torus: {
                std::vector<int> mu = a.weights();
                for (auto& v : mu) v = -v;
                return IrrepLabel::torus(mu);
            }
            case Family::product: return IrrepLabel::product(left().conjugate(a.left()), right().conjugate(a.right()));
            default: return a;
        }
    }

    Fusion fuse(const IrrepLabel& a, const IrrepLabel& b) const {
        require(a);
        require(b);
        std::map<IrrepLabel, int> out;
        switch (family_) {
            case Family::torus: {
                std::vector<int> mu(rank_);
                for (int i = 0; i < rank_; ++i) mu[i] = a.weights()[i] + b.weights()[i];
                out[IrrepLabel::torus(mu)] = 1;
                break;
            }
            case Family::su2:
                for (int n = std::abs(a.index() - b.index()); n <= a.index() + b.index(); n += 2)
                    out[IrrepLabel::su2(n)] = 1;
                break;
            case Family::so3:
                for (int l = std::abs(a.index() - b.index()); l <= a.index() + b.index(); ++l) out[IrrepLabel::so3(l)] = 1;
                break;
            case Family::semidirect: return fuse_semidirect(a, b);
            case Family::product:
                for (const auto& [x, mx] : left().fuse(a.left(), b.left()))
                    for (const auto& [y, my] : right().fuse(a.right(), b.right()))
                        out[IrrepLabel::product(x, y)] += mx * my;
                break;
        }
        return detail::canonical(std::move(out));
    }

    /// {pi_1} for SU(2) and T x| Z2, {1} for SO(3), {+-e_i} for tori, {s x 1} u {1 x s} for products.
    LabelSet default_generators() const {
        std::set<IrrepLabel> s;
        switch (family_) {
            case Family::torus:
                for (int i = 0; i < rank_; ++i)
                    for (int sgn : {1, -1}) {
                        std::vector<int> mu(rank_, 0);
                        mu[i] = sgn;
                        s.insert(IrrepLabel::torus(mu));
                    }
                break;
            case Family::su2: s.insert(IrrepLabel::su2(1)); break;
            case Family::so3: s.insert(IrrepLabel::so3(1)); break;
            case Family::semidirect: s.insert(IrrepLabel::semidirect_twodim(1)); break;
            case Family::product:
                for (const auto& x : left().default_generators()) s.insert(IrrepLabel::product(x, right().trivial()));
                for (const auto& y : right().default_generators()) s.insert(IrrepLabel::product(left().trivial(), y));
                break;
        }
        return {s.begin(), s.end()};
    }

    /// S^{(x)k}; S^{(x)0} = {trivial}.
    LabelSet tensor_power_support(const LabelSet& gens, int k, std::size_t cap = 2'000'000) const {
        if (k < 0) throw Error("tensor power must be nonnegative");
        if (k == 0) return {trivial()};
        if (gens.empty()) throw Error("generating set must be nonempty");
        auto table = word_table(gens);
        extend(*table, k, cap);
        std::lock_guard<std::mutex> lock(state_->mu);
        return table->layers[k];
    }

    /// Least k with a in S^{(x)k}; throws NotGenerated if no k <= max_steps works.
    int word_length(const IrrepLabel& a, const LabelSet& gens, int max_steps = 4096) const {
        require(a);
        if (a == trivial()) return 0;
        if (gens.empty()) throw NotGenerated("empty generating set cannot reach " + a.str(), 0);
        auto table = word_table(gens);
        {
            std::lock_guard<std::mutex> lock(state_->mu);
            if (auto it = table->first_seen.find(a); it != table->first_seen.end()) return it->second;
        }
        int k = 0;
        {
            std::lock_guard<std::mutex> lock(state_->mu);
            k = static_cast<int>(table->layers.size()) - 1;
        }
        while (k < max_steps) {
            ++k;
            extend(*table, k, 2'000'000);
            std::lock_guard<std::mutex> lock(state_->mu);
            if (auto it = table->first_seen.find(a); it != table->first_seen.end()) return it->second;
        }
        throw NotGenerated(a.str() + " not reached within " + std::to_string(max_steps) + " tensor steps", max_steps);
    }

    int word_length(const IrrepLabel& a) const { return word_length(a, default_generators()); }

    /// All labels with word length <= depth for the default generators, sorted.
    LabelSet labels_up_to(int depth) const {
        const LabelSet gens = default_generators();
        auto table = word_table(gens);
        extend(*table, depth, 2'000'000);
        std::set<IrrepLabel> ball;
        std::lock_guard<std::mutex> lock(state_->mu);
        for (int k = 0; k <= depth; ++k) ball.insert(table->layers[k].begin(), table->layers[k].end());
        return {ball.begin(), ball.end()};
    }

    /// Representation matrix pi(theta) at a point of G or G_C.
    Matrix rep(const IrrepLabel& a, const PointData& p) const {
        require(a);
        check_point(p);
        switch (family_) {
            case Family::torus: {
                cplx v = 1.0;
                for (int i = 0; i < rank_; ++i) v *= std::pow(p.z[i], a.weights()[i]);
                return Matrix::Constant(1, 1, v);
            }
            case Family::su2: return su2::rep(a.index(), p.m);
            case Family::so3: return su2::rep(2 * a.index(), p.m);
            case Family::semidirect: {
                if (a.kind() == SemidirectKind::trivial) return Matrix::Identity(1, 1);
                if (a.kind() == SemidirectKind::sign) return Matrix::Constant(1, 1, double(p.sign));
                const int n = a.index();
                Matrix out = Matrix::Zero(2, 2);
                const cplx zn = std::pow(p.w, n);
                if (p.sign == 1) {
                    out(0, 0) = zn;
                    out(1, 1) = 1.0 / zn;
                } else {
                    out(0, 1) = zn;
                    out(1, 0) = 1.0 / zn;
                }
                return out;
            }
            case Family::product: return linalg::kron(left().rep(a.left(), p.left()), right().rep(a.right(), p.right()));
        }
        return {};
    }

    Matrix rep(const IrrepLabel& a, const GroupPoint& s) const { return rep(a, s.data()); }
    Matrix rep(const IrrepLabel& a, const SpectrumPoint& t) const { return rep(a, t.data()); }

    cplx character(const IrrepLabel& a, const PointData& p) const {
        require(a);
        check_point(p);
        switch (family_) {
            case Family::su2: return su2::character(a.index(), p.m);
            case Family::so3: return su2::character(2 * a.index(), p.m);
            case Family::semidirect:
                if (a.kind() == SemidirectKind::twodim) {
                    if (p.sign == -1) return 0.0;
                    const cplx zn = std::pow(p.w, a.index());
                    return zn + 1.0 / zn;
                }
                return rep(a, p)(0, 0);
            case Family::product: return left().character(a.left(), p.left()) * right().character(a.right(), p.right());
            default: return rep(a, p).trace();
        }
    }

    /// d pi(X) for X in the complexified Lie algebra.
    Matrix lie_rep(const IrrepLabel& a, const LieElement& x) const {
        require(a);
        if (x.family != family_) throw FamilyMismatch("Lie element does not belong to " + name());
        const cplx i(0, 1);
        switch (family_) {
            case Family::torus: {
                if (static_cast<int>(x.x.size()) != rank_) throw FamilyMismatch("torus Lie element rank mismatch");
                cplx v = 0.0;
                for (int k = 0; k < rank_; ++k) v += double(a.weights()[k]) * x.x[k];
                return Matrix::Constant(1, 1, i * v);
            }
            case Family::su2: return su2::lie_rep(a.index(), x.m);
            case Family::so3: return su2::lie_rep(2 * a.index(), x.m);
            case Family::semidirect: {
                if (a.kind() != SemidirectKind::twodim) return Matrix::Zero(1, 1);
                Matrix out = Matrix::Zero(2, 2);
                out(0, 0) = i * double(a.index()) * x.s;
                out(1, 1) = -out(0, 0);
                return out;
            }
            case Family::product: {
                const Matrix l = left().lie_rep(a.left(), x.parts->first);
                const Matrix r = right().lie_rep(a.right(), x.parts->second);
                return linalg::kron(l, Matrix::Identity(r.rows(), r.cols())) +
                       linalg::kron(Matrix::Identity(l.rows(), l.cols()), r);
            }
        }
        return {};
    }

    /// Unitary J with conj(pi(s)) = J pi'(s) J* on G, where pi' = conjugate(pi).
    Matrix conjugation_intertwiner(const IrrepLabel& a) const {
        require(a);
        switch (family_) {
            case Family::torus: return Matrix::Identity(1, 1);
            case Family::su2: return su2::conjugation_intertwiner(a.index());
            case Family::so3: return su2::conjugation_intertwiner(2 * a.index());
            case Family::semidirect: {
                if (a.kind() != SemidirectKind::twodim) return Matrix::Identity(1, 1);
                Matrix f = Matrix::Zero(2, 2);
                f(0, 1) = f(1, 0) = 1.0;
                return f;
            }
            case Family::product:
                return linalg::kron(left().conjugation_intertwiner(a.left()), right().conjugation_intertwiner(a.right()));
        }
        return {};
    }

    /// Isometries onto the irreducible summands of a (x) b, cached per pair.
    std::shared_ptr<const IntertwinerSet> intertwiners(const IrrepLabel& a, const IrrepLabel& b) const {
        require(a);
        require(b);
        const auto key = std::make_pair(a.str(), b.str());
        {
            std::lock_guard<std::mutex> lock(state_->mu);
            if (auto it = state_->intertwiners.find(key); it != state_->intertwiners.end()) return it->second;
        }
        auto set = std::make_shared<IntertwinerSet>(IntertwinerSet{a, b, build_intertwiners(a, b)});
        std::lock_guard<std::mutex> lock(state_->mu);
        return state_->intertwiners.emplace(key, std::move(set)).first->second;
    }

    /// Parses the short label forms: "t:(3,-2)" (or "t:3" on a circle), "pi:3", "so3:2",
    /// "triv", "sgn", "pi:2", and products "a×b" / "a*b".
    IrrepLabel parse_label(const std::string& text) const {
        const std::string s = detail::strip_parens(text);
        IrrepLabel out = IrrepLabel::su2(0);
        switch (family_) {
            case Family::torus: {
                if (s.rfind("t:", 0) != 0) throw ParseError("torus label must look like t:(a,b,...): " + text);
                std::string body = detail::strip_parens(s.substr(2));
                std::vector<int> mu;
                std::size_t start = 0;
                while (true) {
                    const std::size_t comma = body.find(',', start);
                    mu.push_back(detail::parse_int(body.substr(start, comma - start), "torus label"));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                out = IrrepLabel::torus(mu);
                break;
            }
            case Family::su2: {
                if (s.rfind("pi:", 0) != 0) throw ParseError("su2 label must look like pi:n: " + text);
                const int n = detail::parse_int(s.substr(3), "su2 label");
                if (n < 0) throw ParseError("su2 label must be nonnegative: " + text);
                out = IrrepLabel::su2(n);
                break;
            }
            case Family::so3: {
                if (s.rfind("so3:", 0) != 0) throw ParseError("so3 label must look like so3:l: " + text);
                const int l = detail::parse_int(s.substr(4), "so3 label");
                if (l < 0) throw ParseError("so3 label must be nonnegative: " + text);
                out = IrrepLabel::so3(l);
                break;
            }
            case Family::semidirect: {
                if (s == "triv" || s == "1") out = IrrepLabel::semidirect_trivial();
                else if (s == "sgn") out = IrrepLabel::semidirect_sign();
                else if (s.rfind("pi:", 0) == 0) {
                    const int m = detail::parse_int(s.substr(3), "semidirect label");
                    if (m < 1) throw ParseError("two-dimensional label needs m >= 1: " + text);
                    out = IrrepLabel::semidirect_twodim(m);
                } else {
                    throw ParseError("semidirect label must be triv, sgn or pi:m: " + text);
                }
                break;
            }
            case Family::product: {
                std::string l, r;
                if (!detail::split_product(s, l, r)) throw ParseError("product label must look like a×b: " + text);
                out = IrrepLabel::product(left().parse_label(l), right().parse_label(r));
                break;
            }
        }
        require(out);
        return out;
    }

private:
    explicit GroupDual(Family f) : family_(f), state_(std::make_shared<detail::DualState>()) {}

    void check_point(const PointData& p) const {
        if (p.family != family_) throw FamilyMismatch("point does not belong to " + name());
        if (family_ == Family::torus && static_cast<int>(p.z.size()) != rank_)
            throw FamilyMismatch("torus point rank mismatch");
    }

    Fusion fuse_semidirect(const IrrepLabel& a, const IrrepLabel& b) const {
        using K = SemidirectKind;
        std::map<IrrepLabel, int> out;
        if (a.kind() == K::trivial) out[b] = 1;
        else if (b.kind() == K::trivial) out[a] = 1;
        else if (a.kind() == K::sign && b.kind() == K::sign) out[IrrepLabel::semidirect_trivial()] = 1;
        else if (a.kind() == K::sign) out[b] = 1;
        else if (b.kind() == K::sign) out[a] = 1;
        else {
            const int n = a.index(), m = b.index();
            out[IrrepLabel::semidirect_twodim(n + m)] = 1;
            if (n != m) {
                out[IrrepLabel::semidirect_twodim(std::abs(n - m))] = 1;
            } else {
                // chi_n^2 vanishes off the identity component, so the complement is 1 + sgn
                out[IrrepLabel::semidirect_trivial()] = 1;
                out[IrrepLabel::semidirect_sign()] = 1;
            }
        }
        return detail::canonical(std::move(out));
    }

    std::vector<Intertwiner> build_intertwiners(const IrrepLabel& a, const IrrepLabel& b) const {
        std::vector<Intertwiner> maps;
        switch (family_) {
            case Family::torus:
                for (const auto& [s, m] : fuse(a, b)) maps.push_back({s, Matrix::Identity(1, 1)});
                break;
            case Family::su2:
                for (const auto& [s, m] : fuse(a, b))
                    maps.push_back({s, su2::cg_isometry(a.index(), b.index(), s.index())});
                break;
            case Family::so3:
                for (const auto& [s, m] : fuse(a, b))
                    maps.push_back({s, su2::cg_isometry(2 * a.index(), 2 * b.index(), 2 * s.index())});
                break;
            case Family::semidirect: maps = semidirect_intertwiners(a, b); break;
            case Family::product: maps = product_intertwiners(a, b); break;
        }
        const int da = dim(a), db = dim(b);
        for (const auto& it : maps) {
            const Matrix gram = it.v.adjoint() * it.v;
            if (it.v.rows() != da * db || linalg::max_abs(gram - Matrix::Identity(gram.rows(), gram.cols())) > 1e-10)
                throw IntertwinerSynthesis("intertwiner onto " + it.sigma.str() + " is not an isometry");
        }
        return maps;
    }

    std::vector<Intertwiner> semidirect_intertwiners(const IrrepLabel& a, const IrrepLabel& b) const {
        using K = SemidirectKind;
        const int da = dim(a), db = dim(b);
        std::vector<Intertwiner> maps;
        if (a.kind() == K::trivial || b.kind() == K::trivial) {
            maps.push_back({a.kind() == K::trivial ? b : a, Matrix::Identity(da * db, da * db)});
            return maps;
        }
        if (a.kind() == K::sign && b.kind() == K::sign) {
            maps.push_back({IrrepLabel::semidirect_trivial(), Matrix::Identity(1, 1)});
            return maps;
        }
        if (a.kind() == K::sign || b.kind() == K::sign) {
            Matrix d = Matrix::Zero(2, 2);
            d(0, 0) = 1.0;
            d(1, 1) = -1.0;
            maps.push_back({a.kind() == K::sign ? b : a, d});
            return maps;
        }
        const int n = a.index(), m = b.index();
        const double r = std::sqrt(0.5);
        // tensor basis order: ++, +-, -+, --
        Matrix top = Matrix::Zero(4, 2);
        top(0, 0) = 1.0;
        top(3, 1) = 1.0;
        maps.push_back({IrrepLabel::semidirect_twodim(n + m), top});
        if (n != m) {
            Matrix low = Matrix::Zero(4, 2);
            if (n > m) {
                low(1, 0) = 1.0;
                low(2, 1) = 1.0;
            } else {
                low(2, 0) = 1.0;
                low(1, 1) = 1.0;
            }
            maps.push_back({IrrepLabel::semidirect_twodim(std::abs(n - m)), low});
        } else {
            Matrix triv = Matrix::Zero(4, 1), sgn = Matrix::Zero(4, 1);
            triv(1, 0) = r;
            triv(2, 0) = r;
            sgn(1, 0) = r;
            sgn(2, 0) = -r;
            maps.push_back({IrrepLabel::semidirect_trivial(), triv});
            maps.push_back({IrrepLabel::semidirect_sign(), sgn});
        }
        std::sort(maps.begin(), maps.end(), [](const Intertwiner& x, const Intertwiner& y) { return x.sigma < y.sigma; });
        return maps;
    }

    // (A(x)B)(x)(A'(x)B') is a row permutation of (A(x)A')(x)(B(x)B').
    std::vector<Intertwiner> product_intertwiners(const IrrepLabel& a, const IrrepLabel& b) const {
        const GroupDual &gl = left(), &gr = right();
        const int dA = gl.dim(a.left()), dB = gr.dim(a.right());
        const int dA2 = gl.dim(b.left()), dB2 = gr.dim(b.right());
        const auto left_set = gl.intertwiners(a.left(), b.left());
        const auto right_set = gr.intertwiners(a.right(), b.right());
        std::vector<Intertwiner> maps;
        for (const auto& x : left_set->maps)
            for (const auto& y : right_set->maps) {
                const Matrix k = linalg::kron(x.v, y.v);
                Matrix v(k.rows(), k.cols());
                for (int i = 0; i < dA; ++i)
                    for (int j = 0; j < dB; ++j)
                        for (int i2 = 0; i2 < dA2; ++i2)
                            for (int j2 = 0; j2 < dB2; ++j2) {
                                const int dst = (i * dB + j) * (dA2 * dB2) + (i2 * dB2 + j2);
                                const int src = (i * dA2 + i2) * (dB * dB2) + (j * dB2 + j2);
                                v.row(dst) = k.row(src);
                            }
                maps.push_back({IrrepLabel::product(x.sigma, y.sigma), v});
            }
        std::stable_sort(maps.begin(), maps.end(),
                         [](const Intertwiner& x, const Intertwiner& y) { return x.sigma < y.sigma; });
        return maps;
    }

    std::shared_ptr<detail::WordLengthTable> word_table(const LabelSet& gens) const {
        for (const auto& g : gens) require(g);
        std::set<IrrepLabel> sorted(gens.begin(), gens.end());
        LabelSet canon(sorted.begin(), sorted.end());
        const std::string key = detail::key_of(canon);
        std::lock_guard<std::mutex> lock(state_->mu);
        auto& slot = state_->word_tables[key];
        if (!slot) {
            slot = std::make_shared<detail::WordLengthTable>();
            slot->generators = canon;
            slot->layers.push_back({trivial()});
            slot->first_seen[trivial()] = 0;
        }
        return slot;
    }

    void extend(detail::WordLengthTable& t, int k, std::size_t cap) const {
        while (true) {
            LabelSet last;
            int have = 0;
            {
                std::lock_guard<std::mutex> lock(state_->mu);
                have = static_cast<int>(t.layers.size()) - 1;
                if (have >= k) return;
                last = t.layers.back();
            }
            std::set<IrrepLabel> next;
            for (const auto& x : last)
                for (const auto& s : t.generators)
                    for (const auto& [y, m] : fuse(x, s)) next.insert(y);
            if (next.size() > cap)
                throw CapExceeded("tensor power support exceeds cap at step " + std::to_string(have + 1), cap);
            std::lock_guard<std::mutex> lock(state_->mu);
            if (static_cast<int>(t.layers.size()) - 1 != have) continue;  // another thread extended it
            for (const auto& y : next) t.first_seen.emplace(y, have + 1);
            t.layers.emplace_back(next.begin(), next.end());
        }
    }

    Family family_;
    int rank_ = 0;
    std::shared_ptr<const std::pair<GroupDual, GroupDual>> parts_;
    std::shared_ptr<detail::DualState> state_;
};

/// Restriction pi_n|_T = {chi_{n-2j} : j = 0..n} for SU(2) over its diagonal torus.
inline Fusion branch(const GroupDual& g, const GroupDual& h, const IrrepLabel& a) {
    if (g.family() != Family::su2 || !(h == GroupDual::torus(1)))
        throw UnsupportedBranching("branching is only available for su2 over torus:1");
    g.require(a);
    std::map<IrrepLabel, int> out;
    for (int j = 0; j <= a.index(); ++j) out[IrrepLabel::torus({a.index() - 2 * j})] += 1;
    return detail::canonical(std::move(out));
}

/// SO(3) label m pulled back through SU(2) -> SO(3): pi_{2m}.
inline IrrepLabel quotient_lift(const GroupDual& g, const GroupDual& q, const IrrepLabel& m) {
    if (g.family() != Family::su2 || q.family() != Family::so3)
        throw UnsupportedBranching("quotient lift is only available for su2 onto so3");
    q.require(m);
    return IrrepLabel::su2(2 * m.index());
}

}  // namespace bfw
