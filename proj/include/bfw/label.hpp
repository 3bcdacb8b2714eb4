#pragma once

#include "bfw/errors.hpp"

#include <compare>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace bfw {

enum class Family { torus, su2, so3, semidirect, product };

enum class SemidirectKind { trivial = 0, sign = 1, twodim = 2 };

/// Label of an irreducible representation.
///
/// torus: character mu in Z^n; su2: spin pi_n (dimension n+1); so3: l (dimension 2l+1);
/// semidirect (T x| Z2): trivial, sign, or the two-dimensional pi_m (m >= 1);
/// product: a pair of labels from two duals.
class IrrepLabel {
public:
    static IrrepLabel torus(std::vector<int> mu) {
        IrrepLabel l(Family::torus);
        l.weights_ = std::move(mu);
        return l;
    }
    static IrrepLabel su2(int n) {
        if (n < 0) throw Error("su2 label must be nonnegative");
        IrrepLabel l(Family::su2);
        l.index_ = n;
        return l;
    }
    static IrrepLabel so3(int l_) {
        if (l_ < 0) throw Error("so3 label must be nonnegative");
        IrrepLabel l(Family::so3);
        l.index_ = l_;
        return l;
    }
    static IrrepLabel semidirect_trivial() { return IrrepLabel(Family::semidirect); }
    static IrrepLabel semidirect_sign() {
        IrrepLabel l(Family::semidirect);
        l.kind_ = SemidirectKind::sign;
        return l;
    }
    static IrrepLabel semidirect_twodim(int m) {
        if (m < 1) throw Error("two-dimensional semidirect label needs m >= 1");
        IrrepLabel l(Family::semidirect);
        l.kind_ = SemidirectKind::twodim;
        l.index_ = m;
        return l;
    }
    static IrrepLabel product(IrrepLabel left, IrrepLabel right) {
        IrrepLabel l(Family::product);
        l.parts_ = std::make_shared<const std::pair<IrrepLabel, IrrepLabel>>(std::move(left), std::move(right));
        return l;
    }

    Family family() const { return family_; }
    const std::vector<int>& weights() const { return weights_; }
    int index() const { return index_; }
    SemidirectKind kind() const { return kind_; }
    const IrrepLabel& left() const { return parts_->first; }
    const IrrepLabel& right() const { return parts_->second; }

    std::strong_ordering operator<=>(const IrrepLabel& o) const {
        if (auto c = family_ <=> o.family_; c != 0) return c;
        switch (family_) {
            case Family::torus: {
                if (auto c = weights_.size() <=> o.weights_.size(); c != 0) return c;
                for (std::size_t i = 0; i < weights_.size(); ++i)
                    if (auto c = weights_[i] <=> o.weights_[i]; c != 0) return c;
                return std::strong_ordering::equal;
            }
            case Family::su2:
            case Family::so3: return index_ <=> o.index_;
            case Family::semidirect:
                if (auto c = static_cast<int>(kind_) <=> static_cast<int>(o.kind_); c != 0) return c;
                return index_ <=> o.index_;
            case Family::product:
                if (auto c = left() <=> o.left(); c != 0) return c;
                return right() <=> o.right();
        }
        return std::strong_ordering::equal;
    }
    bool operator==(const IrrepLabel& o) const { return (*this <=> o) == 0; }

    /// Short form: "t:(3,-2)", "pi:3", "so3:2", "triv", "sgn", "pi:2", "a×b".
    std::string str() const {
        switch (family_) {
            case Family::torus: {
                std::string s = "t:(";
                for (std::size_t i = 0; i < weights_.size(); ++i) {
                    if (i) s += ',';
                    s += std::to_string(weights_[i]);
                }
                return s + ")";
            }
            case Family::su2: return "pi:" + std::to_string(index_);
            case Family::so3: return "so3:" + std::to_string(index_);
            case Family::semidirect:
                if (kind_ == SemidirectKind::trivial) return "triv";
                if (kind_ == SemidirectKind::sign) return "sgn";
                return "pi:" + std::to_string(index_);
            case Family::product: {
                // parenthesize nested products so the string stays unambiguous
                auto side = [](const IrrepLabel& l) {
                    return l.family() == Family::product ? "(" + l.str() + ")" : l.str();
                };
                return side(left()) + "×" + side(right());
            }
        }
        return {};
    }

private:
    explicit IrrepLabel(Family f) : family_(f) {}

    Family family_;
    std::vector<int> weights_;
    int index_ = 0;
    SemidirectKind kind_ = SemidirectKind::trivial;
    std::shared_ptr<const std::pair<IrrepLabel, IrrepLabel>> parts_;
};

inline std::ostream& operator<<(std::ostream& os, const IrrepLabel& l) { return os << l.str(); }

/// Canonically sorted multiset of (label, multiplicity).
using Fusion = std::vector<std::pair<IrrepLabel, int>>;

}  // namespace bfw
