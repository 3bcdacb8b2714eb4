#pragma once

#include "bfw/errors.hpp"
#include "bfw/label.hpp"
#include "bfw/linalg.hpp"
#include "bfw/su2.hpp"

#include <memory>
#include <vector>

namespace bfw {

/// Element of the complexification G_C of a supported group.
///
/// torus: z in (C\{0})^n; su2/so3: a 2x2 matrix in SL(2,C) (so3 via a lift);
/// semidirect: (z, sign) acting as pi_m -> diag(z^m, z^-m) F^{(1-sign)/2};
/// product: a pair. Unimodular data is an honest group element.
struct PointData {
    Family family = Family::su2;
    std::vector<cplx> z;
    Matrix2 m = Matrix2::Identity();
    cplx w = 1.0;
    int sign = 1;
    std::shared_ptr<const std::pair<PointData, PointData>> parts;

    const PointData& left() const { return parts->first; }
    const PointData& right() const { return parts->second; }

    static PointData make_product(PointData a, PointData b) {
        PointData p;
        p.family = Family::product;
        p.parts = std::make_shared<const std::pair<PointData, PointData>>(std::move(a), std::move(b));
        return p;
    }

    PointData inverse() const {
        PointData p = *this;
        switch (family) {
            case Family::torus:
                for (auto& v : p.z) v = 1.0 / v;
                break;
            case Family::su2:
            case Family::so3: p.m = m.inverse(); break;
            case Family::semidirect:
                // (s,a)^{-1} = (s^{-a}, a)
                p.w = sign == 1 ? 1.0 / w : w;
                break;
            case Family::product: p = make_product(left().inverse(), right().inverse()); break;
        }
        return p;
    }

    PointData compose(const PointData& o) const {
        if (family != o.family) throw FamilyMismatch("cannot multiply points of different groups");
        PointData p = *this;
        switch (family) {
            case Family::torus:
                if (z.size() != o.z.size()) throw FamilyMismatch("torus rank mismatch");
                for (std::size_t i = 0; i < z.size(); ++i) p.z[i] = z[i] * o.z[i];
                break;
            case Family::su2:
            case Family::so3: p.m = m * o.m; break;
            case Family::semidirect:
                // (s,a)(t,b) = (s t^a, ab)
                p.w = w * (sign == 1 ? o.w : 1.0 / o.w);
                p.sign = sign * o.sign;
                break;
            case Family::product: p = make_product(left().compose(o.left()), right().compose(o.right())); break;
        }
        return p;
    }

    bool unimodular(double tol = 1e-12) const {
        switch (family) {
            case Family::torus:
                for (auto v : z)
                    if (std::abs(std::abs(v) - 1.0) > tol) return false;
                return true;
            case Family::su2:
            case Family::so3: return su2::is_unitary(m, tol) && std::abs(m.determinant() - 1.0) <= tol;
            case Family::semidirect: return std::abs(std::abs(w) - 1.0) <= tol;
            case Family::product: return left().unimodular(tol) && right().unimodular(tol);
        }
        return false;
    }
};

/// A point of the compact group itself.
class GroupPoint {
public:
    static GroupPoint torus(const std::vector<double>& angles) {
        PointData d;
        d.family = Family::torus;
        for (double a : angles) d.z.push_back(std::polar(1.0, a));
        return GroupPoint(std::move(d));
    }
    /// ZYZ Euler angles.
    static GroupPoint su2_euler(double a, double b, double c) { return su2(su2::from_euler(a, b, c)); }
    static GroupPoint su2(const Matrix2& u) {
        PointData d;
        d.family = Family::su2;
        d.m = u;
        if (!d.unimodular(1e-10)) throw Error("su2 point must be unitary with determinant 1");
        return GroupPoint(std::move(d));
    }
    static GroupPoint so3(const Matrix2& lift) {
        GroupPoint p = su2(lift);
        p.data_.family = Family::so3;
        return p;
    }
    static GroupPoint semidirect(double angle, int sign) {
        if (sign != 1 && sign != -1) throw Error("semidirect sign must be +1 or -1");
        PointData d;
        d.family = Family::semidirect;
        d.w = std::polar(1.0, angle);
        d.sign = sign;
        return GroupPoint(std::move(d));
    }
    static GroupPoint product(const GroupPoint& a, const GroupPoint& b) {
        return GroupPoint(PointData::make_product(a.data_, b.data_));
    }
    static GroupPoint from_data(PointData d) {
        if (!d.unimodular(1e-10)) throw Error("group point data is not unimodular");
        return GroupPoint(std::move(d));
    }

    const PointData& data() const { return data_; }
    GroupPoint inverse() const { return GroupPoint(data_.inverse()); }
    GroupPoint operator*(const GroupPoint& o) const { return GroupPoint(data_.compose(o.data_)); }

private:
    explicit GroupPoint(PointData d) : data_(std::move(d)) {}
    PointData data_;
};

/// A point of G_C, stored as s * |theta| with s a group point.
class SpectrumPoint {
public:
    static SpectrumPoint from_group(const GroupPoint& s) { return SpectrumPoint(s.data()); }
    static SpectrumPoint torus(std::vector<cplx> z) {
        for (auto v : z)
            if (v == 0.0) throw Error("torus spectrum coordinates must be nonzero");
        PointData d;
        d.family = Family::torus;
        d.z = std::move(z);
        return SpectrumPoint(std::move(d));
    }
    /// theta = s diag(lambda, 1/lambda). lambda < 1 is accepted as is: it differs from 1/lambda
    /// by conjugation with the Weyl element, which leaves every operator norm unchanged.
    static SpectrumPoint su2(const GroupPoint& s, double lambda) {
        if (!(lambda > 0)) throw Error("lambda must be positive");
        Matrix2 d = Matrix2::Zero();
        d(0, 0) = lambda;
        d(1, 1) = 1.0 / lambda;
        PointData p = s.data();
        p.m = s.data().m * d;
        return SpectrumPoint(std::move(p));
    }
    static SpectrumPoint sl2(const Matrix2& g, Family family = Family::su2) {
        if (std::abs(g.determinant() - 1.0) > 1e-10) throw Error("SL(2,C) point must have determinant 1");
        PointData p;
        p.family = family;
        p.m = g;
        return SpectrumPoint(std::move(p));
    }
    static SpectrumPoint semidirect(cplx z, int sign) {
        if (z == 0.0) throw Error("semidirect spectrum coordinate must be nonzero");
        if (sign != 1 && sign != -1) throw Error("semidirect sign must be +1 or -1");
        PointData d;
        d.family = Family::semidirect;
        d.w = z;
        d.sign = sign;
        return SpectrumPoint(std::move(d));
    }
    static SpectrumPoint product(const SpectrumPoint& a, const SpectrumPoint& b) {
        return SpectrumPoint(PointData::make_product(a.data_, b.data_));
    }
    static SpectrumPoint from_data(PointData d) { return SpectrumPoint(std::move(d)); }

    const PointData& data() const { return data_; }
    SpectrumPoint inverse() const { return SpectrumPoint(data_.inverse()); }
    SpectrumPoint operator*(const SpectrumPoint& o) const { return SpectrumPoint(data_.compose(o.data_)); }
    bool in_group(double tol = 1e-12) const { return data_.unimodular(tol); }

private:
    explicit SpectrumPoint(PointData d) : data_(std::move(d)) {}
    PointData data_;
};

/// Element of the complexified Lie algebra (identity component).
///
/// torus: real coordinates x with d pi_mu(X) = i sum mu_i x_i; su2/so3: 2x2 traceless matrix;
/// semidirect: coordinate x with d pi_m(X) = diag(i m x, -i m x).
struct LieElement {
    Family family = Family::su2;
    std::vector<cplx> x;
    Matrix2 m = Matrix2::Zero();
    cplx s = 0.0;
    std::shared_ptr<const std::pair<LieElement, LieElement>> parts;

    static LieElement torus(std::vector<cplx> x) {
        LieElement e;
        e.family = Family::torus;
        e.x = std::move(x);
        return e;
    }
    static LieElement su2(const Matrix2& m) {
        LieElement e;
        e.family = Family::su2;
        e.m = m;
        return e;
    }
    static LieElement semidirect(cplx s) {
        LieElement e;
        e.family = Family::semidirect;
        e.s = s;
        return e;
    }
    static LieElement product(LieElement a, LieElement b) {
        LieElement e;
        e.family = Family::product;
        e.parts = std::make_shared<const std::pair<LieElement, LieElement>>(std::move(a), std::move(b));
        return e;
    }
};

}  // namespace bfw
