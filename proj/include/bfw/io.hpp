#pragma once

// JSON forms of elements and spectrum points.
//
// element: {"group":"su2","terms":[{"irrep":"pi:1","matrix":[[[re,im],...],...]}]}
// point:   {"group":"su2","euler":[a,b,c],"lambda":2.0}   (or "matrix":[[z,z],[z,z]] in SL(2,C))
//          {"group":"torus:2","z":[[re,im],[re,im]]}
//          {"group":"semidirect","z":[re,im],"sign":1}
//          {"group":"su2×torus:1","left":{...},"right":{...}}

#include "bfw/algebra.hpp"
#include "bfw/spectrum.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace bfw::io {

using nlohmann::json;

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ParseError("complex numbers are [re, im]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline json element_to_json(const OperatorField& u) {
    json terms = json::array();
    for (const auto& [l, m] : u.terms()) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
            rows.push_back(row);
        }
        terms.push_back({{"irrep", l.str()}, {"matrix", rows}});
    }
    return {{"group", u.dual().name()}, {"terms", terms}};
}

inline OperatorField element_from_json(const json& j) {
    try {
        const GroupDual g = GroupDual::parse(j.at("group").get<std::string>());
        OperatorField u(g);
        for (const auto& t : j.at("terms")) {
            const IrrepLabel l = g.parse_label(t.at("irrep").get<std::string>());
            const auto& rows = t.at("matrix");
            const int d = g.dim(l);
            if (!rows.is_array() || int(rows.size()) != d) throw ParseError("matrix at " + l.str() + " must have " + std::to_string(d) + " rows");
            Matrix m(d, d);
            for (int i = 0; i < d; ++i) {
                if (!rows[i].is_array() || int(rows[i].size()) != d) throw ParseError("matrix row length mismatch at " + l.str());
                for (int k = 0; k < d; ++k) m(i, k) = complex_from_json(rows[i][k]);
            }
            u.add(l, m);
        }
        return u;
    } catch (const json::exception& e) {
        throw ParseError(std::string("element json: ") + e.what());
    }
}

inline json point_to_json(const GroupDual& g, const PointData& p) {
    switch (g.family()) {
        case Family::torus: {
            json z = json::array();
            for (auto v : p.z) z.push_back(complex_to_json(v));
            return {{"group", g.name()}, {"z", z}};
        }
        case Family::su2:
        case Family::so3: {
            // s diag(lambda, 1/lambda) when the positive part is diagonal, the raw matrix otherwise
            const double st = su2::cartan(p.m).stretch;
            for (double lambda : {st, 1.0 / st}) {
                Matrix2 d = Matrix2::Zero();
                d(0, 0) = 1.0 / lambda;
                d(1, 1) = lambda;
                const Matrix2 s = p.m * d;
                if (su2::is_unitary(s, 1e-12) && std::abs(s.determinant() - 1.0) <= 1e-12) {
                    const auto e = su2::to_euler(s);
                    return {{"group", g.name()}, {"euler", {e[0], e[1], e[2]}}, {"lambda", lambda}};
                }
            }
            json rows = json::array();
            for (int i = 0; i < 2; ++i) rows.push_back({complex_to_json(p.m(i, 0)), complex_to_json(p.m(i, 1))});
            return {{"group", g.name()}, {"matrix", rows}};
        }
        case Family::semidirect: return {{"group", g.name()}, {"z", complex_to_json(p.w)}, {"sign", p.sign}};
        case Family::product:
            return {{"group", g.name()}, {"left", point_to_json(g.left(), p.left())}, {"right", point_to_json(g.right(), p.right())}};
    }
    return {};
}

inline PointData point_from_json(const GroupDual& g, const json& j) {
    try {
        if (j.contains("group") && !(GroupDual::parse(j.at("group").get<std::string>()) == g))
            throw FamilyMismatch("point belongs to " + j.at("group").get<std::string>() + ", expected " + g.name());
        switch (g.family()) {
            case Family::torus: {
                std::vector<cplx> z;
                for (const auto& v : j.at("z")) z.push_back(complex_from_json(v));
                if (int(z.size()) != g.rank()) throw ParseError("torus point needs " + std::to_string(g.rank()) + " coordinates");
                return SpectrumPoint::torus(z).data();
            }
            case Family::su2:
            case Family::so3: {
                if (j.contains("matrix")) {
                    Matrix2 m;
                    for (int i = 0; i < 2; ++i)
                        for (int k = 0; k < 2; ++k) m(i, k) = complex_from_json(j.at("matrix").at(i).at(k));
                    return SpectrumPoint::sl2(m, g.family()).data();
                }
                const auto& e = j.at("euler");
                const GroupPoint s = GroupPoint::su2_euler(e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>());
                PointData p = SpectrumPoint::su2(s, j.value("lambda", 1.0)).data();
                p.family = g.family();
                return p;
            }
            case Family::semidirect: return SpectrumPoint::semidirect(complex_from_json(j.at("z")), j.value("sign", 1)).data();
            case Family::product:
                return PointData::make_product(point_from_json(g.left(), j.at("left")), point_from_json(g.right(), j.at("right")));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("point json: ") + e.what());
    }
    return {};
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

}  // namespace bfw::io
