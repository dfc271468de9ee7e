#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "perfdel/polytope.hpp"
#include "perfdel/verify.hpp"

namespace perfdel {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "polytope.v1";

/// Signalled on malformed input files (maps to CLI exit code 4).
struct MalformedInput : std::runtime_error {
    explicit MalformedInput(const std::string& what) : std::runtime_error(what) {}
};

namespace json_detail {

inline Json rat_json(const Rat& r) { return r.str(); }

inline Rat rat_from(const Json& j) {
    if (!j.is_string()) throw MalformedInput("expected rational string");
    return Rat::parse(j.get<std::string>());
}

inline Json vec_json(const QVec& v) {
    Json a = Json::array();
    for (const auto& x : v.e) a.push_back(rat_json(x));
    return a;
}

inline QVec vec_from(const Json& j) {
    if (!j.is_array()) throw MalformedInput("expected vector array");
    QVec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v[i] = rat_from(j[i]);
    return v;
}

inline Json mat_json(const QMat& m) {
    Json rows = Json::array();
    for (size_t i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < m.cols; ++j) row.push_back(rat_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline QMat mat_from(const Json& j, size_t expect_rows = 0) {
    if (!j.is_array() || j.empty()) throw MalformedInput("expected matrix array");
    size_t rows = j.size(), cols = j[0].size();
    QMat m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw MalformedInput("ragged matrix");
        for (size_t c = 0; c < cols; ++c) m.at(i, c) = rat_from(j[i][c]);
    }
    if (expect_rows && rows != expect_rows) throw MalformedInput("matrix row count mismatch");
    return m;
}

}  // namespace json_detail

inline Json certificate_json(const Certificate& c) {
    Json j;
    switch (c.kind) {
        case Certificate::Kind::delaunay: j["kind"] = "delaunay"; break;
        case Certificate::Kind::perfect: j["kind"] = "perfect"; break;
        case Certificate::Kind::cross: j["kind"] = "cross"; break;
        case Certificate::Kind::diagram: j["kind"] = "diagram"; break;
    }
    j["verdict"] = c.verdict;
    if (!c.detail.empty()) j["detail"] = c.detail;
    if (c.witness_point) j["witness_point"] = json_detail::vec_json(*c.witness_point);
    if (c.witness_pair) {
        j["witness_pair"] = Json::array({json_detail::vec_json(c.witness_pair->first),
                                         json_detail::vec_json(c.witness_pair->second)});
    }
    if (c.nullity) j["nullity"] = *c.nullity;
    if (c.min_value) j["min_value"] = json_detail::rat_json(*c.min_value);
    if (c.minimizer_count) j["minimizer_count"] = *c.minimizer_count;
    if (c.line)
        j["line"] = Json::array(
            {json_detail::rat_json(c.line->first), json_detail::rat_json(c.line->second)});
    return j;
}

inline Json polytope_json(const PolytopeSpec& P, const std::vector<Certificate>& certs = {}) {
    using namespace json_detail;
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["ambient_dim"] = P.ambient_dim;
    Json verts = Json::array();
    for (const auto& v : P.vertices) verts.push_back(vec_json(v));
    j["vertices"] = std::move(verts);

    Json lat;
    Json gens = Json::array();
    for (size_t c = 0; c < P.coset.lattice.rank(); ++c)
        gens.push_back(vec_json(P.coset.lattice.basis.col(c)));
    lat["generators"] = std::move(gens);
    lat["scale"] = P.coset.lattice.scale.get_str();
    if (P.coset.parity) {
        lat["parity"] = Json{{"d", P.coset.parity->d},
                             {"k", P.coset.parity->k},
                             {"target", P.coset.parity_target}};
    } else {
        lat["parity"] = nullptr;
    }
    lat["shift"] = P.coset.shift ? Json(vec_json(*P.coset.shift)) : Json(nullptr);
    j["lattice"] = std::move(lat);

    j["form"] = P.form ? Json{{"gram", mat_json(P.form->gram)}} : Json(nullptr);
    j["center"] = P.center ? Json(vec_json(*P.center)) : Json(nullptr);
    j["radius2"] = P.radius2 ? Json(rat_json(*P.radius2)) : Json(nullptr);
    Json cj = Json::array();
    for (const auto& c : certs) cj.push_back(certificate_json(c));
    j["certificates"] = std::move(cj);
    return j;
}

inline PolytopeSpec polytope_from_json(const Json& j) {
    using namespace json_detail;
    try {
        if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_string())
            throw MalformedInput("missing schema_version");
        if (j["schema_version"].get<std::string>() != kSchemaVersion)
            throw MalformedInput("unsupported schema_version");
        PolytopeSpec P;
        P.ambient_dim = j.at("ambient_dim").get<size_t>();
        for (const auto& v : j.at("vertices")) {
            QVec q = vec_from(v);
            if (q.dim() != P.ambient_dim) throw MalformedInput("vertex dimension mismatch");
            P.vertices.push_back(std::move(q));
        }
        P.sort_vertices();

        const Json& lat = j.at("lattice");
        QMat basis(P.ambient_dim, lat.at("generators").size());
        for (size_t c = 0; c < lat.at("generators").size(); ++c) {
            QVec g = vec_from(lat.at("generators")[c]);
            if (g.dim() != P.ambient_dim) throw MalformedInput("generator dimension mismatch");
            basis.set_col(c, g);
        }
        LatticeBasis L(P.ambient_dim, std::move(basis));

        const Json& par = lat.at("parity");
        const Json& shift = lat.at("shift");
        if (!par.is_null()) {
            ParityFunctional pf(par.at("d").get<size_t>(), par.at("k").get<size_t>());
            P.coset = LatticeCoset::with_parity(std::move(L), pf, par.at("target").get<int>());
        } else if (!shift.is_null()) {
            P.coset = LatticeCoset::shifted(std::move(L), vec_from(shift));
        } else {
            P.coset = LatticeCoset::whole(std::move(L));
        }

        if (!j.at("form").is_null()) {
            QMat gram = mat_from(j.at("form").at("gram"), P.ambient_dim);
            if (gram.cols != P.ambient_dim) throw MalformedInput("gram shape mismatch");
            P.form = QForm(std::move(gram));
        }
        if (!j.at("center").is_null()) P.center = vec_from(j.at("center"));
        if (!j.at("radius2").is_null()) P.radius2 = rat_from(j.at("radius2"));
        P.validate();
        return P;
    } catch (const Json::exception& e) {
        throw MalformedInput(std::string("malformed polytope json: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw MalformedInput(std::string("malformed polytope json: ") + e.what());
    }
}

inline void write_polytope_file(const std::string& path, const PolytopeSpec& P,
                                const std::vector<Certificate>& certs = {}) {
    std::ofstream f(path);
    if (!f) throw MalformedInput("cannot open output file: " + path);
    f << polytope_json(P, certs).dump(2) << "\n";
    if (!f) throw MalformedInput("write failed: " + path);
}

inline PolytopeSpec read_polytope_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw MalformedInput("cannot open input file: " + path);
    Json j;
    try {
        f >> j;
    } catch (const Json::exception& e) {
        throw MalformedInput(std::string("json parse error: ") + e.what());
    }
    return polytope_from_json(j);
}

}  // namespace perfdel
