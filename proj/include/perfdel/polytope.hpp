#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "perfdel/lattice.hpp"
#include "perfdel/qform.hpp"

namespace perfdel {

/// A lattice polytope with its owning coset and, when known, the certifying
/// quadratic data: eval_form(form, v - center) = radius2 for every vertex.
struct PolytopeSpec {
    size_t ambient_dim = 0;
    std::vector<QVec> vertices;  // sorted lexicographically, distinct
    LatticeCoset coset;
    std::optional<QForm> form;
    std::optional<QVec> center;
    std::optional<Rat> radius2;

    void sort_vertices() {
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    }

    /// Checks the structural invariants; throws on violation.
    void validate() const {
        for (const auto& v : vertices) {
            if (v.dim() != ambient_dim) throw std::invalid_argument("PolytopeSpec: bad vertex dim");
            if (!coset.contains(v))
                throw std::invalid_argument("PolytopeSpec: vertex outside coset: " + to_string(v));
        }
        if (form && center && radius2) {
            for (const auto& v : vertices) {
                if (eval_form(*form, v - *center) != *radius2)
                    throw std::invalid_argument("PolytopeSpec: vertex off the ellipsoid: " +
                                                to_string(v));
            }
        }
    }
};

/// One representative 2v per antipodal vertex pair {v, -v}; requires a
/// centrally symmetric vertex set with center 0. Representatives use the
/// lexicographically larger member of each pair; output sorted.
inline std::vector<QVec> diagonals_cross(const PolytopeSpec& P) {
    if (P.center && !P.center->is_zero())
        throw std::invalid_argument("diagonals_cross: center is not the origin");
    std::vector<QVec> reps;
    for (const auto& v : P.vertices) {
        QVec neg = -v;
        if (!std::binary_search(P.vertices.begin(), P.vertices.end(), neg))
            throw std::invalid_argument("diagonals_cross: vertex set not centrally symmetric");
        if (neg < v) reps.push_back(Rat(2) * v);
    }
    std::sort(reps.begin(), reps.end());
    if (2 * reps.size() != P.vertices.size())
        throw std::invalid_argument("diagonals_cross: antipodal pairing failed");
    return reps;
}

/// Row of quadratic monomials (x_i x_j for i <= j, then x_i, then 1)
/// evaluated at v: the coefficient layout used for the perfection rank test.
inline QVec quadratic_monomial_row(const QVec& v) {
    const size_t d = v.dim();
    QVec row(d * (d + 1) / 2 + d + 1);
    size_t idx = 0;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = i; j < d; ++j) row[idx++] = v[i] * v[j];
    for (size_t i = 0; i < d; ++i) row[idx++] = v[i];
    row[idx] = 1;
    return row;
}

/// Interprets a monomial-coefficient vector back as a quadratic function.
inline QFunc func_from_monomial_coeffs(const QVec& c, size_t d) {
    QMat gram(d, d);
    size_t idx = 0;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = i; j < d; ++j) {
            if (i == j) {
                gram.at(i, i) = c[idx];
            } else {
                gram.at(i, j) = c[idx] / Rat(2);
                gram.at(j, i) = gram.at(i, j);
            }
            ++idx;
        }
    QVec lin(d);
    for (size_t i = 0; i < d; ++i) lin[i] = c[idx++];
    return QFunc(QForm(std::move(gram)), std::move(lin), c[idx]);
}

struct VanishingSpace {
    size_t rank = 0;
    size_t nullity = 0;
    std::vector<QVec> basis;  // monomial-coefficient vectors of vanishing quadratics
};

/// The space of quadratic functions vanishing on all given points, via the
/// exact rank of the monomial evaluation matrix.
inline VanishingSpace quadratic_vanishing_space(const std::vector<QVec>& points, size_t dim) {
    if (points.empty()) throw std::invalid_argument("quadratic_vanishing_space: no points");
    const size_t cols = dim * (dim + 1) / 2 + dim + 1;
    QMat M(points.size(), cols);
    for (size_t r = 0; r < points.size(); ++r) {
        QVec row = quadratic_monomial_row(points[r]);
        for (size_t j = 0; j < cols; ++j) M.at(r, j) = row[j];
    }
    auto rs = rank_solve(M, QVec(points.size()));
    VanishingSpace vs;
    vs.rank = rs.rank;
    vs.nullity = cols - rs.rank;
    vs.basis = std::move(rs.nullspace);
    return vs;
}

struct AffineHull {
    QVec origin;            // lexicographically smallest point
    LatticeBasis lattice;   // basis of the integral affine span's differences
    std::vector<QVec> hull_coords;  // integer coordinates of each input point
};

/// Integral basis of aff_Z(points) and the points re-expressed in it.
inline AffineHull affine_hull(const std::vector<QVec>& points, size_t dim) {
    if (points.empty()) throw std::invalid_argument("affine_hull: no points");
    AffineHull h;
    h.origin = *std::min_element(points.begin(), points.end());
    std::vector<QVec> diffs;
    for (const auto& p : points) diffs.push_back(p - h.origin);
    h.lattice = LatticeBasis::from_generators(dim, diffs);
    for (const auto& p : points) {
        auto c = h.lattice.coords_of(p - h.origin);
        if (!c || !c->is_integral())
            throw std::logic_error("affine_hull: point outside its own integral span");
        h.hull_coords.push_back(*c);
    }
    return h;
}

}  // namespace perfdel
