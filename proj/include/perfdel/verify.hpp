#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "perfdel/enumerate.hpp"
#include "perfdel/polytope.hpp"

namespace perfdel {

struct Certificate {
    enum class Kind { delaunay, perfect, cross, diagram };
    Kind kind = Kind::delaunay;
    bool verdict = false;
    std::string detail;  // human-readable reason, set when verdict is false

    std::optional<QVec> witness_point;
    std::optional<std::pair<QVec, QVec>> witness_pair;
    std::optional<size_t> nullity;
    std::optional<Rat> min_value;
    std::optional<size_t> minimizer_count;
    std::optional<std::pair<Rat, Rat>> line;  // (alpha, beta)
};

struct Circumscribed {
    enum class Status { unique, underdetermined, inconsistent } status;
    QVec center;
    Rat radius2;
};

/// Solves phi[v - c] = r2 for (c, r2) over the vertex list; the system is
/// linear in c after subtracting the first vertex's equation.
inline Circumscribed circumscribe(const QForm& phi, const std::vector<QVec>& vertices) {
    if (vertices.size() < 2) throw std::invalid_argument("circumscribe: need >= 2 vertices");
    const size_t d = phi.dim;
    const QVec& v0 = vertices.front();
    QMat A(vertices.size() - 1, d);
    QVec b(vertices.size() - 1);
    for (size_t i = 1; i < vertices.size(); ++i) {
        const QVec& v = vertices[i];
        // 2 (v - v0)^T G c = phi[v] - phi[v0]
        QVec g = mul(phi.gram, v - v0);
        for (size_t j = 0; j < d; ++j) A.at(i - 1, j) = Rat(2) * g[j];
        b[i - 1] = eval_form(phi, v) - eval_form(phi, v0);
    }
    auto rs = rank_solve(A, b);
    Circumscribed out{Circumscribed::Status::unique, QVec(d), Rat(0)};
    if (!rs.particular) {
        out.status = Circumscribed::Status::inconsistent;
        return out;
    }
    if (!rs.nullspace.empty()) {
        out.status = Circumscribed::Status::underdetermined;
        return out;
    }
    out.center = *rs.particular;
    out.radius2 = eval_form(phi, v0 - out.center);
    return out;
}

/// Empty-ellipsoid check: enumerates the coset inside the circumscribed
/// ellipsoid; true iff the boundary points are exactly the vertices and the
/// interior holds no coset point.
inline Certificate is_delaunay(const PolytopeSpec& P) {
    if (!P.form) throw std::invalid_argument("is_delaunay: polytope carries no form");
    Certificate cert;
    cert.kind = Certificate::Kind::delaunay;

    QVec center;
    Rat r2;
    if (P.center && P.radius2) {
        center = *P.center;
        r2 = *P.radius2;
    } else {
        auto c = circumscribe(*P.form, P.vertices);
        if (c.status != Circumscribed::Status::unique)
            throw std::invalid_argument("is_delaunay: circumscribing ellipsoid not unique");
        center = c.center;
        r2 = c.radius2;
    }

    auto inside = enum_ellipsoid(*P.form, center, r2, P.coset);
    for (const auto& z : inside.all_inside) {
        Rat val = eval_form(*P.form, z - center);
        bool is_vertex = std::binary_search(P.vertices.begin(), P.vertices.end(), z);
        if (val < r2) {
            cert.verdict = false;
            cert.witness_point = z;
            cert.detail = "coset point strictly inside the ellipsoid";
            return cert;
        }
        if (!is_vertex) {
            cert.verdict = false;
            cert.witness_point = z;
            cert.detail = "non-vertex coset point on the ellipsoid boundary";
            return cert;
        }
    }
    // boundary covers every vertex by the PolytopeSpec invariant; recheck anyway
    for (const auto& v : P.vertices) {
        if (!std::binary_search(inside.all_inside.begin(), inside.all_inside.end(), v)) {
            cert.verdict = false;
            cert.witness_point = v;
            cert.detail = "vertex missing from the enumerated boundary";
            return cert;
        }
    }
    cert.verdict = true;
    return cert;
}

/// Perfection rank test. Vertices that do not span the ambient space are
/// re-expressed in an integral basis of their affine hull first; the monomial
/// count always refers to the polytope's own dimension.
inline Certificate is_perfect(const std::vector<QVec>& vertices, size_t ambient_dim) {
    if (vertices.size() < 2) throw std::invalid_argument("is_perfect: need >= 2 vertices");
    Certificate cert;
    cert.kind = Certificate::Kind::perfect;

    auto hull = affine_hull(vertices, ambient_dim);
    const size_t D = hull.lattice.rank();
    if (D == 0) throw std::invalid_argument("is_perfect: vertices do not affinely span a line");

    auto vs = quadratic_vanishing_space(hull.hull_coords, D);
    cert.nullity = vs.nullity;
    cert.verdict = (vs.nullity == 1);
    if (!cert.verdict) cert.detail = "vanishing-space dimension is not 1";
    return cert;
}

/// The generator of the one-dimensional space of quadratics vanishing on the
/// vertices, scaled to coprime integer coefficients with positive definite
/// quadratic part. Requires the vertices to span the ambient space.
inline QFunc perfect_function(const std::vector<QVec>& vertices) {
    if (vertices.empty()) throw std::invalid_argument("perfect_function: no vertices");
    const size_t d = vertices.front().dim();
    auto hull = affine_hull(vertices, d);
    if (hull.lattice.rank() != d)
        throw std::invalid_argument("perfect_function: vertices do not span the ambient space");

    auto vs = quadratic_vanishing_space(vertices, d);
    if (vs.nullity != 1)
        throw std::invalid_argument("perfect_function: vertex set is not perfect (nullity " +
                                    std::to_string(vs.nullity) + ")");
    QFunc f = func_from_monomial_coeffs(vs.basis.front(), d);
    if (is_posdef(f.form.gram)) return f;
    QFunc g = func_from_monomial_coeffs(-vs.basis.front(), d);
    if (is_posdef(g.form.gram)) return g;
    throw std::invalid_argument("perfect_function: quadratic part not definite");
}

/// Baranovskii criterion: the doubled vertices must be the complete set of
/// minimal vectors of their parity class in the difference lattice.
inline Certificate cross_criterion(const PolytopeSpec& P) {
    if (!P.form) throw std::invalid_argument("cross_criterion: polytope carries no form");
    Certificate cert;
    cert.kind = Certificate::Kind::cross;

    auto diagonals = diagonals_cross(P);  // validates central symmetry, center 0
    auto L = diff_lattice(P.coset);

    // all diagonals must share one nontrivial parity class mod 2L
    QMat doubled = L.basis;
    for (auto& x : doubled.a) x = Rat(2) * x;
    LatticeBasis twoL(L.dim, std::move(doubled));
    const QVec& rep = diagonals.front();
    for (const auto& g : diagonals) {
        if (twoL.contains(g)) {
            cert.verdict = false;
            cert.witness_pair = {Rat(1, 2) * g, Rat(-1, 2) * g};
            cert.detail = "diagonal lies in the trivial parity class (midpoint is a lattice point)";
            return cert;
        }
        if (!twoL.contains(g - rep)) {
            cert.verdict = false;
            cert.witness_pair = {rep, g};
            cert.detail = "diagonals fall in distinct parity classes";
            return cert;
        }
    }

    auto sv = shortest_in_parity_class(*P.form, L, rep);
    std::vector<QVec> expected;
    for (const auto& v : P.vertices) expected.push_back(Rat(2) * v);
    std::sort(expected.begin(), expected.end());

    cert.min_value = sv.min_value;
    cert.minimizer_count = sv.minimizers.size();
    if (sv.minimizers == expected) {
        cert.verdict = true;
    } else {
        cert.verdict = false;
        cert.detail = "minimal vectors of the parity class differ from the cross";
        for (const auto& z : sv.minimizers) {
            if (!std::binary_search(expected.begin(), expected.end(), z)) {
                cert.witness_point = z;
                break;
            }
        }
    }
    return cert;
}

/// One point of the reduced candidate set M and its planar image.
struct DiagramPoint {
    QVec pre;  // sgn(l)[1^|l|; 0^(d-|l|)] + a j/n
    Rat phi1;  // (l + a d/n)^2
    Rat phi2;  // |l| - l^2/d
    long l = 0;
    long a = 0;
};

/// The reduced set M for parameters (d, k): all (l, a) with l + a odd,
/// 0 <= l n + a d < d, -d/2 <= l < d/2, plus j/n itself; images by the
/// closed forms. Sorted by (l, a).
inline std::vector<DiagramPoint> phi_diagram_M(size_t d, size_t k) {
    if (k < 2) throw std::invalid_argument("phi_diagram_M: requires k >= 2");
    Int n = Int(d) - 2 * Int(k);
    if (n < 1) throw std::invalid_argument("phi_diagram_M: requires d > 2k");

    auto make_point = [&](long l, long a) {
        DiagramPoint p;
        p.l = l;
        p.a = a;
        QVec z = QVec::constant(d, Rat(a, n));
        size_t absl = static_cast<size_t>(l < 0 ? -l : l);
        for (size_t i = 0; i < absl; ++i) z[i] += (l < 0 ? Rat(-1) : Rat(1));
        p.pre = std::move(z);
        p.phi1 = square(Rat(l) + Rat(a) * Rat(Int(d), n));
        p.phi2 = Rat(l < 0 ? -l : l) - Rat(Int(l) * Int(l), Int(d));
        return p;
    };

    std::vector<DiagramPoint> out;
    long lmin = -static_cast<long>(d / 2);
    long lmax = static_cast<long>((d - 1) / 2);  // l < d/2
    // for even d, l = d/2 is excluded and l = -d/2 included
    if (d % 2 == 0) lmax = static_cast<long>(d) / 2 - 1;
    for (long l = lmin; l <= lmax; ++l) {
        // unique a with 0 <= l n + a d < d
        Int ln = Int(l) * n;
        Int a = ceil_div(-ln, Int(d));
        Int v = ln + a * Int(d);
        if (v < 0 || v >= Int(d)) continue;
        long av = static_cast<long>(a.get_si());
        if (((l % 2 + 2) % 2 + (av % 2 + 2) % 2) % 2 != 1) continue;  // l + a odd
        out.push_back(make_point(l, av));
    }
    out.push_back(make_point(0, 1));  // j/n
    std::sort(out.begin(), out.end(), [](const DiagramPoint& x, const DiagramPoint& y) {
        if (x.l != y.l) return x.l < y.l;
        return x.a < y.a;
    });
    return out;
}

/// Point of the parabola t -> ((t + (1-t) d/n)^2, t - t^2/d).
inline std::pair<Rat, Rat> parabola_point(const Rat& t, size_t d, const Int& n) {
    Rat dn = Rat(Int(d), n);
    return {square(t + (Rat(1) - t) * dn), t - t * t / Rat(Int(d))};
}

struct SupportingLine {
    Rat alpha;
    Rat beta;
    Certificate certificate;
};

/// The line alpha x1 + beta x2 = 1 through the images of v_s and v_{s+1};
/// certifies that every other diagram point lies strictly above it and that
/// both coefficients are positive.
inline SupportingLine supporting_line(size_t d, size_t s, size_t k) {
    if (k < 2 || s < 1 || 2 * s * k > d)
        throw std::invalid_argument("supporting_line: requires k >= 2 and 1 <= s <= d/(2k)");
    Int n = Int(d) - 2 * Int(k);
    if (n < 1) throw std::invalid_argument("supporting_line: requires d > 2k");
    if (4 * Int(k) * (Int(d) - 2 * Int(s) * Int(k) - Int(k)) <= 0)
        throw std::invalid_argument("supporting_line: requires d > k(2s+1)");

    auto p1 = parabola_point(Rat(Int(s)), d, n);
    auto p2 = parabola_point(Rat(Int(s) + 1), d, n);
    QMat A(2, 2);
    A.at(0, 0) = p1.first;
    A.at(0, 1) = p1.second;
    A.at(1, 0) = p2.first;
    A.at(1, 1) = p2.second;
    QVec one(2);
    one[0] = one[1] = 1;
    QVec ab = solve_unique(A, one);

    SupportingLine out;
    out.alpha = ab[0];
    out.beta = ab[1];
    out.certificate.kind = Certificate::Kind::diagram;
    out.certificate.line = {out.alpha, out.beta};

    if (out.alpha <= Rat(0) || out.beta <= Rat(0)) {
        out.certificate.verdict = false;
        out.certificate.detail = "line coefficients not both positive";
        return out;
    }
    for (const auto& p : phi_diagram_M(d, k)) {
        if ((p.phi1 == p1.first && p.phi2 == p1.second) ||
            (p.phi1 == p2.first && p.phi2 == p2.second))
            continue;
        if (out.alpha * p.phi1 + out.beta * p.phi2 <= Rat(1)) {
            out.certificate.verdict = false;
            out.certificate.witness_point = p.pre;
            out.certificate.detail = "diagram point not strictly dominated";
            return out;
        }
    }
    out.certificate.verdict = true;
    return out;
}

}  // namespace perfdel
