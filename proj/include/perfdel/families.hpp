#pragma once

#include <stdexcept>
#include <vector>

#include "perfdel/enumerate.hpp"
#include "perfdel/polytope.hpp"
#include "perfdel/verify.hpp"

namespace perfdel {

/// Parameters (d, s, k) of the symmetric family; n = d - 2k.
struct FamilyParams {
    size_t d = 0;
    size_t s = 0;
    size_t k = 0;
    Int n = 0;

    FamilyParams(size_t d_, size_t s_, size_t k_) : d(d_), s(s_), k(k_), n(Int(d_) - 2 * Int(k_)) {
        if (k < 2) throw std::invalid_argument("FamilyParams: requires k >= 2");
        if (s < 1) throw std::invalid_argument("FamilyParams: requires s >= 1");
        if (2 * s * k > d) throw std::invalid_argument("FamilyParams: requires s <= d/(2k)");
        if (n < 1) throw std::invalid_argument("FamilyParams: requires d - 2k >= 1");
    }
};

namespace detail {

/// Visits all size-r subsets of {0,..,n-1} in lexicographic order.
template <typename F>
void for_each_combination(size_t n, size_t r, F&& visit) {
    if (r > n) return;
    std::vector<size_t> idx(r);
    for (size_t i = 0; i < r; ++i) idx[i] = i;
    for (;;) {
        visit(idx);
        size_t i = r;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - r) break;
            if (i == 0) return;
        }
        ++idx[i];
        for (size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline Int binomial(size_t n, size_t r) {
    if (r > n) return 0;
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, r);
    return b;
}

}  // namespace detail

/// (j·x)^2 as a form on Z^d.
inline QForm sum_square_form(size_t d) {
    QMat g(d, d);
    for (auto& x : g.a) x = 1;
    return QForm(std::move(g));
}

/// |x - (sum x_i / d) j|^2: squared distance to the all-ones line.
inline QForm line_deviation_form(size_t d) {
    QMat g(d, d);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) g.at(i, j) = (i == j ? Rat(1) : Rat(0)) - Rat(1, Int(d));
    return QForm(std::move(g));
}

/// A |x|^2 + B (j·x)^2.
inline QForm diag_plus_allones_form(size_t d, const Rat& A, const Rat& B) {
    QMat g(d, d);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) g.at(i, j) = (i == j ? A : Rat(0)) + B;
    return QForm(std::move(g));
}

/// The certifying form 4k(d-2sk-k)|x|^2 + (d^2-(4k+2s+1)d+4k(2s+k))(j·x)^2.
inline QForm form_phi(const FamilyParams& p) {
    Int d = p.d, s = p.s, k = p.k;
    Int A = 4 * k * (d - 2 * s * k - k);
    Int B = d * d - (4 * k + 2 * s + 1) * d + 4 * k * (2 * s + k);
    return diag_plus_allones_form(p.d, Rat(A), Rat(B));
}

/// All C(d, level) permutations of [1^level, 0^(d-level)] shifted by
/// -(level-1)/n · j, generated by support sets.
inline std::vector<QVec> vertices_V(const FamilyParams& p, size_t level) {
    std::vector<QVec> out;
    Rat shift = Rat(-(Int(level) - 1), p.n);
    detail::for_each_combination(p.d, level, [&](const std::vector<size_t>& support) {
        QVec v = QVec::constant(p.d, shift);
        for (size_t i : support) v[i] += 1;
        out.push_back(std::move(v));
    });
    return out;
}

/// Lambda = Z<e_1..e_d, j/n> with the parity-1 condition.
inline LatticeCoset lattice_Lambda1(const FamilyParams& p) {
    std::vector<QVec> gens;
    for (size_t i = 0; i < p.d; ++i) gens.push_back(QVec::unit(p.d, i));
    gens.push_back(QVec::constant(p.d, Rat(1, p.n)));
    auto L = LatticeBasis::from_generators(p.d, gens);
    return LatticeCoset::with_parity(std::move(L), ParityFunctional(p.d, p.k), 1);
}

/// The symmetric polytope: conv(V_s u -V_s u V_{s+1} u -V_{s+1}), with its
/// coset, certifying form, center 0 and squared radius.
inline PolytopeSpec polytope_P(const FamilyParams& p) {
    QForm phi = form_phi(p);
    if (Int(4 * Int(p.k) * (Int(p.d) - 2 * Int(p.s) * Int(p.k) - Int(p.k))) <= 0 ||
        !is_posdef(phi.gram))
        throw std::invalid_argument(
            "polytope_P: form not positive definite (requires d > k(2s+1))");

    PolytopeSpec P;
    P.ambient_dim = p.d;
    for (size_t level : {p.s, p.s + 1}) {
        for (auto& v : vertices_V(p, level)) {
            P.vertices.push_back(-v);
            P.vertices.push_back(std::move(v));
        }
    }
    P.sort_vertices();
    P.coset = lattice_Lambda1(p);
    P.center = QVec(p.d);
    P.radius2 = eval_form(phi, P.vertices.front());
    P.form = std::move(phi);
    P.validate();
    return P;
}

/// 8(d-5)|x|^2 + (d^2-9d+22)(j·x)^2 on Z^(d+1); equals form_phi(d+1,1,2).
inline QForm g6_form(size_t d) {
    if (d < 6) throw std::invalid_argument("g6_form: requires d >= 6");
    Int dd = d;
    return diag_plus_allones_form(d + 1, Rat(8 * (dd - 5)), Rat(dd * dd - 9 * dd + 22));
}

/// The asymmetric polytope on d(d+3)/2 vertices in Z^d, built from its six
/// coordinate orbits (the last coordinate is fixed, the first d-1 permute).
/// The certifying function is the unique quadratic vanishing on the vertex
/// set, extracted by the rank test; the attached form is its quadratic part.
inline PolytopeSpec g6_vertices(size_t d) {
    if (d < 6) throw std::invalid_argument("g6_vertices: requires d >= 6");
    const size_t m = d - 1;  // permuted coordinates
    std::vector<QVec> verts;

    auto with_last = [&](QVec head, long last) {
        QVec v(d);
        for (size_t i = 0; i < m; ++i) v[i] = head[i];
        v[m] = Rat(last);
        verts.push_back(std::move(v));
    };

    // [0^d] x 1
    verts.push_back(QVec(d));
    // [-1, 0^(d-2); 1] x (d-1)
    for (size_t i = 0; i < m; ++i) {
        QVec h(m);
        h[i] = Rat(-1);
        with_last(std::move(h), 1);
    }
    // [1^(d-1); -(d-3)] x 1
    with_last(QVec::constant(m, Rat(1)), -(static_cast<long>(d) - 3));
    // [0, 1^(d-2); -(d-4)] x (d-1)
    for (size_t i = 0; i < m; ++i) {
        QVec h = QVec::constant(m, Rat(1));
        h[i] = 0;
        with_last(std::move(h), -(static_cast<long>(d) - 4));
    }
    // [1^2, 0^(d-3); -1] x (d-1)(d-2)/2
    detail::for_each_combination(m, 2, [&](const std::vector<size_t>& supp) {
        QVec h(m);
        for (size_t i : supp) h[i] = 1;
        with_last(std::move(h), -1);
    });
    // [1, 0^(d-2); 0] x (d-1)
    for (size_t i = 0; i < m; ++i) {
        QVec h(m);
        h[i] = 1;
        with_last(std::move(h), 0);
    }

    PolytopeSpec P;
    P.ambient_dim = d;
    P.vertices = std::move(verts);
    P.sort_vertices();
    P.coset = LatticeCoset::whole(LatticeBasis::standard(d));

    QFunc f = perfect_function(P.vertices);
    auto cf = complete_square(f);
    if (!cf) throw std::logic_error("g6_vertices: certifying function has degenerate form");
    P.form = f.form;
    P.center = cf->center;
    P.radius2 = cf->radius2;
    P.validate();
    return P;
}

/// Sub-polytope { v in P : v·u = c } with the coset restricted to the
/// hyperplane slice. The parent's circumscribing data still certifies the
/// section, so form/center/radius carry over.
inline PolytopeSpec section(const PolytopeSpec& P, const QVec& u, const Rat& c) {
    if (u.dim() != P.ambient_dim) throw std::invalid_argument("section: dimension mismatch");
    PolytopeSpec S;
    S.ambient_dim = P.ambient_dim;
    for (const auto& v : P.vertices)
        if (dot(v, u) == c) S.vertices.push_back(v);
    S.form = P.form;
    S.center = P.center;
    S.radius2 = P.radius2;

    // slice coset: points z = z0 + B t with (z0 + B t)·u = c
    const auto& B = P.coset.translation;
    QVec beta(B.rank());
    for (size_t j = 0; j < B.rank(); ++j) beta[j] = dot(B.basis.col(j), u);
    Rat target = c - dot(P.coset.rep_point, u);

    // integral solutions of beta·t = target via a gcd sweep over the scaled row
    Int S2 = 1;
    for (const auto& x : beta.e) S2 = lcm(S2, x.den());
    S2 = lcm(S2, target.den());
    std::vector<Int> row(B.rank());
    for (size_t j = 0; j < B.rank(); ++j) row[j] = beta[j].num() * (S2 / beta[j].den());
    Int rhs = target.num() * (S2 / target.den());

    // transform columns of the identity so the row becomes (g, 0, .., 0)
    QMat U = QMat::identity(B.rank());
    size_t nz = 0;
    {
        std::vector<size_t> live;
        for (size_t j = 0; j < B.rank(); ++j)
            if (row[j] != 0) live.push_back(j);
        while (live.size() > 1) {
            size_t bi = live[0];
            for (size_t j : live)
                if (cmp(abs(row[j]), abs(row[bi])) < 0) bi = j;
            std::vector<size_t> next = {bi};
            for (size_t j : live) {
                if (j == bi) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), row[j].get_mpz_t(), row[bi].get_mpz_t());
                row[j] -= q * row[bi];
                for (size_t i = 0; i < B.rank(); ++i) U.at(i, j) -= Rat(q) * U.at(i, bi);
                if (row[j] != 0) next.push_back(j);
            }
            std::sort(next.begin(), next.end());
            live = std::move(next);
        }
        nz = live.empty() ? B.rank() : live[0];
    }

    bool solvable;
    QVec t0(B.rank());
    if (nz == B.rank()) {
        solvable = (rhs == 0);
    } else {
        solvable = (rhs % row[nz] == 0);
        if (solvable) {
            Int q = rhs / row[nz];
            for (size_t i = 0; i < B.rank(); ++i) t0[i] = Rat(q) * U.at(i, nz);
        }
    }

    if (!solvable) {
        if (!S.vertices.empty())
            throw std::logic_error("section: vertices on an unreachable slice level");
        S.coset = LatticeCoset::shifted(LatticeBasis(P.ambient_dim, QMat(P.ambient_dim, 0)),
                                        QVec(P.ambient_dim));
        S.coset.empty = true;
        return S;
    }

    std::vector<QVec> kern_gens;
    for (size_t j = 0; j < B.rank(); ++j) {
        if (j == nz) continue;
        if (nz == B.rank() || row[j] == 0) kern_gens.push_back(mul(B.basis, U.col(j)));
    }
    auto slice_lat = LatticeBasis::from_generators(P.ambient_dim, kern_gens);
    QVec z0 = P.coset.rep_point + mul(B.basis, t0);
    S.coset = LatticeCoset::shifted(std::move(slice_lat), std::move(z0));
    S.validate();
    return S;
}

}  // namespace perfdel
