#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "perfdel/linalg.hpp"

namespace perfdel {

/// A lattice of rank r in ambient dimension dim, stored as a d x r rational
/// matrix of basis columns (full column rank) plus the minimal positive
/// integer `scale` making scale*basis integral.
struct LatticeBasis {
    size_t dim = 0;
    QMat basis;  // dim x rank, columns are basis vectors
    Int scale = 1;

    LatticeBasis() = default;
    LatticeBasis(size_t ambient, QMat b) : dim(ambient), basis(std::move(b)) {
        if (basis.rows != dim) throw std::invalid_argument("LatticeBasis: bad shape");
        scale = 1;
        for (const auto& x : basis.a) scale = lcm(scale, x.den());
        auto chk = rank_solve(basis, QVec(dim));
        if (chk.rank != basis.cols)
            throw std::invalid_argument("LatticeBasis: columns not independent");
    }

    size_t rank() const { return basis.cols; }

    static LatticeBasis standard(size_t d) { return LatticeBasis(d, QMat::identity(d)); }

    /// Builds a basis from an arbitrary spanning set by integer column
    /// reduction of the scaled generator matrix (gcd sweeps row by row).
    static LatticeBasis from_generators(size_t ambient, const std::vector<QVec>& gens) {
        Int S = 1;
        for (const auto& g : gens) {
            if (g.dim() != ambient) throw std::invalid_argument("from_generators: bad dim");
            for (const auto& x : g.e) S = lcm(S, x.den());
        }
        std::vector<std::vector<Int>> cols;
        for (const auto& g : gens) {
            std::vector<Int> c(ambient);
            bool nonzero = false;
            for (size_t i = 0; i < ambient; ++i) {
                c[i] = g[i].num() * (S / g[i].den());
                if (c[i] != 0) nonzero = true;
            }
            if (nonzero) cols.push_back(std::move(c));
        }

        std::vector<std::vector<Int>> out;
        for (size_t r = 0; r < ambient && !cols.empty(); ++r) {
            for (;;) {
                // pick the column with smallest nonzero |entry| at row r
                size_t best = cols.size();
                for (size_t c = 0; c < cols.size(); ++c) {
                    if (cols[c][r] == 0) continue;
                    if (best == cols.size() ||
                        cmp(abs(cols[c][r]), abs(cols[best][r])) < 0)
                        best = c;
                }
                if (best == cols.size()) break;  // row r is zero in all columns
                bool reduced_any = false;
                for (size_t c = 0; c < cols.size(); ++c) {
                    if (c == best || cols[c][r] == 0) continue;
                    Int q;
                    mpz_tdiv_q(q.get_mpz_t(), cols[c][r].get_mpz_t(), cols[best][r].get_mpz_t());
                    for (size_t i = 0; i < ambient; ++i) cols[c][i] -= q * cols[best][i];
                    reduced_any = true;
                }
                if (!reduced_any) {
                    // unique nonzero at row r: it becomes a pivot column
                    if (cols[best][r] < 0)
                        for (auto& v : cols[best]) v = -v;
                    out.push_back(cols[best]);
                    cols.erase(cols.begin() + static_cast<long>(best));
                    break;
                }
            }
            // drop columns that became zero
            std::erase_if(cols, [](const std::vector<Int>& c) {
                return std::all_of(c.begin(), c.end(), [](const Int& x) { return x == 0; });
            });
        }
        QMat b(ambient, out.size());
        for (size_t c = 0; c < out.size(); ++c)
            for (size_t i = 0; i < ambient; ++i) b.at(i, c) = Rat(out[c][i], S);
        return LatticeBasis(ambient, std::move(b));
    }

    /// Rational coordinates of z in this basis, or nullopt if z is outside the span.
    std::optional<QVec> coords_of(const QVec& z) const {
        auto r = rank_solve(basis, z);
        if (!r.particular) return std::nullopt;
        return r.particular;
    }

    bool contains(const QVec& z) const {
        auto c = coords_of(z);
        return c && c->is_integral();
    }

    QVec from_coords(const QVec& t) const { return mul(basis, t); }

    friend bool operator==(const LatticeBasis& a, const LatticeBasis& b) {
        return a.dim == b.dim && a.basis == b.basis;
    }
};

/// The mod-2 functional cutting out Lambda_1 inside Z<e_1..e_d, j/n>, n = d-2k:
/// for z = x + a·j/n with x integral, parity(z) = (x·j + a) mod 2, which is
/// independent of the chosen representation.
struct ParityFunctional {
    size_t d = 0;
    size_t k = 0;
    Int n = 0;  // d - 2k

    ParityFunctional() = default;
    ParityFunctional(size_t d_, size_t k_) : d(d_), k(k_), n(Int(d_) - 2 * Int(k_)) {
        if (n < 1) throw std::invalid_argument("ParityFunctional: requires d - 2k >= 1");
    }

    /// Parity of z, or nullopt when z has no representation x + a·j/n.
    std::optional<int> try_eval(const QVec& z) const {
        if (z.dim() != d) throw std::invalid_argument("parity: dimension mismatch");
        std::optional<Int> a;
        Rat xsum;  // sum of integral-part entries
        for (size_t i = 0; i < d; ++i) {
            Rat nz = Rat(n) * z[i];
            if (!nz.is_integer()) return std::nullopt;
            Int res = mod_floor(nz.num(), n);
            if (!a)
                a = res;
            else if (*a != res)
                return std::nullopt;
        }
        Rat aj_over_n = Rat(*a, n);
        for (size_t i = 0; i < d; ++i) {
            Rat xi = z[i] - aj_over_n;
            if (!xi.is_integer()) return std::nullopt;
            xsum += xi;
        }
        Int p = mod_floor(xsum.num() + *a, Int(2));
        return static_cast<int>(p.get_si());
    }

    int eval(const QVec& z) const {
        auto p = try_eval(z);
        if (!p) throw std::invalid_argument("parity: vector not in the lattice Z<e_i, j/n>");
        return *p;
    }

    friend bool operator==(const ParityFunctional& a, const ParityFunctional& b) {
        return a.d == b.d && a.k == b.k;
    }
};

/// A lattice together with an optional coset condition. Exactly one
/// representation is active:
///   - plain:  the lattice itself
///   - parity: { z in lattice : parity(z) = parity_target }
///   - shift:  shift + lattice
/// Every representation reduces to the affine form rep_point + translation·Z^r.
struct LatticeCoset {
    LatticeBasis lattice;
    std::optional<ParityFunctional> parity;
    int parity_target = 0;
    std::optional<QVec> shift;

    // derived affine representation
    QVec rep_point;
    LatticeBasis translation;
    bool empty = false;

    static LatticeCoset whole(LatticeBasis L) {
        LatticeCoset c;
        c.rep_point = QVec(L.dim);
        c.translation = L;
        c.lattice = std::move(L);
        return c;
    }

    static LatticeCoset shifted(LatticeBasis L, QVec s) {
        if (s.dim() != L.dim) throw std::invalid_argument("LatticeCoset: bad shift");
        LatticeCoset c;
        c.shift = s;
        c.rep_point = std::move(s);
        c.translation = L;
        c.lattice = std::move(L);
        return c;
    }

    static LatticeCoset with_parity(LatticeBasis L, ParityFunctional p, int target) {
        if (target != 0 && target != 1)
            throw std::invalid_argument("LatticeCoset: parity target must be 0 or 1");
        LatticeCoset c;
        c.parity = p;
        c.parity_target = target;

        const size_t r = L.rank();
        std::vector<int> bp(r);
        for (size_t j = 0; j < r; ++j) bp[j] = p.eval(L.basis.col(j));

        size_t odd = r;
        for (size_t j = 0; j < r; ++j) {
            if (bp[j] == 1) {
                odd = j;
                break;
            }
        }

        if (odd == r) {
            // functional vanishes on the lattice
            c.translation = L;
            if (target == 1) {
                c.empty = true;
                c.rep_point = QVec(L.dim);
            } else {
                c.rep_point = QVec(L.dim);
            }
        } else {
            // kernel basis: even vectors kept, odd ones paired with the pivot,
            // pivot doubled
            QMat kb(L.dim, r);
            size_t col = 0;
            for (size_t j = 0; j < r; ++j) {
                if (j == odd) continue;
                QVec v = L.basis.col(j);
                if (bp[j] == 1) v = v + L.basis.col(odd);
                kb.set_col(col++, v);
            }
            kb.set_col(col, Rat(2) * L.basis.col(odd));
            c.translation = LatticeBasis(L.dim, std::move(kb));
            c.rep_point = (target == 1) ? L.basis.col(odd) : QVec(L.dim);
        }
        c.lattice = std::move(L);
        return c;
    }

    size_t dim() const { return lattice.dim; }

    bool contains(const QVec& z) const {
        if (empty) return false;
        if (parity) {
            if (!lattice.contains(z)) return false;
            return parity->try_eval(z) == std::optional<int>(parity_target);
        }
        return translation.contains(z - rep_point);
    }
};

/// Basis of { z - z' : z, z' in C }: the parity kernel for parity cosets,
/// the lattice itself otherwise.
inline LatticeBasis diff_lattice(const LatticeCoset& C) {
    if (C.empty) throw std::invalid_argument("diff_lattice: empty coset");
    return C.translation;
}

}  // namespace perfdel
