#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "perfdel/simplex.hpp"
#include "perfdel/verify.hpp"

namespace perfdel {

/// Signalled when decreasing the new diagonal entry reaches 0 with the
/// ellipsoid still empty; impossible for valid inputs (the cell would have to
/// be a translate of the base).
struct CylinderRegime : std::runtime_error {
    CylinderRegime() : std::runtime_error("collision_search: cylinder regime reached") {}
};

/// Signalled when the chosen cell is a lattice translate of the base polytope.
struct TranslateCell : std::invalid_argument {
    TranslateCell() : std::invalid_argument("lift: cell is a lattice translate of the base") {}
};

/// Family f_t = coeff0 + t·coeff1 of quadratic functions on the extended
/// space; f_t restricted to the base hyperplane equals the base's perfect
/// function for every t.
struct ParamFunc {
    QFunc coeff0;
    QFunc coeff1;
};

inline QFunc param_at(const ParamFunc& pf, const Rat& t) {
    QMat g = pf.coeff0.form.gram;
    for (size_t i = 0; i < g.a.size(); ++i) g.a[i] += t * pf.coeff1.form.gram.a[i];
    QVec lin = pf.coeff0.linear;
    for (size_t i = 0; i < lin.dim(); ++i) lin[i] += t * pf.coeff1.linear[i];
    return QFunc(QForm(std::move(g)), std::move(lin), pf.coeff0.constant + t * pf.coeff1.constant);
}

struct LiftProblem {
    PolytopeSpec base;
    PolytopeSpec cell;
    QFunc base_func;  // perfect function of the base, ambient coordinates
};

namespace detail {

inline QVec append_coord(const QVec& x, const Rat& last) {
    QVec y(x.dim() + 1);
    for (size_t i = 0; i < x.dim(); ++i) y[i] = x[i];
    y[x.dim()] = last;
    return y;
}

/// The extended point lattice: every base-coset layer at integer heights.
inline LatticeCoset extended_lattice(const LatticeCoset& base) {
    const size_t d = base.dim();
    const auto& B = base.translation.basis;
    QMat nb(d + 1, B.cols + 1);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < B.cols; ++j) nb.at(i, j) = B.at(i, j);
    nb.at(d, B.cols) = 1;
    return LatticeCoset::shifted(LatticeBasis(d + 1, std::move(nb)),
                                 append_coord(base.rep_point, Rat(0)));
}

}  // namespace detail

/// Validates a lift input: the base must be perfect (the perfect function is
/// extracted here), the cell full-dimensional and Delaunay for the base form,
/// and not a lattice translate of the base.
inline LiftProblem make_lift_problem(const PolytopeSpec& base, const PolytopeSpec& cell) {
    if (cell.ambient_dim != base.ambient_dim)
        throw std::invalid_argument("lift: base and cell dimensions differ");
    const size_t d = base.ambient_dim;

    LiftProblem prob;
    prob.base = base;
    prob.cell = cell;
    prob.base_func = perfect_function(base.vertices);
    prob.base.sort_vertices();
    prob.cell.sort_vertices();

    for (const auto& w : prob.cell.vertices)
        if (!base.coset.contains(w))
            throw std::invalid_argument("lift: cell vertex outside the base lattice");
    if (affine_hull(prob.cell.vertices, d).lattice.rank() != d)
        throw std::invalid_argument("lift: cell is not full-dimensional");

    // translate test: equal counts and barycenter shift mapping one onto the other
    if (prob.cell.vertices.size() == prob.base.vertices.size()) {
        QVec sb(d), sc(d);
        for (const auto& v : prob.base.vertices) sb = sb + v;
        for (const auto& w : prob.cell.vertices) sc = sc + w;
        Rat inv(1, Int(prob.base.vertices.size()));
        QVec shift = inv * (sc - sb);
        std::vector<QVec> shifted;
        for (const auto& v : prob.base.vertices) shifted.push_back(v + shift);
        std::sort(shifted.begin(), shifted.end());
        if (shifted == prob.cell.vertices) throw TranslateCell();
    }

    // the cell must be a Delaunay cell of the base metric
    PolytopeSpec cell_check = prob.cell;
    cell_check.coset = base.coset;
    cell_check.form = prob.base_func.form;
    auto circ = circumscribe(prob.base_func.form, cell_check.vertices);
    if (circ.status != Circumscribed::Status::unique)
        throw std::invalid_argument("lift: cell has no unique circumscribed ellipsoid");
    cell_check.center = circ.center;
    cell_check.radius2 = circ.radius2;
    cell_check.validate();
    auto cd = is_delaunay(cell_check);
    if (!cd.verdict)
        throw std::invalid_argument("lift: cell is not Delaunay for the base form (" + cd.detail +
                                    ")");
    return prob;
}

/// Determines the parametric family f_t on the extended space from the layer
/// conditions: f_t vanishes on every cell vertex raised to height 1 and
/// restricts to the base's perfect function at height 0. The cross
/// coefficients and the new linear coefficient are affine in t = psi[e].
inline ParamFunc solve_layer_system(const LiftProblem& prob) {
    const size_t d = prob.base.ambient_dim;
    const auto& p = prob.base_func;
    const auto& verts = prob.cell.vertices;

    // unknown (g, h): p(v) + 2 g·v + t + h = 0 for every cell vertex v
    QMat A(verts.size(), d + 1);
    QVec rhs0(verts.size()), rhs1(verts.size());
    for (size_t r = 0; r < verts.size(); ++r) {
        for (size_t j = 0; j < d; ++j) A.at(r, j) = Rat(2) * verts[r][j];
        A.at(r, d) = 1;
        rhs0[r] = -eval_func(p, verts[r]);
        rhs1[r] = Rat(-1);
    }
    auto s0 = rank_solve(A, rhs0);
    auto s1 = rank_solve(A, rhs1);
    if (s0.rank != d + 1)
        throw std::logic_error("solve_layer_system: layer system is rank-deficient");
    if (!s0.particular || !s1.particular)
        throw std::logic_error("solve_layer_system: layer system inconsistent across vertices");

    auto assemble = [&](const QVec& sol, bool t_part) {
        QMat g(d + 1, d + 1);
        for (size_t i = 0; i < d; ++i) {
            for (size_t j = 0; j < d; ++j) g.at(i, j) = t_part ? Rat(0) : p.form.gram.at(i, j);
            g.at(i, d) = sol[i];
            g.at(d, i) = sol[i];
        }
        g.at(d, d) = t_part ? Rat(1) : Rat(0);
        QVec lin(d + 1);
        for (size_t i = 0; i < d; ++i) lin[i] = t_part ? Rat(0) : p.linear[i];
        lin[d] = sol[d];
        return QFunc(QForm(std::move(g)), std::move(lin), t_part ? Rat(0) : p.constant);
    };
    ParamFunc pf{assemble(*s0.particular, false), assemble(*s1.particular, true)};

    // every cell vertex satisfies f_t(v + e) = 0 identically in t
    for (const auto& v : verts) {
        QVec y = detail::append_coord(v, Rat(1));
        if (eval_func(pf.coeff0, y) != Rat(0) || eval_func(pf.coeff1, y) != Rat(0))
            throw std::logic_error("solve_layer_system: cell vertex off the parametric quadric");
    }
    return pf;
}

struct CollisionResult {
    Rat t_star;
    std::vector<QVec> new_zeros;  // extended-space points, sorted
};

namespace detail {

struct LayerContext {
    const ParamFunc& pf;
    const LiftProblem& prob;
    QVec g0, g1;  // cross coefficients psi(e, e_i) = g0 + t g1
    Rat h0, h1;   // l(e) = h0 + t h1

    explicit LayerContext(const ParamFunc& pf_, const LiftProblem& prob_) : pf(pf_), prob(prob_) {
        const size_t d = prob.base.ambient_dim;
        g0 = QVec(d);
        g1 = QVec(d);
        for (size_t i = 0; i < d; ++i) {
            g0[i] = pf.coeff0.form.gram.at(i, d);
            g1[i] = pf.coeff1.form.gram.at(i, d);
        }
        h0 = pf.coeff0.linear[d];
        h1 = pf.coeff1.linear[d];
    }

    /// f_t restricted to the layer at height k, as a function of the base point.
    QFunc layer_func(long k, const Rat& t) const {
        const auto& p = prob.base_func;
        QVec lin = p.linear;
        for (size_t i = 0; i < lin.dim(); ++i)
            lin[i] += Rat(2 * k) * (g0[i] + t * g1[i]);
        Rat c = p.constant + Rat(k) * Rat(k) * t + Rat(k) * (h0 + t * h1);
        return QFunc(p.form, std::move(lin), std::move(c));
    }

    const std::vector<QVec>& layer_exclusions(long k) const {
        static const std::vector<QVec> none;
        if (k == 0) return prob.base.vertices;
        if (k == 1) return prob.cell.vertices;
        return none;
    }

    /// Minimum of f_t over the layer, skipping its known zeros.
    std::pair<Rat, std::vector<QVec>> layer_min(long k, const Rat& t) const {
        QFunc f = layer_func(k, t);
        auto cs = complete_square(f);
        if (!cs) throw std::logic_error("collision_search: degenerate base form");
        auto r = min_over_coset_centered(p_form(), cs->center, prob.base.coset,
                                         layer_exclusions(k));
        std::vector<QVec> ys;
        for (const auto& x : r.minimizers) ys.push_back(append_coord(x, Rat(k)));
        return {r.min_value - cs->radius2, std::move(ys)};
    }

    const QForm& p_form() const { return prob.base_func.form; }

    Rat value0(const QVec& y) const { return eval_func(pf.coeff0, y); }
    Rat slope(const QVec& y) const { return eval_func(pf.coeff1, y); }
};

/// Largest t in [0, t_hi] where the layer minimum (excluding known zeros)
/// vanishes, or nullopt when it stays positive on the whole interval. The
/// minimum is concave piecewise-affine in t, so iterating on roots of active
/// pieces terminates finitely.
inline std::optional<std::pair<Rat, std::vector<QVec>>> layer_root(const LayerContext& ctx,
                                                                   long k, const Rat& t_hi) {
    Rat t = t_hi;
    for (int guard = 0; guard < 20000; ++guard) {
        auto [mu, mins] = ctx.layer_min(k, t);
        if (guard == 0 && mu <= Rat(0))
            throw std::logic_error("layer_root: layer not strictly positive at the start");
        if (mu.is_zero()) return std::make_pair(t, mins);
        const QVec& a = mins.front();
        Rat sigma = ctx.slope(a);
        if (mu > Rat(0)) {
            std::optional<Rat> jump;
            if (sigma > Rat(0)) {
                Rat root = -ctx.value0(a) / sigma;
                if (root >= Rat(0) && root < t) jump = root;
            }
            if (!jump) {
                // active piece has no root in [0, t): decide at t = 0
                auto [mu0, mins0] = ctx.layer_min(k, Rat(0));
                if (mu0 > Rat(0)) return std::nullopt;  // concave => positive on [0, t]
                if (mu0.is_zero()) return std::make_pair(Rat(0), mins0);
                const QVec& a0 = mins0.front();
                Rat s0 = ctx.slope(a0);
                if (s0 <= Rat(0)) throw std::logic_error("layer_root: inconsistent slopes");
                jump = -ctx.value0(a0) / s0;
            }
            t = *jump;
        } else {
            // below the root: the active piece must rise towards t_hi
            if (sigma <= Rat(0)) throw std::logic_error("layer_root: inconsistent slopes");
            t = -ctx.value0(a) / sigma;
        }
    }
    throw std::logic_error("layer_root: iteration bound exceeded");
}

}  // namespace detail

/// Certifies that f_t0 is positive definite with the known vertex set as its
/// exact zero set and an empty interior.
inline bool lift_start_valid(const ParamFunc& pf, const LiftProblem& prob, const Rat& t0) {
    QFunc f = param_at(pf, t0);
    if (!is_posdef(f.form.gram)) return false;
    auto cs = complete_square(f);
    if (!cs || cs->radius2 <= Rat(0)) return false;
    auto Lnew = detail::extended_lattice(prob.base.coset);
    auto inside = enum_ellipsoid(f.form, cs->center, cs->radius2, Lnew);

    std::vector<QVec> known;
    for (const auto& v : prob.base.vertices) known.push_back(detail::append_coord(v, Rat(0)));
    for (const auto& w : prob.cell.vertices) known.push_back(detail::append_coord(w, Rat(1)));
    std::sort(known.begin(), known.end());
    return inside.all_inside == known && inside.min_value == cs->radius2;
}

/// Finds the largest t* < t0 at which the shrinking family hits a lattice
/// point outside the known zero set, by per-layer concave root-finding over a
/// height window that widens whenever the full verification finds activity
/// outside it.
inline CollisionResult collision_search(const ParamFunc& pf, const LiftProblem& prob,
                                        const Rat& t0) {
    if (!lift_start_valid(pf, prob, t0))
        throw std::invalid_argument("collision_search: t0 does not certify an empty start");
    detail::LayerContext ctx(pf, prob);
    auto Lnew = detail::extended_lattice(prob.base.coset);

    std::vector<QVec> known;
    for (const auto& v : prob.base.vertices) known.push_back(detail::append_coord(v, Rat(0)));
    for (const auto& w : prob.cell.vertices) known.push_back(detail::append_coord(w, Rat(1)));
    std::sort(known.begin(), known.end());

    long kmin = -1, kmax = 2;
    for (int round = 0; round < 8; ++round) {
        std::optional<Rat> t_star;
        std::vector<QVec> zeros;
        for (long k = kmin; k <= kmax; ++k) {
            if (k == 0) continue;  // the base layer is constant in t
            auto r = detail::layer_root(ctx, k, t0);
            if (!r) continue;
            if (!t_star || r->first > *t_star) {
                t_star = r->first;
                zeros = r->second;
            } else if (r->first == *t_star) {
                zeros.insert(zeros.end(), r->second.begin(), r->second.end());
                std::sort(zeros.begin(), zeros.end());
            }
        }
        if (!t_star) {
            kmin -= 1;
            kmax += 1;
            if (round >= 2) throw CylinderRegime();
            continue;
        }

        // full verification at the candidate t*
        QFunc f = param_at(pf, *t_star);
        bool ok = is_posdef(f.form.gram);
        long bad_layer = 0;
        if (ok) {
            auto cs = complete_square(f);
            if (!cs) throw std::logic_error("collision_search: degenerate form at t*");
            auto inside = enum_ellipsoid(f.form, cs->center, cs->radius2, Lnew);
            for (const auto& y : inside.all_inside) {
                Rat val = eval_func(f, y);
                if (val < Rat(0)) {
                    ok = false;  // missed an earlier collision in an unscanned layer
                    bad_layer = static_cast<long>(y[y.dim() - 1].floor().get_si());
                    break;
                }
                if (val.is_zero() && !std::binary_search(known.begin(), known.end(), y) &&
                    !std::binary_search(zeros.begin(), zeros.end(), y)) {
                    zeros.push_back(y);  // simultaneous collision outside the window
                    std::sort(zeros.begin(), zeros.end());
                }
            }
        }
        if (ok) {
            std::sort(zeros.begin(), zeros.end());
            zeros.erase(std::unique(zeros.begin(), zeros.end()), zeros.end());
            return {*t_star, std::move(zeros)};
        }
        kmin = std::min(kmin - 1, bad_layer - 1);
        kmax = std::max(kmax + 1, bad_layer + 1);
    }
    throw std::logic_error("collision_search: window widening did not stabilize");
}

struct LiftOutcome {
    PolytopeSpec lifted;
    Rat t_star;
    std::vector<QVec> new_zeros;
    Certificate delaunay_cert;
    Certificate perfect_cert;
    bool slice0_exact = false;  // height-0 slice equals the base vertex set
    bool slice1_exact = false;  // height-1 slice equals the raised cell
};

/// The full construction: from a perfect base polytope and a full-dimensional
/// Delaunay cell that is not its translate, produce the perfect Delaunay
/// polytope one dimension up.
inline LiftOutcome lift_perfect(const PolytopeSpec& base, const PolytopeSpec& cell) {
    auto prob = make_lift_problem(base, cell);
    auto pf = solve_layer_system(prob);
    const size_t d = prob.base.ambient_dim;

    auto cs_base = complete_square(prob.base_func);
    if (!cs_base) throw std::logic_error("lift_perfect: base function has degenerate form");
    std::optional<Rat> t0;
    Rat cand = Rat(4) * cs_base->radius2;
    for (int i = 0; i < 20 && !t0; ++i, cand = Rat(2) * cand)
        if (lift_start_valid(pf, prob, cand)) t0 = cand;
    if (!t0) {
        cand = Rat(2) * cs_base->radius2;
        for (int i = 0; i < 20 && !t0; ++i, cand = cand / Rat(2))
            if (lift_start_valid(pf, prob, cand)) t0 = cand;
    }
    if (!t0) throw std::logic_error("lift_perfect: no valid starting diagonal value found");

    auto col = collision_search(pf, prob, *t0);
    if (col.t_star <= Rat(0)) throw CylinderRegime();

    QFunc f = param_at(pf, col.t_star);
    auto cs = complete_square(f);
    if (!cs) throw std::logic_error("lift_perfect: degenerate lifted form");

    LiftOutcome out;
    out.t_star = col.t_star;
    out.new_zeros = col.new_zeros;

    PolytopeSpec& L = out.lifted;
    L.ambient_dim = d + 1;
    for (const auto& v : prob.base.vertices) L.vertices.push_back(detail::append_coord(v, Rat(0)));
    for (const auto& w : prob.cell.vertices) L.vertices.push_back(detail::append_coord(w, Rat(1)));
    for (const auto& z : col.new_zeros) L.vertices.push_back(z);
    L.sort_vertices();
    L.coset = detail::extended_lattice(prob.base.coset);
    L.form = f.form;
    L.center = cs->center;
    L.radius2 = cs->radius2;
    L.validate();

    out.delaunay_cert = is_delaunay(L);
    if (!out.delaunay_cert.verdict)
        throw std::logic_error("lift_perfect: lifted polytope failed the Delaunay check");
    out.perfect_cert = is_perfect(L.vertices, d + 1);
    if (!out.perfect_cert.verdict)
        throw std::logic_error("lift_perfect: lifted polytope is not perfect");

    // slice conditions at heights 0 and 1
    std::vector<QVec> s0, s1;
    for (const auto& y : L.vertices) {
        if (y[d].is_zero()) s0.push_back(y);
        if (y[d] == Rat(1)) s1.push_back(y);
    }
    std::vector<QVec> b0, c1;
    for (const auto& v : prob.base.vertices) b0.push_back(detail::append_coord(v, Rat(0)));
    for (const auto& w : prob.cell.vertices) c1.push_back(detail::append_coord(w, Rat(1)));
    std::sort(b0.begin(), b0.end());
    std::sort(c1.begin(), c1.end());
    for (const auto& v : b0)
        if (!std::binary_search(s0.begin(), s0.end(), v))
            throw std::logic_error("lift_perfect: base vertex missing from height-0 slice");
    for (const auto& w : c1)
        if (!std::binary_search(s1.begin(), s1.end(), w))
            throw std::logic_error("lift_perfect: cell vertex missing from height-1 slice");
    out.slice0_exact = (s0 == b0);
    out.slice1_exact = (s1 == c1);
    return out;
}

/// The cell of the point lattice described by a coset: cells of an affine
/// lattice are cells of its difference lattice shifted by the representative.
inline PolytopeSpec delaunay_cell_at_coset(const QForm& phi, const LatticeCoset& C,
                                           const QVec& point);

/// The full-dimensional Delaunay cell of Del(L, phi) containing a generic
/// point, by cutting planes: maximize an affine minorant of phi at the point;
/// violated lattice constraints come from an exact closest-point enumeration.
inline PolytopeSpec delaunay_cell_at(const QForm& phi, const LatticeBasis& L, const QVec& point) {
    if (!is_posdef(phi.gram)) throw std::invalid_argument("delaunay_cell_at: form not definite");
    if (L.rank() != L.dim)
        throw std::invalid_argument("delaunay_cell_at: lattice not full-dimensional");
    const size_t d = L.dim;
    auto pc = L.coords_of(point);
    if (!pc) throw std::invalid_argument("delaunay_cell_at: point outside the lattice span");

    auto coset = LatticeCoset::whole(L);

    // initial constraints: the basis-box corners around the point, whose hull
    // contains it, keeping the LP bounded
    std::vector<QVec> sites;
    {
        QVec base_corner(d);
        for (size_t i = 0; i < d; ++i) base_corner[i] = Rat((*pc)[i].floor());
        for (size_t mask = 0; mask < (size_t{1} << d); ++mask) {
            QVec t = base_corner;
            for (size_t i = 0; i < d; ++i)
                if (mask & (size_t{1} << i)) t[i] += 1;
            sites.push_back(L.from_coords(t));
        }
        std::sort(sites.begin(), sites.end());
        sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    }

    QVec objective = detail::append_coord(point, Rat(1));  // maximize g·point + h
    for (int round = 0; round < 1000; ++round) {
        std::vector<std::pair<QVec, Rat>> cons;
        for (const auto& z : sites) cons.push_back({detail::append_coord(z, Rat(1)), eval_form(phi, z)});
        auto lp = lp_max_exact(objective, cons);
        if (lp.status != LpStatus::Optimal)
            throw std::logic_error("delaunay_cell_at: support LP not optimal");
        QVec g(d);
        for (size_t i = 0; i < d; ++i) g[i] = (*lp.x)[i];
        Rat h = (*lp.x)[d];

        // global feasibility: min over L of phi[z] - g·z - h
        QVec cg = solve_unique(phi.gram, Rat(1, 2) * g);
        auto mn = min_over_coset_centered(phi, cg, coset);
        Rat global_min = mn.min_value - eval_form(phi, cg) - h;
        if (global_min < Rat(0)) {
            bool grew = false;
            for (const auto& z : mn.minimizers) {
                auto it = std::lower_bound(sites.begin(), sites.end(), z);
                if (it == sites.end() || *it != z) {
                    sites.insert(it, z);
                    grew = true;
                }
            }
            if (!grew) throw std::logic_error("delaunay_cell_at: stalled cutting plane");
            continue;
        }
        if (global_min > Rat(0))
            throw std::logic_error("delaunay_cell_at: LP optimum below the envelope");

        PolytopeSpec cell;
        cell.ambient_dim = d;
        cell.vertices = mn.minimizers;  // the complete tight set
        cell.sort_vertices();
        if (affine_hull(cell.vertices, d).lattice.rank() != d)
            throw std::invalid_argument("delaunay_cell_at: degenerate point (perturb it)");
        cell.coset = coset;
        cell.form = phi;
        cell.center = cg;
        cell.radius2 = eval_form(phi, cg) + h;
        cell.validate();
        auto cert = is_delaunay(cell);
        if (!cert.verdict) throw std::logic_error("delaunay_cell_at: cell failed verification");
        return cell;
    }
    throw std::logic_error("delaunay_cell_at: cutting plane did not converge");
}

inline PolytopeSpec delaunay_cell_at_coset(const QForm& phi, const LatticeCoset& C,
                                           const QVec& point) {
    const QVec& rep = C.rep_point;
    PolytopeSpec cell = delaunay_cell_at(phi, C.translation, point - rep);
    if (!rep.is_zero()) {
        for (auto& v : cell.vertices) v = v + rep;
        cell.center = *cell.center + rep;
        cell.coset = C;
        cell.validate();
    }
    return cell;
}

}  // namespace perfdel
