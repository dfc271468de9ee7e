// Acceptance suite: one PASS/FAIL line per criterion, exit code = number of
// failed criteria. Every comparison is exact rational arithmetic; there are
// no tolerances anywhere.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "perfdel/cli.hpp"
#include "perfdel/families.hpp"
#include "perfdel/json_io.hpp"
#include "perfdel/lift.hpp"
#include "perfdel/verify.hpp"

#include "brute_oracle.hpp"

using namespace perfdel;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

class Criterion {
public:
    explicit Criterion(std::string name) : name_(std::move(name)), start_(Clock::now()) {}

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok_ = false;
            notes_.push_back(what);
        }
    }

    ~Criterion() {
        double secs = std::chrono::duration<double>(Clock::now() - start_).count();
        std::ostringstream line;
        line << (ok_ ? "[PASS] " : "[FAIL] ") << name_ << "  (" << secs << " s)";
        std::cout << line.str() << "\n";
        for (const auto& n : notes_) std::cout << "        - " << n << "\n";
        if (!ok_) ++g_failures;
    }

private:
    std::string name_;
    Clock::time_point start_;
    bool ok_ = true;
    std::vector<std::string> notes_;
};

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("perfdel_acceptance_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

/// Scale-free congruence profile: the sorted multiset of pairwise squared
/// distances under the form, normalized by the smallest nonzero one, plus the
/// per-vertex distance multisets (also normalized and sorted).
struct CongruenceProfile {
    std::vector<Rat> global;
    std::vector<std::vector<Rat>> per_vertex;

    bool operator==(const CongruenceProfile& o) const {
        return global == o.global && per_vertex == o.per_vertex;
    }
};

CongruenceProfile congruence_profile(const std::vector<QVec>& verts, const QForm& form) {
    CongruenceProfile p;
    Rat min_nonzero;
    bool have_min = false;
    std::vector<std::vector<Rat>> raw(verts.size());
    for (size_t i = 0; i < verts.size(); ++i) {
        for (size_t j = 0; j < verts.size(); ++j) {
            if (i == j) continue;
            Rat d = eval_form(form, verts[i] - verts[j]);
            raw[i].push_back(d);
            if (!d.is_zero() && (!have_min || d < min_nonzero)) {
                min_nonzero = d;
                have_min = true;
            }
        }
    }
    for (size_t i = 0; i < verts.size(); ++i) {
        for (auto& d : raw[i]) d = d / min_nonzero;
        std::sort(raw[i].begin(), raw[i].end());
        for (size_t j = i + 1; j < verts.size(); ++j)
            p.global.push_back(eval_form(form, verts[i] - verts[j]) / min_nonzero);
    }
    std::sort(p.global.begin(), p.global.end());
    p.per_vertex = std::move(raw);
    std::sort(p.per_vertex.begin(), p.per_vertex.end());
    return p;
}

void criterion_1_g7_end_to_end() {
    Criterion c("1. G7 end-to-end: 56 vertices, min 12 with the vertices as minimizers, all certificates");
    TempDir tmp;
    std::string text;
    int code = run_cli({"construct", "--family", "p", "--d", "7", "--s", "1", "--k", "2",
                        "--out", tmp.file("g7.json"), "--verify"},
                       &text);
    c.expect(code == 0, "construct --verify exited with " + std::to_string(code));
    c.expect(text.find("delaunay: PASS") != std::string::npos, "delaunay certificate not PASS");
    c.expect(text.find("perfect: PASS") != std::string::npos, "perfect certificate not PASS");
    c.expect(text.find("cross: PASS") != std::string::npos, "cross certificate not PASS");

    auto P = read_polytope_file(tmp.file("g7.json"));
    c.expect(P.vertices.size() == 56, "vertex count != 56");

    // the certifying form is exactly 8|x|^2 + 4(j.x)^2
    auto expected_form = diag_plus_allones_form(7, Rat(8), Rat(4));
    c.expect(P.form && *P.form == expected_form, "form is not 8|x|^2+4(j.x)^2");

    auto mn = min_over_coset(*P.form, P.coset, false);
    c.expect(mn.min_value == Rat(12), "coset minimum != 12");
    c.expect(mn.minimizers == P.vertices, "minimizers differ from the vertex set");

    auto cp = is_perfect(P.vertices, 7);
    c.expect(cp.verdict && *cp.nullity == 1, "perfection nullity != 1");
    auto vs = quadratic_vanishing_space(P.vertices, 7);
    c.expect(vs.rank == 35, "monomial matrix rank != 35");
}

void criterion_2_supporting_line() {
    Criterion c("2. supporting_line(7,1,2) = (3/7, 2/3) and combo form proportional to the family form");
    auto sl = supporting_line(7, 1, 2);
    c.expect(sl.alpha == Rat(3, 7), "alpha != 3/7");
    c.expect(sl.beta == Rat(2, 3), "beta != 2/3");
    c.expect(sl.certificate.verdict, "line does not strictly support the diagram");
    auto combo = diag_plus_allones_form(7, sl.beta, sl.alpha - sl.beta / Rat(7));
    auto phi = form_phi(FamilyParams(7, 1, 2));
    Rat ratio = phi.gram.at(0, 0) / combo.gram.at(0, 0);
    bool prop = true;
    for (size_t i = 0; i < 7; ++i)
        for (size_t j = 0; j < 7; ++j)
            prop = prop && (ratio * combo.gram.at(i, j) == phi.gram.at(i, j));
    c.expect(prop, "alpha*phi1 + beta*phi2 not proportional to the family form");
}

void criterion_3_family_grid() {
    Criterion c("3. family grid (7,1,2) (8,1,2) (9,1,2) (10,1,2) (10,1,3) (13,2,2): all certificates");
    const std::vector<std::tuple<size_t, size_t, size_t>> grid = {
        {7, 1, 2}, {8, 1, 2}, {9, 1, 2}, {10, 1, 2}, {10, 1, 3}, {13, 2, 2}};
    for (auto [d, s, k] : grid) {
        std::string tag = "(" + std::to_string(d) + "," + std::to_string(s) + "," +
                          std::to_string(k) + ")";
        auto P = polytope_P(FamilyParams(d, s, k));
        auto cd = is_delaunay(P);
        c.expect(cd.verdict, tag + ": not Delaunay");
        auto cp = is_perfect(P.vertices, d);
        c.expect(cp.verdict && *cp.nullity == 1, tag + ": perfection nullity != 1");
        auto cc = cross_criterion(P);
        c.expect(cc.verdict, tag + ": cross criterion failed");
        auto sl = supporting_line(d, s, k);
        c.expect(sl.certificate.verdict, tag + ": supporting line not strictly dominating");

        // consistency loop: the extracted perfect function reproduces the
        // closed-form family form up to scale
        auto f = perfect_function(P.vertices);
        auto phi = form_phi(FamilyParams(d, s, k));
        Rat num = phi.gram.at(0, 0), den = f.form.gram.at(0, 0);
        bool prop = f.linear == QVec(d);
        for (size_t i = 0; i < d && prop; ++i)
            for (size_t j = 0; j < d && prop; ++j)
                prop = (f.form.gram.at(i, j) * num == phi.gram.at(i, j) * den);
        c.expect(prop, tag + ": perfect function not proportional to the family form");
    }
}

void criterion_4_g6_topes() {
    Criterion c("4. 27-vertex family: counts for d=6..12, certificates for d=6..8, form identity");
    for (size_t d = 6; d <= 12; ++d) {
        auto G = g6_vertices(d);
        c.expect(G.vertices.size() == d * (d + 3) / 2,
                 "d=" + std::to_string(d) + ": vertex count != d(d+3)/2");
        c.expect(g6_form(d) == form_phi(FamilyParams(d + 1, 1, 2)),
                 "d=" + std::to_string(d) + ": ambient form identity failed");
    }
    c.expect(g6_vertices(6).vertices.size() == 27, "d=6 count != 27");
    for (size_t d = 6; d <= 8; ++d) {
        auto G = g6_vertices(d);
        auto cp = is_perfect(G.vertices, d);
        c.expect(cp.verdict && *cp.nullity == 1,
                 "d=" + std::to_string(d) + ": perfection nullity != 1");
        auto cd = is_delaunay(G);
        c.expect(cd.verdict, "d=" + std::to_string(d) + ": not Delaunay");
    }
}

void criterion_5_sections() {
    Criterion c("5. section scan finds the perfect level-1 slice; d=6 slice congruent to the 27-tope");
    TempDir tmp;
    for (size_t d = 6; d <= 8; ++d) {
        auto P = polytope_P(FamilyParams(d + 1, 1, 2));
        QVec u = QVec::constant(d + 1, Rat(1));
        u[0] = u[1] = Rat(-1);

        // CLI scan output names the level with the right count and perfection
        std::string base = tmp.file("p" + std::to_string(d + 1) + ".json");
        write_polytope_file(base, P);
        std::string u_arg;
        for (size_t i = 0; i < d + 1; ++i) u_arg += std::string(i ? "," : "") + u[i].str();
        std::string text;
        int code = run_cli({"section", "--input", base, "--u", u_arg, "--scan"}, &text);
        c.expect(code == 0, "scan exited " + std::to_string(code));
        std::string expected_line = "level 1: " + std::to_string(d * (d + 3) / 2) +
                                    " vertices, perfect: yes";
        c.expect(text.find(expected_line) != std::string::npos,
                 "scan missing '" + expected_line + "'");

        auto S = section(P, u, Rat(1));
        c.expect(S.vertices.size() == d * (d + 3) / 2,
                 "d=" + std::to_string(d) + ": section count != d(d+3)/2");
        auto cp = is_perfect(S.vertices, d + 1);
        c.expect(cp.verdict && *cp.nullity == 1,
                 "d=" + std::to_string(d) + ": section not perfect");
    }

    // congruence of the d=6 slice with the Table coordinates
    auto P7 = polytope_P(FamilyParams(7, 1, 2));
    QVec u7 = QVec::constant(7, Rat(1));
    u7[0] = u7[1] = Rat(-1);
    auto S = section(P7, u7, Rat(1));
    auto G = g6_vertices(6);
    auto prof_section = congruence_profile(S.vertices, *S.form);
    auto prof_table = congruence_profile(G.vertices, *G.form);
    c.expect(prof_section == prof_table,
             "normalized distance profiles of slice and 27-tope differ");
}

void criterion_6_lift() {
    Criterion c("6. lift of the 27-tope with an auto-found cell: t* > 0, 7-dimensional, certified");
    auto base = g6_vertices(6);
    auto p = perfect_function(base.vertices);
    auto cell = delaunay_cell_at(
        p.form, LatticeBasis::standard(6),
        QVec{Rat(-1, 3), Rat(-1, 7), Rat(-1, 11), Rat(-1, 13), Rat(-1, 17), Rat(-1, 19)});
    auto outcome = lift_perfect(base, cell);
    c.expect(outcome.t_star > Rat(0), "t* not positive");
    c.expect(outcome.lifted.ambient_dim == 7, "lifted polytope not 7-dimensional");
    c.expect(outcome.delaunay_cert.verdict, "lifted polytope not Delaunay");
    c.expect(outcome.perfect_cert.verdict && *outcome.perfect_cert.nullity == 1,
             "lifted polytope not perfect");
}

void criterion_7_negative_controls() {
    Criterion c("7. negative controls: square nullity 2, every leave-one-out breaks Delaunay, (8,2,2) rejected");
    std::vector<QVec> sq = {QVec{Rat(0), Rat(0)}, QVec{Rat(0), Rat(1)}, QVec{Rat(1), Rat(0)},
                            QVec{Rat(1), Rat(1)}};
    auto cs = is_perfect(sq, 2);
    c.expect(!cs.verdict && *cs.nullity == 2, "unit square nullity != 2");

    auto P = polytope_P(FamilyParams(7, 1, 2));
    for (size_t drop = 0; drop < P.vertices.size(); ++drop) {
        PolytopeSpec broken = P;
        QVec removed = broken.vertices[drop];
        broken.vertices.erase(broken.vertices.begin() + static_cast<long>(drop));
        auto cd = is_delaunay(broken);
        bool good = !cd.verdict && cd.witness_point && *cd.witness_point == removed;
        if (!good) {
            c.expect(false, "leave-one-out #" + std::to_string(drop) +
                                " did not fail with the removed vertex as boundary witness");
            break;
        }
    }

    bool rejected = false;
    try {
        polytope_P(FamilyParams(8, 2, 2));
    } catch (const std::invalid_argument&) {
        rejected = true;
    }
    c.expect(rejected, "(8,2,2) not rejected for an indefinite form");
}

void criterion_8_property_suites() {
    Criterion c("8. property suites (>= 200 cases each): parity, minimizer shape, height bound, pairing");

    // (a) parity well-definedness under representation perturbation
    {
        std::mt19937 rng(2026);
        size_t cases = 0;
        bool ok = true;
        while (cases < 250) {
            size_t k = 2 + rng() % 2;
            size_t d = 2 * k + 1 + rng() % 8;
            ParityFunctional p(d, k);
            QVec x(d);
            for (auto& v : x.e) v = Rat(static_cast<long>(rng() % 9) - 4);
            long a = static_cast<long>(rng() % 11) - 5;
            QVec z = x + Rat(a, p.n) * QVec::constant(d, Rat(1));
            auto par = p.try_eval(z);
            if (!par) {
                ok = false;
                break;
            }
            long m = static_cast<long>(rng() % 7) - 3;
            Rat xsum = entry_sum(x) - Rat(m) * Rat(Int(d));
            Int direct = mod_floor(xsum.num() + Int(a) + Int(m) * p.n, Int(2));
            if (Int(*par) != direct) {
                ok = false;
                break;
            }
            ++cases;
        }
        c.expect(ok && cases >= 250, "parity well-definedness failed");
    }

    // (b)+(c) minimizer coordinate shape and height bound over the family grid
    {
        const std::vector<std::tuple<size_t, size_t, size_t>> grid = {
            {7, 1, 2}, {8, 1, 2}, {9, 1, 2}, {10, 1, 2}, {10, 1, 3}, {13, 2, 2}};
        size_t shape_cases = 0, height_cases = 0;
        bool shape_ok = true, height_ok = true, equality_seen = false, equality_ok = true;
        for (auto [d, s, k] : grid) {
            FamilyParams p(d, s, k);
            auto coset = lattice_Lambda1(p);
            std::vector<QForm> forms = {form_phi(p)};
            // a combination whose minimum is attained at +-j/n: tiny phi1 weight
            {
                Rat dn2 = square(Rat(Int(d), p.n));
                forms.push_back(
                    diag_plus_allones_form(d, Rat(1), Rat(1, 2) / dn2 - Rat(1, Int(d))));
            }
            for (const auto& phi : forms) {
                if (!is_posdef(phi.gram)) continue;
                auto mn = min_over_coset(phi, coset, false);
                for (const auto& z : mn.minimizers) {
                    // two consecutive values
                    std::vector<Rat> vals(z.e);
                    std::sort(vals.begin(), vals.end());
                    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
                    bool good_shape =
                        vals.size() == 1 || (vals.size() == 2 && vals[1] - vals[0] == Rat(1));
                    shape_ok = shape_ok && good_shape;
                    ++shape_cases;
                    // |z.j| <= d/n, equality only at +-j/n
                    Rat height = entry_sum(z).abs();
                    Rat bound = Rat(Int(d), p.n);
                    height_ok = height_ok && (height <= bound);
                    if (height == bound) {
                        equality_seen = true;
                        QVec jn = QVec::constant(d, Rat(1, p.n));
                        equality_ok = equality_ok && (z == jn || z == -jn);
                    }
                    ++height_cases;
                }
            }
        }
        c.expect(shape_ok, "a minimizer has more than two coordinate values or a gap != 1");
        c.expect(height_ok, "a minimizer violates |z.j| <= d/n");
        c.expect(equality_seen && equality_ok,
                 "height equality cases missing or attained off +-j/n");
        c.expect(shape_cases >= 200 && height_cases >= 200,
                 "fewer than 200 minimizer cases (" + std::to_string(shape_cases) + ")");
    }

    // (d) horizontal-line pairing on the diagram for d in 7..19, k in {2,3}
    {
        size_t pair_cases = 0;
        bool ok = true;
        for (size_t d = 7; d <= 19; ++d)
            for (size_t k = 2; k <= 3; ++k) {
                if (d < 2 * k + 1) continue;
                auto M = phi_diagram_M(d, k);
                for (size_t i = 0; i < M.size(); ++i)
                    for (size_t j = i + 1; j < M.size(); ++j) {
                        bool same_line = (M[i].phi2 == M[j].phi2);
                        bool negated = (M[i].pre == -M[j].pre);
                        ok = ok && (same_line == negated);
                        ++pair_cases;
                    }
            }
        c.expect(ok, "horizontal-line pairing violated");
        c.expect(pair_cases >= 200, "fewer than 200 diagram pairs");
    }
}

void criterion_9_enumeration_oracle() {
    Criterion c("9. enum_ellipsoid matches brute-force box scanning on 100 random definite forms");
    std::mt19937 rng(424242);
    auto C = LatticeCoset::whole(LatticeBasis::standard(3));
    bool ok = true;
    for (int iter = 0; iter < 100 && ok; ++iter) {
        QMat A(3, 3);
        for (auto& x : A.a) x = Rat(static_cast<long>(rng() % 7) - 3);
        QMat G = mul(A.transpose(), A);
        for (size_t i = 0; i < 3; ++i) G.at(i, i) += 1;
        QVec center(3);
        for (auto& x : center.e) x = Rat(static_cast<long>(rng() % 9) - 4, 1 + rng() % 4);
        Rat r2(1 + static_cast<long>(rng() % 30));
        auto expect = perfdel::testing::brute_force_ellipsoid_z3(G, center, r2);
        auto got = enum_ellipsoid(QForm(G), center, r2, C);
        ok = (got.all_inside == expect);
    }
    c.expect(ok, "exact set equality with the oracle failed");
}

void criterion_10_cell_oracle() {
    Criterion c("10. delaunay_cell_at on Z^2 at (1/3, 1/7) returns the unit square");
    auto cell = delaunay_cell_at(QForm::identity(2), LatticeBasis::standard(2),
                                 QVec{Rat(1, 3), Rat(1, 7)});
    std::vector<QVec> expect = {QVec{Rat(0), Rat(0)}, QVec{Rat(0), Rat(1)},
                                QVec{Rat(1), Rat(0)}, QVec{Rat(1), Rat(1)}};
    c.expect(cell.vertices == expect, "cell vertices differ from the unit square");
}

}  // namespace

int main() {
    std::cout << "perfdel acceptance suite (exact arithmetic, zero tolerances)\n";
    criterion_1_g7_end_to_end();
    criterion_2_supporting_line();
    criterion_3_family_grid();
    criterion_4_g6_topes();
    criterion_5_sections();
    criterion_6_lift();
    criterion_7_negative_controls();
    criterion_8_property_suites();
    criterion_9_enumeration_oracle();
    criterion_10_cell_oracle();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED\n"
                                  : std::to_string(g_failures) + " CRITERIA FAILED\n");
    return g_failures;
}
