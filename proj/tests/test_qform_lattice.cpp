#include "doctest.h"
#include "perfdel/lattice.hpp"
#include "perfdel/qform.hpp"

#include <random>

using namespace perfdel;

namespace {

QForm diag_allones(size_t d, long A, long B) {
    QMat g(d, d);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) g.at(i, j) = (i == j ? Rat(A) : Rat(0)) + Rat(B);
    return QForm(std::move(g));
}

LatticeBasis lambda_lattice(size_t d, const Int& n) {
    std::vector<QVec> gens;
    for (size_t i = 0; i < d; ++i) gens.push_back(QVec::unit(d, i));
    gens.push_back(QVec::constant(d, Rat(1, n)));
    return LatticeBasis::from_generators(d, gens);
}

}  // namespace

TEST_CASE("eval_form on the d=7 family form") {
    QForm phi = diag_allones(7, 8, 4);  // 8|x|^2 + 4(j.x)^2
    CHECK(eval_form(phi, QVec::unit(7, 0)) == Rat(12));
    CHECK(eval_form(phi, QVec(7)) == Rat(0));
    QVec x = QVec::constant(7, Rat(-1, 3));
    x[0] += 1;
    x[1] += 1;  // [1,1,0^5] - j/3
    CHECK(eval_form(phi, x) == Rat(12));
}

TEST_CASE("inner polarization") {
    QForm id = QForm::identity(3);
    CHECK(inner(id, QVec::unit(3, 0), QVec::unit(3, 1)) == Rat(0));
    CHECK(inner(id, QVec::unit(3, 0), QVec::unit(3, 0)) == Rat(1));
    QForm phi = diag_allones(7, 8, 4);
    CHECK(inner(phi, QVec::unit(7, 0), QVec::unit(7, 1)) == Rat(4));

    std::mt19937 rng(11);
    for (int iter = 0; iter < 100; ++iter) {
        QVec x(7), y(7);
        for (auto& v : x.e) v = Rat(static_cast<long>(rng() % 9) - 4, 1 + rng() % 3);
        for (auto& v : y.e) v = Rat(static_cast<long>(rng() % 9) - 4, 1 + rng() % 3);
        CHECK(eval_form(phi, x + y) - eval_form(phi, x) - eval_form(phi, y) ==
              Rat(2) * inner(phi, x, y));
    }
}

TEST_CASE("eval_func examples") {
    QForm phi = diag_allones(7, 8, 4);
    QFunc f(phi, QVec(7), Rat(-12));
    CHECK(eval_func(f, QVec::unit(7, 0)) == Rat(0));

    QFunc c5(QForm(QMat(2, 2)), QVec(2), Rat(5));
    CHECK(eval_func(c5, QVec{Rat(3), Rat(-1)}) == Rat(5));

    // p(x) = (a.x)(a.x - 1) with a = e1 in Z^2: x1^2 - x1
    QMat g(2, 2);
    g.at(0, 0) = 1;
    QVec lin(2);
    lin[0] = -1;
    QFunc p(QForm(std::move(g)), std::move(lin), Rat(0));
    CHECK(eval_func(p, QVec::unit(2, 1)) == Rat(0));
    CHECK(eval_func(p, QVec::unit(2, 0)) == Rat(0));
    CHECK(eval_func(p, QVec{Rat(2), Rat(0)}) == Rat(2));
}

TEST_CASE("complete_square") {
    // f(x) = |x|^2 - x1 - x2 = |x - (1/2,1/2)|^2 - 1/2
    QFunc f(QForm::identity(2), QVec{Rat(-1), Rat(-1)}, Rat(0));
    auto cf = complete_square(f);
    REQUIRE(cf.has_value());
    CHECK(cf->center == QVec{Rat(1, 2), Rat(1, 2)});
    CHECK(cf->radius2 == Rat(1, 2));
}

TEST_CASE("lattice from generators: Z<e_i, j/3> in dimension 7") {
    auto L = lambda_lattice(7, 3);
    CHECK(L.rank() == 7);
    CHECK(L.contains(QVec::unit(7, 0)));
    CHECK(L.contains(QVec::constant(7, Rat(1, 3))));
    CHECK(L.contains(QVec::constant(7, Rat(2, 3))));
    CHECK_FALSE(L.contains(QVec::constant(7, Rat(1, 2))));
    QVec half = QVec::unit(7, 0);
    half[0] = Rat(1, 3);
    CHECK_FALSE(L.contains(half));  // e1/3 alone is not in the lattice
    // covolume is 1/3
    CHECK(determinant(L.basis).abs() == Rat(1, 3));
}

TEST_CASE("parity functional values for d=7, k=2") {
    ParityFunctional p(7, 2);
    CHECK(p.n == 3);
    CHECK(p.eval(QVec::unit(7, 0)) == 1);
    CHECK(p.eval(QVec::constant(7, Rat(1, 3))) == 1);
    QVec two(7);
    two[0] = two[1] = 1;
    CHECK(p.eval(two) == 0);
    CHECK(p.eval(QVec(7)) == 0);
    CHECK_FALSE(p.try_eval(QVec::constant(7, Rat(1, 2))).has_value());
    CHECK_THROWS(ParityFunctional(7, 4));  // d - 2k < 1
    CHECK_THROWS(ParityFunctional(8, 4));  // d - 2k = 0 rejected
}

TEST_CASE("parity well-definedness under representation change") {
    // z = x + a j/n = (x - m j) + (a + m n) j/n for every integer m
    std::mt19937 rng(21);
    for (int iter = 0; iter < 250; ++iter) {
        size_t d = 5 + rng() % 6;
        size_t k = 2;
        if (d >= 9 && rng() % 2) k = 3;
        if (d <= 2 * k + 1) k = 2;
        ParityFunctional p(d, k);
        QVec x(d);
        for (auto& v : x.e) v = Rat(static_cast<long>(rng() % 9) - 4);
        long a = static_cast<long>(rng() % 11) - 5;
        QVec z = x + Rat(a, p.n) * QVec::constant(d, Rat(1));
        auto par = p.try_eval(z);
        REQUIRE(par.has_value());
        // direct formula from the perturbed representation
        long m = static_cast<long>(rng() % 7) - 3;
        Rat xsum = entry_sum(x) - Rat(m) * Rat(Int(d));
        Int direct = mod_floor(xsum.num() + Int(a) + Int(m) * p.n, Int(2));
        CHECK(Int(*par) == direct);
    }
}

TEST_CASE("parity agrees with z·l mod 2 for every l in L1") {
    // L1 = permutations of [(-1)^k, 1^(d-k)]
    std::mt19937 rng(31);
    ParityFunctional p(7, 2);
    for (int iter = 0; iter < 60; ++iter) {
        QVec x(7);
        for (auto& v : x.e) v = Rat(static_cast<long>(rng() % 7) - 3);
        long a = static_cast<long>(rng() % 7) - 3;
        QVec z = x + Rat(a, 3) * QVec::constant(7, Rat(1));
        int par = p.eval(z);
        // sample a few members of L1
        for (int t = 0; t < 5; ++t) {
            QVec l = QVec::constant(7, Rat(1));
            size_t i = rng() % 7, j = rng() % 7;
            while (j == i) j = rng() % 7;
            l[i] = -1;
            l[j] = -1;
            Rat lz = dot(l, z);
            REQUIRE(lz.is_integer());
            CHECK(mod_floor(lz.num(), 2) == par);
        }
    }
}

TEST_CASE("coset membership for Lambda_1 (d=7, k=2)") {
    auto L = lambda_lattice(7, 3);
    auto C = LatticeCoset::with_parity(L, ParityFunctional(7, 2), 1);
    CHECK(C.contains(QVec::unit(7, 0)));
    CHECK_FALSE(C.contains(QVec(7)));
    CHECK(C.contains(QVec::constant(7, Rat(1, 3))));
    QVec e12(7);
    e12[0] = e12[1] = 1;
    CHECK_FALSE(C.contains(e12));
    CHECK_FALSE(C.contains(QVec::constant(7, Rat(1, 2))));
}

TEST_CASE("diff_lattice of the parity coset") {
    auto L = lambda_lattice(7, 3);
    auto C = LatticeCoset::with_parity(L, ParityFunctional(7, 2), 1);
    auto D = diff_lattice(C);
    // index 2 in Lambda
    CHECK(determinant(D.basis).abs() == Rat(2) * determinant(L.basis).abs());
    QVec e12 = QVec::unit(7, 0) - QVec::unit(7, 1);
    CHECK(D.contains(e12));
    CHECK_FALSE(D.contains(QVec::unit(7, 0)));
    // d=5,k=2 -> n=1, parity of e1 is 1; of 2e1 is 0
    auto C5 = LatticeCoset::with_parity(LatticeBasis::standard(5), ParityFunctional(5, 2), 0);
    CHECK(C5.contains(QVec(5)));
    CHECK(diff_lattice(C5).rank() == 5);
}

TEST_CASE("diff_lattice with a functional that vanishes on the lattice") {
    // on 2 Z^5 every parity value is 0: the difference lattice is the lattice
    QMat doubled(5, 5);
    for (size_t i = 0; i < 5; ++i) doubled.at(i, i) = 2;
    LatticeBasis L2(5, doubled);
    auto even = LatticeCoset::with_parity(L2, ParityFunctional(5, 2), 0);
    CHECK_FALSE(even.empty);
    CHECK(diff_lattice(even).basis == L2.basis);
    CHECK(even.contains(QVec(5)));
    QVec two(5);
    two[0] = 2;
    CHECK(even.contains(two));
    // target 1 is unreachable
    auto odd = LatticeCoset::with_parity(L2, ParityFunctional(5, 2), 1);
    CHECK(odd.empty);
    CHECK_FALSE(odd.contains(two));
}

TEST_CASE("coset stability: diff_lattice + fixed member = coset") {
    auto L = lambda_lattice(7, 3);
    auto C = LatticeCoset::with_parity(L, ParityFunctional(7, 2), 1);
    auto D = diff_lattice(C);
    std::mt19937 rng(41);
    QVec v0 = C.rep_point;
    REQUIRE(C.contains(v0));
    for (int iter = 0; iter < 60; ++iter) {
        QVec t(D.rank());
        for (auto& x : t.e) x = Rat(static_cast<long>(rng() % 7) - 3);
        QVec z = v0 + D.from_coords(t);
        CHECK(C.contains(z));
    }
}
