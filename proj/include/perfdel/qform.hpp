#pragma once

#include <optional>
#include <stdexcept>

#include "perfdel/linalg.hpp"

namespace perfdel {

/// Quadratic form given by a symmetric Gram matrix: phi[x] = x^T G x.
struct QForm {
    size_t dim = 0;
    QMat gram;

    QForm() = default;
    explicit QForm(QMat g) : dim(g.rows), gram(std::move(g)) {
        if (!gram.is_symmetric()) throw std::invalid_argument("QForm: gram not symmetric");
    }

    static QForm identity(size_t d) { return QForm(QMat::identity(d)); }

    friend bool operator==(const QForm& a, const QForm& b) { return a.gram == b.gram; }
    friend bool operator!=(const QForm& a, const QForm& b) { return !(a == b); }
};

inline Rat eval_form(const QForm& phi, const QVec& x) {
    if (x.dim() != phi.dim) throw std::invalid_argument("eval_form: dimension mismatch");
    Rat s;
    for (size_t i = 0; i < phi.dim; ++i) {
        if (x[i].is_zero()) continue;
        s += phi.gram.at(i, i) * x[i] * x[i];
        for (size_t j = i + 1; j < phi.dim; ++j)
            s += Rat(2) * phi.gram.at(i, j) * x[i] * x[j];
    }
    return s;
}

/// Polarization x^T G y; satisfies phi[x+y] = phi[x] + 2*inner + phi[y].
inline Rat inner(const QForm& phi, const QVec& x, const QVec& y) {
    if (x.dim() != phi.dim || y.dim() != phi.dim)
        throw std::invalid_argument("inner: dimension mismatch");
    Rat s;
    for (size_t i = 0; i < phi.dim; ++i) {
        if (x[i].is_zero()) continue;
        for (size_t j = 0; j < phi.dim; ++j) s += x[i] * phi.gram.at(i, j) * y[j];
    }
    return s;
}

/// Inhomogeneous quadratic function f(x) = x^T G x + linear·x + constant.
struct QFunc {
    QForm form;
    QVec linear;
    Rat constant;

    QFunc() = default;
    QFunc(QForm f, QVec lin, Rat c) : form(std::move(f)), linear(std::move(lin)), constant(std::move(c)) {
        if (linear.dim() != form.dim) throw std::invalid_argument("QFunc: dimension mismatch");
    }

    friend bool operator==(const QFunc& a, const QFunc& b) {
        return a.form == b.form && a.linear == b.linear && a.constant == b.constant;
    }
};

inline Rat eval_func(const QFunc& f, const QVec& x) {
    return eval_form(f.form, x) + dot(f.linear, x) + f.constant;
}

/// Completed-square data of a function with invertible quadratic part:
/// f(x) = phi[x - center] - radius2.
struct CenterForm {
    QVec center;
    Rat radius2;
};

inline std::optional<CenterForm> complete_square(const QFunc& f) {
    auto r = rank_solve(f.form.gram, Rat(-1, 2) * f.linear);
    if (!r.particular || !r.nullspace.empty()) return std::nullopt;
    CenterForm cf;
    cf.center = *r.particular;
    cf.radius2 = eval_form(f.form, cf.center) - f.constant;
    return cf;
}

}  // namespace perfdel
