#include <fslab/jet.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace fslab
{

cplx Functional::operator()(const CVec &y) const
{
    require_dim(dim(), static_cast<std::size_t>(y.size()), "Functional");
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        acc += coeffs(i) * y(i);
    }
    return acc;
}

namespace
{

// Strict lexicographic order on vectors; used to put multilinear arguments in a
// canonical order so that permuted calls run the identical floating-point sequence.
bool lex_less(const CVec *a, const CVec *b)
{
    for (Eigen::Index i = 0; i < a->size(); ++i) {
        if ((*a)(i).real() != (*b)(i).real()) {
            return (*a)(i).real() < (*b)(i).real();
        }
        if ((*a)(i).imag() != (*b)(i).imag()) {
            return (*a)(i).imag() < (*b)(i).imag();
        }
    }
    return false;
}

std::vector<cplx> symmetrize2(std::size_t n, const std::vector<cplx> &t)
{
    std::vector<cplx> out(n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = j; k < n; ++k) {
                const cplx v = 0.5 * (t[(i * n + j) * n + k] + t[(i * n + k) * n + j]);
                out[(i * n + j) * n + k] = v;
                out[(i * n + k) * n + j] = v;
            }
        }
    }
    return out;
}

std::vector<cplx> symmetrize3(std::size_t n, const std::vector<cplx> &t)
{
    auto at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return ((i * n + j) * n + k) * n + l;
    };
    std::vector<cplx> out(n * n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = j; k < n; ++k) {
                for (std::size_t l = k; l < n; ++l) {
                    const cplx v = (t[at(i, j, k, l)] + t[at(i, j, l, k)] + t[at(i, k, j, l)]
                                    + t[at(i, k, l, j)] + t[at(i, l, j, k)] + t[at(i, l, k, j)])
                                   / 6.0;
                    std::array<std::size_t, 3> idx{j, k, l};
                    do {
                        out[at(i, idx[0], idx[1], idx[2])] = v;
                    } while (std::next_permutation(idx.begin(), idx.end()));
                }
            }
        }
    }
    return out;
}

} // namespace

Jet3::Jet3(CMat linear, std::vector<cplx> t2, std::vector<cplx> t3) : n_(static_cast<std::size_t>(linear.rows()))
{
    if (linear.rows() != linear.cols() || n_ == 0) {
        throw DimensionMismatch("Jet3: linear part must be a non-empty square matrix");
    }
    if (t2.size() != n_ * n_ * n_) {
        throw DimensionMismatch("Jet3: second-derivative tensor has wrong size");
    }
    if (t3.size() != n_ * n_ * n_ * n_) {
        throw DimensionMismatch("Jet3: third-derivative tensor has wrong size");
    }
    linear_ = std::move(linear);
    t2_ = symmetrize2(n_, t2);
    t3_ = symmetrize3(n_, t3);
}

Jet3 Jet3::zero(std::size_t n)
{
    return Jet3(CMat::Zero(n, n), std::vector<cplx>(n * n * n), std::vector<cplx>(n * n * n * n));
}

Jet3 Jet3::identity(std::size_t n)
{
    return linear_map(CMat::Identity(n, n));
}

Jet3 Jet3::linear_map(const CMat &a)
{
    const auto n = static_cast<std::size_t>(a.rows());
    return Jet3(a, std::vector<cplx>(n * n * n), std::vector<cplx>(n * n * n * n));
}

Jet3 Jet3::from_series(cplx c1, cplx c2, cplx c3)
{
    CMat l(1, 1);
    l(0, 0) = c1;
    return Jet3(l, {2.0 * c2}, {6.0 * c3});
}

CVec Jet3::d2(const CVec &u, const CVec &v) const
{
    require_dim(n_, static_cast<std::size_t>(u.size()), "Jet3::d2");
    require_dim(n_, static_cast<std::size_t>(v.size()), "Jet3::d2");
    const CVec *a = &u;
    const CVec *b = &v;
    if (lex_less(b, a)) {
        std::swap(a, b);
    }
    CVec out = CVec::Zero(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            cplx inner = 0.0;
            for (std::size_t k = 0; k < n_; ++k) {
                inner += t2(i, j, k) * (*b)(k);
            }
            acc += inner * (*a)(j);
        }
        out(i) = acc;
    }
    return out;
}

CVec Jet3::d3(const CVec &u, const CVec &v, const CVec &w) const
{
    require_dim(n_, static_cast<std::size_t>(u.size()), "Jet3::d3");
    require_dim(n_, static_cast<std::size_t>(v.size()), "Jet3::d3");
    require_dim(n_, static_cast<std::size_t>(w.size()), "Jet3::d3");
    std::array<const CVec *, 3> args{&u, &v, &w};
    std::sort(args.begin(), args.end(), lex_less);
    const CVec &a = *args[0];
    const CVec &b = *args[1];
    const CVec &c = *args[2];
    CVec out = CVec::Zero(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            cplx mid = 0.0;
            for (std::size_t k = 0; k < n_; ++k) {
                cplx inner = 0.0;
                for (std::size_t l = 0; l < n_; ++l) {
                    inner += t3(i, j, k, l) * c(l);
                }
                mid += inner * b(k);
            }
            acc += mid * a(j);
        }
        out(i) = acc;
    }
    return out;
}

CVec Jet3::eval(const CVec &x) const
{
    require_dim(n_, static_cast<std::size_t>(x.size()), "Jet3::eval");
    return linear_ * x + 0.5 * d2(x, x) + d3(x, x, x) / 6.0;
}

CMat Jet3::jacobian(const CVec &x) const
{
    require_dim(n_, static_cast<std::size_t>(x.size()), "Jet3::jacobian");
    CMat jac = linear_;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t m = 0; m < n_; ++m) {
            cplx acc2 = 0.0;
            cplx acc3 = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                acc2 += t2(i, j, m) * x(j);
                cplx inner = 0.0;
                for (std::size_t k = 0; k < n_; ++k) {
                    inner += t3(i, j, k, m) * x(k);
                }
                acc3 += inner * x(j);
            }
            jac(i, m) += acc2 + 0.5 * acc3;
        }
    }
    return jac;
}

Jet3 Jet3::operator+(const Jet3 &other) const
{
    require_dim(n_, other.n_, "Jet3::operator+");
    std::vector<cplx> s2(t2_.size());
    std::vector<cplx> s3(t3_.size());
    for (std::size_t i = 0; i < s2.size(); ++i) {
        s2[i] = t2_[i] + other.t2_[i];
    }
    for (std::size_t i = 0; i < s3.size(); ++i) {
        s3[i] = t3_[i] + other.t3_[i];
    }
    return Jet3(linear_ + other.linear_, std::move(s2), std::move(s3));
}

Jet3 Jet3::scaled(cplx s) const
{
    std::vector<cplx> s2(t2_);
    std::vector<cplx> s3(t3_);
    for (auto &v : s2) {
        v *= s;
    }
    for (auto &v : s3) {
        v *= s;
    }
    return Jet3(linear_ * s, std::move(s2), std::move(s3));
}

double Jet3::max_abs_diff(const Jet3 &other) const
{
    require_dim(n_, other.n_, "Jet3::max_abs_diff");
    double worst = (linear_ - other.linear_).cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < t2_.size(); ++i) {
        worst = std::max(worst, std::abs(t2_[i] - other.t2_[i]));
    }
    for (std::size_t i = 0; i < t3_.size(); ++i) {
        worst = std::max(worst, std::abs(t3_[i] - other.t3_[i]));
    }
    return worst;
}

ScalarSeries3 directional_series(const Jet3 &jet, const CMat &b, const CVec &x, const Functional &ell)
{
    require_dim(jet.dim(), static_cast<std::size_t>(x.size()), "directional_series");
    require_dim(jet.dim(), static_cast<std::size_t>(b.rows()), "directional_series");
    require_dim(jet.dim(), static_cast<std::size_t>(b.cols()), "directional_series");
    require_dim(jet.dim(), ell.dim(), "directional_series");
    const CVec y = b * x;
    return ScalarSeries3{
        ell(jet.linear() * y),
        0.5 * ell(jet.d2(y, y)),
        ell(jet.d3(y, y, y)) / 6.0,
    };
}

HoloMap as_map(const Jet3 &jet)
{
    return HoloMap{
        jet.dim(),
        [jet](const CVec &x) { return jet.eval(x); },
        [jet](const CVec &x) { return jet.jacobian(x); },
    };
}

} // namespace fslab
