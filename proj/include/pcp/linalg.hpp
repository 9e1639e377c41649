#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "pcp/error.hpp"

namespace pcp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Relative eigenvalue slack used by is_psd unless the caller overrides it.
inline constexpr double kPsdTolerance = 1e-9;

template <typename Derived>
double max_abs_entry(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? 0.0 : static_cast<double>(a.cwiseAbs().maxCoeff());
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(std::abs(a(i, j)))) return false;
    return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const std::string& what) {
    if (!all_finite(a)) throw Error(ErrorKind::NotFinite, what + " has a NaN or infinite entry");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const std::string& what) {
    if (a.rows() != a.cols())
        throw Error(ErrorKind::NotSquare, what + " is " + std::to_string(a.rows()) + "x" +
                                              std::to_string(a.cols()));
}

/// Tolerance on |A - A*| entries: 1e-10 relative to the largest entry, floored at 1e-10.
template <typename Derived>
double hermitian_tolerance(const Eigen::MatrixBase<Derived>& a) {
    return 1e-10 * std::max(1.0, max_abs_entry(a));
}

template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? 0.0 : static_cast<double>((a - a.adjoint()).cwiseAbs().maxCoeff());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a) {
    return a.rows() == a.cols() && hermitian_defect(a) <= hermitian_tolerance(a);
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// Only the Hermitian part (A + A*)/2 is handed to the self-adjoint solver, so
/// the result is real even when A carries roundoff-level asymmetry.
template <typename Derived>
RealVector hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    require_square(a, "matrix");
    if (a.size() == 0) return RealVector();
    const double defect = hermitian_defect(a);
    if (defect > hermitian_tolerance(a))
        throw Error(ErrorKind::NotHermitian, "max |A - A*| entry is " + std::to_string(defect));
    const Matrix h = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::ConstructionError, "self-adjoint eigensolver did not converge");
    RealVector values = solver.eigenvalues().reverse();
    return values;
}

template <typename Derived>
RealVector singular_values(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (a.size() == 0) return RealVector();
    Eigen::BDCSVD<Matrix> svd(a.eval());
    return svd.singularValues();
}

/// Sum of singular values.
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& a) {
    require_finite(a, "matrix");
    if (is_hermitian(a)) return hermitian_eigenvalues(a).cwiseAbs().sum();
    return singular_values(a).sum();
}

template <typename Derived>
double entrywise_one_norm(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? 0.0 : static_cast<double>(a.cwiseAbs().sum());
}

/// True iff A is Hermitian and its smallest eigenvalue is at least
/// -scale_tol * max(1, ||A||_tr).
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& a, double scale_tol = kPsdTolerance) {
    require_square(a, "matrix");
    if (a.size() == 0) return true;
    if (!is_hermitian(a)) return false;
    const RealVector ev = hermitian_eigenvalues(a);
    const double tr_norm = ev.cwiseAbs().sum();
    return ev.minCoeff() >= -scale_tol * std::max(1.0, tr_norm);
}

/// Number of singular values above rel_threshold * sigma_max.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& a, double rel_threshold = 1e-9) {
    const RealVector s = singular_values(a);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    return static_cast<Eigen::Index>((s.array() > rel_threshold * s(0)).count());
}

template <typename DerivedA, typename DerivedB>
auto hadamard(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::DimensionMismatch, "Hadamard product of " + std::to_string(a.rows()) +
                                                      "x" + std::to_string(a.cols()) + " and " +
                                                      std::to_string(b.rows()) + "x" +
                                                      std::to_string(b.cols()));
    return a.cwiseProduct(b).eval();
}

/// Entrywise |z|^2, i.e. z ⊙ conj(z) as a real array.
template <typename Derived>
RealMatrix modulus_squared(const Eigen::MatrixBase<Derived>& a) {
    return a.cwiseAbs2();
}

/// Complex sign: z/|z|, with sign(0) = 1.
inline Complex unit_sign(Complex z) {
    const double r = std::abs(z);
    return r == 0.0 ? Complex(1.0, 0.0) : z / r;
}

inline ComplexMatrix all_ones(Eigen::Index n) { return ComplexMatrix::Ones(n, n); }

} // namespace pcp
