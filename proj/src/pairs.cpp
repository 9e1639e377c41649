#include "pcp/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pcp {

namespace {

constexpr double kDiagonalTol = 1e-9;
constexpr double kImagTol = 1e-12;
constexpr double kNegativeTol = 1e-12;
constexpr double kEntryBoundTol = 1e-12;
constexpr double kNormGapTol = 1e-8;

} // namespace

PairXY::PairXY(ComplexMatrix x, ComplexMatrix y) : x_(std::move(x)), y_(std::move(y)) {
    require_square(x_, "X");
    require_square(y_, "Y");
    if (x_.rows() != y_.rows())
        throw Error(ErrorKind::DimensionMismatch, "X is " + std::to_string(x_.rows()) +
                                                      "x" + std::to_string(x_.rows()) + " but Y is " +
                                                      std::to_string(y_.rows()) + "x" +
                                                      std::to_string(y_.rows()));
    require_finite(x_, "X");
    require_finite(y_, "Y");
}

PcpDecomposition::PcpDecomposition(ComplexMatrix v, ComplexMatrix w) : v_(std::move(v)), w_(std::move(w)) {
    if (v_.rows() != w_.rows() || v_.cols() != w_.cols())
        throw Error(ErrorKind::DimensionMismatch,
                    "V is " + std::to_string(v_.rows()) + "x" + std::to_string(v_.cols()) + " but W is " +
                        std::to_string(w_.rows()) + "x" + std::to_string(w_.cols()));
    if (v_.cols() < 1) throw Error(ErrorKind::DimensionMismatch, "a decomposition needs at least one term");
    require_finite(v_, "V");
    require_finite(w_, "W");
}

PcpDecomposition PcpDecomposition::concatenated(const PcpDecomposition& other) const {
    if (other.n() != n()) throw Error(ErrorKind::DimensionMismatch, "cannot concatenate decompositions of different n");
    ComplexMatrix v(n(), terms() + other.terms());
    ComplexMatrix w(n(), terms() + other.terms());
    v << v_, other.v_;
    w << w_, other.w_;
    return {std::move(v), std::move(w)};
}

PcpDecomposition PcpDecomposition::without_zero_terms() const {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < terms(); ++k) {
        const bool x_zero = v_.col(k).cwiseProduct(w_.col(k)).isZero(0.0);
        const bool y_zero = v_.col(k).isZero(0.0) || w_.col(k).isZero(0.0);
        if (!(x_zero && y_zero)) keep.push_back(k);
    }
    if (keep.empty()) return {ComplexMatrix::Zero(n(), 1), ComplexMatrix::Zero(n(), 1)};
    ComplexMatrix v(n(), static_cast<Eigen::Index>(keep.size()));
    ComplexMatrix w(n(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        v.col(static_cast<Eigen::Index>(c)) = v_.col(keep[c]);
        w.col(static_cast<Eigen::Index>(c)) = w_.col(keep[c]);
    }
    return {std::move(v), std::move(w)};
}

PcpDecomposition PcpDecomposition::scaled(const RealVector& d) const {
    if (d.size() != n()) throw Error(ErrorKind::DimensionMismatch, "scaling vector has wrong length");
    const ComplexVector root = d.cwiseSqrt().cast<Complex>();
    return {root.asDiagonal() * v_, root.asDiagonal() * w_};
}

PcpDecomposition PcpDecomposition::permuted(const std::vector<int>& perm) const {
    if (static_cast<Eigen::Index>(perm.size()) != n())
        throw Error(ErrorKind::DimensionMismatch, "permutation has wrong length");
    ComplexMatrix v(n(), terms()), w(n(), terms());
    for (Eigen::Index i = 0; i < n(); ++i) {
        v.row(i) = v_.row(perm[static_cast<std::size_t>(i)]);
        w.row(i) = w_.row(perm[static_cast<std::size_t>(i)]);
    }
    return {std::move(v), std::move(w)};
}

PcpDecomposition PcpDecomposition::unpermuted(const std::vector<int>& perm) const {
    if (static_cast<Eigen::Index>(perm.size()) != n())
        throw Error(ErrorKind::DimensionMismatch, "permutation has wrong length");
    ComplexMatrix v(n(), terms()), w(n(), terms());
    for (Eigen::Index i = 0; i < n(); ++i) {
        v.row(perm[static_cast<std::size_t>(i)]) = v_.row(i);
        w.row(perm[static_cast<std::size_t>(i)]) = w_.row(i);
    }
    return {std::move(v), std::move(w)};
}

PairXY reconstruct(const PcpDecomposition& dec) {
    const ComplexMatrix vw = hadamard(dec.v(), dec.w());
    ComplexMatrix x = vw * vw.adjoint();
    const RealMatrix y = modulus_squared(dec.v()) * modulus_squared(dec.w()).transpose();
    // X is a Gram matrix; symmetrize away the roundoff so downstream Hermitian checks are exact.
    x = ((x + x.adjoint()) / 2.0).eval();
    return {std::move(x), y.cast<Complex>()};
}

ReconstructionResidual reconstruction_residual(const PcpDecomposition& dec, const PairXY& pair) {
    if (dec.n() != pair.n())
        throw Error(ErrorKind::DimensionMismatch, "decomposition has n = " + std::to_string(dec.n()) +
                                                      " but the pair has n = " + std::to_string(pair.n()));
    const PairXY rec = reconstruct(dec);
    return {(rec.x() - pair.x()).norm(), (rec.y() - pair.y()).norm(),
            std::max({1.0, pair.x().norm(), pair.y().norm()})};
}

bool verify_decomposition(const PcpDecomposition& dec, const PairXY& pair, double tol) {
    const auto r = reconstruction_residual(dec, pair);
    return r.x_error <= tol * r.scale && r.y_error <= tol * r.scale;
}

std::string_view condition_label(Condition c) {
    switch (c) {
    case Condition::Psd: return "(a) X positive semidefinite";
    case Condition::NonNegative: return "(b) Y real and entrywise non-negative";
    case Condition::SameDiagonal: return "(c) equal diagonals";
    case Condition::EntryBound: return "(d) |x_ij|^2 <= y_ij y_ji";
    case Condition::NormGap: return "(e) ||X||_1 - ||X||_tr <= ||Y||_1 - ||Y||_tr";
    }
    return "?";
}

bool NecessaryReport::holds_all() const {
    return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

bool NecessaryReport::holds_through(Condition last) const {
    for (int c = 0; c <= static_cast<int>(last); ++c)
        if (!holds[static_cast<std::size_t>(c)]) return false;
    return true;
}

std::optional<Condition> NecessaryReport::first_failure() const {
    for (int c = 0; c < 5; ++c)
        if (!holds[static_cast<std::size_t>(c)]) return static_cast<Condition>(c);
    return std::nullopt;
}

NecessaryReport check_necessary(const PairXY& pair) {
    const ComplexMatrix& x = pair.x();
    const ComplexMatrix& y = pair.y();
    const Eigen::Index n = pair.n();
    NecessaryReport report;

    // (a)
    const double defect_tol = hermitian_tolerance(x);
    report.holds[0] = true;
    for (Eigen::Index i = 0; i < n && report.holds[0]; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double d = std::abs(x(i, j) - std::conj(x(j, i)));
            if (d > defect_tol) {
                report.holds[0] = false;
                report.witness[0] = EntryWitness{i, j, d};
                break;
            }
        }
    }
    if (report.holds[0] && n > 0 && !is_psd(x)) {
        report.holds[0] = false;
        report.witness[0] = EntryWitness{-1, -1, hermitian_eigenvalues(x).minCoeff()};
    }

    // (b)
    report.holds[1] = true;
    const double neg_tol = kNegativeTol * std::max(1.0, max_abs_entry(y));
    for (Eigen::Index i = 0; i < n && report.holds[1]; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex v = y(i, j);
            if (std::abs(v.imag()) > kImagTol * std::max(1.0, std::abs(v))) {
                report.holds[1] = false;
                report.witness[1] = EntryWitness{i, j, v.imag()};
                break;
            }
            if (v.real() < -neg_tol) {
                report.holds[1] = false;
                report.witness[1] = EntryWitness{i, j, v.real()};
                break;
            }
        }
    }

    // (c)
    report.holds[2] = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex diff = x(i, i) - y(i, i);
        if (std::abs(diff) > kDiagonalTol * std::max(1.0, std::abs(x(i, i)))) {
            report.holds[2] = false;
            report.witness[2] = EntryWitness{i, i, diff.real()};
            break;
        }
    }

    // (d)
    report.holds[3] = true;
    for (Eigen::Index i = 0; i < n && report.holds[3]; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double lhs = std::norm(x(i, j));
            const double rhs = y(i, j).real() * y(j, i).real();
            const double slack = kEntryBoundTol * std::max({1.0, lhs, std::abs(rhs)});
            if (lhs > rhs + slack) {
                report.holds[3] = false;
                report.witness[3] = EntryWitness{i, j, lhs - rhs};
                break;
            }
        }
    }

    // (e)
    report.coherence_x = entrywise_one_norm(x) - trace_norm(x);
    report.coherence_y = entrywise_one_norm(y) - trace_norm(y);
    report.holds[4] = report.coherence_x <= report.coherence_y + kNormGapTol * std::max(1.0, entrywise_one_norm(y));
    return report;
}

bool satisfies_state_conditions(const PairXY& pair) {
    return check_necessary(pair).holds_through(Condition::SameDiagonal);
}

std::pair<double, double> strong_cs_gap(const ComplexVector& v, const ComplexVector& w) {
    if (v.size() != w.size())
        throw Error(ErrorKind::DimensionMismatch, "vectors of length " + std::to_string(v.size()) + " and " +
                                                      std::to_string(w.size()));
    const RealVector vv = v.cwiseAbs2();
    const RealVector ww = w.cwiseAbs2();
    const double lhs = vv.norm() * ww.norm() - vv.dot(ww);
    const double rhs = v.squaredNorm() * w.squaredNorm() - std::norm(v.dot(w));
    return {lhs, rhs};
}

Eigen::Index length_lower_bound(const PairXY& pair) {
    const NecessaryReport report = check_necessary(pair);
    if (!report.holds_through(Condition::SameDiagonal))
        throw Error(ErrorKind::ConditionsViolated,
                    std::string("length bound needs conditions (a)-(c); failed ") +
                        std::string(condition_label(*report.first_failure())));
    return numerical_rank(pair.x(), 1e-9);
}

} // namespace pcp
