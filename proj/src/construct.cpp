#include "pcp/construct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace pcp {

namespace {

constexpr double kRadicandTol = 1e-12;
constexpr double kDiagonalXTol = 1e-10;
constexpr double kDominanceSlack = 1e-9;
constexpr double kPerronEpsilon = 1e-10;
constexpr double kSlackFloor = 1e-12;

std::vector<int> identity_permutation(Eigen::Index n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

ConstructorOutcome violated(std::string method, const NecessaryReport& report) {
    ConstructorOutcome out;
    out.status = ConstructorStatus::ConditionsViolated;
    out.method = std::move(method);
    const auto failed = report.first_failure();
    out.reason = "condition " + std::string(condition_label(*failed)) + " fails";
    const auto idx = static_cast<std::size_t>(*failed);
    if (idx < report.witness.size() && report.witness[idx]) {
        const auto& w = *report.witness[idx];
        std::ostringstream os;
        if (w.row >= 0) os << " at (" << w.row + 1 << ", " << w.col + 1 << ")";
        os << ", value " << w.value;
        out.reason += os.str();
    }
    return out;
}

ConstructorOutcome not_applicable(std::string method, std::string reason, Eigen::Index n) {
    ConstructorOutcome out;
    out.status = ConstructorStatus::NotApplicable;
    out.method = std::move(method);
    out.reason = std::move(reason);
    out.permutation = identity_permutation(n);
    return out;
}

ConstructorOutcome success_if_verified(std::string method, PcpDecomposition dec, const PairXY& pair,
                                       std::vector<int> perm) {
    if (!verify_decomposition(dec, pair, kCertificateTolerance)) {
        const auto r = reconstruction_residual(dec, pair);
        std::ostringstream os;
        os << "constructed vectors do not reconstruct the pair (residuals " << r.x_error << ", " << r.y_error
           << ")";
        return not_applicable(std::move(method), os.str(), pair.n());
    }
    ConstructorOutcome out;
    out.status = ConstructorStatus::Decomposed;
    out.method = std::move(method);
    out.decomposition = std::move(dec);
    out.permutation = std::move(perm);
    return out;
}

/// Terms v = e_i, w = sqrt(p_ij) e_j for all (i, j); reconstructs (diag(p), p).
PcpDecomposition diagonal_terms(const RealMatrix& p) {
    const Eigen::Index n = p.rows();
    ComplexMatrix v = ComplexMatrix::Zero(n, n * n);
    ComplexMatrix w = ComplexMatrix::Zero(n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Eigen::Index col = i * n + j;
            v(i, col) = 1.0;
            w(j, col) = std::sqrt(std::max(0.0, p(i, j)));
        }
    }
    return {std::move(v), std::move(w)};
}

bool is_diagonal(const ComplexMatrix& x) {
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (i != j && std::abs(x(i, j)) > kDiagonalXTol) return false;
    return true;
}

double pair_scale(const PairXY& pair) {
    return std::max({1.0, max_abs_entry(pair.x()), max_abs_entry(pair.y())});
}

struct RecursiveAttempt {
    std::optional<PcpDecomposition> decomposition;
    RadicandWitness witness{};
};

RecursiveAttempt recursive_once(const PairXY& pair) {
    const ComplexMatrix& x = pair.x();
    const ComplexMatrix& y = pair.y();
    const Eigen::Index n = pair.n();
    const double tol = kRadicandTol * pair_scale(pair);

    // Column k holds the vectors v_k, w_k; row j is entry j.
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    RealVector radicand(n);
    ComplexVector numerator(n);

    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double d = 0.0;
            for (Eigen::Index i = 0; i < k; ++i) d += std::norm(v(k, i)) * std::norm(w(j, i));
            radicand(j) = y(k, j).real() - d;
            if (radicand(j) < -tol) return {std::nullopt, {k, j, radicand(j)}};
            radicand(j) = std::max(0.0, radicand(j));
        }
        for (Eigen::Index j = k; j < n; ++j) {
            Complex c = 0.0;
            for (Eigen::Index i = 0; i < k; ++i) c += v(j, i) * w(j, i) * std::conj(v(k, i) * w(k, i));
            numerator(j) = x(j, k) - c;
        }

        if (radicand(k) <= tol) {
            // Nothing left on the diagonal: the whole term must vanish.
            bool residual_zero = true;
            for (Eigen::Index j = 0; j < n; ++j) residual_zero = residual_zero && radicand(j) <= tol;
            for (Eigen::Index j = k; j < n; ++j) residual_zero = residual_zero && std::abs(numerator(j)) <= tol;
            if (!residual_zero) return {std::nullopt, {k, k, radicand(k), true}};
            continue;
        }

        for (Eigen::Index j = k; j < n; ++j) {
            if (radicand(j) <= tol) {
                if (std::abs(numerator(j)) > tol) return {std::nullopt, {k, j, radicand(j), true}};
                v(j, k) = 0.0;
            } else {
                v(j, k) = numerator(j) / std::sqrt(radicand(j));
            }
        }
        const Complex vkk = v(k, k);
        for (Eigen::Index j = 0; j < n; ++j) w(j, k) = std::sqrt(radicand(j)) / vkk;
    }
    return {PcpDecomposition(std::move(v), std::move(w)), {}};
}

PairXY permuted_pair(const PairXY& pair, const std::vector<int>& perm) {
    const Eigen::Index n = pair.n();
    ComplexMatrix x(n, n), y(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            x(a, b) = pair.x()(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
            y(a, b) = pair.y()(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
        }
    }
    return {std::move(x), std::move(y)};
}

std::string describe(const RadicandWitness& w) {
    std::ostringstream os;
    if (w.zero_denominator)
        os << "zero denominator at v_{" << w.term + 1 << "," << w.entry + 1 << "}";
    else
        os << "negative radicand " << w.radicand << " at v_{" << w.term + 1 << "," << w.entry + 1 << "}";
    return os.str();
}

/// Largest-eigenvalue eigenvector of a real symmetric matrix, entrywise absolute value.
RealVector perron_vector(const RealMatrix& p) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(p);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::ConstructionError, "eigensolver failed on Perron block");
    const Eigen::Index top = p.rows() - 1;
    return solver.eigenvectors().col(top).cwiseAbs();
}

} // namespace

std::string_view to_string(ConstructorStatus status) {
    switch (status) {
    case ConstructorStatus::Decomposed: return "Decomposed";
    case ConstructorStatus::NotApplicable: return "NotApplicable";
    case ConstructorStatus::ConditionsViolated: return "ConditionsViolated";
    }
    return "?";
}

ConstructorOutcome decompose_diagonal_x(const PairXY& pair) {
    const std::string method = "diagonal";
    if (!is_diagonal(pair.x())) return not_applicable(method, "X is not diagonal", pair.n());
    const NecessaryReport report = check_necessary(pair);
    if (!report.holds_through(Condition::SameDiagonal)) return violated(method, report);

    RealMatrix p = pair.y().real();
    p.diagonal() = pair.x().diagonal().real();
    return success_if_verified(method, diagonal_terms(p), pair, identity_permutation(pair.n()));
}

ConstructorOutcome decompose_2x2(const PairXY& pair) {
    const std::string method = "2x2";
    if (pair.n() != 2)
        throw Error(ErrorKind::WrongDimension, "2x2 constructor called with n = " + std::to_string(pair.n()));
    const NecessaryReport report = check_necessary(pair);
    if (!report.holds_through(Condition::EntryBound)) return violated(method, report);

    const double x11 = pair.x()(0, 0).real();
    const double x22 = pair.x()(1, 1).real();
    const Complex x21 = pair.x()(1, 0);
    const double y12 = pair.y()(0, 1).real();
    const double y21 = pair.y()(1, 0).real();

    if (x11 > 0.0 && y12 > 0.0) {
        ComplexMatrix v(2, 2), w(2, 2);
        v << 1.0, 0.0, x21 / std::sqrt(x11 * y12), 1.0;
        w << std::sqrt(x11), std::sqrt(std::max(0.0, y21 - std::norm(x21) / y12)), std::sqrt(y12),
            std::sqrt(std::max(0.0, x22 - std::norm(x21) / x11));
        ConstructorOutcome out =
            success_if_verified(method, PcpDecomposition(std::move(v), std::move(w)), pair, {0, 1});
        if (out.decomposed()) return out;
    }
    // x11 = 0 or y12 = 0 forces X diagonal.
    ConstructorOutcome out = decompose_diagonal_x(pair);
    out.method = method;
    return out;
}

ConstructorOutcome decompose_recursive(const PairXY& pair, bool search_permutations) {
    const std::string method = search_permutations ? "recursive+permutations" : "recursive";
    const NecessaryReport report = check_necessary(pair);
    if (!report.holds_through(Condition::SameDiagonal)) return violated(method, report);

    const Eigen::Index n = pair.n();
    std::vector<int> perm = identity_permutation(n);
    RecursiveAttempt first = recursive_once(pair);
    if (first.decomposition) {
        ConstructorOutcome out = success_if_verified(method, std::move(*first.decomposition), pair, perm);
        if (out.decomposed() || !search_permutations) return out;
    }

    ConstructorOutcome fail = not_applicable(method, describe(first.witness), n);
    if (!first.decomposition) fail.stuck_at = first.witness;
    if (!search_permutations) return fail;
    if (n > kMaxPermutationSearch) {
        fail.reason += "; permutation search is limited to n <= " + std::to_string(kMaxPermutationSearch);
        return fail;
    }

    std::size_t tried = 1;
    while (std::next_permutation(perm.begin(), perm.end())) {
        ++tried;
        RecursiveAttempt attempt = recursive_once(permuted_pair(pair, perm));
        if (!attempt.decomposition) continue;
        ConstructorOutcome out =
            success_if_verified(method, attempt.decomposition->unpermuted(perm), pair, perm);
        if (out.decomposed()) {
            out.stuck_at = fail.stuck_at;
            return out;
        }
    }
    fail.reason += "; all " + std::to_string(tried) + " index orderings failed";
    return fail;
}

double dominance_margin(const ComplexMatrix& x) {
    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (j != i) off += std::abs(x(i, j));
        margin = std::min(margin, std::abs(x(i, i)) - off);
    }
    return margin;
}

RealVector perron_scaling(const ComplexMatrix& x) {
    require_square(x, "X");
    const RealMatrix m = comparison_matrix(x);
    if (!is_psd(m)) throw Error(ErrorKind::ComparisonNotPsd, "comparison matrix M(X) is not positive semidefinite");

    const Eigen::Index n = x.rows();
    RealVector d = RealVector::Ones(n);
    if (n == 0 || dominance_margin(x) >= -kDominanceSlack * std::max(1.0, max_abs_entry(x))) return d;
    const double alpha = m.diagonal().maxCoeff();
    const double edge_tol = 1e-14 * std::max(1.0, max_abs_entry(x));

    std::vector<int> component(static_cast<std::size_t>(n), -1);
    int count = 0;
    for (Eigen::Index start = 0; start < n; ++start) {
        if (component[static_cast<std::size_t>(start)] >= 0) continue;
        std::vector<Eigen::Index> members;
        std::queue<Eigen::Index> frontier;
        frontier.push(start);
        component[static_cast<std::size_t>(start)] = count;
        while (!frontier.empty()) {
            const Eigen::Index i = frontier.front();
            frontier.pop();
            members.push_back(i);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (component[static_cast<std::size_t>(j)] < 0 && j != i &&
                    (std::abs(x(i, j)) > edge_tol || std::abs(x(j, i)) > edge_tol)) {
                    component[static_cast<std::size_t>(j)] = count;
                    frontier.push(j);
                }
            }
        }
        ++count;
        if (members.size() == 1) continue;

        std::sort(members.begin(), members.end());
        const auto s = static_cast<Eigen::Index>(members.size());
        RealMatrix p(s, s);
        for (Eigen::Index a = 0; a < s; ++a)
            for (Eigen::Index b = 0; b < s; ++b)
                p(a, b) = (a == b ? alpha : 0.0) - m(members[static_cast<std::size_t>(a)],
                                                     members[static_cast<std::size_t>(b)]);
        RealVector vec = perron_vector(p);
        if (vec.minCoeff() <= 1e-12 * vec.maxCoeff())
            vec = perron_vector(p + RealMatrix::Constant(s, s, kPerronEpsilon));
        vec /= vec.maxCoeff();
        for (Eigen::Index a = 0; a < s; ++a) d(members[static_cast<std::size_t>(a)]) = vec(a);
    }

    const ComplexMatrix scaled = d.asDiagonal() * x * d.asDiagonal();
    if (dominance_margin(scaled) < -kDominanceSlack * std::max(1.0, max_abs_entry(scaled)))
        throw Error(ErrorKind::ConstructionError, "Perron scaling did not produce a diagonally dominant matrix");
    return d;
}

ComparisonFactorization comparison_factorization(const PairXY& pair) {
    const NecessaryReport report = check_necessary(pair);
    if (!report.holds_through(Condition::EntryBound))
        throw Error(ErrorKind::ConditionsViolated,
                    "comparison route needs (a)-(d); " + std::string(condition_label(*report.first_failure())) +
                        " fails");

    ComparisonFactorization parts;
    parts.scaling = perron_scaling(pair.x());
    const Eigen::Index n = pair.n();
    const auto& d = parts.scaling;
    const ComplexMatrix xs = d.asDiagonal() * pair.x() * d.asDiagonal();
    const RealMatrix ys = d.asDiagonal() * pair.y().real() * d.asDiagonal();

    // Off-diagonal y' with y'_ij y'_ji = |x_ij|^2 and y' <= y entrywise.
    RealMatrix y_core = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j || ys(i, j) <= 0.0 || ys(j, i) <= 0.0) continue;
            y_core(i, j) = std::abs(xs(i, j)) * std::sqrt(ys(i, j) / ys(j, i));
        }
    }

    std::vector<Eigen::Index> cols_k, cols_l;
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = k + 1; l < n; ++l)
            if (y_core(k, l) > 0.0 && y_core(l, k) > 0.0) {
                cols_k.push_back(k);
                cols_l.push_back(l);
            }

    RealVector row_sum = RealVector::Zero(n);
    if (!cols_k.empty()) {
        const auto m = static_cast<Eigen::Index>(cols_k.size());
        ComplexMatrix v = ComplexMatrix::Zero(n, m);
        ComplexMatrix w = ComplexMatrix::Zero(n, m);
        for (Eigen::Index c = 0; c < m; ++c) {
            const Eigen::Index k = cols_k[static_cast<std::size_t>(c)];
            const Eigen::Index l = cols_l[static_cast<std::size_t>(c)];
            const double root_kl = std::pow(y_core(k, l), 0.25);
            const double root_lk = std::pow(y_core(l, k), 0.25);
            v(k, c) = unit_sign(xs(k, l)) * root_kl;
            v(l, c) = root_lk;
            w(k, c) = root_lk;
            w(l, c) = root_kl;
            parts.core_columns.emplace_back(static_cast<int>(k), static_cast<int>(l));
            const double mod = std::sqrt(y_core(k, l) * y_core(l, k));
            row_sum(k) += mod;
            row_sum(l) += mod;
        }
        parts.core = PcpDecomposition(std::move(v), std::move(w));
    }

    RealMatrix slack = ys - y_core;
    for (Eigen::Index i = 0; i < n; ++i) slack(i, i) = xs(i, i).real() - row_sum(i);
    // Roundoff-sized slack would only add terms of size sqrt(eps).
    const double slack_floor = kSlackFloor * std::max(1.0, max_abs_entry(ys));
    slack = (slack.array() > slack_floor).select(slack, 0.0);
    PcpDecomposition slack_dec = diagonal_terms(slack).without_zero_terms();
    if (!slack_dec.v().isZero(0.0)) parts.slack = std::move(slack_dec);
    return parts;
}

PcpDecomposition assemble(const ComparisonFactorization& parts) {
    const Eigen::Index n = parts.scaling.size();
    std::optional<PcpDecomposition> out;
    if (parts.core) out = *parts.core;
    if (parts.slack) out = out ? out->concatenated(*parts.slack) : *parts.slack;
    if (!out) return {ComplexMatrix::Zero(n, 1), ComplexMatrix::Zero(n, 1)};
    return out->scaled(parts.scaling.cwiseInverse());
}

ConstructorOutcome decompose_comparison(const PairXY& pair) {
    const std::string method = "comparison";
    const NecessaryReport report = check_necessary(pair);
    if (!report.holds_through(Condition::EntryBound)) return violated(method, report);
    try {
        const ComparisonFactorization parts = comparison_factorization(pair);
        return success_if_verified(method, assemble(parts), pair, identity_permutation(pair.n()));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ComparisonNotPsd)
            return not_applicable(method, "comparison matrix M(X) is not positive semidefinite", pair.n());
        throw;
    }
}

PairXY isotropic_pair(Eigen::Index n, double a, double b) {
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix ones = ComplexMatrix::Ones(n, n);
    return {a * id + b * ones, b * id + a * ones};
}

IsotropicConstants isotropic_constants(Eigen::Index n) {
    const auto nd = static_cast<double>(n);
    const double base = nd * nd - nd + 2.0;
    const double disc = std::sqrt(nd * nd * nd * nd - 2.0 * nd * nd * nd + nd * nd + 4.0 * nd);
    return {std::sqrt((base + disc) / 2.0), std::sqrt(std::max(0.0, (base - disc) / 2.0))};
}

ConstructorOutcome decompose_isotropic(Eigen::Index n, double a, double b) {
    const std::string method = "isotropic";
    if (n < 1) throw Error(ErrorKind::WrongDimension, "isotropic pair needs n >= 1");
    const auto nd = static_cast<double>(n);
    const double tol = 1e-12 * std::max(1.0, std::abs(a));
    if (a < 0.0 || b < -a / nd - tol || b > a + tol) {
        ConstructorOutcome out;
        out.status = ConstructorStatus::ConditionsViolated;
        out.method = method;
        std::ostringstream os;
        os << "isotropic pair needs a >= 0 and -a/n <= b <= a (a = " << a << ", b = " << b << ")";
        out.reason = os.str();
        return out;
    }
    const PairXY pair = isotropic_pair(n, a, b);
    if (a == 0.0)
        return success_if_verified(method, {ComplexMatrix::Zero(n, 1), ComplexMatrix::Zero(n, 1)}, pair,
                                   identity_permutation(n));

    // Rescale to a = n, then b' in [-1, n] is t * (-1) + (1 - t) * n.
    const double s = a / nd;
    const double b_scaled = b / s;
    const double t = std::clamp((nd - b_scaled) / (nd + 1.0), 0.0, 1.0);

    std::optional<PcpDecomposition> dec;
    if (t > 0.0) {
        const auto [c_plus, c_minus] = isotropic_constants(n);
        ComplexMatrix v = ComplexMatrix::Constant(n, n, 1.0);
        ComplexMatrix w = ComplexMatrix::Constant(n, n, -1.0);
        v.diagonal().array() += c_plus - 1.0;
        v /= std::sqrt(nd);
        w.diagonal().array() += c_minus + 1.0;
        dec = PcpDecomposition(std::sqrt(s * t) * v, std::move(w));
    }
    if (t < 1.0) {
        const double root = std::sqrt(nd + 1.0);
        RealMatrix cp = RealMatrix::Ones(n, n);
        cp.diagonal().array() += 1.0 + root;
        cp *= std::sqrt(nd) / (1.0 + root);
        // X = sum_k x_k x_k^T with x_k >= 0, so v_k = w_k = sqrt(x_k) entrywise.
        const ComplexMatrix v = cp.cwiseSqrt().cast<Complex>();
        PcpDecomposition cp_dec(std::sqrt(s * (1.0 - t)) * v, v);
        dec = dec ? dec->concatenated(cp_dec) : cp_dec;
    }
    return success_if_verified(method, std::move(*dec), pair, identity_permutation(n));
}

ConstructorOutcome decompose_auto(const PairXY& pair) {
    const NecessaryReport report = check_necessary(pair);
    if (!report.holds_through(Condition::EntryBound)) return violated("auto", report);
    if (!report.holds_condition(Condition::NormGap))
        return not_applicable("auto", "condition (e) fails, so the pair is not PCP", pair.n());

    std::vector<std::string> attempts;
    auto record = [&](const ConstructorOutcome& out) {
        attempts.push_back(out.method + ": " + (out.decomposed() ? "decomposed" : out.reason));
    };

    if (is_diagonal(pair.x())) {
        ConstructorOutcome out = decompose_diagonal_x(pair);
        record(out);
        if (out.decomposed()) return out.attempts = attempts, out;
    }
    if (pair.n() == 2) {
        ConstructorOutcome out = decompose_2x2(pair);
        record(out);
        if (out.decomposed()) return out.attempts = attempts, out;
    }
    {
        ConstructorOutcome out = decompose_comparison(pair);
        record(out);
        if (out.decomposed()) return out.attempts = attempts, out;
    }
    ConstructorOutcome out = decompose_recursive(pair, true);
    record(out);
    if (out.decomposed()) return out.attempts = attempts, out;

    ConstructorOutcome fail = not_applicable("auto", "no sufficient condition applies", pair.n());
    fail.attempts = std::move(attempts);
    return fail;
}

} // namespace pcp
