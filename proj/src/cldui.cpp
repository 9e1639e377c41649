#include "pcp/cldui.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace pcp {

namespace {

constexpr double kPatternTol = 1e-10;
constexpr double kInvarianceTol = 1e-9;
constexpr double kRealignTol = 1e-8;

void require_state_shape(const ComplexMatrix& rho, Eigen::Index n) {
    if (n < 1) throw Error(ErrorKind::WrongDimension, "local dimension must be positive");
    if (rho.rows() != n * n || rho.cols() != n * n)
        throw Error(ErrorKind::WrongDimension, "expected a " + std::to_string(n * n) + "x" + std::to_string(n * n) +
                                                   " matrix, got " + std::to_string(rho.rows()) + "x" +
                                                   std::to_string(rho.cols()));
}

void require_state_pair(const PairXY& pair) {
    const NecessaryReport report = check_necessary(pair);
    if (!report.holds_through(Condition::SameDiagonal))
        throw Error(ErrorKind::ConditionsViolated,
                    "pair does not define a PSD CLDUI operator: " +
                        std::string(condition_label(*report.first_failure())) + " fails");
}

bool on_pattern(Eigen::Index i, Eigen::Index k, Eigen::Index j, Eigen::Index l) {
    return (i == k && j == l) || (i == j && k == l);
}

} // namespace

ComplexMatrix dense_state(const PairXY& pair) {
    const Eigen::Index n = pair.n();
    ComplexMatrix rho = ComplexMatrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            rho(tensor_index(n, i, i), tensor_index(n, j, j)) = pair.x()(i, j);
            if (i != j) rho(tensor_index(n, i, j), tensor_index(n, i, j)) = pair.y()(i, j);
        }
    }
    return rho;
}

CLDUIState build_state(const PairXY& pair) {
    require_state_pair(pair);
    return {pair, dense_state(pair)};
}

PairXY extract_pair(const ComplexMatrix& rho, Eigen::Index n) {
    require_state_shape(rho, n);
    const double threshold = kPatternTol * max_abs_entry(rho);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index l = 0; l < n; ++l) {
                    if (on_pattern(i, k, j, l)) continue;
                    const Complex v = rho(tensor_index(n, i, k), tensor_index(n, j, l));
                    if (std::abs(v) > threshold) {
                        std::ostringstream os;
                        os << "entry at row (" << i + 1 << "," << k + 1 << "), column (" << j + 1 << "," << l + 1
                           << ") [flat " << tensor_index(n, i, k) << ", " << tensor_index(n, j, l)
                           << "] is " << std::abs(v) << " but must vanish";
                        throw Error(ErrorKind::NotCLDUI, os.str());
                    }
                }

    ComplexMatrix x(n, n), y(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            x(i, j) = rho(tensor_index(n, i, i), tensor_index(n, j, j));
            y(i, j) = i == j ? x(i, i) : rho(tensor_index(n, i, j), tensor_index(n, i, j));
        }
    }
    return {std::move(x), std::move(y)};
}

bool is_diagonal_unitary_invariant(const ComplexMatrix& rho, Eigen::Index n, int samples, std::uint64_t seed) {
    require_state_shape(rho, n);
    const double norm = rho.norm();
    if (norm == 0.0) return true;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    ComplexVector u(n);
    for (int s = 0; s < samples; ++s) {
        for (Eigen::Index i = 0; i < n; ++i) u(i) = std::polar(1.0, phase(rng));
        // (U ⊗ conj U) has diagonal u_i conj(u_k) at (i,k).
        ComplexVector d(n * n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k) d(tensor_index(n, i, k)) = u(i) * std::conj(u(k));
        const ComplexMatrix conjugated = d.asDiagonal() * rho * d.conjugate().asDiagonal();
        if ((conjugated - rho).norm() > kInvarianceTol * norm) return false;
    }
    return true;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, Eigen::Index n) {
    require_state_shape(rho, n);
    ComplexMatrix out(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index l = 0; l < n; ++l)
                    out(tensor_index(n, i, l), tensor_index(n, j, k)) =
                        rho(tensor_index(n, i, k), tensor_index(n, j, l));
    return out;
}

ComplexMatrix realign_map(const ComplexMatrix& rho, Eigen::Index n) {
    require_state_shape(rho, n);
    ComplexMatrix out(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index l = 0; l < n; ++l)
                    out(tensor_index(n, i, j), tensor_index(n, k, l)) =
                        rho(tensor_index(n, i, k), tensor_index(n, j, l));
    return out;
}

bool ppt_check(const PairXY& pair) {
    require_state_pair(pair);
    return check_necessary(pair).holds_condition(Condition::EntryBound);
}

RealignmentReport realignment_check(const PairXY& pair) {
    require_state_pair(pair);
    const double y_one = entrywise_one_norm(pair.y());
    RealignmentReport r;
    r.lhs = entrywise_one_norm(pair.x()) - trace_norm(pair.x());
    r.rhs = y_one - trace_norm(pair.y());
    r.passes = r.lhs <= r.rhs + kRealignTol * std::max(1.0, y_one);
    return r;
}

std::string_view to_string(Separability s) {
    switch (s) {
    case Separability::Separable: return "separable";
    case Separability::Entangled: return "entangled";
    case Separability::Inconclusive: return "inconclusive";
    }
    return "?";
}

SeparabilityVerdict separability_verdict(const PairXY& pair) {
    SeparabilityVerdict verdict;
    verdict.ppt = ppt_check(pair);
    verdict.realignment = realignment_check(pair);
    if (!verdict.ppt) {
        verdict.kind = Separability::Entangled;
        verdict.criterion = "PPT (condition (d))";
        return verdict;
    }
    if (!verdict.realignment.passes) {
        verdict.kind = Separability::Entangled;
        verdict.criterion = "realignment (condition (e))";
        return verdict;
    }

    ConstructorOutcome outcome = decompose_auto(pair);
    verdict.attempts = outcome.attempts;
    if (outcome.decomposed()) {
        verdict.kind = Separability::Separable;
        const PcpDecomposition& dec = *outcome.decomposition;
        verdict.separable_vectors = PcpDecomposition(dec.v(), dec.w().conjugate());
        verdict.certificate = std::move(outcome);
        return verdict;
    }
    verdict.kind = Separability::Inconclusive;
    if (verdict.attempts.empty()) verdict.attempts.push_back(outcome.reason);
    return verdict;
}

} // namespace pcp
