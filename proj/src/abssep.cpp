#include "pcp/abssep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include "pcp/cldui.hpp"

namespace pcp {

namespace {

constexpr double kTieGap = 1e-6;
constexpr double kClampTol = 1e-12;
constexpr double kSignTol = 1e-12;

void require_supported(int n) {
    if (n < 2 || n > 5)
        throw Error(ErrorKind::UnsupportedDimension,
                    "ordering enumeration supports 2 <= n <= 5, got " + std::to_string(n));
}

void require_spectrum(const OrderingTable& ordering, const std::vector<double>& lambdas) {
    const auto nn = static_cast<std::size_t>(ordering.n * ordering.n);
    if (lambdas.size() != nn)
        throw Error(ErrorKind::LengthMismatch,
                    "expected " + std::to_string(nn) + " eigenvalues, got " + std::to_string(lambdas.size()));
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (lambdas[i] > lambdas[i - 1])
            throw Error(ErrorKind::NotSorted, "eigenvalues must be non-increasing; lambda_" + std::to_string(i + 1) +
                                                  " exceeds lambda_" + std::to_string(i));
}

/// lambda value assigned to each slot: slot s (0-based) gets lambda_{n^2 - s} (1-based).
std::vector<double> slot_values(const std::vector<double>& lambdas) {
    return {lambdas.rbegin(), lambdas.rend()};
}

} // namespace

std::string to_string(const Slot& slot) {
    std::ostringstream os;
    switch (slot.kind) {
    case SlotKind::Square: os << "a" << slot.k + 1 << "^2"; break;
    case SlotKind::Plus: os << "+a" << slot.k + 1 << "a" << slot.l + 1; break;
    case SlotKind::Minus: os << "-a" << slot.k + 1 << "a" << slot.l + 1; break;
    }
    return os.str();
}

std::vector<OrderingTable> enumerate_orderings(int n, int samples, std::uint64_t seed) {
    require_supported(n);
    std::vector<Slot> labels;
    for (int k = 0; k < n; ++k) labels.push_back({SlotKind::Square, k, k});
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
            labels.push_back({SlotKind::Plus, k, l});
            labels.push_back({SlotKind::Minus, k, l});
        }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::map<std::vector<Slot>, RealVector> found;
    RealVector alpha(n);
    std::vector<std::pair<double, Slot>> products(labels.size());

    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) alpha(i) = std::abs(normal(rng));
        std::sort(alpha.data(), alpha.data() + n, std::greater<>());
        for (std::size_t p = 0; p < labels.size(); ++p) {
            const Slot& slot = labels[p];
            const double v = alpha(slot.k) * alpha(slot.l);
            products[p] = {slot.kind == SlotKind::Minus ? -v : v, slot};
        }
        std::sort(products.begin(), products.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        const double gap = kTieGap * alpha(0) * alpha(0);
        bool tied = false;
        for (std::size_t p = 1; p < products.size() && !tied; ++p)
            tied = products[p - 1].first - products[p].first < gap;
        if (tied) continue;

        std::vector<Slot> order(products.size());
        std::transform(products.begin(), products.end(), order.begin(), [](const auto& p) { return p.second; });
        found.try_emplace(std::move(order), alpha);
    }

    std::vector<OrderingTable> out;
    for (auto& [slots, witness] : found) out.push_back({n, slots, witness});
    return out;
}

const std::vector<OrderingTable>& known_orderings(int n) {
    require_supported(n);
    static std::mutex mutex;
    static std::array<std::optional<std::vector<OrderingTable>>, 6> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& entry = cache[static_cast<std::size_t>(n)];
    if (!entry) entry = enumerate_orderings(n);
    return *entry;
}

void validate_ordering(const OrderingTable& ordering) {
    const int n = ordering.n;
    if (n < 1 || ordering.slots.size() != static_cast<std::size_t>(n * n))
        throw Error(ErrorKind::InvalidOrdering, "ordering must list n^2 products");
    std::set<Slot> seen;
    for (const Slot& s : ordering.slots) {
        const bool ok = s.k >= 0 && s.l < n && (s.kind == SlotKind::Square ? s.k == s.l : s.k < s.l);
        if (!ok || !seen.insert(s).second)
            throw Error(ErrorKind::InvalidOrdering, "bad or repeated slot " + to_string(s));
    }
}

RealMatrix l_map_matrix(const OrderingTable& ordering, const std::vector<double>& lambdas) {
    validate_ordering(ordering);
    require_spectrum(ordering, lambdas);
    const std::vector<double> value = slot_values(lambdas);
    const int n = ordering.n;
    RealMatrix m = RealMatrix::Zero(n, n);
    for (std::size_t s = 0; s < ordering.slots.size(); ++s) {
        const Slot& slot = ordering.slots[s];
        switch (slot.kind) {
        case SlotKind::Square: m(slot.k, slot.k) = 2.0 * value[s]; break;
        case SlotKind::Plus:
            m(slot.k, slot.l) += value[s];
            m(slot.l, slot.k) += value[s];
            break;
        case SlotKind::Minus:
            m(slot.k, slot.l) -= value[s];
            m(slot.l, slot.k) -= value[s];
            break;
        }
    }
    return m;
}

std::vector<double> normalized_spectrum(std::vector<double> lambdas) {
    for (double& l : lambdas) {
        if (l < -kClampTol)
            throw Error(ErrorKind::NegativeEigenvalue, "eigenvalue " + std::to_string(l) + " is negative");
        l = std::max(0.0, l);
    }
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
    return lambdas;
}

AbsPptResult abs_ppt_check(int n, std::vector<double> lambdas) {
    require_supported(n);
    return abs_ppt_check(known_orderings(n), std::move(lambdas));
}

AbsPptResult abs_ppt_check(const std::vector<OrderingTable>& orderings, std::vector<double> lambdas) {
    lambdas = normalized_spectrum(std::move(lambdas));
    AbsPptResult result;
    for (std::size_t j = 0; j < orderings.size(); ++j) {
        const RealMatrix m = l_map_matrix(orderings[j], lambdas);
        result.min_eigenvalues.push_back(hermitian_eigenvalues(m).minCoeff());
        if (!is_psd(m) && result.passes) {
            result.passes = false;
            result.failing_ordering = j;
        }
    }
    return result;
}

ComplexMatrix special_unitary(const OrderingTable& ordering) {
    validate_ordering(ordering);
    const int n = ordering.n;
    const int nn = n * n;
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix u = ComplexMatrix::Zero(nn, nn);
    for (int m = 0; m < nn; ++m) {
        const Slot& slot = ordering.slots[static_cast<std::size_t>(nn - 1 - m)];
        const Eigen::Index kl = tensor_index(n, slot.k, slot.l);
        const Eigen::Index lk = tensor_index(n, slot.l, slot.k);
        switch (slot.kind) {
        case SlotKind::Square: u(kl, m) = 1.0; break;
        case SlotKind::Plus:
            u(kl, m) = r;
            u(lk, m) = r;
            break;
        case SlotKind::Minus:
            u(kl, m) = r;
            u(lk, m) = -r;
            break;
        }
    }
    return u;
}

ComplexMatrix special_state_partial_transpose(const OrderingTable& ordering, const std::vector<double>& lambdas) {
    require_spectrum(ordering, lambdas);
    const ComplexMatrix u = special_unitary(ordering);
    const RealVector lambda = Eigen::Map<const RealVector>(lambdas.data(), static_cast<Eigen::Index>(lambdas.size()));
    const ComplexMatrix rho = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
    return partial_transpose(rho, ordering.n);
}

ConstructorOutcome certify_special_separable(const OrderingTable& ordering, const std::vector<double>& lambdas) {
    const std::string method = "special-unitary/comparison";
    const RealMatrix condition = l_map_matrix(ordering, lambdas);
    if (!is_psd(condition)) {
        ConstructorOutcome out;
        out.status = ConstructorStatus::NotApplicable;
        out.method = method;
        std::ostringstream os;
        os << "not PPT: condition matrix has eigenvalue " << hermitian_eigenvalues(condition).minCoeff();
        out.reason = os.str();
        return out;
    }
    if (lambdas.back() < 0.0) throw Error(ErrorKind::NegativeEigenvalue, "spectrum must be non-negative");

    const ComplexMatrix sigma = special_state_partial_transpose(ordering, lambdas);
    PairXY pair;
    try {
        pair = extract_pair(sigma, ordering.n);
    } catch (const Error& e) {
        throw Error(ErrorKind::ConstructionError, std::string("partial transpose is not CLDUI: ") + e.what());
    }

    const double tol = kSignTol * std::max(1.0, lambdas.front());
    for (Eigen::Index i = 0; i < pair.n(); ++i)
        for (Eigen::Index j = 0; j < pair.n(); ++j) {
            if (i == j) continue;
            const Complex x = pair.x()(i, j);
            if (x.real() > tol || std::abs(x.imag()) > tol)
                throw Error(ErrorKind::ConstructionError, "off-diagonal X entry is not non-positive");
        }
    if ((pair.x().real() - 0.5 * condition).cwiseAbs().maxCoeff() > tol)
        throw Error(ErrorKind::ConstructionError, "partial transpose does not reproduce the condition matrix");

    ConstructorOutcome out = decompose_comparison(pair);
    out.method = method;
    return out;
}

} // namespace pcp
