#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pcp/pairs.hpp"

#ifndef PCP_DATA_DIR
#define PCP_DATA_DIR "data"
#endif

namespace pcp::testing {

inline std::string data_path(const std::string& name) { return std::string(PCP_DATA_DIR) + "/" + name; }

/// Seeded source for the hand-rolled generators below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool coin(double p = 0.5) { return uniform() < p; }
    Complex complex_normal() { return {normal(), normal()}; }
    Complex phase() { return std::polar(1.0, uniform(0.0, 2.0 * M_PI)); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

inline ComplexMatrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = rng.complex_normal();
    return a;
}

inline RealMatrix random_nonnegative(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    RealMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = rng.uniform();
    return a;
}

inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index n) {
    const ComplexMatrix a = random_complex(rng, n, n);
    return (a + a.adjoint()) / 2.0;
}

/// G G* with G of n x rank.
inline ComplexMatrix random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank) {
    const ComplexMatrix g = random_complex(rng, n, rank);
    return g * g.adjoint();
}

/// Random vectors, with some entries zeroed so supports vary.
inline PcpDecomposition random_decomposition(Rng& rng, Eigen::Index n, Eigen::Index m, double zero_prob = 0.15) {
    ComplexMatrix v = random_complex(rng, n, m);
    ComplexMatrix w = random_complex(rng, n, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            if (rng.coin(zero_prob)) v(i, j) = 0.0;
            if (rng.coin(zero_prob)) w(i, j) = 0.0;
        }
    return {std::move(v), std::move(w)};
}

/// A pair satisfying conditions (a)-(c) with generic off-diagonal Y.
inline PairXY random_state_pair(Rng& rng, Eigen::Index n) {
    ComplexMatrix x = random_psd(rng, n, rng.integer(1, static_cast<int>(n)));
    RealMatrix y = 3.0 * random_nonnegative(rng, n, n);
    for (Eigen::Index i = 0; i < n; ++i) y(i, i) = x(i, i).real();
    return {std::move(x), y.cast<Complex>()};
}

/// 2x2 pair satisfying (a)-(d): PSD X, then y_12 y_21 >= |x_12|^2.
inline PairXY random_2x2_pair(Rng& rng) {
    ComplexMatrix x = random_psd(rng, 2, rng.integer(1, 2));
    if (rng.coin(0.1)) x(0, 1) = x(1, 0) = 0.0;
    const double b = std::abs(x(0, 1));
    const double ratio = std::exp(rng.uniform(-2.0, 2.0));
    const double stretch = rng.coin(0.3) ? 1.0 : 1.0 + rng.uniform(0.0, 2.0);
    RealMatrix y(2, 2);
    y << x(0, 0).real(), b * ratio * stretch, b / ratio * stretch, x(1, 1).real();
    if (b == 0.0) {
        y(0, 1) = rng.coin() ? 0.0 : rng.uniform();
        y(1, 0) = rng.coin() ? 0.0 : rng.uniform();
    }
    return {std::move(x), y.cast<Complex>()};
}

/// n^2 values, non-increasing, summing to 1.
inline std::vector<double> random_spectrum(Rng& rng, int count, double spread = 1.0) {
    std::vector<double> l(static_cast<std::size_t>(count));
    for (double& v : l) v = std::exp(spread * rng.normal());
    double total = 0.0;
    for (double v : l) total += v;
    for (double& v : l) v /= total;
    std::sort(l.begin(), l.end(), std::greater<>());
    return l;
}

inline double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace pcp::testing
