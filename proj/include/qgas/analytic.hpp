#ifndef QGAS_ANALYTIC_HPP
#define QGAS_ANALYTIC_HPP

#include <array>
#include <complex>
#include <vector>

#include "qgas/qmath.hpp"

namespace qgas::analytic {

/// Closed-form N = 1 two-level partition function
/// Z(bt) = e^{-bt*eps1} (1 + e^{-bt*deps}), deps = eps2 - eps1.
std::complex<double> partition_closed_n1(const ComplexTemperature& bt,
                                         const std::array<double, 2>& eps);

/// Closed-form N = 3 two-level correlation numerator
/// Z_c(bt) = (1+q) e^{-bt(eps1(q+1)+eps2)} (1 + e^{-bt*q*deps}).
std::complex<double> zc_closed_n3(const ComplexTemperature& bt,
                                  const std::array<double, 2>& eps,
                                  const DeformationParam& q);

enum class ZeroFamilyKind { partition_n1, correlation_n3 };

/// One family of purely imaginary zeros beta = 0, beta1(n) = pi(2n+1)/scale,
/// n ranging over the requested integer interval.
struct ZeroFamily {
    ZeroFamilyKind kind;
    double beta = 0.0;   // always 0 for these families
    double scale;        // deps (partition N=1) or q*deps (correlation N=3)
    int n_min, n_max;

    double beta1(int n) const;
    std::vector<double> beta1_values() const;
    ComplexTemperature member(int n) const { return {0.0, beta1(n)}; }
};

inline constexpr int kDefaultNMin = -3;
inline constexpr int kDefaultNMax = 3;

/// Fisher zeros of the N = 1 partition function: beta1 * deps = pi(2n+1).
ZeroFamily zeros_partition_n1(const std::array<double, 2>& eps,
                              int n_min = kDefaultNMin, int n_max = kDefaultNMax);

/// Correlation zeros for N = 3: beta1 * q * deps = pi(2n+1).
ZeroFamily zeros_correlation_n3(const std::array<double, 2>& eps,
                                const DeformationParam& q, int n_min = kDefaultNMin,
                                int n_max = kDefaultNMax);

/// Times tau = hbar*pi(2n+1) / ((q-1)*deps) at which the N = 3 correlator
/// vanishes. Throws std::domain_error at q = 1 (the zeros escape to infinity).
std::vector<double> zero_times_n3(const std::array<double, 2>& eps,
                                  const DeformationParam& q, double hbar,
                                  int n_min = kDefaultNMin, int n_max = kDefaultNMax);

} // namespace qgas::analytic

#endif
