#include "qgas/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgas::analytic {

namespace {

std::complex<double> cexp_neg(const ComplexTemperature& bt, double factor) {
    // exp(-bt * factor) with extended-precision phase.
    return qgas::detail::cexp(-static_cast<long double>(bt.beta) * factor,
                              -static_cast<long double>(bt.beta1) * factor);
}

} // namespace

std::complex<double> partition_closed_n1(const ComplexTemperature& bt,
                                         const std::array<double, 2>& eps) {
    const double deps = eps[1] - eps[0];
    return cexp_neg(bt, eps[0]) * (1.0 + cexp_neg(bt, deps));
}

std::complex<double> zc_closed_n3(const ComplexTemperature& bt,
                                  const std::array<double, 2>& eps,
                                  const DeformationParam& q) {
    const double qv = q.value();
    const double deps = eps[1] - eps[0];
    return (1.0 + qv) * cexp_neg(bt, eps[0] * (qv + 1.0) + eps[1]) *
           (1.0 + cexp_neg(bt, qv * deps));
}

double ZeroFamily::beta1(int n) const {
    return std::numbers::pi * (2.0 * n + 1.0) / scale;
}

std::vector<double> ZeroFamily::beta1_values() const {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) {
        values.push_back(beta1(n));
    }
    return values;
}

ZeroFamily zeros_partition_n1(const std::array<double, 2>& eps, int n_min, int n_max) {
    const double deps = eps[1] - eps[0];
    if (deps == 0.0) {
        throw std::domain_error("zeros_partition_n1: degenerate spectrum (deps = 0)");
    }
    if (n_min > n_max) {
        throw std::domain_error("zeros_partition_n1: empty n range");
    }
    return ZeroFamily{ZeroFamilyKind::partition_n1, 0.0, deps, n_min, n_max};
}

ZeroFamily zeros_correlation_n3(const std::array<double, 2>& eps,
                                const DeformationParam& q, int n_min, int n_max) {
    const double deps = eps[1] - eps[0];
    if (deps == 0.0) {
        throw std::domain_error("zeros_correlation_n3: degenerate spectrum (deps = 0)");
    }
    if (n_min > n_max) {
        throw std::domain_error("zeros_correlation_n3: empty n range");
    }
    return ZeroFamily{ZeroFamilyKind::correlation_n3, 0.0, q.value() * deps, n_min,
                      n_max};
}

std::vector<double> zero_times_n3(const std::array<double, 2>& eps,
                                  const DeformationParam& q, double hbar, int n_min,
                                  int n_max) {
    const double deps = eps[1] - eps[0];
    if (deps == 0.0) {
        throw std::domain_error("zero_times_n3: degenerate spectrum (deps = 0)");
    }
    if (q.is_classical()) {
        throw std::domain_error("zero_times_n3: no finite zero times at q = 1");
    }
    if (!(hbar > 0.0)) {
        throw std::domain_error("zero_times_n3: hbar must be > 0");
    }
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) {
        times.push_back(hbar * std::numbers::pi * (2.0 * n + 1.0) /
                        ((q.value() - 1.0) * deps));
    }
    return times;
}

} // namespace qgas::analytic
