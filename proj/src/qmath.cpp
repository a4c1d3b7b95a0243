#include "qgas/qmath.hpp"

#include <cmath>
#include <stdexcept>

namespace qgas {

namespace {
// Below this |q-1| the exact limit [x]_1 = x is used; between this and
// kExpm1Threshold the expm1 form avoids cancellation in (q^x-1)/(q-1).
constexpr double kUnitThreshold = 1e-12;
constexpr double kExpm1Threshold = 1e-6;
} // namespace

DeformationParam::DeformationParam(double q) : q_(q) {
    if (!(q > 0.0) || !std::isfinite(q)) {
        throw std::domain_error("DeformationParam: q must be a positive finite real");
    }
}

bool DeformationParam::is_classical() const {
    return std::abs(q_ - 1.0) < kUnitThreshold;
}

ComplexTemperature::ComplexTemperature(double beta_, double beta1_)
    : beta(beta_), beta1(beta1_) {
    if (!std::isfinite(beta) || !std::isfinite(beta1)) {
        throw std::domain_error("ComplexTemperature: components must be finite");
    }
    if (beta < 0.0) {
        throw std::domain_error("ComplexTemperature: beta must be >= 0");
    }
}

double q_number(double x, const DeformationParam& q) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::domain_error("q_number: x must be a nonnegative finite real");
    }
    const double qs = q.value();
    const double d = qs - 1.0;
    if (std::abs(d) < kUnitThreshold) {
        return x;
    }
    if (std::abs(d) < kExpm1Threshold) {
        const double lq = std::log(qs);
        return std::expm1(x * lq) / std::expm1(lq);
    }
    return (std::pow(qs, x) - 1.0) / d;
}

ComplexTemperature complex_beta(double beta, double tau, const DeformationParam& q,
                                double hbar) {
    if (!(beta >= 0.0)) {
        throw std::domain_error("complex_beta: beta must be >= 0");
    }
    if (!(hbar > 0.0)) {
        throw std::domain_error("complex_beta: hbar must be > 0");
    }
    double beta1 = -(1.0 - 1.0 / q.value()) * tau / hbar;
    if (q.value() == 1.0) {
        beta1 = 0.0; // kill the -0.0 from the vanishing factor
    }
    ComplexTemperature bt(beta, beta1);
    bt.provenance = ComplexTemperature::Provenance{tau, q.value(), hbar};
    return bt;
}

std::complex<double> prefactor(std::span<const double> eps, double tau,
                               const DeformationParam& q, double hbar) {
    if (eps.empty()) {
        throw std::domain_error("prefactor: eps must be nonempty");
    }
    if (!(hbar > 0.0)) {
        throw std::domain_error("prefactor: hbar must be > 0");
    }
    long double sum = 0.0L;
    for (double e : eps) {
        sum += static_cast<long double>(e);
    }
    const long double theta =
        sum * static_cast<long double>(tau) / (static_cast<long double>(q.value()) * hbar);
    return detail::unit_phase(theta);
}

namespace detail {

std::complex<double> unit_phase(long double theta) {
    return {static_cast<double>(cosl(theta)), static_cast<double>(sinl(theta))};
}

std::complex<double> cexp(long double re, long double im) {
    const long double mag = expl(re);
    return {static_cast<double>(mag * cosl(im)), static_cast<double>(mag * sinl(im))};
}

long double q_number_ld(long double x, long double q) {
    const long double d = q - 1.0L;
    if (fabsl(d) < 1e-12L) {
        return x;
    }
    if (fabsl(d) < 1e-6L) {
        const long double lq = logl(q);
        return expm1l(x * lq) / expm1l(lq);
    }
    return (powl(q, x) - 1.0L) / d;
}

} // namespace detail

} // namespace qgas
