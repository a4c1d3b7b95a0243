#ifndef QGAS_QMATH_HPP
#define QGAS_QMATH_HPP

#include <complex>
#include <optional>
#include <span>

namespace qgas {

/// Deformation parameter q of the oscillator algebra a a+ - q a+ a = 1.
/// q > 0 is required; q = 1 is the undeformed (ordinary boson) limit and is
/// handled by a dedicated branch in q_number().
class DeformationParam {
public:
    explicit DeformationParam(double q);

    double value() const { return q_; }

    /// True when q is within the exact-limit branch around 1.
    bool is_classical() const;

private:
    double q_;
};

/// Complex inverse temperature bt = beta + i*beta1.
/// beta is the physical inverse temperature (>= 0); beta1 is generated by
/// real-time evolution combined with the deformation, beta1 = -(1-1/q)*tau/hbar.
struct ComplexTemperature {
    double beta = 0.0;
    double beta1 = 0.0;

    /// Set when the temperature was built from (beta, tau, q, hbar).
    struct Provenance {
        double tau;
        double q;
        double hbar;
    };
    std::optional<Provenance> provenance;

    ComplexTemperature() = default;
    ComplexTemperature(double beta_, double beta1_);

    std::complex<double> value() const { return {beta, beta1}; }

    ComplexTemperature conj() const { return {beta, -beta1}; }
};

/// q-deformed number [x]_q = (q^x - 1)/(q - 1); [x]_1 = x.
/// x may be any nonnegative real, not just an integer occupation.
double q_number(double x, const DeformationParam& q);

/// Complex temperature generated by evolution over tau:
/// beta1 = -(1 - 1/q) * tau / hbar (identically zero at q = 1).
ComplexTemperature complex_beta(double beta, double tau, const DeformationParam& q,
                                double hbar);

/// Unit-modulus correlator prefactor exp(i * sum_j eps_j * tau / (q*hbar)).
std::complex<double> prefactor(std::span<const double> eps, double tau,
                               const DeformationParam& q, double hbar);

namespace detail {

/// exp(re + i*im) evaluated with extended-precision phase reduction, rounded
/// to complex<double>. Keeps phase errors ~1e-19*|im| instead of ~1e-16*|im|,
/// which matters when |im| reaches 1e5 in the Fock-space identity checks.
std::complex<double> cexp(long double re, long double im);

/// Unit phase exp(i*theta) with the same extended-precision treatment.
std::complex<double> unit_phase(long double theta);

/// q-number in extended precision, for phase arguments that get multiplied
/// by large evolution times.
long double q_number_ld(long double x, long double q);

} // namespace detail

} // namespace qgas

#endif
