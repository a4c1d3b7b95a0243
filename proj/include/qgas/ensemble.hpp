#ifndef QGAS_ENSEMBLE_HPP
#define QGAS_ENSEMBLE_HPP

#include <complex>
#include <vector>

#include "qgas/compositions.hpp"
#include "qgas/qmath.hpp"

namespace qgas {

/// Full physical configuration: s level energies, particle number N,
/// deformation q and hbar.
struct SystemSpec {
    std::vector<double> eps;
    int particles;
    DeformationParam q;
    double hbar = 1.0;

    SystemSpec(std::vector<double> eps_, int particles_, DeformationParam q_,
               double hbar_ = 1.0);

    int levels() const { return static_cast<int>(eps.size()); }
};

/// Energy E = sum_i eps_i * [n_i]_q of one configuration.
double energy(const OccupationVector& occ, const SystemSpec& spec);

/// Product of q-numbers prod_j [n_j]_q; zero iff any n_j = 0.
double weight_product(const OccupationVector& occ, const DeformationParam& q);

/// Canonical partition function Z(bt) = sum over compositions of exp(-bt*E).
/// Real positive for beta1 = 0. Throws OverflowError when |Re(bt)*E| > 700
/// for some configuration.
std::complex<double> partition(const SystemSpec& spec, const ComplexTemperature& bt);

/// Correlation numerator Z_c(bt) = sum exp(-bt*E) * prod_j [n_j]_q.
/// Identically zero for N < s (some level is always empty).
std::complex<double> zc(const SystemSpec& spec, const ComplexTemperature& bt);

/// Two-time correlator and its constituents. value = prefactor * zc / z_real.
struct CorrelatorValue {
    std::complex<double> value;
    ComplexTemperature beta_tilde;
    std::complex<double> prefactor;
    std::complex<double> zc;
    double z_real; // Z(beta) at the real physical temperature
};

/// <prod_j a+_j(t1) a_j(t2)> at inverse temperature beta > 0.
/// The denominator is Z(beta) at real beta; only the numerator sees the
/// complex temperature.
CorrelatorValue correlator(const SystemSpec& spec, double beta, double t1, double t2);

/// Residual of the derivative identity
///   (-1/bt)^s * prod_j d/d(eps_j) Z(bt) = Z_c(bt),
/// with the mixed partial evaluated by nested central differences of the
/// partition sum, step h in every eps_j. Returns |lhs - zc| / max(|zc|, |lhs|).
double derivative_identity_residual(const SystemSpec& spec, const ComplexTemperature& bt,
                                    double h);

namespace detail {

/// Precomputed (energy, weight) per composition, lexicographic order.
struct TermTable {
    std::vector<double> energy;
    std::vector<double> weight; // prod_j [n_j]_q
    double max_abs_energy = 0.0;
};

TermTable make_term_table(const SystemSpec& spec);

/// sum over terms of coeff * exp(-bt*E), Kahan-compensated in long double.
/// coeffs: nullptr = unit coefficients (partition), else per-term weights.
std::complex<double> exp_sum(const TermTable& table, std::complex<double> bt,
                             bool weighted);

/// Overflow guard shared by partition/zc and the beta-plane scans.
void check_exp_range(const TermTable& table, double re_bt);

} // namespace detail

} // namespace qgas

#endif
