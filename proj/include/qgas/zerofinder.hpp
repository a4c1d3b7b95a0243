#ifndef QGAS_ZEROFINDER_HPP
#define QGAS_ZEROFINDER_HPP

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgas/ensemble.hpp"
#include "qgas/qmath.hpp"

namespace qgas::zeros {

/// Finite sum of real-coefficient terms c * z^p with real powers p >= 0,
/// strictly increasing. The minimum power is normalized to 0; the power of z
/// factored out during normalization is recorded in `shift`.
struct PolyTerm {
    double power;
    double coeff;
};

struct SparsePolynomial {
    std::vector<PolyTerm> terms;
    double shift = 0.0;

    double degree() const { return terms.empty() ? 0.0 : terms.back().power; }

    /// True when every power is an integer within tol.
    bool has_integer_powers(double tol = 1e-9) const;

    /// Principal-branch evaluation sum c * z^p.
    std::complex<double> eval(std::complex<double> z) const;

    /// max |c * z^p| over terms: the normalization scale for residuals.
    double term_scale(std::complex<double> z) const;
};

/// z-plane polynomial of the two-level system in z = e^{-bt*eps1}:
/// terms z^{[n1]_q + [N-n1]_q * eps_ratio} for n1 = 0..N, with coefficient 1
/// (partition / Fisher case) or [n1]_q [N-n1]_q (correlation case).
/// Colliding powers are merged, zero coefficients dropped.
SparsePolynomial build_z_polynomial(int particles, const DeformationParam& q,
                                    double eps_ratio, bool weighted);

enum class ZeroMethod { aberth, grid_newton, analytic };

struct GridSpec {
    double beta_min = 0.0, beta_max = 0.0;
    double beta1_min = 0.0, beta1_max = 0.0;
    int m = 0, k = 0;
};

struct ZeroSetMeta {
    int iterations = 0;             // aberth sweeps or total newton iterations
    double origin_multiplicity = 0; // z = 0 root power (the shift), z-plane only
    int flagged_cells = 0;
    int diverged_cells = 0;
    int rational_denominator = 1; // w = z^{1/d} substitution, 1 = none
    std::optional<double> beta1_period;
    std::optional<GridSpec> grid;
    std::vector<std::string> warnings;
};

struct ZeroSet {
    std::vector<std::complex<double>> zeros;
    std::vector<double> residuals; // normalized: |P(z)| / max-term-at-z
    ZeroMethod method = ZeroMethod::aberth;
    ZeroSetMeta meta;
};

/// Root finding failed to reach the residual bound; `partial` carries
/// whatever was computed.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, ZeroSet partial_)
        : std::runtime_error(what), partial(std::move(partial_)) {}
    ZeroSet partial;
};

/// All deg(P) roots of an integer-power polynomial by Aberth-Ehrlich
/// simultaneous iteration on the dense coefficient vector. The z = 0 root of
/// multiplicity `shift` is reported in meta.origin_multiplicity, not in zeros.
/// Requires integer powers (within 1e-9), degree in [1, 2^14].
/// Throws ConvergenceError if any residual stays above 1e-10.
ZeroSet roots_integer_powers(const SparsePolynomial& poly);

/// roots_integer_powers after rescaling powers by a common denominator
/// d <= 64 (w = z^{1/d}); every w-root is mapped through z = w^d. Falls back
/// to plain integer-power solving at d = 1. Throws std::domain_error when no
/// such denominator exists.
ZeroSet solve_z_polynomial(const SparsePolynomial& poly);

/// Rectangle in the (beta, beta1) plane.
struct Rect {
    double beta_min, beta_max;
    double beta1_min, beta1_max;
};

enum class BetaTarget { partition, zc };

/// beta1 period of the target exp-sum when the energy gaps are commensurate.
std::optional<double> beta1_period(const SystemSpec& spec, BetaTarget which);

/// Zeros of Z(bt) or Z_c(bt) inside `region`: the m x k grid is scanned with
/// the argument-winding criterion (16 boundary samples per cell edge), flagged
/// cells are refined by Newton iteration on the analytic exp-sum, converged
/// zeros are kept when their normalized residual is <= 1e-10, and duplicates
/// within 1e-8 are merged. Cells where Newton diverges are counted in meta,
/// not fatal. threads > 1 parallelizes the scan without changing the result.
ZeroSet zeros_beta_plane(const SystemSpec& spec, BetaTarget which, const Rect& region,
                         int m, int k, int threads = 1);

} // namespace qgas::zeros

#endif
