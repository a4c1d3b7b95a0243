#ifndef QGAS_FOCK_HPP
#define QGAS_FOCK_HPP

#include <complex>
#include <vector>

#include "qgas/ensemble.hpp"
#include "qgas/qmath.hpp"

namespace qgas::fock {

/// Dense row-major complex matrix, sized for truncated Fock spaces
/// (dim <= a few hundred). Products accumulate in long double.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols);

    static ComplexMatrix identity(int dim);
    static ComplexMatrix diagonal(const std::vector<std::complex<double>>& entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::complex<double>& operator()(int r, int c) { return data_[r * cols_ + c]; }
    const std::complex<double>& operator()(int r, int c) const {
        return data_[r * cols_ + c];
    }

    ComplexMatrix adjoint() const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix scaled(std::complex<double> factor) const;

    /// max |entry| over rows [0, row_end) x cols [0, col_end);
    /// negative bounds mean the full extent.
    double max_norm(int row_end = -1, int col_end = -1) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::complex<double>> data_;
};

/// Truncated matrix representation of one q-oscillator mode:
/// a|n> = sqrt([n]_q)|n-1>, a_dag = a^+, num = diag(0, 1, ..., dim-1).
struct FockRep {
    int dim;
    DeformationParam q;
    ComplexMatrix a;
    ComplexMatrix a_dag;
    ComplexMatrix num;
};

FockRep build_rep(int dim, const DeformationParam& q);

/// Max-norm of (a a+ - q a+ a - 1). The truncated top state violates the
/// relation by construction, so rows/cols are restricted to 0..dim-2 unless
/// include_boundary is set.
double qcommutator_residual(const FockRep& rep, bool include_boundary = false);

/// Shift identity a f(a+ a) = f(q a+ a + 1) a, probed with f(x) = x^2.
/// Returns the max-norm of the difference relative to the operator scale.
double shift_identity_residual(const FockRep& rep);

/// Max-norm distance between the directly conjugated Heisenberg operator
/// e^{iH1 t/hbar} a e^{-iH1 t/hbar}, H1 = eps_j a+ a, and the closed form
/// a e^{-i eps_j t/(q hbar)} e^{-i(1-1/q) eps_j (a+ a) t/hbar}.
double heisenberg_residual(const FockRep& rep, double eps_j, double t, double hbar);

/// Max deviation of |entry| from 1 over the diagonal propagator
/// e^{i eps (a+ a) t / hbar}.
double propagator_unitarity_residual(const FockRep& rep, double eps_j, double t,
                                     double hbar);

/// Brute-force correlator: applies the ordered operator product
/// a+_1(t1) a_1(t2) ... a+_s(t1) a_s(t2), with Heisenberg operators built by
/// explicit propagator conjugation per mode, to every fixed-N sector state and
/// takes the normalized trace. Independent of the ensemble reduction.
/// Throws ResourceError if the sector dimension exceeds 10^4.
std::complex<double> brute_correlator(const SystemSpec& spec, double beta, double t1,
                                      double t2);

} // namespace qgas::fock

#endif
