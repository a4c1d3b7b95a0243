#include "qgas/fock.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "qgas/errors.hpp"

namespace qgas::fock {

namespace {
constexpr std::size_t kSectorCap = 10000;

using cld = std::complex<long double>;
} // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    if (rows < 0 || cols < 0) {
        throw std::domain_error("ComplexMatrix: negative dimension");
    }
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<std::complex<double>>& entries) {
    const int dim = static_cast<int>(entries.size());
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            m(c, r) = std::conj((*this)(r, c));
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw std::domain_error("ComplexMatrix: dimension mismatch in product");
    }
    ComplexMatrix out(rows_, rhs.cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < rhs.cols_; ++c) {
            cld acc{0.0L, 0.0L};
            for (int k = 0; k < cols_; ++k) {
                const auto& a = (*this)(r, k);
                const auto& b = rhs(k, c);
                acc += cld(a.real(), a.imag()) * cld(b.real(), b.imag());
            }
            out(r, c) = {static_cast<double>(acc.real()),
                         static_cast<double>(acc.imag())};
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw std::domain_error("ComplexMatrix: dimension mismatch in difference");
    }
    ComplexMatrix out(rows_, cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            out(r, c) = (*this)(r, c) - rhs(r, c);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::scaled(std::complex<double> factor) const {
    ComplexMatrix out(rows_, cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            out(r, c) = (*this)(r, c) * factor;
        }
    }
    return out;
}

double ComplexMatrix::max_norm(int row_end, int col_end) const {
    if (row_end < 0) {
        row_end = rows_;
    }
    if (col_end < 0) {
        col_end = cols_;
    }
    double norm = 0.0;
    for (int r = 0; r < row_end; ++r) {
        for (int c = 0; c < col_end; ++c) {
            norm = std::max(norm, std::abs((*this)(r, c)));
        }
    }
    return norm;
}

FockRep build_rep(int dim, const DeformationParam& q) {
    if (dim < 2) {
        throw std::domain_error("build_rep: dim must be >= 2");
    }
    FockRep rep{dim, q, ComplexMatrix(dim, dim), ComplexMatrix(dim, dim),
                ComplexMatrix(dim, dim)};
    for (int n = 1; n < dim; ++n) {
        rep.a(n - 1, n) = std::sqrt(q_number(n, q));
    }
    rep.a_dag = rep.a.adjoint();
    for (int n = 0; n < dim; ++n) {
        rep.num(n, n) = static_cast<double>(n);
    }
    return rep;
}

double qcommutator_residual(const FockRep& rep, bool include_boundary) {
    const ComplexMatrix lhs = rep.a * rep.a_dag;
    const ComplexMatrix rhs = (rep.a_dag * rep.a).scaled(rep.q.value());
    const ComplexMatrix diff = lhs - rhs - ComplexMatrix::identity(rep.dim);
    const int end = include_boundary ? rep.dim : rep.dim - 1;
    return diff.max_norm(end, end);
}

double shift_identity_residual(const FockRep& rep) {
    // f(x) = x^2 probed as matrix products:
    //   a * (a+ a)^2  vs  (q a+ a + 1)^2 * a.
    const ComplexMatrix number_op = rep.a_dag * rep.a;
    const ComplexMatrix lhs = rep.a * (number_op * number_op);
    ComplexMatrix shifted = number_op.scaled(rep.q.value());
    for (int i = 0; i < rep.dim; ++i) {
        shifted(i, i) += 1.0;
    }
    const ComplexMatrix rhs = (shifted * shifted) * rep.a;
    const int end = rep.dim - 1;
    const double scale = std::max(lhs.max_norm(end, end), 1.0);
    return (lhs - rhs).max_norm(end, end) / scale;
}

namespace {

// Diagonal entries [n]_q of the q-deformed number operator a+ a, in extended
// precision. Evolution phases multiply these by eps*t/hbar, so double-rounded
// values (e.g. from squaring the stored sqrt entries) would leak phase errors
// of order |eps*t| * [n]_q * 1e-16 into the identity checks.
std::vector<long double> number_diagonal(const FockRep& rep) {
    std::vector<long double> diag(static_cast<std::size_t>(rep.dim));
    for (int n = 0; n < rep.dim; ++n) {
        diag[n] = qgas::detail::q_number_ld(static_cast<long double>(n),
                                            static_cast<long double>(rep.q.value()));
    }
    return diag;
}

// Diagonal propagator with entries exp(i * theta_coeff * diag[n]). The
// coefficient stays in long double; rounding it to double first would leak
// phase errors of order |coeff| * [n]_q * 1e-16.
ComplexMatrix diag_propagator(const std::vector<long double>& diag,
                              long double theta_coeff) {
    std::vector<std::complex<double>> entries(diag.size());
    for (std::size_t n = 0; n < diag.size(); ++n) {
        entries[n] = qgas::detail::unit_phase(theta_coeff * diag[n]);
    }
    return ComplexMatrix::diagonal(entries);
}

} // namespace

double heisenberg_residual(const FockRep& rep, double eps_j, double t, double hbar) {
    if (!(hbar > 0.0)) {
        throw std::domain_error("heisenberg_residual: hbar must be > 0");
    }
    const auto diag = number_diagonal(rep);
    const long double coeff = static_cast<long double>(eps_j) *
                              static_cast<long double>(t) /
                              static_cast<long double>(hbar);

    // Direct conjugation: e^{iH1 t/hbar} a e^{-iH1 t/hbar}, H1 diagonal.
    const ComplexMatrix forward = diag_propagator(diag, coeff);
    const ComplexMatrix backward = diag_propagator(diag, -coeff);
    const ComplexMatrix direct = (forward * rep.a) * backward;

    // Closed form: a e^{-i eps t/(q hbar)} e^{-i(1-1/q) eps (a+ a) t/hbar}.
    const long double q_ld = static_cast<long double>(rep.q.value());
    const std::complex<double> scalar_phase = qgas::detail::unit_phase(-coeff / q_ld);
    const ComplexMatrix rotation =
        diag_propagator(diag, -(1.0L - 1.0L / q_ld) * coeff);
    const ComplexMatrix closed = (rep.a * rotation).scaled(scalar_phase);

    return (direct - closed).max_norm();
}

double propagator_unitarity_residual(const FockRep& rep, double eps_j, double t,
                                     double hbar) {
    const auto diag = number_diagonal(rep);
    const ComplexMatrix prop = diag_propagator(
        diag, static_cast<long double>(eps_j) * static_cast<long double>(t) /
                  static_cast<long double>(hbar));
    double worst = 0.0;
    for (int n = 0; n < rep.dim; ++n) {
        worst = std::max(worst, std::abs(std::abs(prop(n, n)) - 1.0));
    }
    return worst;
}

namespace {

// Sparse sector state: amplitudes keyed by occupation vector.
using SectorState = std::map<OccupationVector, std::complex<double>>;

// Apply a one-mode operator with the sparsity of a (super/sub)diagonal ladder
// matrix to every component of the state. `lowering` selects a-type
// (n -> n-1, element M(n-1, n)) vs a+-type (n -> n+1, element M(n+1, n)).
SectorState apply_mode_operator(const SectorState& state, const ComplexMatrix& op,
                                int mode, bool lowering) {
    SectorState out;
    const int dim = op.rows();
    for (const auto& [occ, amp] : state) {
        const int n = occ[static_cast<std::size_t>(mode)];
        if (lowering) {
            if (n == 0) {
                continue;
            }
            const std::complex<double> element = op(n - 1, n);
            OccupationVector next = occ;
            next[static_cast<std::size_t>(mode)] = n - 1;
            out[next] += amp * element;
        } else {
            if (n + 1 >= dim) {
                continue; // truncated away; unreachable for sector states
            }
            const std::complex<double> element = op(n + 1, n);
            OccupationVector next = occ;
            next[static_cast<std::size_t>(mode)] = n + 1;
            out[next] += amp * element;
        }
    }
    return out;
}

} // namespace

std::complex<double> brute_correlator(const SystemSpec& spec, double beta, double t1,
                                      double t2) {
    if (!(beta > 0.0)) {
        throw std::domain_error("brute_correlator: beta must be > 0");
    }
    const auto sector = compositions(spec.particles, spec.levels());
    if (sector.size() > kSectorCap) {
        throw ResourceError("brute_correlator: sector dimension exceeds cap");
    }
    double max_abs_energy = 0.0;
    for (const auto& occ : sector) {
        max_abs_energy = std::max(max_abs_energy, std::abs(energy(occ, spec)));
    }
    if (beta * max_abs_energy > 700.0) {
        throw OverflowError("brute_correlator: exp argument exceeds the safe bound");
    }

    // Per-mode truncated Heisenberg operators, each built by explicit
    // propagator conjugation. Truncation at N+1 is exact: the ordered product
    // never raises a mode above N.
    const int mode_dim = std::max(2, spec.particles + 1);
    const int s = spec.levels();
    std::vector<ComplexMatrix> lowering_t2;
    std::vector<ComplexMatrix> raising_t1;
    lowering_t2.reserve(s);
    raising_t1.reserve(s);
    for (int j = 0; j < s; ++j) {
        const FockRep rep = build_rep(mode_dim, spec.q);
        const auto diag = number_diagonal(rep);
        const long double eps_ld = static_cast<long double>(spec.eps[j]);
        const long double hbar_ld = static_cast<long double>(spec.hbar);
        const long double coeff_t2 = eps_ld * static_cast<long double>(t2) / hbar_ld;
        lowering_t2.push_back((diag_propagator(diag, coeff_t2) * rep.a) *
                              diag_propagator(diag, -coeff_t2));
        const long double coeff_t1 = eps_ld * static_cast<long double>(t1) / hbar_ld;
        raising_t1.push_back((diag_propagator(diag, coeff_t1) * rep.a_dag) *
                             diag_propagator(diag, -coeff_t1));
    }

    // Tr[e^{-beta H} a+_1(t1) a_1(t2) ... a+_s(t1) a_s(t2)] / Z(beta),
    // applied factor by factor, rightmost first.
    cld trace{0.0L, 0.0L};
    long double z_beta = 0.0L;
    for (const auto& occ : sector) {
        SectorState state{{occ, {1.0, 0.0}}};
        for (int j = s - 1; j >= 0 && !state.empty(); --j) {
            state = apply_mode_operator(state, lowering_t2[j], j, true);
            state = apply_mode_operator(state, raising_t1[j], j, false);
        }
        const long double e = energy(occ, spec);
        const long double boltzmann = expl(-static_cast<long double>(beta) * e);
        z_beta += boltzmann;
        const auto it = state.find(occ);
        if (it != state.end()) {
            trace += boltzmann * cld(it->second.real(), it->second.imag());
        }
    }
    if (!(z_beta > 0.0L)) {
        throw OverflowError("brute_correlator: partition function underflowed");
    }
    trace /= z_beta;
    return {static_cast<double>(trace.real()), static_cast<double>(trace.imag())};
}

} // namespace qgas::fock
