#include "qgas/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "qgas/errors.hpp"

namespace qgas {

namespace {
// exp-safe bound on |Re(bt)*E| (double exp() range).
constexpr double kExpArgBound = 700.0;

using cld = std::complex<long double>;

// Kahan-compensated accumulator over complex long double.
struct CompensatedSum {
    cld sum{0.0L, 0.0L};
    cld comp{0.0L, 0.0L};

    void add(cld term) {
        const cld y = term - comp;
        const cld t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

cld cexp_ld(long double re, long double im) {
    const long double mag = expl(re);
    return {mag * cosl(im), mag * sinl(im)};
}

} // namespace

SystemSpec::SystemSpec(std::vector<double> eps_, int particles_, DeformationParam q_,
                       double hbar_)
    : eps(std::move(eps_)), particles(particles_), q(q_), hbar(hbar_) {
    if (eps.empty()) {
        throw std::domain_error("SystemSpec: need at least one level");
    }
    if (particles < 0) {
        throw std::domain_error("SystemSpec: N must be >= 0");
    }
    if (!(hbar > 0.0)) {
        throw std::domain_error("SystemSpec: hbar must be > 0");
    }
    for (double e : eps) {
        if (!std::isfinite(e)) {
            throw std::domain_error("SystemSpec: energies must be finite");
        }
    }
}

double energy(const OccupationVector& occ, const SystemSpec& spec) {
    if (static_cast<int>(occ.size()) != spec.levels()) {
        throw std::domain_error("energy: occupation size mismatch");
    }
    long double sum = 0.0L;
    for (int i = 0; i < spec.levels(); ++i) {
        sum += static_cast<long double>(spec.eps[i]) * q_number(occ[i], spec.q);
    }
    return static_cast<double>(sum);
}

double weight_product(const OccupationVector& occ, const DeformationParam& q) {
    double prod = 1.0;
    for (int n : occ) {
        prod *= q_number(n, q);
        if (prod == 0.0) {
            return 0.0;
        }
    }
    return prod;
}

namespace detail {

TermTable make_term_table(const SystemSpec& spec) {
    TermTable table;
    const auto count = composition_count(spec.particles, spec.levels());
    table.energy.reserve(count);
    table.weight.reserve(count);
    for (const auto& occ : CompositionRange(spec.particles, spec.levels())) {
        const double e = energy(occ, spec);
        table.energy.push_back(e);
        table.weight.push_back(weight_product(occ, spec.q));
        table.max_abs_energy = std::max(table.max_abs_energy, std::abs(e));
    }
    return table;
}

void check_exp_range(const TermTable& table, double re_bt) {
    if (std::abs(re_bt) * table.max_abs_energy > kExpArgBound) {
        throw OverflowError("exp argument |Re(bt)*E| exceeds the safe bound");
    }
}

std::complex<double> exp_sum(const TermTable& table, std::complex<double> bt,
                             bool weighted) {
    check_exp_range(table, bt.real());
    CompensatedSum acc;
    const long double re = bt.real();
    const long double im = bt.imag();
    for (std::size_t i = 0; i < table.energy.size(); ++i) {
        const long double e = table.energy[i];
        cld term = cexp_ld(-re * e, -im * e);
        if (weighted) {
            const long double w = table.weight[i];
            if (w == 0.0L) {
                continue;
            }
            term *= w;
        }
        acc.add(term);
    }
    return {static_cast<double>(acc.sum.real()), static_cast<double>(acc.sum.imag())};
}

} // namespace detail

std::complex<double> partition(const SystemSpec& spec, const ComplexTemperature& bt) {
    const auto table = detail::make_term_table(spec);
    return detail::exp_sum(table, bt.value(), false);
}

std::complex<double> zc(const SystemSpec& spec, const ComplexTemperature& bt) {
    const auto table = detail::make_term_table(spec);
    return detail::exp_sum(table, bt.value(), true);
}

CorrelatorValue correlator(const SystemSpec& spec, double beta, double t1, double t2) {
    if (!(beta > 0.0)) {
        throw std::domain_error("correlator: beta must be > 0");
    }
    const double tau = t1 - t2;
    const ComplexTemperature bt = complex_beta(beta, tau, spec.q, spec.hbar);

    const auto table = detail::make_term_table(spec);
    const std::complex<double> zc_value = detail::exp_sum(table, bt.value(), true);
    const std::complex<double> z_at_beta = detail::exp_sum(table, {beta, 0.0}, false);
    const double z_real = z_at_beta.real();
    if (!(z_real > 0.0)) {
        throw OverflowError("correlator: partition function underflowed to zero");
    }

    CorrelatorValue out;
    out.beta_tilde = bt;
    out.prefactor = prefactor(spec.eps, tau, spec.q, spec.hbar);
    out.zc = zc_value;
    out.z_real = z_real;
    out.value = out.prefactor * zc_value / z_real;
    return out;
}

double derivative_identity_residual(const SystemSpec& spec, const ComplexTemperature& bt,
                                    double h) {
    const std::complex<double> btv = bt.value();
    if (btv == std::complex<double>(0.0, 0.0)) {
        throw std::domain_error("derivative_identity_residual: bt must be nonzero");
    }
    if (!(h > 0.0)) {
        throw std::domain_error("derivative_identity_residual: h must be > 0");
    }
    const int s = spec.levels();
    const long double re = btv.real();
    const long double im = btv.imag();

    // Per-composition q-numbers, so each stencil corner reassembles its energy
    // in extended precision; rounding the shifted energies to double would put
    // the noise floor at the level of the O(h^2) truncation itself.
    std::vector<std::vector<double>> qn_rows;
    std::vector<long double> weights;
    qn_rows.reserve(composition_count(spec.particles, s));
    double max_energy = 0.0;
    for (const auto& occ : CompositionRange(spec.particles, s)) {
        std::vector<double> row(static_cast<std::size_t>(s));
        long double weight = 1.0L;
        double energy_bound = 0.0;
        for (int j = 0; j < s; ++j) {
            row[static_cast<std::size_t>(j)] = q_number(occ[j], spec.q);
            weight *= row[static_cast<std::size_t>(j)];
            energy_bound += (std::abs(spec.eps[j]) + h) * row[static_cast<std::size_t>(j)];
        }
        max_energy = std::max(max_energy, energy_bound);
        qn_rows.push_back(std::move(row));
        weights.push_back(weight);
    }
    if (std::abs(btv.real()) * max_energy > 700.0) {
        throw OverflowError("exp argument |Re(bt)*E| exceeds the safe bound");
    }

    // Nested central differences: sum over the 2^s stencil corners
    // eps_j +- h with sign = product of the corner signs, divided by (2h)^s.
    CompensatedSum acc;
    const unsigned corners = 1u << s;
    std::vector<long double> eps_corner(static_cast<std::size_t>(s));
    for (unsigned mask = 0; mask < corners; ++mask) {
        int minus_count = 0;
        for (int j = 0; j < s; ++j) {
            const long double shift = (mask & (1u << j)) ? -static_cast<long double>(h)
                                                         : static_cast<long double>(h);
            if (mask & (1u << j)) {
                ++minus_count;
            }
            eps_corner[static_cast<std::size_t>(j)] =
                static_cast<long double>(spec.eps[j]) + shift;
        }
        CompensatedSum corner;
        for (const auto& row : qn_rows) {
            long double energy_ld = 0.0L;
            for (int j = 0; j < s; ++j) {
                energy_ld += eps_corner[static_cast<std::size_t>(j)] *
                             row[static_cast<std::size_t>(j)];
            }
            corner.add(cexp_ld(-re * energy_ld, -im * energy_ld));
        }
        acc.add((minus_count % 2 == 0) ? corner.sum : -corner.sum);
    }

    const long double step = 2.0L * static_cast<long double>(h);
    cld denom{1.0L, 0.0L};
    for (int j = 0; j < s; ++j) {
        denom *= step;
    }
    cld lhs = acc.sum / denom;

    // (-1/bt)^s
    const cld bt_ld{re, im};
    cld factor{1.0L, 0.0L};
    for (int j = 0; j < s; ++j) {
        factor *= -1.0L / bt_ld;
    }
    lhs *= factor;

    CompensatedSum zc_acc;
    for (std::size_t i = 0; i < qn_rows.size(); ++i) {
        if (weights[i] == 0.0L) {
            continue;
        }
        long double energy_ld = 0.0L;
        for (int j = 0; j < s; ++j) {
            energy_ld += static_cast<long double>(spec.eps[j]) *
                         qn_rows[i][static_cast<std::size_t>(j)];
        }
        zc_acc.add(weights[i] * cexp_ld(-re * energy_ld, -im * energy_ld));
    }
    const cld rhs = zc_acc.sum;

    const long double diff = std::abs(lhs - rhs);
    const long double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0L) {
        return 0.0;
    }
    return static_cast<double>(diff / scale);
}

} // namespace qgas
