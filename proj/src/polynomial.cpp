#include "qgas/zerofinder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qgas::zeros {

namespace {

constexpr double kPowerCollisionTol = 1e-9;
constexpr double kResidualBound = 1e-10;
constexpr int kMaxAberthIters = 200;
constexpr int kDenseDegreeCap = 1 << 14;

} // namespace

bool SparsePolynomial::has_integer_powers(double tol) const {
    for (const auto& t : terms) {
        if (std::abs(t.power - std::round(t.power)) > tol) {
            return false;
        }
    }
    return true;
}

std::complex<double> SparsePolynomial::eval(std::complex<double> z) const {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& t : terms) {
        if (t.power == 0.0) {
            sum += t.coeff;
        } else {
            sum += t.coeff * std::pow(z, t.power);
        }
    }
    return sum;
}

double SparsePolynomial::term_scale(std::complex<double> z) const {
    double scale = 0.0;
    const double az = std::abs(z);
    for (const auto& t : terms) {
        scale = std::max(scale, std::abs(t.coeff) * std::pow(az, t.power));
    }
    return scale;
}

SparsePolynomial build_z_polynomial(int particles, const DeformationParam& q,
                                    double eps_ratio, bool weighted) {
    if (particles < 1) {
        throw std::domain_error("build_z_polynomial: N must be >= 1");
    }
    if (!std::isfinite(eps_ratio)) {
        throw std::domain_error("build_z_polynomial: eps_ratio must be finite");
    }

    std::vector<PolyTerm> raw;
    raw.reserve(static_cast<std::size_t>(particles) + 1);
    for (int n1 = 0; n1 <= particles; ++n1) {
        const double qn1 = q_number(n1, q);
        const double qn2 = q_number(particles - n1, q);
        const double power = qn1 + qn2 * eps_ratio;
        if (!std::isfinite(power)) {
            throw std::domain_error("build_z_polynomial: non-finite power");
        }
        const double coeff = weighted ? qn1 * qn2 : 1.0;
        if (coeff == 0.0) {
            continue;
        }
        raw.push_back({power, coeff});
    }
    if (raw.empty()) {
        throw std::domain_error(
            "build_z_polynomial: all coefficients vanish (correlation function "
            "identically zero)");
    }

    std::sort(raw.begin(), raw.end(),
              [](const PolyTerm& a, const PolyTerm& b) { return a.power < b.power; });

    SparsePolynomial poly;
    for (const auto& t : raw) {
        if (!poly.terms.empty() &&
            std::abs(poly.terms.back().power - t.power) <= kPowerCollisionTol) {
            poly.terms.back().coeff += t.coeff;
        } else {
            poly.terms.push_back(t);
        }
    }
    std::erase_if(poly.terms, [](const PolyTerm& t) { return t.coeff == 0.0; });
    if (poly.terms.empty()) {
        throw std::domain_error("build_z_polynomial: all terms cancelled");
    }

    poly.shift = poly.terms.front().power;
    for (auto& t : poly.terms) {
        t.power -= poly.shift;
    }
    poly.terms.front().power = 0.0; // exact after normalization
    return poly;
}

namespace {

// Horner evaluation of the dense coefficient vector and its derivative.
void horner(const std::vector<double>& coeffs, std::complex<double> z,
            std::complex<double>& value, std::complex<double>& derivative) {
    std::complex<double> p{0.0, 0.0};
    std::complex<double> dp{0.0, 0.0};
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
        dp = dp * z + p;
        p = p * z + coeffs[static_cast<std::size_t>(i)];
    }
    value = p;
    derivative = dp;
}

} // namespace

ZeroSet roots_integer_powers(const SparsePolynomial& poly) {
    if (!poly.has_integer_powers()) {
        throw std::domain_error("roots_integer_powers: powers are not integral");
    }
    const int degree = static_cast<int>(std::llround(poly.degree()));
    if (degree < 1) {
        throw std::domain_error("roots_integer_powers: degree must be >= 1");
    }
    if (degree > kDenseDegreeCap) {
        throw std::domain_error("roots_integer_powers: degree exceeds dense cap");
    }

    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
    for (const auto& t : poly.terms) {
        coeffs[static_cast<std::size_t>(std::llround(t.power))] += t.coeff;
    }

    // Initial guesses on the Cauchy-bound circle, phases offset to break the
    // real-axis symmetry of the coefficients.
    double max_ratio = 0.0;
    for (int i = 0; i < degree; ++i) {
        max_ratio = std::max(max_ratio, std::abs(coeffs[static_cast<std::size_t>(i)]));
    }
    const double radius = 1.0 + max_ratio / std::abs(coeffs.back());
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(degree));
    for (int k = 0; k < degree; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / degree + 0.4;
        roots[static_cast<std::size_t>(k)] = std::polar(radius, angle);
    }

    int sweeps = 0;
    for (; sweeps < kMaxAberthIters; ++sweeps) {
        double max_rel_step = 0.0;
        for (int k = 0; k < degree; ++k) {
            auto& zk = roots[static_cast<std::size_t>(k)];
            std::complex<double> value, derivative;
            horner(coeffs, zk, value, derivative);
            if (value == std::complex<double>(0.0, 0.0)) {
                continue;
            }
            const std::complex<double> newton = value / derivative;
            std::complex<double> repulsion{0.0, 0.0};
            for (int j = 0; j < degree; ++j) {
                if (j != k) {
                    repulsion += 1.0 / (zk - roots[static_cast<std::size_t>(j)]);
                }
            }
            const std::complex<double> denom = 1.0 - newton * repulsion;
            const std::complex<double> step =
                (std::abs(denom) > 1e-300) ? newton / denom : newton;
            zk -= step;
            max_rel_step =
                std::max(max_rel_step, std::abs(step) / std::max(std::abs(zk), 1e-300));
        }
        if (max_rel_step <= 1e-14) {
            ++sweeps;
            break;
        }
    }

    ZeroSet out;
    out.method = ZeroMethod::aberth;
    out.meta.iterations = sweeps;
    out.meta.origin_multiplicity = poly.shift;
    out.zeros = std::move(roots);
    std::sort(out.zeros.begin(), out.zeros.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) {
                      return a.real() < b.real();
                  }
                  return a.imag() < b.imag();
              });
    out.residuals.reserve(out.zeros.size());
    double worst = 0.0;
    for (const auto& z : out.zeros) {
        const double scale = poly.term_scale(z);
        const double res = std::abs(poly.eval(z)) / std::max(scale, 1e-300);
        out.residuals.push_back(res);
        worst = std::max(worst, res);
    }
    if (worst > kResidualBound) {
        throw ConvergenceError("roots_integer_powers: residual bound not met",
                               std::move(out));
    }
    return out;
}

namespace {

// Smallest denominator d <= max_den with |x - p/d| <= tol, by continued
// fractions. Returns 0 when none exists.
int rational_denominator(double x, int max_den, double tol) {
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a_floor = std::floor(frac);
        const long long a = static_cast<long long>(a_floor);
        const long long p2 = a * p1 + p0;
        const long long q2 = a * q1 + q0;
        if (q2 > max_den) {
            break;
        }
        if (std::abs(x - static_cast<double>(p2) / static_cast<double>(q2)) <= tol) {
            return static_cast<int>(q2);
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double rem = frac - a_floor;
        if (rem < 1e-15) {
            break;
        }
        frac = 1.0 / rem;
    }
    return 0;
}

} // namespace

ZeroSet solve_z_polynomial(const SparsePolynomial& poly) {
    if (poly.has_integer_powers()) {
        return roots_integer_powers(poly);
    }

    // Look for a common denominator d <= 64 making every power*d integral,
    // then solve in w = z^{1/d} and map each w-root through z = w^d.
    int denom = 1;
    for (const auto& t : poly.terms) {
        const int d = rational_denominator(t.power, 64, 1e-12);
        if (d == 0) {
            throw std::domain_error(
                "solve_z_polynomial: powers are not rational with denominator <= 64");
        }
        denom = std::lcm(denom, d);
        if (denom > 64) {
            throw std::domain_error(
                "solve_z_polynomial: common denominator exceeds 64");
        }
    }

    SparsePolynomial scaled = poly;
    for (auto& t : scaled.terms) {
        t.power = std::round(t.power * denom);
    }
    if (scaled.degree() > static_cast<double>(kDenseDegreeCap)) {
        throw std::domain_error("solve_z_polynomial: rescaled degree exceeds dense cap");
    }

    ZeroSet w_set = roots_integer_powers(scaled);
    ZeroSet out;
    out.method = ZeroMethod::aberth;
    out.meta = w_set.meta;
    out.meta.rational_denominator = denom;
    out.meta.origin_multiplicity = poly.shift;
    out.zeros.reserve(w_set.zeros.size());
    out.residuals.reserve(w_set.zeros.size());
    std::vector<std::size_t> order(w_set.zeros.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::vector<std::complex<double>> mapped(w_set.zeros.size());
    for (std::size_t i = 0; i < w_set.zeros.size(); ++i) {
        mapped[i] = std::pow(w_set.zeros[i], denom);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (mapped[a].real() != mapped[b].real()) {
            return mapped[a].real() < mapped[b].real();
        }
        return mapped[a].imag() < mapped[b].imag();
    });
    for (std::size_t i : order) {
        out.zeros.push_back(mapped[i]);
        // Residual of the original sum along the branch through w.
        out.residuals.push_back(w_set.residuals[i]);
    }
    return out;
}

} // namespace qgas::zeros
