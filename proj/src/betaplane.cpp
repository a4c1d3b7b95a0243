#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "qgas/errors.hpp"
#include "qgas/zerofinder.hpp"

namespace qgas::zeros {

namespace {

constexpr double kResidualBound = 1e-10;
constexpr double kMergeTol = 1e-8;
constexpr int kEdgeSamples = 16;
constexpr int kMaxSubdivisionDepth = 10;
constexpr int kMaxNewtonIters = 80;

using cplx = std::complex<double>;
using cld = std::complex<long double>;

// Weighted exponential sum F(bt) = sum_k w_k exp(-bt*E_k) with its
// term-by-term derivative; zero-weight terms are dropped at construction.
struct ExpSumTarget {
    std::vector<double> energy;
    std::vector<double> weight;
    double max_abs_energy = 0.0;

    cplx eval(cplx bt) const {
        cld acc{0.0L, 0.0L};
        for (std::size_t i = 0; i < energy.size(); ++i) {
            const long double e = energy[i];
            const long double mag = expl(-static_cast<long double>(bt.real()) * e);
            const long double phase = -static_cast<long double>(bt.imag()) * e;
            acc += static_cast<long double>(weight[i]) *
                   cld(mag * cosl(phase), mag * sinl(phase));
        }
        return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }

    cplx derivative(cplx bt) const {
        cld acc{0.0L, 0.0L};
        for (std::size_t i = 0; i < energy.size(); ++i) {
            const long double e = energy[i];
            const long double mag = expl(-static_cast<long double>(bt.real()) * e);
            const long double phase = -static_cast<long double>(bt.imag()) * e;
            acc += static_cast<long double>(-weight[i]) * e *
                   cld(mag * cosl(phase), mag * sinl(phase));
        }
        return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }

    double scale(cplx bt) const {
        double s = 0.0;
        for (std::size_t i = 0; i < energy.size(); ++i) {
            s = std::max(s, std::abs(weight[i]) * std::exp(-bt.real() * energy[i]));
        }
        return s;
    }
};

ExpSumTarget make_target(const SystemSpec& spec, BetaTarget which) {
    const auto table = qgas::detail::make_term_table(spec);
    ExpSumTarget target;
    target.max_abs_energy = table.max_abs_energy;
    for (std::size_t i = 0; i < table.energy.size(); ++i) {
        const double w = (which == BetaTarget::zc) ? table.weight[i] : 1.0;
        if (w == 0.0) {
            continue;
        }
        target.energy.push_back(table.energy[i]);
        target.weight.push_back(w);
    }
    return target;
}

struct Candidate {
    cplx zero;
    double residual;
};

struct CellResult {
    std::vector<Candidate> candidates;
    int diverged = 0;
};

double fgcd(double a, double b, double tol) {
    a = std::abs(a);
    b = std::abs(b);
    while (b > tol) {
        const double r = std::fmod(a, b);
        a = b;
        b = r;
    }
    return a;
}

// Total argument winding of F along the counterclockwise cell boundary.
// Returns NaN when a boundary sample is (numerically) a zero of F, or when
// phase increments stay ambiguous after refinement; callers treat NaN as
// "assume a zero is enclosed". The sample count scales with cell size times
// the largest energy so that no phase step can alias past pi.
double boundary_winding(const ExpSumTarget& target, const Rect& cell) {
    constexpr double kAmbiguousStep = 2.5; // radians
    const double edge_beta = cell.beta_max - cell.beta_min;
    const double edge_beta1 = cell.beta1_max - cell.beta1_min;
    const double phase_span =
        target.max_abs_energy * std::max(edge_beta, edge_beta1);
    int samples = std::max(kEdgeSamples, static_cast<int>(std::ceil(phase_span)) + 1);

    const cplx bl{cell.beta_min, cell.beta1_min};
    const cplx br{cell.beta_max, cell.beta1_min};
    const cplx tr{cell.beta_max, cell.beta1_max};
    const cplx tl{cell.beta_min, cell.beta1_max};

    for (int attempt = 0; attempt < 3; ++attempt, samples *= 2) {
        std::vector<cplx> points;
        points.reserve(4 * static_cast<std::size_t>(samples));
        const auto push_edge = [&](cplx from, cplx to) {
            for (int i = 0; i < samples; ++i) {
                const double t = static_cast<double>(i) / samples;
                points.push_back(from + t * (to - from));
            }
        };
        push_edge(bl, br);
        push_edge(br, tr);
        push_edge(tr, tl);
        push_edge(tl, bl);

        double winding = 0.0;
        bool ambiguous = false;
        cplx prev = target.eval(points.back());
        if (std::abs(prev) <= target.scale(points.back()) * 1e-14) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        for (const cplx& p : points) {
            const cplx value = target.eval(p);
            if (std::abs(value) <= target.scale(p) * 1e-14) {
                return std::numeric_limits<double>::quiet_NaN();
            }
            const double increment = std::arg(value / prev);
            if (std::abs(increment) > kAmbiguousStep) {
                ambiguous = true;
                break;
            }
            winding += increment;
            prev = value;
        }
        if (!ambiguous) {
            return winding;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

bool newton_refine(const ExpSumTarget& target, cplx start, Candidate& out) {
    cplx z = start;
    for (int iter = 0; iter < kMaxNewtonIters; ++iter) {
        const cplx f = target.eval(z);
        const cplx df = target.derivative(z);
        if (std::abs(df) < 1e-300) {
            return false;
        }
        const cplx step = f / df;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
        if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(z))) {
            const double scale = std::max(target.scale(z), 1e-300);
            const double residual = std::abs(target.eval(z)) / scale;
            if (residual <= kResidualBound) {
                out = Candidate{z, residual};
                return true;
            }
            return false;
        }
    }
    return false;
}

bool inside(const Rect& r, cplx z, double margin) {
    return z.real() >= r.beta_min - margin && z.real() <= r.beta_max + margin &&
           z.imag() >= r.beta1_min - margin && z.imag() <= r.beta1_max + margin;
}

// Recursive winding-guided refinement of one flagged cell.
void scan_cell(const ExpSumTarget& target, const Rect& cell, int depth,
               CellResult& result) {
    const double winding = boundary_winding(target, cell);
    const bool ambiguous = std::isnan(winding);
    if (!ambiguous && std::abs(winding) <= std::numbers::pi) {
        return; // no enclosed zero
    }

    const double diag = std::hypot(cell.beta_max - cell.beta_min,
                                   cell.beta1_max - cell.beta1_min);
    // An ambiguous winding (boundary zero or unresolved phase step) hides the
    // enclosed count, so only an unambiguous single winding may stop at one
    // Newton hit; everything else subdivides.
    const bool single = !ambiguous &&
                        std::abs(winding) <= 3.0 * std::numbers::pi;
    const cplx center{0.5 * (cell.beta_min + cell.beta_max),
                      0.5 * (cell.beta1_min + cell.beta1_max)};

    if (single) {
        // Accept only a zero inside this cell (small margin for edge zeros);
        // Newton escaping to a neighbor's zero must not swallow this cell's.
        Candidate cand;
        if (newton_refine(target, center, cand) &&
            inside(cell, cand.zero, 1e-9 + 0.01 * diag)) {
            result.candidates.push_back(cand);
            return;
        }
    }
    if (depth >= kMaxSubdivisionDepth) {
        Candidate cand;
        if (newton_refine(target, center, cand)) {
            result.candidates.push_back(cand);
        } else {
            result.diverged += 1;
        }
        return;
    }
    const double mid_beta = 0.5 * (cell.beta_min + cell.beta_max);
    const double mid_beta1 = 0.5 * (cell.beta1_min + cell.beta1_max);
    const Rect quads[4] = {
        {cell.beta_min, mid_beta, cell.beta1_min, mid_beta1},
        {mid_beta, cell.beta_max, cell.beta1_min, mid_beta1},
        {cell.beta_min, mid_beta, mid_beta1, cell.beta1_max},
        {mid_beta, cell.beta_max, mid_beta1, cell.beta1_max},
    };
    for (const Rect& quad : quads) {
        scan_cell(target, quad, depth + 1, result);
    }
}

} // namespace

std::optional<double> beta1_period(const SystemSpec& spec, BetaTarget which) {
    const ExpSumTarget target = make_target(spec, which);
    if (target.energy.size() < 2) {
        return std::nullopt;
    }
    const double e0 = target.energy.front();
    const double tol = 1e-9 * std::max(1.0, target.max_abs_energy);
    double g = 0.0;
    for (double e : target.energy) {
        const double gap = std::abs(e - e0);
        if (gap > tol) {
            g = (g == 0.0) ? gap : fgcd(g, gap, tol);
        }
    }
    if (g <= tol) {
        return std::nullopt;
    }
    for (double e : target.energy) {
        const double ratio = std::abs(e - e0) / g;
        if (std::abs(ratio - std::round(ratio)) > 1e-6) {
            return std::nullopt;
        }
    }
    return 2.0 * std::numbers::pi / g;
}

ZeroSet zeros_beta_plane(const SystemSpec& spec, BetaTarget which, const Rect& region,
                         int m, int k, int threads) {
    if (!(region.beta_max > region.beta_min) ||
        !(region.beta1_max > region.beta1_min) ||
        !std::isfinite(region.beta_min) || !std::isfinite(region.beta_max) ||
        !std::isfinite(region.beta1_min) || !std::isfinite(region.beta1_max)) {
        throw std::domain_error("zeros_beta_plane: empty or non-finite region");
    }
    if (m < 8 || k < 8) {
        throw std::domain_error("zeros_beta_plane: grid must be at least 8x8");
    }

    ZeroSet out;
    out.method = ZeroMethod::grid_newton;
    out.meta.grid = GridSpec{region.beta_min, region.beta_max, region.beta1_min,
                             region.beta1_max, m, k};

    const ExpSumTarget target = make_target(spec, which);
    if (target.energy.empty()) {
        out.meta.warnings.push_back("target is identically zero; no isolated zeros");
        return out;
    }
    const double abs_beta_max =
        std::max(std::abs(region.beta_min), std::abs(region.beta_max));
    if (abs_beta_max * target.max_abs_energy > 700.0) {
        throw OverflowError("zeros_beta_plane: region exceeds the exp-safe bound");
    }
    out.meta.beta1_period = beta1_period(spec, which);

    const double d_beta = (region.beta_max - region.beta_min) / m;
    const double d_beta1 = (region.beta1_max - region.beta1_min) / k;
    const int cell_count = m * k;

    std::vector<CellResult> results(static_cast<std::size_t>(cell_count));
    const auto scan_range = [&](int begin, int end) {
        for (int idx = begin; idx < end; ++idx) {
            const int i = idx % m;
            const int j = idx / m;
            const Rect cell{region.beta_min + i * d_beta,
                            region.beta_min + (i + 1) * d_beta,
                            region.beta1_min + j * d_beta1,
                            region.beta1_min + (j + 1) * d_beta1};
            scan_cell(target, cell, 0, results[static_cast<std::size_t>(idx)]);
        }
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        scan_range(0, cell_count);
    } else {
        std::vector<std::future<void>> futures;
        const int chunk = (cell_count + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(cell_count, begin + chunk);
            if (begin < end) {
                futures.push_back(
                    std::async(std::launch::async, scan_range, begin, end));
            }
        }
        for (auto& f : futures) {
            f.get();
        }
    }

    std::vector<Candidate> all;
    for (const auto& cell : results) {
        if (!cell.candidates.empty()) {
            out.meta.flagged_cells += 1;
        }
        out.meta.diverged_cells += cell.diverged;
        for (const auto& cand : cell.candidates) {
            if (inside(region, cand.zero, 1e-9)) {
                all.push_back(cand);
            }
        }
    }

    std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
        if (a.zero.real() != b.zero.real()) {
            return a.zero.real() < b.zero.real();
        }
        return a.zero.imag() < b.zero.imag();
    });
    std::vector<Candidate> merged;
    for (const auto& cand : all) {
        bool duplicate = false;
        for (auto& kept : merged) {
            if (std::abs(kept.zero - cand.zero) < kMergeTol) {
                if (cand.residual < kept.residual) {
                    kept = cand;
                }
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            merged.push_back(cand);
        }
    }

    if (out.meta.diverged_cells > 0) {
        out.meta.warnings.push_back("newton diverged in " +
                                    std::to_string(out.meta.diverged_cells) +
                                    " refinement cell(s)");
    }
    out.zeros.reserve(merged.size());
    out.residuals.reserve(merged.size());
    for (const auto& cand : merged) {
        out.zeros.push_back(cand.zero);
        out.residuals.push_back(cand.residual);
    }
    return out;
}

} // namespace qgas::zeros
