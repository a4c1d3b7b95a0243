#ifndef QGAS_CLI_OUTPUT_HPP
#define QGAS_CLI_OUTPUT_HPP

#include <string>
#include <vector>

namespace qgas::cli {

/// Lossless double formatting (17 significant digits, C locale).
std::string format_double(double value);

/// Write content to path atomically (temp file + rename), creating parent
/// directories. LF line endings are preserved as-is.
void write_file_atomic(const std::string& path, const std::string& content);

struct ZeroRow {
    double re, im, abs, residual;
    std::string kind; // fisher | correlation
};

struct BetaRow {
    double beta, beta1, residual;
};

struct TauRow {
    double tau, re, im, abs;
};

std::string zeros_poly_csv(const std::vector<ZeroRow>& rows);
std::string zeros_beta_csv(const std::vector<BetaRow>& rows);
std::string correlator_csv(const std::vector<TauRow>& rows);

/// Scatter plot of z-plane zeros: circles for Fisher zeros, crosses for
/// correlation zeros, with the unit circle drawn for reference. A pure
/// function of the rows; carries no numeric content beyond them.
std::string zeros_poly_svg(const std::vector<ZeroRow>& rows);

/// Scatter of (beta, beta1) zeros with the beta = 0 axis drawn for reference.
std::string zeros_beta_svg(const std::vector<BetaRow>& rows);

} // namespace qgas::cli

#endif
