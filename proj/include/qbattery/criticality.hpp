#ifndef QBATTERY_CRITICALITY_HPP
#define QBATTERY_CRITICALITY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qbattery {

/// Samples of a scalar (typically stored energy) on a uniform, strictly
/// increasing parameter grid.
class ParamScan {
 public:
  /// Throws ValidationError unless x is strictly increasing with uniform
  /// spacing (1e-12 relative), sizes match, and all values are finite.
  ParamScan(std::string parameter, std::vector<double> x, std::vector<double> y);

  const std::string& parameter() const { return parameter_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  std::size_t size() const { return x_.size(); }
  double step() const { return step_; }

 private:
  std::string parameter_;
  std::vector<double> x_;
  std::vector<double> y_;
  double step_ = 0.0;
};

/// Cell midpoints start + (i + 1/2)(stop - start)/steps, i = 0..steps-1.
/// A critical value on the start + j*h lattice is therefore never sampled.
std::vector<double> midpoint_samples(double start, double stop, std::size_t steps);

/// `count` samples centred on x_c with spacing h, half a step off x_c:
/// x_c + (i - count/2 + 1/2) h.
std::vector<double> samples_around(double x_c, double h, std::size_t count);

/// Three-point central difference of order 1 or 2; the two endpoints are
/// dropped and the spacing is preserved.
ParamScan central_derivative(const ParamScan& scan, int order);

enum class SingularityKind { jump, log_divergence };

std::string_view to_string(SingularityKind k);

/// Least-squares fit y = a ln|x - x_c| + b (or y = a x + b for the linear
/// comparison model).
struct CurveFit {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  ///< RMS of the fit error
  std::size_t samples = 0;
};

struct SingularityReport {
  SingularityKind kind = SingularityKind::jump;
  double location = 0.0;

  // Jump reports.
  double magnitude = 0.0;
  double left_limit = 0.0;
  double right_limit = 0.0;

  // Log-divergence reports. `fit` shares (a, b) across both sides; the
  // per-side fits are present when a side had enough samples.
  CurveFit fit;
  std::optional<CurveFit> left_fit;
  std::optional<CurveFit> right_fit;
  /// RMS over the window of the per-side log fits.
  double log_residual = 0.0;
  /// RMS over the same samples of per-side straight lines y = a x + b.
  double linear_residual = 0.0;

  /// Log-model residual (0 for jump reports).
  double residual() const {
    return kind == SingularityKind::log_divergence ? log_residual : 0.0;
  }

  /// True when the log model beats the straight-line model by at least
  /// `factor` in RMS residual.
  bool log_preferred(double factor = 10.0) const;
};

struct JumpOptions {
  std::size_t exclusion = 2;  ///< samples skipped on each side of x_c
  std::size_t window = 4;     ///< samples per side in the linear extrapolation
};

/// Jump of a (derivative) scan across x_c. Each side is extrapolated to x_c
/// by a straight line through the `window` samples just outside the
/// exclusion zone; magnitude = |right - left|.
SingularityReport estimate_jump(const ParamScan& deriv, double x_c, const JumpOptions& opt = {});

/// Midpoint between the two adjacent samples with the largest |dy|; a coarse
/// locator for where a jump sits.
double locate_jump(const ParamScan& deriv);

/// Midpoint between the sample with the largest |y| and its larger
/// neighbour; a coarse locator for a divergence that sits between samples.
double locate_peak(const ParamScan& deriv);

/// Richardson extrapolation from results at step h (coarse) and h/2 (fine)
/// with leading error O(h^order).
double richardson(double coarse, double fine, int order);

struct LogWindow {
  double r_min = 0.0;
  double r_max = 0.0;

  /// Default window [2h, 50h] for scan step h.
  static LogWindow from_step(double h) { return {2.0 * h, 50.0 * h}; }
};

/// Fits y = a ln|x - x_c| + b to the samples with r_min <= |x - x_c| <= r_max,
/// per side and pooled, and straight lines per side for comparison. A side
/// with fewer than 8 samples is left out; throws if both are short.
SingularityReport fit_log_divergence(const ParamScan& deriv, double x_c, const LogWindow& w);

struct LogDetection {
  SingularityReport report;  ///< fit centred on the supplied x_c
  double peak = 0.0;         ///< locate_peak within the search radius
  bool flagged = false;
};

/// Log-divergence check around a known critical value: the |y| peak within
/// `search_radius` of x_c must sit within 2 steps of x_c, and the log model
/// must fit better than the straight-line model (same parameter count).
LogDetection detect_log_divergence(const ParamScan& deriv, double x_c, double search_radius,
                                   const LogWindow& w);

// ---------------------------------------------------------------------------
// Analytic predictors for the Dirac shell model
// ---------------------------------------------------------------------------

/// Magnitude of the jump of the d-th mA-derivative of the stored energy at
/// mB = 0 for odd d:  |S_{d-1} / (2 pi)^d * pi * d! * delta^2 / |mA||.
/// Evaluated at mA_abs = delta this is the universal jump (= delta for d = 1).
double predicted_jump(int d, double delta, double mA_abs);

/// Signed coefficient of ln|mA + delta| in the d-th mA-derivative of the
/// stored energy for even d, at |mA| = delta:
///   (-1)^{d/2 + 1} S_{d-1} / (2 pi)^d * d! * delta.
double predicted_log_coefficient(int d, double delta);

/// sum_{k=1}^d C(d,k) (-1)^{k-1} / k, evaluated exactly and rounded once.
double harmonic_alt(int d);

/// Shell energy of the 1D Dirac model with the k << |mA| integrand:
///   dM^2 / (pi |mA|) [L - mB arctan(L / mB)].
double closed_form_1d(double mA, double mB, double cutoff, double dM);

/// Shell energy of the 2D Dirac model with the k << |mA| integrand:
///   dM^2 / (4 pi |mA|) [L^2 - mB^2 ln((L^2 + mB^2) / mB^2)].
double closed_form_2d(double mA, double mB, double cutoff, double dM);

}  // namespace qbattery

#endif  // QBATTERY_CRITICALITY_HPP
