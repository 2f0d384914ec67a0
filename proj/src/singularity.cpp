#include <qbattery/criticality.hpp>
#include <qbattery/errors.hpp>

#include <cmath>

#include <fmt/format.h>

namespace qbattery {

namespace {

// Ordinary least squares y = a u + b.
CurveFit least_squares(const std::vector<double>& u, const std::vector<double>& y) {
  const std::size_t n = u.size();
  double su = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    su += u[i];
    sy += y[i];
  }
  const double mu = su / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double suu = 0.0;
  double suy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suy += (u[i] - mu) * (y[i] - my);
  }
  CurveFit f;
  f.samples = n;
  f.a = suu > 0.0 ? suy / suu : 0.0;
  f.b = my - f.a * mu;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.a * u[i] + f.b);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / static_cast<double>(n));
  return f;
}

double line_value_at(const std::vector<double>& x, const std::vector<double>& y, double at) {
  const CurveFit f = least_squares(x, y);
  return f.a * at + f.b;
}

}  // namespace

std::string_view to_string(SingularityKind k) {
  return k == SingularityKind::jump ? "jump" : "log_divergence";
}

bool SingularityReport::log_preferred(double factor) const {
  return kind == SingularityKind::log_divergence && fit.samples > 0 &&
         log_residual * factor <= linear_residual;
}

SingularityReport estimate_jump(const ParamScan& deriv, double x_c, const JumpOptions& opt) {
  const auto& x = deriv.x();
  const auto& y = deriv.y();
  if (!(x_c > x.front() && x_c < x.back())) {
    throw ValidationError(fmt::format("jump location {} outside scan [{}, {}]", x_c, x.front(),
                                      x.back()));
  }
  if (opt.exclusion < 1) throw ValidationError("jump exclusion zone must be >= 1 sample");
  if (opt.window < 2) throw ValidationError("jump extrapolation needs >= 2 samples per side");

  // First index with x >= x_c.
  std::size_t split = 0;
  while (split < x.size() && x[split] < x_c) ++split;
  const std::size_t need = opt.exclusion + opt.window;
  if (split < need || x.size() - split < need) {
    throw ValidationError(fmt::format("too few samples around x_c = {} for jump estimate", x_c));
  }

  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> rx;
  std::vector<double> ry;
  for (std::size_t j = 0; j < opt.window; ++j) {
    const std::size_t li = split - 1 - opt.exclusion - j;
    const std::size_t ri = split + opt.exclusion + j;
    lx.push_back(x[li] - x_c);
    ly.push_back(y[li]);
    rx.push_back(x[ri] - x_c);
    ry.push_back(y[ri]);
  }

  SingularityReport r;
  r.kind = SingularityKind::jump;
  r.location = x_c;
  r.left_limit = line_value_at(lx, ly, 0.0);
  r.right_limit = line_value_at(rx, ry, 0.0);
  r.magnitude = std::fabs(r.right_limit - r.left_limit);
  return r;
}

double locate_jump(const ParamScan& deriv) {
  const auto& x = deriv.x();
  const auto& y = deriv.y();
  std::size_t best = 0;
  double best_step = -1.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double dy = std::fabs(y[i + 1] - y[i]);
    if (dy > best_step) {
      best_step = dy;
      best = i;
    }
  }
  return 0.5 * (x[best] + x[best + 1]);
}

double locate_peak(const ParamScan& deriv) {
  const auto& x = deriv.x();
  const auto& y = deriv.y();
  std::size_t best = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (std::fabs(y[i]) > std::fabs(y[best])) best = i;
  }
  std::size_t other;
  if (best == 0) {
    other = 1;
  } else if (best + 1 == y.size()) {
    other = best - 1;
  } else {
    other = std::fabs(y[best - 1]) >= std::fabs(y[best + 1]) ? best - 1 : best + 1;
  }
  return 0.5 * (x[best] + x[other]);
}

double richardson(double coarse, double fine, int order) {
  if (order < 1) throw ValidationError("Richardson order must be >= 1");
  const double f = std::ldexp(1.0, order);
  return (f * fine - coarse) / (f - 1.0);
}

SingularityReport fit_log_divergence(const ParamScan& deriv, double x_c, const LogWindow& w) {
  if (!(w.r_min >= 0.0) || !(w.r_max > w.r_min)) {
    throw ValidationError("log-fit window needs 0 <= r_min < r_max");
  }
  struct Side {
    std::vector<double> x, u, y;
  } left, right;
  for (std::size_t i = 0; i < deriv.size(); ++i) {
    const double dx = deriv.x()[i] - x_c;
    const double r = std::fabs(dx);
    if (r == 0.0 || r < w.r_min || r > w.r_max) continue;
    Side& s = dx < 0.0 ? left : right;
    s.x.push_back(dx);
    s.u.push_back(std::log(r));
    s.y.push_back(deriv.y()[i]);
  }
  constexpr std::size_t kMinSide = 8;
  const bool use_left = left.y.size() >= kMinSide;
  const bool use_right = right.y.size() >= kMinSide;
  if (!use_left && !use_right) {
    throw ValidationError(fmt::format(
        "log-fit window [{}, {}] around {} holds fewer than {} samples on both sides", w.r_min,
        w.r_max, x_c, kMinSide));
  }

  SingularityReport r;
  r.kind = SingularityKind::log_divergence;
  r.location = x_c;
  std::vector<double> pu;
  std::vector<double> py;
  double log_ss = 0.0;
  double lin_ss = 0.0;
  std::size_t n = 0;
  auto take = [&](const Side& s) {
    const CurveFit lg = least_squares(s.u, s.y);
    const CurveFit ln = least_squares(s.x, s.y);
    const double m = static_cast<double>(s.y.size());
    log_ss += lg.residual * lg.residual * m;
    lin_ss += ln.residual * ln.residual * m;
    n += s.y.size();
    pu.insert(pu.end(), s.u.begin(), s.u.end());
    py.insert(py.end(), s.y.begin(), s.y.end());
    return lg;
  };
  if (use_left) r.left_fit = take(left);
  if (use_right) r.right_fit = take(right);
  r.fit = least_squares(pu, py);
  r.log_residual = std::sqrt(log_ss / static_cast<double>(n));
  r.linear_residual = std::sqrt(lin_ss / static_cast<double>(n));
  return r;
}

LogDetection detect_log_divergence(const ParamScan& deriv, double x_c, double search_radius,
                                   const LogWindow& w) {
  if (!(search_radius > 0.0)) throw ValidationError("search radius must be positive");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < deriv.size(); ++i) {
    if (std::fabs(deriv.x()[i] - x_c) <= search_radius) {
      xs.push_back(deriv.x()[i]);
      ys.push_back(deriv.y()[i]);
    }
  }
  if (xs.size() < 2) {
    throw ValidationError(fmt::format("fewer than 2 samples within {} of {}", search_radius, x_c));
  }
  LogDetection det;
  det.peak = locate_peak(ParamScan(deriv.parameter(), std::move(xs), std::move(ys)));
  det.report = fit_log_divergence(deriv, x_c, w);
  det.flagged = std::fabs(det.peak - x_c) <= 2.0 * deriv.step() &&
                det.report.log_residual < det.report.linear_residual;
  return det;
}

}  // namespace qbattery
