#include "spinbath/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

constexpr double kInvE = 0.36787944117144233;
constexpr double kFitFloor = 0.05;  // points below this are noise-floor biased

double golden_minimize(double lo, double hi, int iterations,
                       const std::function<double(double)>& f) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

void validate_curve(const CoherenceCurve& c) {
  if (c.timepoints.size() != c.values.size() || c.timepoints.size() < 2)
    throw ConfigError("curve needs matching time and value arrays");
  for (std::size_t i = 1; i < c.timepoints.size(); ++i)
    if (c.timepoints[i] <= c.timepoints[i - 1])
      throw ConfigError("curve timepoints must be strictly increasing");
}

}  // namespace

T2Report extract_t2(const CoherenceCurve& curve) {
  validate_curve(curve);
  const auto& t = curve.timepoints;
  const auto& v = curve.values;
  T2Report report;

  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < kInvE && v[i - 1] >= kInvE) {
      const double frac = (v[i - 1] - kInvE) / (v[i - 1] - v[i]);
      report.t2_1e = t[i - 1] + frac * (t[i] - t[i - 1]);
      break;
    }
  }

  std::vector<double> ft, fv;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (t[i] > 0.0 && v[i] > kFitFloor) {
      ft.push_back(t[i]);
      fv.push_back(v[i]);
    }
  }
  const double vmin = *std::min_element(fv.begin(), fv.end());
  if (ft.size() < 4 || vmin > 0.95) return report;  // nothing to fit

  double guess = report.t2_1e.value_or(0.0);
  if (guess <= 0.0) {
    // closest approach to 1/e, else the grid end
    double best = 1e300;
    guess = ft.back();
    for (std::size_t i = 0; i < fv.size(); ++i)
      if (std::abs(fv[i] - kInvE) < best) {
        best = std::abs(fv[i] - kInvE);
        guess = ft[i];
      }
  }

  auto sse = [&](double n, double log_t2) {
    const double t2 = std::pow(10.0, log_t2);
    double acc = 0.0;
    for (std::size_t i = 0; i < ft.size(); ++i) {
      const double model = std::exp(-std::pow(ft[i] / t2, n));
      acc += (fv[i] - model) * (fv[i] - model);
    }
    return acc;
  };
  const double lg = std::log10(guess);
  auto best_log_t2 = [&](double n) {
    return golden_minimize(lg - 2.0, lg + 2.0, 70,
                           [&](double l) { return sse(n, l); });
  };
  const double n_best =
      golden_minimize(1.0, 4.0, 60, [&](double n) { return sse(n, best_log_t2(n)); });
  const double log_t2_best = best_log_t2(n_best);

  report.fit_t2 = std::pow(10.0, log_t2_best);
  report.fit_exponent = n_best;
  report.fit_residual = std::sqrt(sse(n_best, log_t2_best) / static_cast<double>(ft.size()));
  report.fit_ok = true;
  return report;
}

double analytic_t2_envelope(const DonorParams& donor, Transition t, double field_t,
                            double c_bar) {
  const double pu = polarization(donor, field_t, t.upper);
  const double pl = polarization(donor, field_t, t.lower);
  const double gap = std::abs(pu - pl);
  if (gap < 1e-15)
    throw NumericalError("T2 envelope diverges: field is at the optimal working point");
  return c_bar * (std::abs(pu) + std::abs(pl)) / gap;
}

double calibrate_c_bar(const DonorParams& donor, Transition t, double field_reference,
                       double t2_reference) {
  const double pu = polarization(donor, field_reference, t.upper);
  const double pl = polarization(donor, field_reference, t.lower);
  return t2_reference * std::abs(pu - pl) / (std::abs(pu) + std::abs(pl));
}

CoherenceCurve convolve_broadening(const std::vector<CoherenceCurve>& family,
                                   const std::vector<double>& fields, double center,
                                   double width) {
  if (family.empty() || family.size() != fields.size())
    throw ConfigError("broadening needs one field per curve");
  for (const auto& c : family) {
    validate_curve(c);
    if (c.timepoints != family.front().timepoints)
      throw ConfigError("broadening curves must share one time grid");
  }
  const double lo = *std::min_element(fields.begin(), fields.end());
  const double hi = *std::max_element(fields.begin(), fields.end());
  if (width > 0.0 && (lo > center - 3.0 * width || hi < center + 3.0 * width))
    throw ConfigError("broadening family must cover center +- 3 sigma");

  CoherenceCurve out;
  out.timepoints = family.front().timepoints;
  out.field_t = center;
  out.cce_order = family.front().cce_order;
  out.sequence = family.front().sequence;

  std::vector<double> weights(fields.size(), 0.0);
  double sum = 0.0;
  if (width > 0.0) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const double x = (fields[j] - center) / width;
      weights[j] = std::exp(-0.5 * x * x);
      sum += weights[j];
    }
  }
  if (sum <= 0.0) {
    // Delta limit: the curve at the nearest sampled field.
    std::size_t nearest = 0;
    for (std::size_t j = 1; j < fields.size(); ++j)
      if (std::abs(fields[j] - center) < std::abs(fields[nearest] - center)) nearest = j;
    out.values = family[nearest].values;
    return out;
  }
  for (auto& w : weights) w /= sum;

  out.values.assign(out.timepoints.size(), 0.0);
  for (std::size_t j = 0; j < family.size(); ++j)
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += weights[j] * family[j].values[i];
  return out;
}

CoherenceCurve ensemble_average(const std::vector<CoherenceCurve>& curves) {
  if (curves.size() < 2) throw ConfigError("ensemble average needs at least two curves");
  for (const auto& c : curves) {
    validate_curve(c);
    if (c.timepoints != curves.front().timepoints)
      throw ConfigError("ensemble curves must share one time grid");
  }
  CoherenceCurve out;
  out.timepoints = curves.front().timepoints;
  out.field_t = curves.front().field_t;
  out.cce_order = curves.front().cce_order;
  out.sequence = curves.front().sequence;
  const std::size_t nt = out.timepoints.size();
  const double n = static_cast<double>(curves.size());
  out.values.assign(nt, 0.0);
  out.sigma.assign(nt, 0.0);
  for (const auto& c : curves)
    for (std::size_t i = 0; i < nt; ++i) out.values[i] += c.values[i] / n;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < nt; ++i) {
      const double d = c.values[i] - out.values[i];
      out.sigma[i] += d * d;
    }
  for (std::size_t i = 0; i < nt; ++i) out.sigma[i] = std::sqrt(out.sigma[i] / (n - 1.0));
  return out;
}

std::vector<double> uniform_grid(double t_max, int n) {
  if (t_max <= 0.0 || n < 2) throw ConfigError("grid needs t_max > 0 and n >= 2");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = t_max * i / (n - 1.0);
  return grid;
}

}  // namespace spinbath
