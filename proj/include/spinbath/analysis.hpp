#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinbath/donor.hpp"
#include "spinbath/spectrum.hpp"

namespace spinbath {

// A coherence magnitude curve plus the settings that produced it.
struct CoherenceCurve {
  std::vector<double> timepoints;  // s, strictly increasing, starts at 0
  std::vector<double> values;      // |L|, values[0] = 1
  std::vector<double> sigma;       // optional pointwise std dev (ensembles)
  // metadata
  double field_t = 0.0;
  int cce_order = 0;
  std::string sequence;
  std::uint64_t seed = 0;
};

struct T2Report {
  std::optional<double> t2_1e;   // first 1/e crossing, linear interpolation
  double fit_t2 = 0.0;           // exp[-(t/T2)^n] least squares
  double fit_exponent = 0.0;     // n in [1, 4]
  double fit_residual = 0.0;     // rms over the fit window
  bool fit_ok = false;
};

// 1/e time and stretched-exponential fit.  Points with value <= 0.05 are
// excluded from the fit window (noise floor).  A curve that never crosses 1/e
// reports t2_1e = nullopt (the plateau signature).
T2Report extract_t2(const CoherenceCurve& curve);

// C(theta) * (|P_u| + |P_l|) / |P_u - P_l|.  Throws NumericalError at the
// OWP itself (P_u = P_l).
double analytic_t2_envelope(const DonorParams& donor, Transition t, double field_t,
                            double c_bar);

// Calibrate the prefactor: c_bar such that the envelope equals t2_reference at
// field_reference (the far-from-OWP anchor).
double calibrate_c_bar(const DonorParams& donor, Transition t, double field_reference,
                       double t2_reference);

// Gaussian magnetic-field broadening: quadrature over a family of curves
// L_B(t) sampled on a B grid with weights exp(-(B-center)^2 / 2w^2),
// renormalized to unit sum.  The family must cover center +- 3w.
CoherenceCurve convolve_broadening(const std::vector<CoherenceCurve>& family,
                                   const std::vector<double>& fields, double center,
                                   double width);

// Pointwise mean and standard deviation over seeds; grids must match.
CoherenceCurve ensemble_average(const std::vector<CoherenceCurve>& curves);

// Uniform grid 0 .. t_max with n points (n >= 2), t_0 = 0.
std::vector<double> uniform_grid(double t_max, int n);

}  // namespace spinbath
