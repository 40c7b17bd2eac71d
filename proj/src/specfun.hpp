/*
 *   Copyright 2026 the nomarelay authors
 *
 *   Licensed under the Apache License, Version 2.0 (the "License");
 *   you may not use this file except in compliance with the License.
 *   You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *   Unless required by applicable law or agreed to in writing, software
 *   distributed under the License is distributed on an "AS IS" BASIS,
 *   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *   See the License for the specific language governing permissions and
 *   limitations under the License.
 */

#pragma once

#include <functional>
#include <stdexcept>

namespace noma::specfun {

/// Thrown when an adaptive integral cannot reach the requested tolerance
/// within its subdivision budget.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  // Total number of adaptive interval splits allowed across the whole
  // integral, not per segment.
  int max_subdivisions = 50000;

  void check() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 16)
      throw std::invalid_argument("QuadratureSpec: abs_tol > 0, rel_tol > 0, max_subdivisions >= 16 required");
  }
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt.
/// Defined for x > 0 with any real s, and for x = 0 with s > 0.
/// Positive integer s is evaluated by the exact finite sum.
double upper_incomplete_gamma(double s, double x);

/// Modified Bessel function of the second kind, integer order n, x > 0.
double bessel_k(int n, double x);

/// e^x K_n(x); avoids the exponential underflow of bessel_k for large x.
double bessel_k_scaled(int n, double x);

/// Adaptive integral of f over the finite interval [a, b].
/// `budget` counts remaining interval splits and is shared across calls.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int& budget);

/// Integral of f over [0, inf). The integration window grows by interval
/// doubling until the running tail estimate (geometric extrapolation of the
/// per-segment contributions) falls below the tolerance; the integrand must
/// decay to zero with an integrable tail.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec = {});

}  // namespace noma::specfun
