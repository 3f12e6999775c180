#pragma once

#include <cmath>

namespace roundforge {

struct Minimum {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
};

// Golden-section search on [lo, hi]; stops when the bracket is below tol.
template <class F>
Minimum golden_section_minimize(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  Minimum out;
  if (!(hi > lo)) {
    out.x = lo;
    out.f = f(lo);
    out.evaluations = 1;
    return out;
  }
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  while (b - a > tol && evals < 200) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  out.x = fc <= fd ? c : d;
  out.f = fc <= fd ? fc : fd;
  // bracket ends too
  const double fa = f(lo), fb = f(hi);
  evals += 2;
  if (fa < out.f) {
    out.x = lo;
    out.f = fa;
  }
  if (fb < out.f) {
    out.x = hi;
    out.f = fb;
  }
  out.evaluations = evals;
  return out;
}

}  // namespace roundforge
