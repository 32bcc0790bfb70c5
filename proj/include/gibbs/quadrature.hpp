#pragma once

#include <cmath>
#include <functional>

namespace gibbs::oracle {

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance `tol`.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
  if (!(b > a)) return 0.0;
  struct Rec {
    static double run(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double diff = left + right - whole;
      if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
      return run(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
             run(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    }
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::run(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace gibbs::oracle
