#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace locbo::math {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights (positive half).
inline constexpr double kKronrodNodes[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
    0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
    0.949107912342758525, 0.991455371120812639};
inline constexpr double kKronrodWeights[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
    0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
    0.063092092629978553, 0.022935322010529225};
// Gauss-7 weights aligned with nodes 0, 2, 4, 6 above.
inline constexpr double kGaussWeights[4] = {
    0.417959183673469388, 0.381830050505118945, 0.279705391489276668,
    0.129484966168869693};

template <class F>
void g7k15(F&& f, double a, double b, double& k15, double& err) {
  const double mid = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  const double f0 = f(mid);
  double gauss = kGaussWeights[0] * f0;
  double kron = kKronrodWeights[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double fi = f(mid + dx) + f(mid - dx);
    kron += kKronrodWeights[i] * fi;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * fi;
  }
  gauss *= h;
  kron *= h;
  k15 = kron;
  const double d = std::fabs(kron - gauss);
  err = std::min(d, std::pow(200.0 * d, 1.5));
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10,
                              double rel_tol = 1e-10, int max_panels = 4000) {
  QuadResult out;
  if (a == b) return out;

  struct Seg {
    double a, b, value, error;
  };
  std::vector<Seg> stack;
  double total = 0.0;
  double total_err = 0.0;
  // Several starting panels so narrow features cannot slip between the
  // nodes of a single panel with a vanishing error estimate.
  const int n0 = 8;
  for (int i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * i / n0;
    const double hi = a + (b - a) * (i + 1) / n0;
    double v, e;
    detail::g7k15(f, lo, hi, v, e);
    stack.push_back({lo, hi, v, e});
    total += v;
    total_err += e;
  }
  out.panels = n0;
  while (!stack.empty()) {
    // Refine the worst segment first.
    auto worst = std::max_element(
        stack.begin(), stack.end(),
        [](const Seg& x, const Seg& y) { return x.error < y.error; });
    if (total_err <= abs_tol || total_err <= rel_tol * std::fabs(total)) break;
    if (out.panels >= max_panels) {
      out.converged = false;
      break;
    }
    const Seg seg = *worst;
    stack.erase(worst);
    const double mid = 0.5 * (seg.a + seg.b);
    double vl, el, vr, er;
    detail::g7k15(f, seg.a, mid, vl, el);
    detail::g7k15(f, mid, seg.b, vr, er);
    total += vl + vr - seg.value;
    total_err += el + er - seg.error;
    stack.push_back({seg.a, mid, vl, el});
    stack.push_back({mid, seg.b, vr, er});
    out.panels += 2;
  }
  out.value = total;
  out.error = total_err;
  return out;
}

/// Integrate over consecutive segments given by sorted breakpoints.
/// The integrand may be discontinuous at interior breakpoints.
template <class F>
QuadResult integrate_segments(F&& f, const std::vector<double>& breaks,
                              double abs_tol = 1e-10, double rel_tol = 1e-10,
                              int max_panels_per_segment = 2000) {
  if (breaks.size() < 2) throw std::invalid_argument("need at least two breakpoints");
  QuadResult out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] < breaks[i]) throw std::invalid_argument("breakpoints not sorted");
    const QuadResult r = integrate_adaptive(f, breaks[i], breaks[i + 1], abs_tol,
                                            rel_tol, max_panels_per_segment);
    out.value += r.value;
    out.error += r.error;
    out.panels += r.panels;
    out.converged = out.converged && r.converged;
  }
  return out;
}

}  // namespace locbo::math
