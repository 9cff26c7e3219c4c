#include "locbo/gp/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "locbo/math/rng.hpp"

namespace locbo::gp {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 to_log(const KernelParams& p) {
  return {std::log(p.length_scale), std::log(p.noise_variance), std::log(p.output_scale)};
}

KernelParams from_log(const Vec3& z) {
  return {std::exp(z[0]), std::exp(z[1]), std::exp(z[2])};
}

Vec3 clamp_log(Vec3 z, const FitBounds& b) {
  z[0] = std::clamp(z[0], std::log(b.length_lo), std::log(b.length_hi));
  z[1] = std::clamp(z[1], std::log(b.noise_lo), std::log(b.noise_hi));
  z[2] = std::clamp(z[2], std::log(b.scale_lo), std::log(b.scale_hi));
  return z;
}

// Negative marginal log-likelihood; +inf on factorization failure.
double objective(const Vec3& z, const Dataset& data, double offset, bool& ok) {
  ok = true;
  try {
    GpModel m(from_log(z), data, offset);
    return -m.log_marginal_likelihood();
  } catch (const FactorizationError&) {
    ok = false;
    return std::numeric_limits<double>::infinity();
  }
}

struct NmPoint {
  Vec3 z;
  double f;
};

// Standard Nelder-Mead on the 3-d log-parameter space, with candidates
// projected into the bound box before evaluation.
NmPoint nelder_mead(Vec3 start, const Dataset& data, double offset,
                    const FitBounds& bounds, int max_iters, bool& any_ok) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  auto eval = [&](Vec3 z) {
    bool ok;
    const double f = objective(clamp_log(z, bounds), data, offset, ok);
    any_ok = any_ok || ok;
    return NmPoint{clamp_log(z, bounds), f};
  };

  std::array<NmPoint, 4> s;
  s[0] = eval(start);
  for (int i = 0; i < 3; ++i) {
    Vec3 z = start;
    z[i] += (z[i] < 0.0 ? 0.4 : -0.4);
    s[i + 1] = eval(z);
  }

  for (int it = 0; it < max_iters; ++it) {
    std::sort(s.begin(), s.end(), [](const NmPoint& a, const NmPoint& b) { return a.f < b.f; });
    if (std::isfinite(s[0].f) && std::isfinite(s[3].f) && s[3].f - s[0].f < 1e-10) break;

    Vec3 centroid{0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) centroid[k] += s[i].z[k] / 3.0;

    auto affine = [&](double t) {
      Vec3 z;
      for (int k = 0; k < 3; ++k) z[k] = centroid[k] + t * (centroid[k] - s[3].z[k]);
      return z;
    };

    const NmPoint refl = eval(affine(kReflect));
    if (refl.f < s[0].f) {
      const NmPoint exp_ = eval(affine(kExpand));
      s[3] = exp_.f < refl.f ? exp_ : refl;
    } else if (refl.f < s[2].f) {
      s[3] = refl;
    } else {
      const NmPoint con = eval(affine(refl.f < s[3].f ? kContract : -kContract));
      if (con.f < std::min(refl.f, s[3].f)) {
        s[3] = con;
      } else {
        for (int i = 1; i < 4; ++i) {
          for (int k = 0; k < 3; ++k)
            s[i].z[k] = s[0].z[k] + kShrink * (s[i].z[k] - s[0].z[k]);
          s[i] = eval(s[i].z);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), [](const NmPoint& a, const NmPoint& b) { return a.f < b.f; });
  return s[0];
}

}  // namespace

void FitBounds::validate() const {
  if (!(length_lo > 0) || !(length_lo <= length_hi) || !(noise_lo > 0) ||
      !(noise_lo <= noise_hi) || !(scale_lo > 0) || !(scale_lo <= scale_hi))
    throw std::invalid_argument("FitBounds: bounds must be positive and ordered");
}

FitResult fit_hyperparameters(const Dataset& data, const KernelParams& init,
                              const FitBounds& bounds, const FitOptions& opts) {
  bounds.validate();
  init.validate();
  if (data.empty()) throw std::invalid_argument("fit_hyperparameters: empty dataset");

  bool init_ok;
  const double init_nll = objective(clamp_log(to_log(init), bounds), data,
                                    opts.mean_offset, init_ok);

  bool any_ok = init_ok;
  NmPoint best{clamp_log(to_log(init), bounds), init_nll};

  math::Rng rng = math::Rng::substream(opts.seed, {0xf17});
  for (int s = 0; s < opts.n_starts; ++s) {
    Vec3 start;
    if (s == 0) {
      start = clamp_log(to_log(init), bounds);
    } else {
      start = {rng.uniform(std::log(bounds.length_lo), std::log(bounds.length_hi)),
               rng.uniform(std::log(bounds.noise_lo), std::log(bounds.noise_hi)),
               rng.uniform(std::log(bounds.scale_lo), std::log(bounds.scale_hi))};
    }
    const NmPoint r = nelder_mead(start, data, opts.mean_offset, bounds, opts.max_iters, any_ok);
    if (r.f < best.f) best = r;
  }

  FitResult out;
  if (!any_ok) {
    out.params = init;
    out.log_likelihood = -init_nll;
    out.degraded = true;
    return out;
  }
  // Monotone-improvement contract: never return something worse than init.
  if (init_ok && best.f > init_nll) best = {clamp_log(to_log(init), bounds), init_nll};
  out.params = from_log(best.z);
  out.log_likelihood = -best.f;
  out.improved = best.f < init_nll;
  return out;
}

}  // namespace locbo::gp
