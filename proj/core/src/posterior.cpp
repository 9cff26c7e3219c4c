#include "locbo/cal/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "locbo/math/normal.hpp"
#include "locbo/math/quadrature.hpp"

namespace locbo::cal {

CalibratedPosterior::CalibratedPosterior(gp::ConditionCoeffs coeffs,
                                         CalibratedLikelihood likelihood, bool validate)
    : coeffs_(coeffs), likelihood_(std::move(likelihood)) {
  if (!(coeffs_.a > 0.0) || !(coeffs_.var_plus > 0.0))
    throw std::invalid_argument("CalibratedPosterior: invalid conditioning coefficients");
  if (validate) validate_against_quadrature();
}

double CalibratedPosterior::pdf_closed_form(double f) const {
  const double a = coeffs_.a;
  const double b = coeffs_.b;
  const double vp = coeffs_.var_plus;
  const double alpha = likelihood_.alpha();
  const double lower = likelihood_.interval().lower;
  const double upper = likelihood_.interval().upper;
  const double mu = likelihood_.base().mean;
  const double sv = likelihood_.base().variance;

  // Flat segment: integral of N(f; a*y + b, vp) over y in [L, U].
  const double sp = std::sqrt(2.0 * vp);
  const double flat = (1.0 - alpha) / (upper - lower) / (2.0 * a) *
                      (std::erf((f - a * lower - b) / sp) - std::erf((f - a * upper - b) / sp));

  // Tail segments: the integrand is a product of two Gaussians in y, which
  // collapses to a marginal factor N(f; a*mu + b, vp + a^2*sv) times the
  // mass of the product-posterior Gaussian outside [L, U].
  const double marginal_var = vp + a * a * sv;
  const double s2bar = vp * sv / marginal_var;
  const double sbar = std::sqrt(s2bar);
  const double mbar = s2bar * (a * (f - b) / vp + mu / sv);
  const double outside_mass =
      math::norm_ccdf((upper - mbar) / sbar) + math::norm_cdf((lower - mbar) / sbar);
  const double tails = alpha / likelihood_.lambda_at_x() *
                       math::gauss_pdf(f, a * mu + b, marginal_var) * outside_mass;

  return flat + tails;
}

double CalibratedPosterior::pdf_quadrature(double f) const {
  const double a = coeffs_.a;
  const double b = coeffs_.b;
  const double vp = coeffs_.var_plus;
  const double mu = likelihood_.base().mean;
  const double sigma = std::sqrt(likelihood_.base().variance);

  const double lo = mu - 12.0 * sigma;
  const double hi = mu + 12.0 * sigma;
  std::vector<double> breaks{lo};
  for (double cut : {likelihood_.interval().lower, likelihood_.interval().upper})
    if (cut > lo && cut < hi) breaks.push_back(cut);
  breaks.push_back(hi);

  const auto integrand = [&](double y) {
    return math::gauss_pdf(f, a * y + b, vp) * likelihood_.pdf(y);
  };
  const auto r = math::integrate_segments(integrand, breaks, 1e-8, 1e-10);
  if (!r.converged)
    throw std::runtime_error("CalibratedPosterior: quadrature did not converge "
                             "(error " + std::to_string(r.error) + ")");
  return r.value;
}

double CalibratedPosterior::pdf(double f) const {
  return diverged_ ? pdf_quadrature(f) : pdf_closed_form(f);
}

double CalibratedPosterior::sample(math::Rng& rng) const {
  const double y = likelihood_.sample(rng);
  return coeffs_.a * y + coeffs_.b + std::sqrt(coeffs_.var_plus) * rng.normal();
}

std::pair<double, double> CalibratedPosterior::density_span() const {
  const double a = coeffs_.a;
  const double b = coeffs_.b;
  const double spread =
      12.0 * std::sqrt(coeffs_.var_plus + a * a * likelihood_.base().variance);
  const double lo = a * likelihood_.interval().lower + b;
  const double hi = a * likelihood_.interval().upper + b;
  const double center = a * likelihood_.base().mean + b;
  return {std::min(lo, center - spread), std::max(hi, center + spread)};
}

std::vector<double> CalibratedPosterior::moment_breaks() const {
  const auto [lo, hi] = density_span();
  const double a = coeffs_.a;
  const double b = coeffs_.b;
  const double sp = std::sqrt(coeffs_.var_plus);
  std::vector<double> breaks{lo, hi};
  // Bracket the image of the flat segment so narrow spikes are resolved.
  for (double cut : {a * likelihood_.interval().lower + b - 4.0 * sp,
                     a * likelihood_.interval().lower + b,
                     a * likelihood_.interval().upper + b,
                     a * likelihood_.interval().upper + b + 4.0 * sp})
    if (cut > lo && cut < hi) breaks.push_back(cut);
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

double CalibratedPosterior::normalization_quadrature() const {
  const auto r = math::integrate_segments([&](double f) { return pdf_quadrature(f); },
                                          moment_breaks(), 1e-7, 1e-7, 600);
  return r.value;
}

std::pair<double, double> CalibratedPosterior::quadrature_moments() const {
  const auto breaks = moment_breaks();
  const auto m0 = math::integrate_segments([&](double f) { return pdf_quadrature(f); },
                                           breaks, 1e-7, 1e-7, 600);
  const auto m1 = math::integrate_segments([&](double f) { return f * pdf_quadrature(f); },
                                           breaks, 1e-7, 1e-7, 600);
  const double mean = m1.value / m0.value;
  const auto m2 = math::integrate_segments(
      [&](double f) { return (f - mean) * (f - mean) * pdf_quadrature(f); }, breaks,
      1e-7, 1e-7, 600);
  return {mean, m2.value / m0.value};
}

double CalibratedPosterior::validate_against_quadrature(int n_grid) {
  const auto [lo, hi] = density_span();
  max_divergence_ = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    const double f = lo + (hi - lo) * (i + 0.5) / n_grid;
    max_divergence_ =
        std::max(max_divergence_, std::fabs(pdf_closed_form(f) - pdf_quadrature(f)));
  }
  diverged_ = max_divergence_ > 1e-4;
  return max_divergence_;
}

namespace {

// Antiderivative of w*Phi(w) + phi(w).
double ei_antiderivative(double w) {
  return 0.5 * ((w * w + 1.0) * math::norm_cdf(w) + w * math::norm_pdf(w));
}

}  // namespace

double acquisition_ei(const CalibratedPosterior& posterior, double y_best, int n_mc,
                      math::Rng& /*rng*/) {
  if (n_mc < 1) throw std::invalid_argument("acquisition_ei: n_mc must be >= 1");
  // The improvement expectation conditioned on y' is closed-form Gaussian
  // EI, which collapses the acquisition to a one-dimensional integral over
  // the piecewise likelihood. Its pieces split into closed forms plus one
  // smooth finite-interval term:
  //   flat segment: (s^2/a) * [H(w_U) - H(w_L)], H' = w*Phi(w) + phi(w)
  //   both tails:   EI of the Gaussian marginal minus the interval part,
  //                 the latter integrated by Gauss-Kronrod.
  // n_mc bounds the refinement of that last term.
  const auto& c = posterior.coeffs();
  const auto& cl = posterior.likelihood();
  const double lower = cl.interval().lower;
  const double upper = cl.interval().upper;
  const double alpha = cl.alpha();
  const double mu = cl.base().mean;
  const double var_t = cl.base().variance;
  const double s = std::sqrt(c.var_plus);

  double flat = 0.0;
  if (alpha < 1.0) {
    const double w_lo = (c.a * lower + c.b - y_best) / s;
    const double w_hi = (c.a * upper + c.b - y_best) / s;
    if (w_hi - w_lo < 1e-4) {
      // Width below cancellation resolution: midpoint value.
      const double w_mid = 0.5 * (w_lo + w_hi);
      flat = (1.0 - alpha) * s * (w_mid * math::norm_cdf(w_mid) + math::norm_pdf(w_mid));
    } else {
      flat = (1.0 - alpha) / (upper - lower) * (s * s / c.a) *
             (ei_antiderivative(w_hi) - ei_antiderivative(w_lo));
    }
  }

  double tails = 0.0;
  if (alpha > 0.0) {
    const double marginal =
        gaussian_ei(c.a * mu + c.b, std::sqrt(c.var_plus + c.a * c.a * var_t), y_best);
    const auto inside = math::integrate_adaptive(
        [&](double y) {
          return math::gauss_pdf(y, mu, var_t) * gaussian_ei(c.a * y + c.b, s, y_best);
        },
        lower, upper, 1e-14, 1e-10, std::max(64, n_mc / 16));
    tails = alpha / cl.lambda_at_x() * std::max(0.0, marginal - inside.value);
  }
  return flat + tails;
}

double gaussian_ei(double mean, double sd, double y_best) {
  if (!(sd > 0.0)) return std::max(mean - y_best, 0.0);
  const double z = (mean - y_best) / sd;
  return (mean - y_best) * math::norm_cdf(z) + sd * math::norm_pdf(z);
}

}  // namespace locbo::cal
