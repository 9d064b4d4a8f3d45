#pragma once

#include <limits>

namespace rcmu {

inline constexpr double kInfiniteDof = std::numeric_limits<double>::infinity();

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

double normal_cdf(double x);
double normal_quantile(double p);

// Student-t with `dof` > 0 degrees of freedom; dof == kInfiniteDof is the standard normal.
double student_t_pdf(double t, double dof);
double student_t_cdf(double t, double dof);
double student_t_sf(double t, double dof);

/// Inverse of student_t_cdf for 0 < p < 1, solved to ~1e-12 by safeguarded Newton
/// on the tail probability. Throws Error on p outside (0, 1).
double t_quantile(double p, double dof);

// Fisher F with (d1, d2) degrees of freedom.
double f_pdf(double f, double d1, double d2);
double f_cdf(double f, double d1, double d2);
/// Upper-tail probability P(F > f).
double f_sf(double f, double d1, double d2);

}  // namespace rcmu
