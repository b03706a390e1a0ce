#pragma once

#include <span>
#include <vector>

namespace hpfem {

/// Legendre polynomial P_n(x) from the three-term recurrence.
double legendre_eval(int n, double x);

/// Derivative P_n'(x).
double legendre_deriv(int n, double x);

/// Values P_0(x), ..., P_n(x) in one sweep of the recurrence.
void legendre_all(int n, double x, std::span<double> values);

/// Values and derivatives P_0..P_n at x.
void legendre_all(int n, double x, std::span<double> values, std::span<double> derivs);

/**
 * Hierarchic 1D shape function N_m on [-1, 1].
 *
 * N_1 and N_2 are the linear nodal functions; for m >= 3 the function is
 * (P_{m-1} - P_{m-3}) / sqrt(2(2m-3)), which vanishes at both endpoints.
 * Arguments outside [-1, 1] are evaluated as-is.
 */
double shape1d_eval(int m, double xi);

double shape1d_deriv(int m, double xi);

/// Values (and derivatives) of N_1..N_count at every point of xs.
/// Output layout is row-major: out[(m-1) * xs.size() + k].
void shape1d_eval_batch(int count, std::span<const double> xs, std::span<double> values,
                        std::span<double> derivs = {});

/// Edge polynomial phi_q(x) = N_{q+1}(x) for q >= 2, with derivative.
inline double edge_phi(int q, double x) { return shape1d_eval(q + 1, x); }
inline double edge_phi_deriv(int q, double x) { return shape1d_deriv(q + 1, x); }

} // namespace hpfem
