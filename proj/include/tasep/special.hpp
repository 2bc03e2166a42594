#pragma once

#include <complex>
#include <functional>

namespace tasep {

using cplx = std::complex<double>;

double airy_ai(double x);
double airy_ai_prime(double x);
// (1/2pi) * integral of exp(i xi w + i w^3/3) g(w) dw over the V-shaped contour
// with vertex i*y0 and rays at angles pi/6 and 5pi/6.
cplx airy_contour_integral(double xi, const std::function<cplx(cplx)>& g, double y0 = 0.0);
double airy_ai_contour(double x);
// Integral of Ai over (x, infinity).
double airy_ai_tail(double x);

double hermite_H(int n, double x);   // physicists' polynomials, three-term recurrence
double hermite_He(int n, double x);  // probabilists' polynomials
// n!/(2 pi i) * closed integral of exp(2xz - z^2) / z^{n+1} on |z| = 1.
double hermite_H_contour(int n, double x);

// psi_1(x, tau) = (1/2 pi i) * integral over Re z = eps of exp(z^2/2 - tau z) z^{x-1}.
double psi1_quadrature(long x, double tau, double eps = 1.0);
// Same function via Hermite polynomials (x >= 1) and the erfc recurrence (x <= 0).
double psi1_closed(long x, double tau);
// psi_2(x, tau) = 2^{-x/2} H_x(tau/sqrt 2) / x!, zero for x < 0.
double psi2_limit(long x, double tau);

// Parabolic cylinder D_n(tau) for integer n >= -1 (and below), via psi_1.
double parabolic_D(long n, double tau);
// Closed-form initial value D_n(0).
double parabolic_D0(long n);

}  // namespace tasep
