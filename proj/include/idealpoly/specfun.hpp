#pragma once

namespace idealpoly {

// Lobachevsky function  L(t) = -integral_0^t log|2 sin s| ds.
// Odd and pi-periodic; absolute error below 1e-12 for every finite t, and
// exactly zero at the floating-point images of integer multiples of pi.
double lobachevsky(double theta);

// L'(t) = -log|2 sin t|. Throws PoleAtMultipleOfPi at multiples of pi.
double lobachevskyDeriv(double theta);

// L''(t) = -cot t on (0, pi). Throws DomainError outside.
double lobachevskySecondDeriv(double theta);

// Regularized incomplete beta I_x(a, b).
double regularizedIncompleteBeta(double a, double b, double x);

double digamma(double x);
double trigamma(double x);

// Kolmogorov distribution tail Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorovTail(double lambda);

}  // namespace idealpoly
