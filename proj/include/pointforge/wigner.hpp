#pragma once

#include <complex>

#include "pointforge/half_integer.hpp"

namespace pointforge {

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3), evaluated by the Racah single-sum
/// formula in log-factorial space with compensated summation. Returns exactly
/// 0 when a selection rule fails (m1+m2+m3 != 0, triangle violation, or
/// j1+j2+j3 not an integer). Throws InputError for malformed labels
/// (|m| > j, negative j, m not matching j's parity).
double wigner_3j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                 HalfInteger m1, HalfInteger m2, HalfInteger m3);

/// Wigner small-d matrix element d^j_{mp,m}(beta), explicit factorial sum.
double wigner_d(HalfInteger j, HalfInteger mp, HalfInteger m, double beta);

/// Spin-weighted spherical harmonic
///   sY_{lm}(theta, phi) = sqrt((2l+1)/4pi) d^l_{m,-s}(theta) e^{i m phi}.
/// At s = 0 this is the Condon-Shortley Y_lm, and
/// conj(sY_{lm}) = (-1)^{s+m} (-s)Y_{l,-m} holds exactly.
/// Throws InputError when |s| > l, |m| > l, or l - s, l - m are not integers.
std::complex<double> spin_weighted_Y(HalfInteger s, HalfInteger l, HalfInteger m,
                                     double theta, double phi);

/// Surface integral over the unit sphere
///   I = \int conj(s1 Y_{l1 m1}) Y_{l2 m2} s3 Y_{l3 m3} dOmega
///     = (-1)^{s1+m1} sqrt((2l1+1)(2l2+1)(2l3+1)/4pi)
///       (l1 l2 l3; -m1 m2 m3) (l1 l2 l3; s1 0 -s3),
/// real in this convention. Spin weights s1, s3 must lie in {0, +-1/2} (the
/// middle factor is an ordinary harmonic, spin 0); the integral vanishes for
/// s1 != s3. l2, m2 must be integers.
double triple_integral(HalfInteger s1, HalfInteger l1, HalfInteger m1,
                       HalfInteger l2, HalfInteger m2,
                       HalfInteger s3, HalfInteger l3, HalfInteger m3);

}  // namespace pointforge
