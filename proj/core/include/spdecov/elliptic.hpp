// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace spdecov::elliptic {

/// Complete elliptic integrals and Jacobi dn for one modulus.
///
/// Conventions: modulus k in [0,1), complementary modulus
/// k' = sqrt(1-k^2), K = K(k), K' = K(k'), nome q = exp(-pi K'/K).
/// For ill-conditioned spectral intervals k can round to 1 in double
/// precision; all internal evaluation is therefore driven by k', which
/// is always well separated from 0 in the use cases of this library.
struct EllipticData {
  double k;        ///< modulus, in (0,1)
  double k_prime;  ///< complementary modulus, in (0,1]
  double K;        ///< complete elliptic integral of the first kind
  double K_prime;  ///< complementary complete integral (+inf iff k'=1)
  double q;        ///< nome, in [0,1)
};

/// Arithmetic-geometric mean of a and b.
/// Terminates when |a_n - b_n| <= 1e-15 * a_n. Throws DomainError for
/// non-positive input.
double agm(double a, double b);

/// Complete elliptic integral of the first kind, K(k) = pi/(2 agm(1,k')).
/// Requires 0 <= k < 1.
double complete_K(double k);

/// K evaluated from the complementary modulus: pi/(2 agm(1,k')).
/// Avoids forming k = sqrt(1-k'^2) when k' is tiny.
double complete_K_from_complement(double k_prime);

/// Incomplete elliptic integral s_k(x) = int_0^x dt/sqrt((1-t^2)(1-k^2 t^2)),
/// evaluated by adaptive quadrature (absolute tolerance 1e-12) after the
/// substitution t = sin(theta). Requires 0 <= x <= 1 and 0 <= k < 1.
/// This is the reference evaluation; it also serves as the oracle for dn.
double incomplete_s(double x, double k);

/// Nome q = exp(-pi K'/K). Requires K > 0 and K' > 0.
double nome_from_K(double K, double K_prime);

/// Complementary modulus from the nome via the theta-function series
///   sqrt(k') = (1 - 2q + 2q^4 - 2q^9 + ...)/(1 + 2q + 2q^4 + 2q^9 + ...),
/// returned squared, i.e. the value k'. Series truncated when the next
/// term 2 q^(m^2) drops below 1e-16. Requires 0 <= q < 1.
double modulus_from_nome(double q);

/// Jacobi dn(u,k) by the descending Landen (AGM) scheme, at most 40
/// levels. For k < 1e-8 the k=0 closed form dn = 1 is used. Requires
/// 0 <= k < 1; returns values in [k',1] for u in [0,K].
double jacobi_dn(double u, double k);

/// dn(u) evaluated from the complementary modulus (k^2 = (1-k')(1+k')).
double jacobi_dn_from_complement(double u, double k_prime);

/// Assemble k, k', K, K', q from the modulus. Requires 0 < k < 1.
EllipticData make_elliptic(double k);

/// Assemble the same data from the complementary modulus; the exact
/// route for spectral intervals, where k' = b/a is known directly.
/// Requires 0 < k' <= 1. k' = 1 yields the degenerate point
/// k = 0, K = pi/2, K' = +inf, q = 0.
EllipticData make_elliptic_from_complement(double k_prime);

}  // namespace spdecov::elliptic
