// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#include "spdecov/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spdecov/errors.hpp"

namespace spdecov::elliptic {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Adaptive Simpson on [lo,hi] with absolute tolerance tol.
template <typename F>
double simpson_rec(const F& f, double lo, double hi, double flo, double fmid,
                   double fhi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double flmid = f(lmid);
  const double frmid = f(rmid);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, lo, mid, flo, flmid, fmid, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, mid, hi, fmid, frmid, fhi, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double lo, double hi, double tol) {
  if (hi <= lo) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo);
  const double fmid = f(mid);
  const double fhi = f(hi);
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, 40);
}

double k_from_complement(double k_prime) {
  const double k = std::sqrt((1.0 - k_prime) * (1.0 + k_prime));
  // For k' below ~1e-8 the modulus rounds to 1; keep it inside (0,1).
  return std::min(k, std::nextafter(1.0, 0.0));
}

// dn via the AGM scheme, driven by k^2 and k'. ksq = (1-k')(1+k').
// Valid on |u| <= K/2 where 1 - k^2 sn^2 stays well conditioned; larger
// arguments are folded with dn(u) = k'/dn(K-u) by the caller.
double dn_agm(double u, double ksq, double k_prime) {
  if (ksq < 1e-16) return 1.0;  // k = 0 degenerate branch
  if (u == 0.0) return 1.0;

  constexpr int kMaxLevels = 40;
  double a[kMaxLevels + 1];
  double c[kMaxLevels + 1];
  a[0] = 1.0;
  c[0] = std::sqrt(ksq);
  double b = k_prime;
  int n = 0;
  while (std::abs(c[n]) > 1e-15 * a[n] && n < kMaxLevels) {
    const double an = 0.5 * (a[n] + b);
    const double cn = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
    a[n] = an;
    c[n] = cn;
  }
  // phi_N = 2^N a_N u, then descend phi_{m-1} = (phi_m + asin(c_m/a_m sin phi_m))/2.
  double phi = std::ldexp(a[n] * u, n);
  for (int m = n; m >= 1; --m) {
    const double s = std::clamp(c[m] / a[m] * std::sin(phi), -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(s));
  }
  const double sn = std::sin(phi);
  const double arg = std::max(1.0 - ksq * sn * sn, 0.0);
  return std::sqrt(arg);
}

double dn_eval(double u, double ksq, double k_prime) {
  if (ksq < 1e-16) return 1.0;
  const double K = kPi / (2.0 * agm(1.0, k_prime));
  double folded = std::fmod(std::abs(u), 2.0 * K);  // dn is even, 2K-periodic
  if (folded > K) folded = 2.0 * K - folded;
  if (folded > 0.5 * K) {
    return k_prime / dn_agm(K - folded, ksq, k_prime);
  }
  return dn_agm(folded, ksq, k_prime);
}

}  // namespace

double agm(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("agm: inputs must be positive");
  }
  while (std::abs(a - b) > 1e-15 * a) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}

double complete_K(double k) {
  if (!(k >= 0.0) || k >= 1.0) {
    throw DomainError("complete_K: modulus must satisfy 0 <= k < 1");
  }
  return kPi / (2.0 * agm(1.0, std::sqrt((1.0 - k) * (1.0 + k))));
}

double complete_K_from_complement(double k_prime) {
  if (!(k_prime > 0.0) || k_prime > 1.0) {
    throw DomainError("complete_K_from_complement: need 0 < k' <= 1");
  }
  return kPi / (2.0 * agm(1.0, k_prime));
}

double incomplete_s(double x, double k) {
  if (!(x >= 0.0) || x > 1.0) {
    throw DomainError("incomplete_s: x must lie in [0,1]");
  }
  if (!(k >= 0.0) || k >= 1.0) {
    throw DomainError("incomplete_s: modulus must satisfy 0 <= k < 1");
  }
  if (x == 0.0) return 0.0;
  const double ksq = k * k;
  const double upper = std::asin(x);
  return adaptive_simpson(
      [ksq](double theta) {
        const double s = std::sin(theta);
        return 1.0 / std::sqrt(1.0 - ksq * s * s);
      },
      0.0, upper, 1e-12);
}

double nome_from_K(double K, double K_prime) {
  if (!(K > 0.0) || !(K_prime > 0.0)) {
    throw DomainError("nome_from_K: K and K' must be positive");
  }
  return std::exp(-kPi * K_prime / K);
}

double modulus_from_nome(double q) {
  if (!(q >= 0.0) || q >= 1.0) {
    throw DomainError("modulus_from_nome: nome must satisfy 0 <= q < 1");
  }
  double num = 1.0;
  double den = 1.0;
  double sign = -1.0;
  for (int m = 1;; ++m) {
    const double term = 2.0 * std::pow(q, static_cast<double>(m) * m);
    if (term < 1e-16) break;
    num += sign * term;
    den += term;
    sign = -sign;
  }
  const double ratio = num / den;  // = sqrt(k')
  return ratio * ratio;
}

double jacobi_dn(double u, double k) {
  if (!(k >= 0.0) || k >= 1.0) {
    throw DomainError("jacobi_dn: modulus must satisfy 0 <= k < 1");
  }
  if (k < 1e-8) return 1.0;
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  return dn_eval(u, k * k, kp);
}

double jacobi_dn_from_complement(double u, double k_prime) {
  if (!(k_prime > 0.0) || k_prime > 1.0) {
    throw DomainError("jacobi_dn_from_complement: need 0 < k' <= 1");
  }
  return dn_eval(u, (1.0 - k_prime) * (1.0 + k_prime), k_prime);
}

EllipticData make_elliptic(double k) {
  if (!(k > 0.0) || k >= 1.0) {
    throw DomainError("make_elliptic: modulus must satisfy 0 < k < 1");
  }
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  EllipticData d;
  d.k = k;
  d.k_prime = kp;
  d.K = complete_K_from_complement(kp);
  d.K_prime = complete_K(kp);
  d.q = nome_from_K(d.K, d.K_prime);
  return d;
}

EllipticData make_elliptic_from_complement(double k_prime) {
  if (!(k_prime > 0.0) || k_prime > 1.0) {
    throw DomainError("make_elliptic_from_complement: need 0 < k' <= 1");
  }
  EllipticData d;
  d.k_prime = k_prime;
  if (k_prime == 1.0) {
    // Degenerate interval a = b: K' diverges and the nome vanishes.
    d.k = 0.0;
    d.K = kPi / 2.0;
    d.K_prime = std::numeric_limits<double>::infinity();
    d.q = 0.0;
    return d;
  }
  d.k = k_from_complement(k_prime);
  d.K = complete_K_from_complement(k_prime);
  d.K_prime = complete_K(k_prime);
  d.q = nome_from_K(d.K, d.K_prime);
  return d;
}

}  // namespace spdecov::elliptic
