// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cfem/numerics/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cfem/errors.hpp"

namespace cfem::numerics
{

namespace
{

using Real = HighPrecisionReal;

struct HpComplex
{
  Real re{0};
  Real im{0};
};

HpComplex operator+(const HpComplex &a, const HpComplex &b) { return {a.re + b.re, a.im + b.im}; }
HpComplex operator-(const HpComplex &a, const HpComplex &b) { return {a.re - b.re, a.im - b.im}; }
HpComplex operator*(const HpComplex &a, const HpComplex &b)
{
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
HpComplex operator/(const HpComplex &a, const HpComplex &b)
{
  // Smith's algorithm avoids overflow in |b|^2.
  using boost::multiprecision::abs;
  if (abs(b.re) >= abs(b.im))
  {
    const Real r = b.im / b.re;
    const Real d = b.re + b.im * r;
    return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
  }
  const Real r = b.re / b.im;
  const Real d = b.re * r + b.im;
  return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}
Real norm(const HpComplex &a) { return boost::multiprecision::sqrt(a.re * a.re + a.im * a.im); }
bool is_zero(const HpComplex &a) { return a.re == 0 && a.im == 0; }

// p(z) and p'(z) by Horner's rule, coefficients in ascending order.
void horner(std::span<const Real> c, const HpComplex &z, HpComplex &p, HpComplex &dp)
{
  p = {c.back(), Real(0)};
  dp = {Real(0), Real(0)};
  for (std::size_t j = c.size() - 1; j-- > 0;)
  {
    dp = dp * z + p;
    p = p * z + HpComplex{c[j], Real(0)};
  }
}

std::vector<Complex> companion_estimates(std::span<const Real> c)
{
  const auto n = static_cast<Eigen::Index>(c.size() - 1);
  RMatrix companion = RMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i)
  {
    companion(i, i - 1) = 1.0;
  }
  for (Eigen::Index j = 0; j < n; ++j)
  {
    const double a = static_cast<double>(c[static_cast<std::size_t>(j)] / c.back());
    if (!std::isfinite(a))
    {
      throw NumericalError("poly_roots: monic coefficient overflows double precision");
    }
    companion(j, n - 1) = -a;
  }
  balance_matrix(companion);
  Eigen::EigenSolver<RMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success)
  {
    throw NumericalError("poly_roots: companion eigenvalue iteration failed");
  }
  std::vector<Complex> est(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
  {
    est[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  }
  return est;
}

std::vector<Complex> roots_nonzero_constant(std::span<const Real> c)
{
  const std::size_t degree = c.size() - 1;
  const auto estimates = companion_estimates(c);

  std::vector<HpComplex> z(degree);
  for (std::size_t k = 0; k < degree; ++k)
  {
    Complex e = estimates[k];
    // Aberth needs pairwise distinct starting points.
    for (std::size_t j = 0; j < k; ++j)
    {
      if (std::abs(e - estimates[j]) <= 1e-12 * std::max(1.0, std::abs(e)))
      {
        e *= Complex(1.0 + 1e-7, 1e-7);
      }
    }
    z[k] = {Real(e.real()), Real(e.imag())};
  }

  // Stop once every root has a residual at the rounding level of the working
  // precision; the correction size itself stalls at kappa * eps for
  // ill-conditioned roots.
  const Real eps = std::numeric_limits<Real>::epsilon();
  const auto rounding_bound = [&](const HpComplex &r) {
    Real bound(0);
    Real power(1);
    const Real mag = norm(r);
    for (const auto &cj : c)
    {
      bound += boost::multiprecision::abs(cj) * power;
      power *= mag;
    }
    return eps * bound;
  };
  constexpr int kMaxIterations = 500;
  bool converged = false;
  for (int iter = 0; iter < kMaxIterations && !converged; ++iter)
  {
    converged = true;
    for (std::size_t k = 0; k < degree; ++k)
    {
      HpComplex p, dp;
      horner(c, z[k], p, dp);
      if (norm(p) > Real(100) * rounding_bound(z[k]))
      {
        converged = false;
      }
      if (is_zero(p))
      {
        continue;
      }
      HpComplex correction;
      if (is_zero(dp))
      {
        correction = {norm(z[k]) * Real(1e-3) + Real(1e-3), Real(1e-3)};
      }
      else
      {
        const HpComplex w = p / dp;
        HpComplex s;
        for (std::size_t j = 0; j < degree; ++j)
        {
          if (j != k)
          {
            s = s + HpComplex{Real(1), Real(0)} / (z[k] - z[j]);
          }
        }
        correction = w / (HpComplex{Real(1), Real(0)} - w * s);
      }
      z[k] = z[k] - correction;
    }
  }

  Real worst_ratio(0);
  for (const auto &r : z)
  {
    HpComplex p, dp;
    horner(c, r, p, dp);
    worst_ratio = std::max(worst_ratio, norm(p) / (Real(1000) * rounding_bound(r)));
  }
  if (!converged || worst_ratio > 1)
  {
    std::ostringstream msg;
    msg << "poly_roots: refinement did not converge (degree " << degree
        << ", worst residual / bound = " << static_cast<double>(worst_ratio) << ")";
    throw NumericalError(msg.str());
  }

  std::vector<Complex> roots;
  roots.reserve(degree);
  for (const auto &r : z)
  {
    roots.emplace_back(static_cast<double>(r.re), static_cast<double>(r.im));
  }
  return roots;
}

}  // namespace

void balance_matrix(RMatrix &a)
{
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done)
  {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i)
    {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
      {
        if (j != i)
        {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      }
      if (c == 0.0 || r == 0.0)
      {
        continue;
      }
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g)
      {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g)
      {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s)
      {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

std::vector<Complex> poly_roots(std::span<const HighPrecisionReal> coeffs)
{
  if (coeffs.size() < 2)
  {
    throw DomainError("poly_roots: polynomial degree must be at least 1");
  }
  if (coeffs.back() == 0)
  {
    throw DomainError("poly_roots: leading coefficient is zero");
  }
  std::size_t zeros = 0;
  while (coeffs[zeros] == 0)
  {
    ++zeros;
  }
  std::vector<Complex> roots(zeros, Complex(0.0, 0.0));
  if (zeros + 1 < coeffs.size())
  {
    const auto rest = roots_nonzero_constant(coeffs.subspan(zeros));
    roots.insert(roots.end(), rest.begin(), rest.end());
  }
  return roots;
}

std::vector<Complex> poly_roots(std::span<const double> coeffs)
{
  std::vector<HighPrecisionReal> c(coeffs.begin(), coeffs.end());
  return poly_roots(std::span<const HighPrecisionReal>(c));
}

}  // namespace cfem::numerics
