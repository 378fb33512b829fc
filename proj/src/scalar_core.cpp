// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cfem/scalar_core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cfem/errors.hpp"
#include "cfem/numerics/block_tridiagonal.hpp"
#include "cfem/numerics/eigen_dense.hpp"

namespace cfem::scalar
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_real(Complex z) { return z.imag() == 0.0; }

Complex pole_checked_ratio(Complex half, const char *what)
{
  const Complex den = 1.0 - half;
  if (std::abs(den) <= 4.0 * kEps * (1.0 + std::abs(half)))
  {
    throw SingularityError(what);
  }
  return (1.0 + half) / den;
}

}  // namespace

Complex principal_sqrt(Complex lambda)
{
  if (is_real(lambda))
  {
    return lambda.real() >= 0.0 ? Complex(std::sqrt(lambda.real()), 0.0)
                                : Complex(0.0, std::sqrt(-lambda.real()));
  }
  return std::sqrt(lambda);
}

SpectralParameter SpectralParameter::from_lambda(Complex lambda) { return {lambda, principal_sqrt(lambda)}; }

SpectralParameter SpectralParameter::from_frequency(double omega)
{
  return from_lambda(Complex(-omega * omega, 0.0));
}

ElementDtN element_dtn(Complex length, Complex lambda)
{
  if (length == Complex(0.0, 0.0))
  {
    throw DomainError("element_dtn: zero element length");
  }
  const Complex inv = 1.0 / length;
  const Complex mass = lambda * length / 4.0;
  return {inv + mass, -inv + mass, length, lambda};
}

Complex element_propagator(Complex length, Complex k)
{
  return pole_checked_ratio(k * length / 2.0, "element_propagator: kL = 2 is a pole");
}

Eigen::Matrix2cd element_propagator_matrix(Complex length, Complex k)
{
  // Crank-Nicolson on u' = k vbar, vbar' = k u:
  // P = (I - aJ)^{-1} (I + aJ) = ((1 + a^2) I + 2 a J) / (1 - a^2), a = kL/2.
  const Complex a = k * length / 2.0;
  const Complex den = 1.0 - a * a;
  if (std::abs(den) <= 4.0 * kEps * (1.0 + std::abs(a * a)))
  {
    throw SingularityError("element_propagator_matrix: kL = +-2 is a pole");
  }
  Eigen::Matrix2cd p;
  p << (1.0 + a * a) / den, 2.0 * a / den, 2.0 * a / den, (1.0 + a * a) / den;
  return p;
}

DtNMap2 dtn_from_propagator(const Eigen::Matrix2cd &propagator, Complex k)
{
  // u_L = p11 u_0 + p12 vbar_0 and det P = 1 give
  // [-v_0; v_L] = (k / p12) [[p11, -1], [-1, p22]] [u_0; u_L].
  const Complex p12 = propagator(0, 1);
  if (k == Complex(0.0, 0.0) || p12 == Complex(0.0, 0.0))
  {
    throw DomainError("dtn_from_propagator: degenerate propagator (k = 0 or p12 = 0)");
  }
  const Complex s = k / p12;
  return {s * propagator(0, 0), -s, s * propagator(1, 1)};
}

Complex mesh_propagator(const pade::PadeGrid &grid, Complex k)
{
  Complex p(1.0, 0.0);
  for (std::size_t j = 0; j < grid.lengths.size(); ++j)
  {
    const Complex half = k * grid.lengths[j] / 2.0;
    const Complex den = 1.0 - half;
    if (std::abs(den) <= 4.0 * kEps * (1.0 + std::abs(half)))
    {
      throw SingularityError("mesh_propagator: element " + std::to_string(j) + " sits on the pole kL = 2");
    }
    p *= (1.0 + half) / den;
  }
  return p;
}

DtNMap2 exact_dtn(Complex lambda, double length)
{
  if (!(length > 0.0))
  {
    throw DomainError("exact_dtn: length must be positive");
  }
  const Complex k = principal_sqrt(lambda);
  const Complex x = k * length;
  const char *resonance = "exact_dtn: sinh(sqrt(lambda) L) = 0 (Dirichlet resonance)";
  if (std::abs(x) < 1e-3)
  {
    // x coth x and x / sinh x by their Taylor series.
    const Complex x2 = x * x;
    const Complex d = 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    const Complex o = 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
    return {d / length, -o / length, d / length};
  }
  if (is_real(lambda))
  {
    if (lambda.real() > 0.0)
    {
      const double kr = k.real();
      const double xr = kr * length;
      // Written with e^{-2x} to stay finite for large x.
      const double q = std::exp(-2.0 * xr);
      const double kd = kr * (1.0 + q) / (1.0 - q);
      const double ko = -2.0 * kr * std::exp(-xr) / (1.0 - q);
      return {kd, ko, kd};
    }
    const double w = k.imag();
    const double s = std::sin(w * length);
    if (std::abs(s) <= 4.0 * kEps * (1.0 + std::abs(w * length)))
    {
      throw SingularityError(resonance);
    }
    const double kd = w * std::cos(w * length) / s;
    return {kd, -w / s, kd};
  }
  // Re k >= 0 keeps |e^{-2x}| <= 1.
  const Complex q = std::exp(-2.0 * x);
  const Complex den = 1.0 - q;
  if (std::abs(den) <= 4.0 * kEps * (1.0 + std::abs(x)))
  {
    throw SingularityError(resonance);
  }
  const Complex kd = k * (1.0 + q) / den;
  return {kd, -2.0 * k * std::exp(-x) / den, kd};
}

Complex exact_propagator(Complex k, double length) { return std::exp(k * length); }

AssembledSystem1D assemble_1d(const pade::PadeGrid &grid, Complex lambda)
{
  if (grid.lengths.empty())
  {
    throw DomainError("assemble_1d: empty grid");
  }
  const std::size_t n = grid.lengths.size();
  AssembledSystem1D sys;
  sys.grid = grid;
  sys.lambda = lambda;
  sys.diag.assign(n + 1, Complex(0.0, 0.0));
  sys.offdiag.assign(n, Complex(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j)
  {
    const ElementDtN e = element_dtn(grid.lengths[j], lambda);
    sys.diag[j] += e.k_diag;
    sys.diag[j + 1] += e.k_diag;
    sys.offdiag[j] = e.k_off;
  }
  return sys;
}

DtNMap2 condense_dtn(const pade::PadeGrid &grid, Complex lambda)
{
  if (grid.lengths.empty())
  {
    throw DomainError("condense_dtn: empty grid");
  }
  // Left-to-right elimination of each shared node:
  // running map [[a, b], [b, c]] merged with element [[d, e], [e, d]].
  const ElementDtN first = element_dtn(grid.lengths[0], lambda);
  Complex a = first.k_diag;
  Complex b = first.k_off;
  Complex c = first.k_diag;
  for (std::size_t j = 1; j < grid.lengths.size(); ++j)
  {
    const ElementDtN e = element_dtn(grid.lengths[j], lambda);
    const Complex pivot = c + e.k_diag;
    if (std::abs(pivot) <= 16.0 * kEps * (std::abs(c) + std::abs(e.k_diag)))
    {
      throw SingularityError("condense_dtn: singular interior pivot at node " + std::to_string(j));
    }
    const Complex nb = -b * e.k_off / pivot;
    a -= b * b / pivot;
    c = e.k_diag - e.k_off * e.k_off / pivot;
    b = nb;
  }
  return {a, b, c};
}

TwoPointSolution solve_two_point(const pade::PadeGrid &grid, Complex lambda, Complex left_neumann,
                                 Complex right_dirichlet)
{
  const AssembledSystem1D sys = assemble_1d(grid, lambda);
  const std::size_t n = grid.lengths.size();
  // Unknowns are nodes 0 .. n-1; node n is eliminated.
  numerics::BlockTridiagonalMatrix mat(static_cast<Eigen::Index>(n), 1);
  CVector rhs = CVector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
  {
    mat.diag(static_cast<Eigen::Index>(i))(0, 0) = sys.diag[i];
    if (i + 1 < n)
    {
      mat.sub(static_cast<Eigen::Index>(i))(0, 0) = sys.offdiag[i];
    }
  }
  rhs(0) += left_neumann;
  rhs(static_cast<Eigen::Index>(n - 1)) -= sys.offdiag[n - 1] * right_dirichlet;

  const CVector u = numerics::block_tridiag_solve(mat, rhs);
  TwoPointSolution out;
  out.u0 = u(0);
  out.uL = right_dirichlet;
  for (std::size_t i = 1; i < n; ++i)
  {
    out.interior.push_back(u(static_cast<Eigen::Index>(i)));
  }
  return out;
}

double relative_error(Complex exact, Complex approx)
{
  const double den = std::abs(exact) + std::abs(approx);
  if (den == 0.0)
  {
    return 0.0;
  }
  return std::abs(exact - approx) / den;
}

double halfspace_fixed_point_check(const ElementDtN &element)
{
  const Complex khs = principal_sqrt(element.lambda);
  if (!(khs.real() > 0.0))
  {
    throw DomainError("halfspace_fixed_point_check: requires Re sqrt(lambda) > 0");
  }
  return std::abs(khs - (element.k_diag - element.k_off * element.k_off / (element.k_diag + khs)));
}

CVector generalized_spectrum(const pade::PadeGrid &grid)
{
  const auto n = static_cast<Eigen::Index>(grid.lengths.size());
  if (n < 1)
  {
    throw DomainError("generalized_spectrum: empty grid");
  }
  CMatrix k = CMatrix::Zero(n + 1, n + 1);
  CMatrix m = CMatrix::Zero(n + 1, n + 1);
  for (Eigen::Index j = 0; j < n; ++j)
  {
    const Complex l = grid.lengths[static_cast<std::size_t>(j)];
    k.block(j, j, 2, 2) += (1.0 / l) * (Eigen::Matrix2cd() << 1.0, -1.0, -1.0, 1.0).finished();
    m.block(j, j, 2, 2) += (l / 4.0) * Eigen::Matrix2cd::Ones();
  }
  if (n == 1)
  {
    return CVector(0);
  }
  return numerics::generalized_eig_dense(k.block(1, 1, n - 1, n - 1), m.block(1, 1, n - 1, n - 1));
}

bool propagator_magnitude_lemma_check(const pade::PadeGrid &grid, Complex k)
{
  if (k.real() == 0.0)
  {
    throw DomainError("propagator_magnitude_lemma_check: Re k = 0 is excluded");
  }
  const double mag = std::abs(mesh_propagator(grid, k));
  return k.real() > 0.0 ? mag > 1.0 : mag < 1.0;
}

}  // namespace cfem::scalar
