// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cfem/elastic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cfem/errors.hpp"
#include "cfem/numerics/block_tridiagonal.hpp"
#include "cfem/numerics/eigen_dense.hpp"

namespace cfem::elastic
{

namespace
{

void check_coefficients(const InPlaneCoefficients &c)
{
  const Eigen::Index n = c.Dxx.rows();
  if (n < 1 || c.Dxx.cols() != n || c.Dxz.rows() != n || c.Dxz.cols() != n || c.Dzz.rows() != n ||
      c.Dzz.cols() != n)
  {
    throw DomainError("InPlaneCoefficients: matrices must be square and of equal size");
  }
}

void validate(const ElasticProfile &p)
{
  if (!(p.height > 0.0) || p.nz < 1 || p.pieces.empty())
  {
    throw DomainError("ElasticProfile: need height > 0, nz >= 1 and at least one piece");
  }
  const double tol = 1e-12 * p.height;
  double z = 0.0;
  const Eigen::Index c = p.pieces.front().coefficients.Dxx.rows();
  for (const auto &piece : p.pieces)
  {
    check_coefficients(piece.coefficients);
    if (piece.coefficients.Dxx.rows() != c)
    {
      throw DomainError("ElasticProfile: pieces disagree on the component count");
    }
    if (std::abs(piece.z0 - z) > tol || !(piece.z1 > piece.z0))
    {
      throw DomainError("ElasticProfile: pieces must tile (0, H) in increasing order");
    }
    const double pos = piece.z1 / p.height * p.nz;
    if (std::abs(pos - std::round(pos)) > 1e-9)
    {
      throw DomainError("ElasticProfile: piece boundary does not fall on a z node");
    }
    z = piece.z1;
  }
  if (std::abs(z - p.height) > tol)
  {
    throw DomainError("ElasticProfile: pieces do not reach z = H");
  }
}

const ElasticPiece &piece_at(const ElasticProfile &p, double z)
{
  for (const auto &piece : p.pieces)
  {
    if (z >= piece.z0 && z <= piece.z1)
    {
      return piece;
    }
  }
  throw DomainError("ElasticProfile: no piece covers z = " + std::to_string(z));
}

void check_subdomains(const std::vector<ElasticSubdomain> &subdomains, const CVector &left_load, bool need_grid)
{
  if (subdomains.empty())
  {
    throw DomainError("at least one subdomain is required");
  }
  const Eigen::Index m = subdomains.front().ops.size();
  if (left_load.size() != m)
  {
    throw DomainError("load column size differs from the vertical dof count");
  }
  for (const auto &s : subdomains)
  {
    if (s.ops.size() != m)
    {
      throw DomainError("subdomains disagree on the vertical dof count");
    }
    if (!(s.x_length > 0.0))
    {
      throw DomainError("subdomain length must be positive");
    }
    if (need_grid && (s.grid.lengths.empty() || std::abs(s.grid.total_length - s.x_length) > 1e-12 * s.x_length))
    {
      throw DomainError("subdomain grid is empty or does not match x_length");
    }
  }
}

// General element with x mass pattern [[w_d, w_o], [w_o, w_d]] applied to D.
CMatrix layer_element(Complex length, const ElasticVerticalOperators &ops, Complex w_d, Complex w_o)
{
  const Eigen::Index m = ops.size();
  const CMatrix a = ops.A / length;
  const CMatrix bdiff = 0.5 * (ops.B1 - ops.B2);
  const CMatrix bsum = 0.5 * (ops.B1 + ops.B2);
  CMatrix k(2 * m, 2 * m);
  k.topLeftCorner(m, m) = a - bdiff - w_d * ops.D;
  k.topRightCorner(m, m) = -a - bsum - w_o * ops.D;
  k.bottomLeftCorner(m, m) = -a + bsum - w_o * ops.D;
  k.bottomRightCorner(m, m) = a + bdiff - w_d * ops.D;
  return k;
}

layered::InterfaceSolution collect(const CVector &u, Eigen::Index m, const std::vector<Eigen::Index> &columns,
                                   const std::vector<double> &xs)
{
  layered::InterfaceSolution out;
  for (std::size_t i = 0; i < columns.size(); ++i)
  {
    out.x.push_back(xs[i]);
    out.columns.push_back(u.segment(columns[i] * m, m));
  }
  return out;
}

}  // namespace

ElasticMaterial material_from_engineering(Complex shear_modulus, double nu, double rho)
{
  if (!(nu > -1.0 && nu < 0.5))
  {
    throw DomainError("material_from_engineering: Poisson ratio must lie in (-1, 0.5)");
  }
  return {2.0 * shear_modulus * nu / (1.0 - 2.0 * nu), shear_modulus, rho};
}

InPlaneCoefficients in_plane_coefficients(const ElasticMaterial &m)
{
  const Complex zero(0.0, 0.0);
  InPlaneCoefficients c;
  c.Dxx = CMatrix(2, 2);
  c.Dxx << m.d11(), zero, zero, m.d33();
  c.Dxz = CMatrix(2, 2);
  c.Dxz << zero, m.d12(), m.d33(), zero;
  c.Dzz = CMatrix(2, 2);
  c.Dzz << m.d33(), zero, zero, m.d22();
  return c;
}

InPlaneCoefficients anti_plane_coefficients(Complex shear_modulus)
{
  InPlaneCoefficients c;
  c.Dxx = CMatrix::Constant(1, 1, shear_modulus);
  c.Dxz = CMatrix::Zero(1, 1);
  c.Dzz = CMatrix::Constant(1, 1, shear_modulus);
  return c;
}

ElasticProfile ElasticProfile::uniform(double height, const InPlaneCoefficients &coefficients, double rho, int nz)
{
  ElasticProfile p;
  p.height = height;
  p.nz = nz;
  p.pieces.push_back({0.0, height, coefficients, rho});
  validate(p);
  return p;
}

ElasticVerticalOperators semidiscretize_z_elastic(const ElasticProfile &profile, double omega)
{
  validate(profile);
  const int nz = profile.nz;
  const Eigen::Index c = profile.pieces.front().coefficients.Dxx.rows();
  const Eigen::Index nfull = (nz + 1) * c;
  const double h = profile.height / nz;

  CMatrix a = CMatrix::Zero(nfull, nfull);
  CMatrix b1 = CMatrix::Zero(nfull, nfull);
  CMatrix dk = CMatrix::Zero(nfull, nfull);
  CMatrix mass = CMatrix::Zero(nfull, nfull);
  // Linear element integrals: int N_p N_q, int N_p N'_q, int N'_p N'_q.
  const double nn[2][2] = {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}};
  const double nd[2][2] = {{-0.5, 0.5}, {-0.5, 0.5}};
  const double dd[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
  const CMatrix eye = CMatrix::Identity(c, c);
  for (int e = 0; e < nz; ++e)
  {
    const ElasticPiece &piece = piece_at(profile, (e + 0.5) * h);
    const InPlaneCoefficients &co = piece.coefficients;
    for (int p = 0; p < 2; ++p)
    {
      for (int q = 0; q < 2; ++q)
      {
        const Eigen::Index r0 = (e + p) * c;
        const Eigen::Index c0 = (e + q) * c;
        a.block(r0, c0, c, c) += nn[p][q] * co.Dxx;
        b1.block(r0, c0, c, c) += nd[p][q] * co.Dxz;
        dk.block(r0, c0, c, c) -= dd[p][q] * co.Dzz;
        mass.block(r0, c0, c, c) += (piece.rho * nn[p][q]) * eye;
      }
    }
  }
  const Eigen::Index nf = nz * c;
  ElasticVerticalOperators ops;
  ops.A = a.bottomRightCorner(nf, nf);
  ops.B1 = b1.bottomRightCorner(nf, nf);
  ops.B2 = -ops.B1.transpose();
  ops.D = dk.bottomRightCorner(nf, nf) + (omega * omega) * mass.bottomRightCorner(nf, nf);
  ops.omega = omega;
  ops.components = static_cast<int>(c);
  return ops;
}

ElasticVerticalOperators from_scalar(const layered::VerticalOperators &ops, double omega)
{
  ElasticVerticalOperators out;
  out.A = ops.Gz;
  out.B1 = CMatrix::Zero(ops.size(), ops.size());
  out.B2 = out.B1;
  out.D = -(ops.Rz - (omega * omega) * ops.Mz.cast<Complex>());
  out.omega = omega;
  out.components = 1;
  return out;
}

std::vector<PlaneWaveMode> dispersion_modes(const ElasticVerticalOperators &ops)
{
  const numerics::EigenPairs pairs =
      numerics::quadratic_eig_dense(-ops.A, kI * (ops.B1 + ops.B2), ops.D);
  std::vector<PlaneWaveMode> modes;
  for (Eigen::Index j = 0; j < pairs.values.size(); ++j)
  {
    const Complex kx = pairs.values(j);
    if (std::isfinite(kx.real()) && std::isfinite(kx.imag()))
    {
      modes.push_back({kx, pairs.vectors.col(j)});
    }
  }
  if (modes.size() != static_cast<std::size_t>(pairs.values.size()))
  {
    throw NumericalError("dispersion_modes: non-finite eigenvalue (defective pencil)");
  }
  return modes;
}

double dispersion_residual(const ElasticVerticalOperators &ops, const PlaneWaveMode &mode)
{
  const Complex k = mode.kx;
  return ((-k * k) * (ops.A * mode.phi) + (kI * k) * ((ops.B1 + ops.B2) * mode.phi) + ops.D * mode.phi).norm();
}

CMatrix element_stiffness_elastic(Complex length, const ElasticVerticalOperators &ops)
{
  if (length == Complex(0.0, 0.0))
  {
    throw DomainError("element_stiffness_elastic: zero element length");
  }
  return layer_element(length, ops, length / 4.0, length / 4.0);
}

CMatrix element_stiffness_regular(double length, const ElasticVerticalOperators &ops)
{
  if (!(length > 0.0))
  {
    throw DomainError("element_stiffness_regular: length must be positive");
  }
  return layer_element(Complex(length, 0.0), ops, length / 3.0, length / 6.0);
}

CMatrix halfspace_stiffness(const PlaneWaveMode &mode, const ElasticVerticalOperators &ops)
{
  return -((kI * mode.kx) * ops.A + ops.B1);
}

Complex propagation_factor(Complex length, Complex kx)
{
  const Complex half = kI * kx * length / 2.0;
  const Complex den = 1.0 - half;
  if (std::abs(den) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(half)))
  {
    throw SingularityError("propagation_factor: 1 - i kx L / 2 = 0");
  }
  return (1.0 + half) / den;
}

FixedPointReport fixed_point_report(Complex length, const ElasticVerticalOperators &ops, const PlaneWaveMode &mode)
{
  const Eigen::Index m = ops.size();
  const CMatrix k = element_stiffness_elastic(length, ops);
  const CMatrix khs = halfspace_stiffness(mode, ops);
  FixedPointReport r;
  r.propagation = propagation_factor(length, mode.kx);
  const CVector u0 = mode.phi;
  const CVector ul = r.propagation * mode.phi;

  CVector top = k.topLeftCorner(m, m) * u0 + k.topRightCorner(m, m) * ul;        // F_0
  CVector bottom = k.bottomLeftCorner(m, m) * u0 + k.bottomRightCorner(m, m) * ul;  // -F_L
  const CVector hs0 = khs * u0;
  CVector res(2 * m);
  res.head(m) = top - hs0;
  res.tail(m) = bottom + khs * ul;
  r.residual = res.norm();
  r.scale = ops.D.norm() * mode.phi.norm();

  const CVector fl = -bottom;
  const double f0n = top.norm();
  r.traction_mismatch = f0n > 0.0 ? (fl - r.propagation * top).norm() / f0n : fl.norm();
  const double hsn = hs0.norm();
  r.halfspace_mismatch = hsn > 0.0 ? (top - hs0).norm() / hsn : top.norm();
  return r;
}

double fixed_point_residual(Complex length, const ElasticVerticalOperators &ops, const PlaneWaveMode &mode)
{
  return fixed_point_report(length, ops, mode).residual;
}

CVector horizontal_traction_load(const ElasticProfile &profile, const std::function<double(double)> &f)
{
  validate(profile);
  const Eigen::Index c = profile.pieces.front().coefficients.Dxx.rows();
  const layered::LayerProfile scalar = layered::LayerProfile::uniform(profile.height, 1.0, 1.0, profile.nz);
  const CVector s = layered::neumann_load_left(scalar, f);
  CVector load = CVector::Zero(s.size() * c);
  for (Eigen::Index i = 0; i < s.size(); ++i)
  {
    load(i * c) = s(i);
  }
  return load;
}

layered::InterfaceSolution solve_elastic_multidomain(const std::vector<ElasticSubdomain> &subdomains,
                                                     const CVector &left_load)
{
  check_subdomains(subdomains, left_load, true);
  const Eigen::Index m = left_load.size();
  std::size_t total = 0;
  for (const auto &s : subdomains)
  {
    total += s.grid.lengths.size();
  }
  numerics::BlockTridiagonalMatrix a(static_cast<Eigen::Index>(total + 1), m);
  std::vector<Eigen::Index> columns{0};
  std::vector<double> xs{0.0};
  Eigen::Index col = 0;
  for (const auto &s : subdomains)
  {
    for (const auto &l : s.grid.lengths)
    {
      a.add_element(col++, element_stiffness_elastic(l, s.ops));
    }
    columns.push_back(col);
    xs.push_back(xs.back() + s.x_length);
  }
  CVector rhs = CVector::Zero(a.size());
  rhs.head(m) = left_load;
  return collect(numerics::block_tridiag_solve(a, rhs), m, columns, xs);
}

layered::InterfaceSolution regular_fem_elastic(const std::vector<ElasticSubdomain> &subdomains, int nx,
                                               const CVector &left_load)
{
  check_subdomains(subdomains, left_load, false);
  if (nx < 1)
  {
    throw DomainError("regular_fem_elastic: nx must be positive");
  }
  const Eigen::Index m = left_load.size();
  const auto nb = static_cast<Eigen::Index>(subdomains.size() + 1);
  numerics::BlockTridiagonalMatrix a(nb, m);
  std::vector<Eigen::Index> columns;
  std::vector<double> xs{0.0};
  for (Eigen::Index i = 0; i + 1 < nb; ++i)
  {
    const auto &s = subdomains[static_cast<std::size_t>(i)];
    const numerics::TwoPort p = numerics::cascade_power(
        numerics::two_port_from_element(element_stiffness_regular(s.x_length / nx, s.ops)),
        static_cast<std::size_t>(nx));
    a.diag(i) += p.left;
    a.diag(i + 1) += p.right;
    a.sub(i) += p.coupling;
    xs.push_back(xs.back() + s.x_length);
  }
  for (Eigen::Index i = 0; i < nb; ++i)
  {
    columns.push_back(i);
  }
  CVector rhs = CVector::Zero(a.size());
  rhs.head(m) = left_load;
  return collect(numerics::block_tridiag_solve(a, rhs), m, columns, xs);
}

}  // namespace cfem::elastic
