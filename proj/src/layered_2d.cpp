// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cfem/layered_2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "cfem/errors.hpp"
#include "cfem/numerics/eigen_dense.hpp"
#include "cfem/scalar_core.hpp"

namespace cfem::layered
{

namespace
{

// 4-point Gauss-Legendre on (-1, 1).
constexpr std::array<double, 4> kGaussX = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                           0.8611363115940526};
constexpr std::array<double, 4> kGaussW = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                           0.3478548451374538};

const LayerPiece &piece_at(const LayerProfile &profile, double z)
{
  for (const auto &p : profile.pieces)
  {
    if (z >= p.z0 && z <= p.z1)
    {
      return p;
    }
  }
  throw DomainError("LayerProfile: no piece covers z = " + std::to_string(z));
}

CMatrix x_stiffness_pattern()
{
  CMatrix k(2, 2);
  k << 1.0, -1.0, -1.0, 1.0;
  return k;
}

// (1/L) Kx (x) s Gz + Mx(L) (x) (s Rz - omega^2 Mz)
CMatrix tensor_element(const VerticalOperators &ops, Complex scale, double omega, Complex length,
                       const CMatrix &x_mass)
{
  const Eigen::Index m = ops.size();
  const CMatrix g = scale * ops.Gz;
  const CMatrix r = scale * ops.Rz - (omega * omega) * ops.Mz.cast<Complex>();
  const CMatrix kx = x_stiffness_pattern() / length;
  CMatrix e(2 * m, 2 * m);
  for (Eigen::Index a = 0; a < 2; ++a)
  {
    for (Eigen::Index b = 0; b < 2; ++b)
    {
      e.block(a * m, b * m, m, m) = kx(a, b) * g + x_mass(a, b) * r;
    }
  }
  return e;
}

void check_subdomains(const std::vector<SubdomainSpec> &subdomains, bool need_grid)
{
  if (subdomains.empty())
  {
    throw DomainError("at least one subdomain is required");
  }
  for (const auto &s : subdomains)
  {
    if (!(s.x_length > 0.0))
    {
      throw DomainError("subdomain length must be positive");
    }
    if (need_grid)
    {
      if (s.grid.lengths.empty())
      {
        throw DomainError("subdomain grid is empty");
      }
      if (std::abs(s.grid.total_length - s.x_length) > 1e-12 * s.x_length)
      {
        throw DomainError("subdomain grid length differs from x_length");
      }
    }
  }
}

void check_load(const VerticalOperators &ops, const CVector &left_load)
{
  if (left_load.size() != ops.size())
  {
    throw DomainError("load column size differs from the vertical dof count");
  }
}

// Interface system from per-subdomain two-ports, load on column 0.
InterfaceSolution solve_two_ports(const std::vector<numerics::TwoPort> &ports,
                                  const std::vector<SubdomainSpec> &subdomains, const CVector &left_load)
{
  const Eigen::Index m = left_load.size();
  const auto nb = static_cast<Eigen::Index>(ports.size() + 1);
  numerics::BlockTridiagonalMatrix a(nb, m);
  for (Eigen::Index i = 0; i + 1 < nb; ++i)
  {
    const auto &p = ports[static_cast<std::size_t>(i)];
    a.diag(i) += p.left;
    a.diag(i + 1) += p.right;
    a.sub(i) += p.coupling;
  }
  CVector rhs = CVector::Zero(a.size());
  rhs.head(m) = left_load;
  const CVector u = numerics::block_tridiag_solve(a, rhs);

  InterfaceSolution out;
  double x = 0.0;
  for (Eigen::Index i = 0; i < nb; ++i)
  {
    out.x.push_back(x);
    out.columns.push_back(u.segment(i * m, m));
    if (i + 1 < nb)
    {
      x += subdomains[static_cast<std::size_t>(i)].x_length;
    }
  }
  return out;
}

}  // namespace

LayerProfile LayerProfile::uniform(double height, Complex modulus, double density, int nz)
{
  LayerProfile p;
  p.height = height;
  p.nz = nz;
  p.pieces.push_back({0.0, height, modulus, density});
  p.validate();
  return p;
}

void LayerProfile::validate() const
{
  if (!(height > 0.0) || nz < 1 || pieces.empty())
  {
    throw DomainError("LayerProfile: need height > 0, nz >= 1 and at least one piece");
  }
  const double tol = 1e-12 * height;
  double z = 0.0;
  for (const auto &p : pieces)
  {
    if (std::abs(p.z0 - z) > tol || !(p.z1 > p.z0))
    {
      throw DomainError("LayerProfile: pieces must tile (0, H) in increasing order");
    }
    if (p.density < 0.0)
    {
      throw DomainError("LayerProfile: density must be nonnegative");
    }
    const double pos = p.z1 / height * nz;
    if (std::abs(pos - std::round(pos)) > 1e-9)
    {
      throw DomainError("LayerProfile: piece boundary does not fall on a z node");
    }
    z = p.z1;
  }
  if (std::abs(z - height) > tol)
  {
    throw DomainError("LayerProfile: pieces do not reach z = H");
  }
}

CVector InterfaceSolution::stacked() const
{
  Eigen::Index total = 0;
  for (const auto &c : columns)
  {
    total += c.size();
  }
  CVector s(total);
  Eigen::Index at = 0;
  for (const auto &c : columns)
  {
    s.segment(at, c.size()) = c;
    at += c.size();
  }
  return s;
}

VerticalOperators semidiscretize_z(const LayerProfile &profile)
{
  profile.validate();
  const int nz = profile.nz;
  const double h = profile.height / nz;
  // Full (nz+1) matrices, then drop node 0.
  CMatrix r = CMatrix::Zero(nz + 1, nz + 1);
  CMatrix g = CMatrix::Zero(nz + 1, nz + 1);
  RMatrix mm = RMatrix::Zero(nz + 1, nz + 1);
  for (int e = 0; e < nz; ++e)
  {
    const LayerPiece &p = piece_at(profile, (e + 0.5) * h);
    const Complex gm = p.modulus;
    r(e, e) += gm / h;
    r(e + 1, e + 1) += gm / h;
    r(e, e + 1) -= gm / h;
    r(e + 1, e) -= gm / h;
    g(e, e) += gm * h / 3.0;
    g(e + 1, e + 1) += gm * h / 3.0;
    g(e, e + 1) += gm * h / 6.0;
    g(e + 1, e) += gm * h / 6.0;
    mm(e, e) += p.density * h / 3.0;
    mm(e + 1, e + 1) += p.density * h / 3.0;
    mm(e, e + 1) += p.density * h / 6.0;
    mm(e + 1, e) += p.density * h / 6.0;
  }
  VerticalOperators ops;
  ops.Rz = r.bottomRightCorner(nz, nz);
  ops.Gz = g.bottomRightCorner(nz, nz);
  ops.Mz = mm.bottomRightCorner(nz, nz);
  for (int i = 1; i <= nz; ++i)
  {
    ops.z.push_back(i * h);
  }
  return ops;
}

CVector modal_lambdas(const VerticalOperators &ops, double omega)
{
  const CMatrix a = ops.Rz - (omega * omega) * ops.Mz.cast<Complex>();
  CVector l = numerics::generalized_eig_dense(a, ops.Gz);
  std::sort(l.data(), l.data() + l.size(), [](const Complex &x, const Complex &y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  return l;
}

std::vector<SubdomainSpec> make_subdomains(const std::vector<double> &lengths, const std::vector<Complex> &scales,
                                           int n, pade::Ordering ordering)
{
  if (lengths.size() != scales.size())
  {
    throw DomainError("make_subdomains: lengths and scales differ in size");
  }
  std::vector<SubdomainSpec> out;
  for (std::size_t i = 0; i < lengths.size(); ++i)
  {
    pade::PadeGrid grid = pade::element_lengths(n, lengths[i]);
    if (ordering == pade::Ordering::conjugate_interleaved)
    {
      grid = pade::reorder_conjugate_interleave(std::move(grid));
    }
    out.push_back({lengths[i], scales[i], std::move(grid)});
  }
  return out;
}

Assembled2D assemble_2d(const VerticalOperators &ops, const std::vector<SubdomainSpec> &subdomains, double omega)
{
  check_subdomains(subdomains, true);
  std::size_t total = 0;
  for (const auto &s : subdomains)
  {
    total += s.grid.lengths.size();
  }
  const Eigen::Index m = ops.size();
  Assembled2D sys;
  sys.matrix = numerics::BlockTridiagonalMatrix(static_cast<Eigen::Index>(total + 1), m);
  sys.x_nodes.push_back(Complex(0.0, 0.0));
  sys.interface_nodes.push_back(0);

  const CMatrix midpoint_mass = CMatrix::Constant(2, 2, Complex(0.25, 0.0));
  Eigen::Index col = 0;
  double x0 = 0.0;
  for (const auto &s : subdomains)
  {
    Complex x(x0, 0.0);
    for (const auto &l : s.grid.lengths)
    {
      sys.matrix.add_element(col, tensor_element(ops, s.modulus_scale, omega, l, l * midpoint_mass));
      x += l;
      sys.x_nodes.push_back(x);
      ++col;
    }
    x0 += s.x_length;
    // The end column sits on the real axis up to the root-sum defect.
    sys.x_nodes.back() = Complex(x0, sys.x_nodes.back().imag());
    sys.interface_nodes.push_back(col);
  }
  return sys;
}

Assembled2D assemble_2d(const LayerProfile &profile, const std::vector<SubdomainSpec> &subdomains, double omega)
{
  return assemble_2d(semidiscretize_z(profile), subdomains, omega);
}

double bump_excitation(double y)
{
  if (!(y > 0.0 && y < 1.0))
  {
    return 0.0;
  }
  return std::exp(16.0 + 4.0 / (y * (y - 1.0)));
}

CVector neumann_load_left(const LayerProfile &profile, const std::function<double(double)> &f)
{
  profile.validate();
  const int nz = profile.nz;
  const double h = profile.height / nz;
  CVector full = CVector::Zero(nz + 1);
  for (int e = 0; e < nz; ++e)
  {
    const double za = e * h;
    for (std::size_t q = 0; q < kGaussX.size(); ++q)
    {
      const double t = 0.5 * (kGaussX[q] + 1.0);
      const double w = 0.5 * h * kGaussW[q] * f(za + t * h);
      full(e) += w * (1.0 - t);
      full(e + 1) += w * t;
    }
  }
  return full.tail(nz);
}

CVector left_load_vector(const Assembled2D &system, const CVector &column)
{
  const Eigen::Index m = system.matrix.block_size();
  if (column.size() != m)
  {
    throw DomainError("left_load_vector: column size differs from block size");
  }
  CVector b = CVector::Zero(system.matrix.size());
  b.head(m) = column;
  return b;
}

CVector solve_2d(const Assembled2D &system, const CVector &load)
{
  if (load.size() != system.matrix.size())
  {
    throw DomainError("solve_2d: load size differs from system size");
  }
  return numerics::block_tridiag_solve(system.matrix, load);
}

InterfaceSolution extract_interfaces(const Assembled2D &system, const CVector &u)
{
  const Eigen::Index m = system.matrix.block_size();
  InterfaceSolution out;
  for (const auto node : system.interface_nodes)
  {
    out.x.push_back(system.x_nodes[static_cast<std::size_t>(node)].real());
    out.columns.push_back(u.segment(node * m, m));
  }
  return out;
}

InterfaceSolution solve_cfem(const VerticalOperators &ops, const std::vector<SubdomainSpec> &subdomains,
                             double omega, const CVector &left_load)
{
  check_load(ops, left_load);
  const Assembled2D sys = assemble_2d(ops, subdomains, omega);
  return extract_interfaces(sys, solve_2d(sys, left_load_vector(sys, left_load)));
}

double interface_error(const CVector &u, const CVector &u_ref)
{
  if (u.size() != u_ref.size())
  {
    throw DomainError("interface_error: size mismatch");
  }
  const double nref = u_ref.norm();
  if (nref == 0.0)
  {
    throw DomainError("interface_error: zero reference");
  }
  return (u - u_ref).norm() / nref;
}

InterfaceSolution regular_fem_baseline(const VerticalOperators &ops, const std::vector<SubdomainSpec> &subdomains,
                                       double omega, int nx, const CVector &left_load)
{
  check_subdomains(subdomains, false);
  check_load(ops, left_load);
  if (nx < 1)
  {
    throw DomainError("regular_fem_baseline: nx must be positive");
  }
  CMatrix consistent(2, 2);
  consistent << 2.0, 1.0, 1.0, 2.0;
  std::vector<numerics::TwoPort> ports;
  for (const auto &s : subdomains)
  {
    const double h = s.x_length / nx;
    const CMatrix e = tensor_element(ops, s.modulus_scale, omega, Complex(h, 0.0), consistent * (h / 6.0));
    ports.push_back(numerics::cascade_power(numerics::two_port_from_element(e), static_cast<std::size_t>(nx)));
  }
  return solve_two_ports(ports, subdomains, left_load);
}

numerics::TwoPort exact_subdomain_two_port(const VerticalOperators &ops, Complex modulus_scale, double omega,
                                           double length)
{
  const CMatrix b = modulus_scale * ops.Gz;
  const CMatrix a = modulus_scale * ops.Rz - (omega * omega) * ops.Mz.cast<Complex>();
  const numerics::EigenPairs pairs = numerics::generalized_eig_dense_pairs(a, b);
  const CMatrix &v = pairs.vectors;
  Eigen::PartialPivLU<CMatrix> lu(v);
  const CMatrix vinv = lu.inverse();
  const Eigen::Index m = v.rows();
  CVector kd(m);
  CVector ko(m);
  for (Eigen::Index i = 0; i < m; ++i)
  {
    const scalar::DtNMap2 d = scalar::exact_dtn(pairs.values(i), length);
    kd(i) = d.k_diag;
    ko(i) = d.k_off;
  }
  // Flux -b W' in modal coordinates: F = b V diag(.) V^{-1} W.
  const CMatrix bv = b * v;
  numerics::TwoPort p;
  p.left = bv * kd.asDiagonal() * vinv;
  p.left = 0.5 * (p.left + p.left.transpose()).eval();
  p.right = p.left;
  p.coupling = bv * ko.asDiagonal() * vinv;
  p.coupling = 0.5 * (p.coupling + p.coupling.transpose()).eval();
  return p;
}

InterfaceSolution modal_reference(const VerticalOperators &ops, const std::vector<SubdomainSpec> &subdomains,
                                  double omega, const CVector &left_load)
{
  check_subdomains(subdomains, false);
  check_load(ops, left_load);
  std::vector<numerics::TwoPort> ports;
  for (const auto &s : subdomains)
  {
    ports.push_back(exact_subdomain_two_port(ops, s.modulus_scale, omega, s.x_length));
  }
  return solve_two_ports(ports, subdomains, left_load);
}

}  // namespace cfem::layered
