// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "cfem/numerics/block_tridiagonal.hpp"
#include "cfem/numerics/condensation.hpp"
#include "cfem/pade_grid.hpp"
#include "cfem/types.hpp"

/// Scalar anti-plane layer -d/dz(G dw/dz) - d/dx(G dw/dx) - rho omega^2 w = 0
/// on (0, X) x (0, H), w = 0 at z = 0, natural conditions elsewhere. Linear
/// elements in z, CFEM (or regular FEM) in x.
namespace cfem::layered
{

struct LayerPiece
{
  double z0 = 0.0;
  double z1 = 0.0;
  Complex modulus{1.0, 0.0};  // G
  double density = 1.0;       // rho
};

struct LayerProfile
{
  double height = 1.0;
  std::vector<LayerPiece> pieces;
  int nz = 1;

  static LayerProfile uniform(double height, Complex modulus, double density, int nz);

  // Throws DomainError unless pieces tile (0, H) and align with the z mesh.
  void validate() const;
};

/// Vertical matrices with the z = 0 dof removed; row i is node z_{i+1}.
struct VerticalOperators
{
  CMatrix Rz;  // int N'^T G N'
  CMatrix Gz;  // int N^T G N
  RMatrix Mz;  // int N^T rho N
  std::vector<double> z;  // free node coordinates

  Eigen::Index size() const { return Gz.rows(); }
};

struct SubdomainSpec
{
  double x_length = 0.0;
  Complex modulus_scale{1.0, 0.0};
  pade::PadeGrid grid;  // ignored by the regular-FEM path
};

/// Block-tridiagonal system; block i is node column i, vertical index fastest.
struct Assembled2D
{
  numerics::BlockTridiagonalMatrix matrix{1, 1};
  std::vector<Complex> x_nodes;
  std::vector<Eigen::Index> interface_nodes;  // subdomain end columns
};

/// Field values on the real-coordinate interface columns.
struct InterfaceSolution
{
  std::vector<double> x;
  std::vector<CVector> columns;

  CVector stacked() const;
};

VerticalOperators semidiscretize_z(const LayerProfile &profile);

// lambda with (Rz - omega^2 Mz) v = lambda Gz v, sorted by real part.
CVector modal_lambdas(const VerticalOperators &ops, double omega);

// Same-length grids per subdomain from element_lengths(n, x_length).
std::vector<SubdomainSpec> make_subdomains(const std::vector<double> &lengths,
                                           const std::vector<Complex> &scales, int n,
                                           pade::Ordering ordering = pade::Ordering::phase_monotone);

Assembled2D assemble_2d(const VerticalOperators &ops, const std::vector<SubdomainSpec> &subdomains,
                        double omega);
Assembled2D assemble_2d(const LayerProfile &profile, const std::vector<SubdomainSpec> &subdomains,
                        double omega);

// exp(16 + 4 / (y (y - 1))) on (0, 1), zero outside.
double bump_excitation(double y);

// Consistent load int N^T f dz on the free vertical dofs (4-point Gauss).
CVector neumann_load_left(const LayerProfile &profile, const std::function<double(double)> &f);

// Places a load column on node column 0 of the assembled system.
CVector left_load_vector(const Assembled2D &system, const CVector &column);

CVector solve_2d(const Assembled2D &system, const CVector &load);

InterfaceSolution extract_interfaces(const Assembled2D &system, const CVector &u);

// assemble_2d + solve_2d + extract_interfaces with the load on x = 0.
InterfaceSolution solve_cfem(const VerticalOperators &ops, const std::vector<SubdomainSpec> &subdomains,
                             double omega, const CVector &left_load);

// ||u - u_ref|| / ||u_ref||.
double interface_error(const CVector &u, const CVector &u_ref);

// Uniform real linear elements with consistent x mass, nx per subdomain.
// Each subdomain is condensed onto its end columns by repeated doubling.
InterfaceSolution regular_fem_baseline(const VerticalOperators &ops,
                                       const std::vector<SubdomainSpec> &subdomains, double omega,
                                       int nx, const CVector &left_load);

// Two-port of one subdomain that is exact in x (modal decomposition of the
// z-discretized operator, exact DtN per mode).
numerics::TwoPort exact_subdomain_two_port(const VerticalOperators &ops, Complex modulus_scale,
                                           double omega, double length);

// Interface solution exact in x for the given z discretization.
InterfaceSolution modal_reference(const VerticalOperators &ops, const std::vector<SubdomainSpec> &subdomains,
                                  double omega, const CVector &left_load);

}  // namespace cfem::layered
