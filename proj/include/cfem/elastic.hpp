// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "cfem/layered_2d.hpp"
#include "cfem/numerics/condensation.hpp"
#include "cfem/pade_grid.hpp"
#include "cfem/types.hpp"

/// In-plane elastodynamics in a layer: linear elements in z give
///   (A u')' + (B1 u)' + B2 u' + D u = 0
/// in x, with traction F = -(A u' + B1 u) on a vertical section.
namespace cfem::elastic
{

struct ElasticMaterial
{
  Complex lame_lambda;
  Complex mu;  // shear modulus G
  double rho = 1.0;

  Complex d11() const { return lame_lambda + 2.0 * mu; }
  Complex d22() const { return lame_lambda + 2.0 * mu; }
  Complex d33() const { return mu; }
  Complex d12() const { return lame_lambda; }
};

/// Section coefficients with displacement components ordered (u_x, u_z).
/// Size c x c, c = 2 for in-plane elasticity; c = 1 expresses the scalar
/// anti-plane problem through the same operators.
struct InPlaneCoefficients
{
  CMatrix Dxx;
  CMatrix Dxz;
  CMatrix Dzz;
};

ElasticMaterial material_from_engineering(Complex shear_modulus, double nu, double rho);

// Isotropic form (D13 = D23 = 0).
InPlaneCoefficients in_plane_coefficients(const ElasticMaterial &material);

// Dxx = Dzz = [G], Dxz = [0].
InPlaneCoefficients anti_plane_coefficients(Complex shear_modulus);

struct ElasticPiece
{
  double z0 = 0.0;
  double z1 = 0.0;
  InPlaneCoefficients coefficients;
  double rho = 1.0;
};

struct ElasticProfile
{
  double height = 1.0;
  std::vector<ElasticPiece> pieces;
  int nz = 1;

  static ElasticProfile uniform(double height, const InPlaneCoefficients &coefficients, double rho, int nz);
};

/// Operators on the free vertical dofs (z = 0 clamped), component index
/// fastest: dof 2 i + c for c components at node z_{i+1}.
struct ElasticVerticalOperators
{
  CMatrix A;   // int N^T Dxx N
  CMatrix B1;  // int N^T Dxz N'
  CMatrix B2;  // -B1^T
  CMatrix D;   // -int N'^T Dzz N' + omega^2 int N^T rho N
  double omega = 0.0;
  int components = 2;

  Eigen::Index size() const { return A.rows(); }
};

struct PlaneWaveMode
{
  Complex kx;
  CVector phi;
};

ElasticVerticalOperators semidiscretize_z_elastic(const ElasticProfile &profile, double omega);

// Anti-plane operators of a scalar layer: A = Gz, B1 = B2 = 0, D = -(Rz - omega^2 Mz).
ElasticVerticalOperators from_scalar(const layered::VerticalOperators &ops, double omega);

// Modes u = phi exp(i kx x) of (-kx^2 A + i kx (B1 + B2) + D) phi = 0.
std::vector<PlaneWaveMode> dispersion_modes(const ElasticVerticalOperators &ops);

// ||(-kx^2 A + i kx (B1 + B2) + D) phi||.
double dispersion_residual(const ElasticVerticalOperators &ops, const PlaneWaveMode &mode);

// Midpoint-integrated layer stiffness mapping (u_0, u_L) to (F_0, -F_L).
CMatrix element_stiffness_elastic(Complex length, const ElasticVerticalOperators &ops);

// Same weak form with exact integration (consistent x mass), real length.
CMatrix element_stiffness_regular(double length, const ElasticVerticalOperators &ops);

// -(i kx A + B1)
CMatrix halfspace_stiffness(const PlaneWaveMode &mode, const ElasticVerticalOperators &ops);

// (1 + i kx L/2) / (1 - i kx L/2)
Complex propagation_factor(Complex length, Complex kx);

struct FixedPointReport
{
  double residual = 0.0;          // ||[[K11 - K_HS, K12], [K21, K22 + K_HS]] (phi, P phi)||
  double scale = 0.0;             // ||D|| ||phi||
  double traction_mismatch = 0.0; // ||F_L - P F_0|| / ||F_0||
  double halfspace_mismatch = 0.0; // ||F_0 - K_HS phi|| / ||K_HS phi||
  Complex propagation{1.0, 0.0};
};

FixedPointReport fixed_point_report(Complex length, const ElasticVerticalOperators &ops, const PlaneWaveMode &mode);

// fixed_point_report(...).residual
double fixed_point_residual(Complex length, const ElasticVerticalOperators &ops, const PlaneWaveMode &mode);

/// One x-interval with its own vertical operators.
struct ElasticSubdomain
{
  double x_length = 0.0;
  ElasticVerticalOperators ops;
  pade::PadeGrid grid;  // ignored by the regular-FEM path
};

// Consistent load int N^T f dz on the u_x dofs of the x = 0 column.
CVector horizontal_traction_load(const ElasticProfile &profile, const std::function<double(double)> &f);

// CFEM solve; returns both displacement components at x = 0 and at every
// subdomain end.
layered::InterfaceSolution solve_elastic_multidomain(const std::vector<ElasticSubdomain> &subdomains,
                                                     const CVector &left_load);

// Uniform real elements, nx per subdomain, condensed by repeated doubling.
layered::InterfaceSolution regular_fem_elastic(const std::vector<ElasticSubdomain> &subdomains, int nx,
                                               const CVector &left_load);

}  // namespace cfem::elastic
