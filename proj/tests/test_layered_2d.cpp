// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cfem/errors.hpp"
#include "cfem/layered_2d.hpp"
#include "cfem/pade_grid.hpp"
#include "cfem/scalar_core.hpp"

namespace
{

using namespace cfem;
using namespace cfem::layered;
using std::numbers::pi;

LayerProfile unit_profile(int nz, Complex g = 1.0) { return LayerProfile::uniform(1.0, g, 1.0, nz); }

std::vector<SubdomainSpec> single(double length, int n, Complex scale = 1.0)
{
  return make_subdomains({length}, {scale}, n);
}

// Left-edge response of a Laplace layer with Neumann far end, exact in x:
// u(0) = V diag(1 / (k tanh(k L))) V^T f with (Rz, Gz) eigenpairs, V^T Gz V = I.
CVector laplace_modal_oracle(const VerticalOperators &ops, double length, const CVector &f)
{
  const RMatrix r = ops.Rz.real();
  const RMatrix g = ops.Gz.real();
  Eigen::GeneralizedSelfAdjointEigenSolver<RMatrix> es(r, g);
  const RMatrix v = es.eigenvectors();
  const RVector mu = es.eigenvalues();
  RVector w(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i)
  {
    const double k = std::sqrt(mu(i));
    w(i) = 1.0 / (k * std::tanh(k * length));
  }
  const RVector fr = f.real();
  return (v * w.asDiagonal() * (v.transpose() * fr)).cast<Complex>();
}

TEST(Semidiscretize, SingleElement)
{
  const auto ops = semidiscretize_z(unit_profile(1));
  ASSERT_EQ(ops.size(), 1);
  EXPECT_NEAR(std::abs(ops.Rz(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ops.Gz(0, 0) - 1.0 / 3.0), 0.0, 1e-15);
  EXPECT_NEAR(ops.Mz(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(ops.z, (std::vector<double>{1.0}));
}

TEST(Semidiscretize, TwoElements)
{
  const auto ops = semidiscretize_z(unit_profile(2));
  CMatrix r(2, 2), g(2, 2);
  r << 4.0, -2.0, -2.0, 2.0;
  g << 4.0, 1.0, 1.0, 2.0;
  g /= 12.0;
  EXPECT_LE((ops.Rz - r).norm(), 1e-14);
  EXPECT_LE((ops.Gz - g).norm(), 1e-15);
  EXPECT_LE((ops.Mz - g.real()).norm(), 1e-15);
}

TEST(Semidiscretize, PiecewiseModulus)
{
  LayerProfile p;
  p.height = 1.0;
  p.nz = 2;
  p.pieces = {{0.0, 0.5, 1.0, 1.0}, {0.5, 1.0, 2.0, 1.0}};
  const auto ops = semidiscretize_z(p);
  CMatrix r(2, 2), g(2, 2);
  r << 6.0, -4.0, -4.0, 4.0;
  g << 6.0, 2.0, 2.0, 4.0;
  g /= 12.0;
  EXPECT_LE((ops.Rz - r).norm(), 1e-14);
  EXPECT_LE((ops.Gz - g).norm(), 1e-15);
}

TEST(Semidiscretize, SymmetryAndDefiniteness)
{
  const auto ops = semidiscretize_z(unit_profile(30));
  EXPECT_EQ((ops.Rz - ops.Rz.transpose()).norm(), 0.0);
  EXPECT_EQ((ops.Gz - ops.Gz.transpose()).norm(), 0.0);
  EXPECT_EQ((ops.Mz - ops.Mz.transpose()).norm(), 0.0);
  Eigen::SelfAdjointEigenSolver<RMatrix> rs(ops.Rz.real());
  Eigen::SelfAdjointEigenSolver<RMatrix> gs(ops.Gz.real());
  EXPECT_GE(rs.eigenvalues().minCoeff(), -1e-12);
  EXPECT_GT(gs.eigenvalues().minCoeff(), 0.0);
}

TEST(Semidiscretize, ProfileValidation)
{
  LayerProfile gap;
  gap.height = 1.0;
  gap.nz = 4;
  gap.pieces = {{0.0, 0.4, 1.0, 1.0}, {0.5, 1.0, 1.0, 1.0}};
  EXPECT_THROW(gap.validate(), DomainError);
  LayerProfile misaligned;
  misaligned.height = 1.0;
  misaligned.nz = 2;
  misaligned.pieces = {{0.0, 0.3, 1.0, 1.0}, {0.3, 1.0, 1.0, 1.0}};
  EXPECT_THROW(misaligned.validate(), DomainError);
  EXPECT_THROW(LayerProfile::uniform(1.0, 1.0, 1.0, 0).validate(), DomainError);
  EXPECT_THROW(LayerProfile::uniform(1.0, 1.0, -1.0, 2).validate(), DomainError);
}

TEST(ModalLambdas, Examples)
{
  const auto one = modal_lambdas(semidiscretize_z(unit_profile(1)), 1.5);
  ASSERT_EQ(one.size(), 1);
  EXPECT_NEAR(std::abs(one(0) - (3.0 - 2.25)), 0.0, 1e-13);

  const auto lap = modal_lambdas(semidiscretize_z(unit_profile(200)), 0.0);
  for (const Complex l : lap)
  {
    EXPECT_GE(l.real(), 0.0);
  }
  EXPECT_NEAR(lap(0).real(), pi * pi / 4.0, 1e-4);

  const auto helm = modal_lambdas(semidiscretize_z(unit_profile(40)), 3.0);
  EXPECT_LT(helm(0).real(), 0.0);
}

TEST(Assemble2D, SingleDofReducesToScalar)
{
  const auto ops = semidiscretize_z(unit_profile(1));
  const double omega = 1.2;
  const Complex s(2.0, 0.3);
  const Complex g = s * ops.Gz(0, 0);
  const Complex lambda = (s * ops.Rz(0, 0) - omega * omega * ops.Mz(0, 0)) / g;
  const auto subs = single(3.0, 9, s);
  const auto sys = assemble_2d(ops, subs, omega);
  const auto one_d = scalar::assemble_1d(subs[0].grid, lambda);
  const CMatrix dense = sys.matrix.to_dense();
  ASSERT_EQ(dense.rows(), 10);
  for (Eigen::Index i = 0; i < 10; ++i)
  {
    EXPECT_LE(std::abs(dense(i, i) - g * one_d.diag[static_cast<std::size_t>(i)]), 1e-12 * std::abs(dense(i, i)));
    if (i + 1 < 10)
    {
      EXPECT_LE(std::abs(dense(i + 1, i) - g * one_d.offdiag[static_cast<std::size_t>(i)]),
                1e-12 * std::abs(dense(i, i)));
    }
  }
  // Neumann far end: u0 = f / (g (kd - ko^2 / kd_end)).
  const auto d = scalar::condense_dtn(subs[0].grid, lambda);
  CVector f(1);
  f(0) = 1.0;
  const auto sol = solve_cfem(ops, subs, omega, f);
  const Complex u0 = 1.0 / (g * (d.k_diag - d.k_off * d.k_off / d.k_diag_end));
  EXPECT_LE(std::abs(sol.columns.front()(0) - u0), 1e-12 * std::abs(u0));
}

TEST(Assemble2D, SingleElementBlock)
{
  const auto ops = semidiscretize_z(unit_profile(3));
  std::vector<SubdomainSpec> subs = single(2.0, 1);
  const auto sys = assemble_2d(ops, subs, 0.0);
  const CMatrix k = ops.Gz / 2.0 + ops.Rz * (2.0 / 4.0);
  const CMatrix ko = -ops.Gz / 2.0 + ops.Rz * (2.0 / 4.0);
  EXPECT_LE((sys.matrix.diag(0) - k).norm(), 1e-14);
  EXPECT_LE((sys.matrix.diag(1) - k).norm(), 1e-14);
  EXPECT_LE((sys.matrix.sub(0) - ko).norm(), 1e-14);
}

TEST(Assemble2D, InterfaceSumsBothSides)
{
  const auto ops = semidiscretize_z(unit_profile(2));
  const double omega = 0.7;
  const auto two = make_subdomains({5.0, 5.0}, {1.0, 2.0}, 3);
  const auto sys = assemble_2d(ops, two, omega);
  ASSERT_EQ(sys.interface_nodes, (std::vector<Eigen::Index>{0, 3, 6}));
  const auto left = assemble_2d(ops, {two[0]}, omega);
  const auto right = assemble_2d(ops, {two[1]}, omega);
  EXPECT_LE((sys.matrix.diag(3) - left.matrix.diag(3) - right.matrix.diag(0)).norm(), 1e-13);
  for (const Eigen::Index node : sys.interface_nodes)
  {
    EXPECT_LE(std::abs(sys.x_nodes[static_cast<std::size_t>(node)].imag()), 1e-12 * 10.0);
  }
  EXPECT_NEAR(sys.x_nodes.back().real(), 10.0, 1e-12);
}

TEST(Assemble2D, SymmetricSystem)
{
  const auto ops = semidiscretize_z(unit_profile(4, Complex(1.0, 0.01)));
  const auto sys = assemble_2d(ops, make_subdomains({5.0, 5.0}, {1.0, 2.0}, 6), 3.0);
  const CMatrix d = sys.matrix.to_dense();
  EXPECT_EQ((d - d.transpose()).norm(), 0.0);
}

TEST(Assemble2D, Errors)
{
  const auto ops = semidiscretize_z(unit_profile(2));
  EXPECT_THROW(assemble_2d(ops, {}, 0.0), DomainError);
  auto bad = single(2.0, 4);
  bad[0].x_length = 3.0;
  EXPECT_THROW(assemble_2d(ops, bad, 0.0), DomainError);
  EXPECT_THROW(make_subdomains({1.0, 2.0}, {1.0}, 3), DomainError);
}

TEST(Loads, Excitation)
{
  EXPECT_EQ(bump_excitation(0.5), 1.0);
  EXPECT_EQ(bump_excitation(0.0), 0.0);
  EXPECT_EQ(bump_excitation(1.0), 0.0);
  EXPECT_NEAR(bump_excitation(0.05) / std::exp(16.0 - 4.0 / 0.0475), 1.0, 1e-12);
  EXPECT_NEAR(bump_excitation(0.25), std::exp(16.0 - 4.0 / 0.1875), 1e-12);
}

TEST(Loads, ConsistentVectors)
{
  const auto p = unit_profile(4);
  const CVector ones = neumann_load_left(p, [](double) { return 1.0; });
  ASSERT_EQ(ones.size(), 4);
  EXPECT_NEAR(std::abs(ones(0) - 0.25), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ones(2) - 0.25), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ones(3) - 0.125), 0.0, 1e-15);
  EXPECT_EQ(neumann_load_left(p, [](double) { return 0.0; }).norm(), 0.0);
  // Linear data is integrated exactly.
  const CVector lin = neumann_load_left(unit_profile(1), [](double z) { return z; });
  EXPECT_NEAR(lin(0).real(), 1.0 / 3.0, 1e-15);
}

TEST(Solve2D, ZeroLoad)
{
  const auto ops = semidiscretize_z(unit_profile(5));
  const auto sol = solve_cfem(ops, single(10.0, 8), 0.0, CVector::Zero(5));
  EXPECT_EQ(sol.stacked().norm(), 0.0);
}

TEST(Solve2D, LaplaceMatchesModalOracle)
{
  const auto p = unit_profile(40);
  const auto ops = semidiscretize_z(p);
  const CVector f = neumann_load_left(p, bump_excitation);
  const CVector oracle = laplace_modal_oracle(ops, 10.0, f);
  const auto modal = modal_reference(ops, single(10.0, 1), 0.0, f);
  EXPECT_LE(interface_error(modal.columns.front(), oracle), 1e-11);
  const auto cfem = solve_cfem(ops, single(10.0, 30), 0.0, f);
  EXPECT_LE(interface_error(cfem.columns.front(), oracle), 1e-4);
}

TEST(Solve2D, CfemConvergesToModalReference)
{
  const auto p = unit_profile(30, Complex(1.0, 0.01));
  const auto ops = semidiscretize_z(p);
  const CVector f = neumann_load_left(p, bump_excitation);
  const auto subs_ref = make_subdomains({5.0, 5.0}, {1.0, 2.0}, 1);
  const auto ref = modal_reference(ops, subs_ref, 3.0, f);
  double prev = 1.0;
  for (const int n : {10, 20, 30})
  {
    const auto sol = solve_cfem(ops, make_subdomains({5.0, 5.0}, {1.0, 2.0}, n), 3.0, f);
    const double e = interface_error(sol.stacked(), ref.stacked());
    EXPECT_LT(e, prev) << n;
    prev = e;
  }
  EXPECT_LE(prev, 1e-5);
}

TEST(InterfaceError, Examples)
{
  CVector u(3);
  u << 1.0, Complex(0.0, 2.0), -3.0;
  EXPECT_EQ(interface_error(u, u), 0.0);
  EXPECT_NEAR(interface_error(2.0 * u, u), 1.0, 1e-15);
  CVector e0 = CVector::Zero(2), e1 = CVector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  EXPECT_NEAR(interface_error(e0, e1), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(interface_error(u, CVector::Zero(3)), DomainError);
  EXPECT_THROW(interface_error(u, e0), DomainError);
}

TEST(RegularFem, SecondOrderSelfConvergence)
{
  const auto p = unit_profile(20);
  const auto ops = semidiscretize_z(p);
  const CVector f = neumann_load_left(p, bump_excitation);
  const auto subs = single(10.0, 1);
  const CVector ref = regular_fem_baseline(ops, subs, 0.0, 4096, f).columns.front();
  const double e100 = interface_error(regular_fem_baseline(ops, subs, 0.0, 100, f).columns.front(), ref);
  const double e200 = interface_error(regular_fem_baseline(ops, subs, 0.0, 200, f).columns.front(), ref);
  const double e400 = interface_error(regular_fem_baseline(ops, subs, 0.0, 400, f).columns.front(), ref);
  EXPECT_GT(e100 / e200, 3.0);
  EXPECT_LT(e100 / e200, 5.0);
  EXPECT_GT(e200 / e400, 3.0);
  EXPECT_LT(e200 / e400, 5.0);
  EXPECT_THROW(regular_fem_baseline(ops, subs, 0.0, 0, f), DomainError);
}

TEST(RegularFem, AgreesWithModalReference)
{
  const auto p = unit_profile(20, Complex(1.0, 0.01));
  const auto ops = semidiscretize_z(p);
  const CVector f = neumann_load_left(p, bump_excitation);
  const auto subs = make_subdomains({5.0, 5.0}, {1.0, 2.0}, 1);
  const auto fem = regular_fem_baseline(ops, subs, 3.0, 2048, f);
  const auto modal = modal_reference(ops, subs, 3.0, f);
  EXPECT_LE(interface_error(fem.stacked(), modal.stacked()), 1e-4);
}

TEST(RegularFem, CfemBeatsEqualElementCount)
{
  const auto p = unit_profile(50);
  const auto ops = semidiscretize_z(p);
  const CVector f = neumann_load_left(p, bump_excitation);
  const auto subs = single(10.0, 1);
  const CVector ref = modal_reference(ops, subs, 0.0, f).columns.front();
  for (int n = 5; n <= 12; ++n)
  {
    const double cfem = interface_error(solve_cfem(ops, single(10.0, n), 0.0, f).columns.front(), ref);
    const double fem = interface_error(regular_fem_baseline(ops, subs, 0.0, n, f).columns.front(), ref);
    EXPECT_LT(cfem, fem) << n;
  }
}

// Identical materials: splitting the domain must not change the answer.
TEST(MultiSubdomain, ContinuityWithIdenticalMaterials)
{
  const auto p = unit_profile(20, Complex(1.0, 0.01));
  const auto ops = semidiscretize_z(p);
  const CVector f = neumann_load_left(p, bump_excitation);
  const double omega = 3.0;

  const auto split = make_subdomains({5.0, 5.0}, {1.0, 1.0}, 12);
  const auto whole = single(10.0, 1);

  const auto fem2 = regular_fem_baseline(ops, split, omega, 256, f);
  const auto fem1 = regular_fem_baseline(ops, whole, omega, 512, f);
  EXPECT_LE(interface_error(fem2.columns.front(), fem1.columns.front()), 1e-10);
  EXPECT_LE(interface_error(fem2.columns.back(), fem1.columns.back()), 1e-10);

  const auto modal2 = modal_reference(ops, split, omega, f);
  const auto modal1 = modal_reference(ops, whole, omega, f);
  EXPECT_LE(interface_error(modal2.columns.front(), modal1.columns.front()), 1e-10);
  EXPECT_LE(interface_error(modal2.columns.back(), modal1.columns.back()), 1e-10);

  // One subdomain carrying the concatenated grid of both halves.
  std::vector<SubdomainSpec> joined(1);
  joined[0].x_length = 10.0;
  joined[0].grid.n = 24;
  joined[0].grid.total_length = 10.0;
  joined[0].grid.ordering = pade::Ordering::custom_permutation;
  for (const auto &s : split)
  {
    joined[0].grid.lengths.insert(joined[0].grid.lengths.end(), s.grid.lengths.begin(), s.grid.lengths.end());
  }
  const auto cfem2 = solve_cfem(ops, split, omega, f);
  const auto cfem1 = solve_cfem(ops, joined, omega, f);
  EXPECT_LE(interface_error(cfem2.columns.front(), cfem1.columns.front()), 1e-10);
  EXPECT_LE(interface_error(cfem2.columns.back(), cfem1.columns.back()), 1e-10);
}

}  // namespace
