// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cfem/numerics/condensation.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/LU>

#include "cfem/errors.hpp"

namespace cfem::numerics
{

namespace
{

Eigen::PartialPivLU<CMatrix> factor_or_throw(const CMatrix &p, const char *what)
{
  Eigen::PartialPivLU<CMatrix> lu(p);
  const double rcond = lu.rcond();
  if (!std::isfinite(rcond) || rcond <= 16.0 * std::numeric_limits<double>::epsilon())
  {
    throw SingularityError(what);
  }
  return lu;
}

}  // namespace

TwoPort two_port_from_element(const CMatrix &element)
{
  if (element.rows() != element.cols() || element.rows() % 2 != 0)
  {
    throw DomainError("two_port_from_element: element must be square with even size");
  }
  const Eigen::Index m = element.rows() / 2;
  return {element.topLeftCorner(m, m), element.bottomRightCorner(m, m),
          element.bottomLeftCorner(m, m)};
}

TwoPort cascade(const TwoPort &first, const TwoPort &second)
{
  const CMatrix pivot = first.right + second.left;
  const auto lu = factor_or_throw(pivot, "cascade: shared node block is singular");
  const CMatrix from_left = lu.solve(first.coupling);                   // p^{-1} F.c
  const CMatrix from_right = lu.solve(CMatrix(second.coupling.transpose()));  // p^{-1} S.c^T
  TwoPort out;
  out.left = first.left - first.coupling.transpose() * from_left;
  out.right = second.right - second.coupling * from_right;
  out.coupling = -second.coupling * from_left;
  return out;
}

TwoPort cascade_power(const TwoPort &segment, std::size_t count)
{
  if (count == 0)
  {
    throw DomainError("cascade_power: count must be positive");
  }
  std::optional<TwoPort> result;
  TwoPort base = segment;
  while (true)
  {
    if (count & 1U)
    {
      result = result ? cascade(*result, base) : base;
    }
    count >>= 1U;
    if (count == 0)
    {
      break;
    }
    base = cascade(base, base);
  }
  return *result;
}

CMatrix schur_complement_boundary(const BlockTridiagonalMatrix &a,
                                  std::span<const Eigen::Index> boundary)
{
  const Eigen::Index n = a.size();
  std::vector<char> is_boundary(static_cast<std::size_t>(n), 0);
  for (const auto b : boundary)
  {
    if (b < 0 || b >= n || is_boundary[static_cast<std::size_t>(b)])
    {
      throw DomainError("schur_complement_boundary: invalid or repeated boundary index");
    }
    is_boundary[static_cast<std::size_t>(b)] = 1;
  }
  std::vector<Eigen::Index> interior;
  for (Eigen::Index i = 0; i < n; ++i)
  {
    if (!is_boundary[static_cast<std::size_t>(i)])
    {
      interior.push_back(i);
    }
  }

  const CMatrix dense = a.to_dense();
  const auto nb = static_cast<Eigen::Index>(boundary.size());
  const auto ni = static_cast<Eigen::Index>(interior.size());
  CMatrix s(nb, nb);
  CMatrix bi(nb, ni);
  CMatrix ii(ni, ni);
  for (Eigen::Index r = 0; r < nb; ++r)
  {
    for (Eigen::Index c = 0; c < nb; ++c)
    {
      s(r, c) = dense(boundary[static_cast<std::size_t>(r)], boundary[static_cast<std::size_t>(c)]);
    }
    for (Eigen::Index c = 0; c < ni; ++c)
    {
      bi(r, c) = dense(boundary[static_cast<std::size_t>(r)], interior[static_cast<std::size_t>(c)]);
    }
  }
  if (ni == 0)
  {
    return s;
  }
  for (Eigen::Index r = 0; r < ni; ++r)
  {
    for (Eigen::Index c = 0; c < ni; ++c)
    {
      ii(r, c) = dense(interior[static_cast<std::size_t>(r)], interior[static_cast<std::size_t>(c)]);
    }
  }
  const auto lu = factor_or_throw(ii, "schur_complement_boundary: interior block is singular");
  s.noalias() -= bi * lu.solve(CMatrix(bi.transpose()));
  return 0.5 * (s + s.transpose());
}

}  // namespace cfem::numerics
