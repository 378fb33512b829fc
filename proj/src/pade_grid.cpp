// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cfem/pade_grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "cfem/errors.hpp"

namespace cfem::pade
{

namespace
{

struct TableEntry
{
  double re;
  double im;  // >= 0; a nonzero value stands for the pair re +- i im
};

// Element lengths of a unit interval, as published (16 significant digits at most).
const std::array<std::vector<TableEntry>, kTableOrder + 1> &table()
{
  static const std::array<std::vector<TableEntry>, kTableOrder + 1> rows = {{
      {},
      {{1.00000000000000, 0.0}},
      {{0.50000000000000, 0.28867513459481}},
      {{0.28468557688388, 0.27159985141630}, {0.43062884623222, 0.0}},
      {{0.18313248053143, 0.23132522602625}, {0.31686751946856, 0.09488202514221}},
      {{0.12803667831541, 0.19668213834621},
       {0.23485450871940, 0.12209940763707},
       {0.27421762593037, 0.0}},
      {{0.09489061789607, 0.16944514819433},
       {0.17914640739749, 0.12594324946340},
       {0.22596297470643, 0.04614135671779}},
      {{0.07338559568636, 0.14811940741461},
       {0.14065739395847, 0.12154781833235},
       {0.18538954553266, 0.06776497788782},
       {0.20113492964499, 0.0}},
      {{0.05861791492234, 0.13119236974564},
       {0.11325833004971, 0.11445496413908},
       {0.15337794771885, 0.07709430353886},
       {0.17474580730908, 0.02713226173787}},
      {{0.04802049907890, 0.11752570488080},
       {0.09316287173966, 0.10679717990370},
       {0.12840441052931, 0.08014721079992},
       {0.15100957026047, 0.04281546509628},
       {0.158805296783284, 0.0}},
      {{0.04014472910062, 0.10630697796687},
       {0.07802273616547, 0.09940003581225},
       {0.10881874816902, 0.07996015060428},
       {0.13078256453612, 0.05163001172938},
       {0.14223122202876, 0.01782841382104}},
      {{0.03412261657800, 0.09695789626293},
       {0.06634486381072, 0.09256005182226},
       {0.09329088025857, 0.07811366645707},
       {0.11386072467713, 0.05628616844255},
       {0.12678425930221, 0.02942684799389},
       {0.131193310746699, 0.0}},
      {{0.02940803944815, 0.08906181395662},
       {0.05715192456673, 0.08635352530097},
       {0.08082582076929, 0.07545289071966},
       {0.09976290741316, 0.05839885662872},
       {0.11301395814524, 0.03687019624343},
       {0.11983734965741, 0.01259866487095}},
      {{0.02564318775369, 0.08231355321087},
       {0.04978573946440, 0.08076582096948},
       {0.07069390925651, 0.07243833050796},
       {0.08799247146698, 0.05894563008011},
       {0.10097469339377, 0.04152986688324},
       {0.10902977699627, 0.02144314210934},
       {0.11176044333671, 0.0}},
      {{0.02258550311646, 0.07648569373967},
       {0.04379127631258, 0.07574740948845},
       {0.06236027779351, 0.06932300610809},
       {0.07811546938314, 0.05852853926583},
       {0.09053178744825, 0.04431195125450},
       {0.09911464460927, 0.02760255210502},
       {0.10350104133675, 0.00937153174338}},
      {{0.02006570730347, 0.07140591920396},
       {0.03884638966705, 0.07123849065223},
       {0.05542991160544, 0.06624511011050},
       {0.06977487505357, 0.05752432367232},
       {0.08149231310591, 0.04581962272804},
       {0.09018490369015, 0.03183750267162},
       {0.09553514496841, 0.01630985840134},
       {0.09734150921194, 0.0}},
      {{0.01796266496341, 0.06694162366630},
       {0.03471809507502, 0.06717964470869},
       {0.04960794930403, 0.06327803486714},
       {0.06268398209122, 0.05617188543383},
       {0.07365957371625, 0.04645858465651},
       {0.08221667350938, 0.03468717833984},
       {0.08808374597041, 0.02141958057287},
       {0.09106731537025, 0.00724175169196}},
  }};
  return rows;
}

void check_order(int n)
{
  if (n < 1 || n > kMaxOrder)
  {
    throw DomainError("element count must lie in [1, " + std::to_string(kMaxOrder) +
                      "], got " + std::to_string(n));
  }
}

// Pairs each root in the upper half plane with its nearest partner in the lower
// half plane and replaces both by the symmetrized pair.
std::vector<Complex> symmetrize_conjugates(std::vector<Complex> roots)
{
  const std::size_t n = roots.size();
  std::vector<Complex> upper;
  std::vector<Complex> lower;
  std::vector<Complex> out;
  for (const auto &r : roots)
  {
    if (std::abs(r.imag()) <= 1e-10 * std::abs(r))
    {
      out.emplace_back(r.real(), 0.0);
    }
    else if (r.imag() > 0)
    {
      upper.push_back(r);
    }
    else
    {
      lower.push_back(r);
    }
  }
  if (upper.size() != lower.size() || out.size() != n % 2)
  {
    throw NumericalError("element_lengths: roots do not split into conjugate pairs");
  }
  for (const auto &u : upper)
  {
    auto nearest = std::min_element(lower.begin(), lower.end(), [&](const Complex &a, const Complex &b) {
      return std::abs(a - std::conj(u)) < std::abs(b - std::conj(u));
    });
    const Complex avg = 0.5 * (u + std::conj(*nearest));
    lower.erase(nearest);
    out.push_back(avg);
    out.push_back(std::conj(avg));
  }
  return out;
}

}  // namespace

std::vector<Complex> PadeGrid::node_coordinates() const
{
  std::vector<Complex> x(lengths.size() + 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < lengths.size(); ++i)
  {
    x[i + 1] = x[i] + lengths[i];
  }
  return x;
}

PadePolynomial pade_polynomial(int n)
{
  check_order(n);
  using boost::multiprecision::cpp_int;
  PadePolynomial p;
  p.n = n;
  // (2n - j)! / (j! (n - j)!) = C(n, j) (2n - j)! / n!
  for (int j = 0; j <= n; ++j)
  {
    cpp_int binom = 1;
    for (int i = 1; i <= j; ++i)
    {
      binom = binom * (n - j + i) / i;
    }
    cpp_int rising = 1;
    for (int i = n + 1; i <= 2 * n - j; ++i)
    {
      rising *= i;
    }
    cpp_int value = binom * rising;
    if (j % 2 == 1)
    {
      value = -value;
    }
    numerics::HighPrecisionReal hp(value);
    if (static_cast<cpp_int>(hp) != value)
    {
      throw DomainError("pade_polynomial: coefficient not exactly representable for n = " +
                        std::to_string(n));
    }
    p.exact.push_back(hp);
    p.coeffs.push_back(static_cast<double>(value));
  }
  return p;
}

PadeGrid element_lengths(int n, double length)
{
  check_order(n);
  if (!(length > 0.0) || !std::isfinite(length))
  {
    throw DomainError("element_lengths: interval length must be positive");
  }
  const PadePolynomial poly = pade_polynomial(n);
  const auto roots = symmetrize_conjugates(
      numerics::poly_roots(std::span<const numerics::HighPrecisionReal>(poly.exact)));

  PadeGrid grid;
  grid.n = n;
  grid.total_length = length;
  grid.lengths.reserve(roots.size());
  for (const auto &x : roots)
  {
    grid.lengths.push_back(2.0 * length / x);
  }
  return order_phase_monotone(std::move(grid));
}

PadeGrid order_phase_monotone(PadeGrid grid)
{
  if (grid.lengths.empty())
  {
    throw DomainError("order_phase_monotone: empty grid");
  }
  std::stable_sort(grid.lengths.begin(), grid.lengths.end(),
                   [](const Complex &a, const Complex &b) { return std::arg(a) < std::arg(b); });
  grid.ordering = Ordering::phase_monotone;
  return grid;
}

PadeGrid reorder_conjugate_interleave(PadeGrid grid)
{
  if (grid.ordering != Ordering::phase_monotone)
  {
    throw DomainError("reorder_conjugate_interleave: grid must be phase-monotone ordered");
  }
  const std::size_t n = grid.lengths.size();
  // 1-based positions j = 2, 4, ... <= n/2 trade places with n + 1 - j.
  for (std::size_t j = 2; j <= n / 2; j += 2)
  {
    std::swap(grid.lengths[j - 1], grid.lengths[n - j]);
  }
  grid.ordering = Ordering::conjugate_interleaved;
  return grid;
}

PadeGrid permute(const PadeGrid &grid, std::span<const std::size_t> perm)
{
  if (perm.size() != grid.lengths.size())
  {
    throw DomainError("permute: permutation size differs from element count");
  }
  std::vector<char> seen(perm.size(), 0);
  PadeGrid out = grid;
  for (std::size_t i = 0; i < perm.size(); ++i)
  {
    if (perm[i] >= perm.size() || seen[perm[i]])
    {
      throw DomainError("permute: not a permutation");
    }
    seen[perm[i]] = 1;
    out.lengths[i] = grid.lengths[perm[i]];
  }
  out.ordering = Ordering::custom_permutation;
  return out;
}

double sum_defect(const PadeGrid &grid)
{
  Complex sum(0.0, 0.0);
  for (const auto &l : grid.lengths)
  {
    sum += l;
  }
  return std::abs(sum - grid.total_length) / grid.total_length;
}

double max_abs_imag_coordinate(const PadeGrid &grid)
{
  double worst = 0.0;
  for (const auto &x : grid.node_coordinates())
  {
    worst = std::max(worst, std::abs(x.imag()));
  }
  return worst;
}

std::vector<Complex> reference_lengths(int n)
{
  if (n < 1 || n > kTableOrder)
  {
    throw DomainError("reference_lengths: table covers n = 1 .. 16");
  }
  std::vector<Complex> out;
  for (const auto &e : table()[static_cast<std::size_t>(n)])
  {
    out.emplace_back(e.re, e.im);
    if (e.im != 0.0)
    {
      out.emplace_back(e.re, -e.im);
    }
  }
  return out;
}

TableReport validate_against_table(int n)
{
  TableReport report;
  report.n = n;
  report.reference = reference_lengths(n);
  const PadeGrid grid = element_lengths(n, 1.0);
  for (const auto &ref : report.reference)
  {
    double best = std::numeric_limits<double>::infinity();
    for (const auto &l : grid.lengths)
    {
      best = std::min(best, std::abs(l - ref) / std::abs(ref));
    }
    report.deviation.push_back(best);
    report.max_deviation = std::max(report.max_deviation, best);
  }
  report.pass = report.reference.size() == grid.lengths.size() && report.max_deviation <= 1e-12;
  return report;
}

}  // namespace cfem::pade
