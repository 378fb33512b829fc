// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

// cfem: command-line front end for grids, 1D solves and the convergence sweeps.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cfem/bench.hpp"
#include "cfem/errors.hpp"
#include "cfem/pade_grid.hpp"
#include "cfem/scalar_core.hpp"

namespace
{

using cfem::Complex;
namespace bench = cfem::bench;

constexpr int kThresholdFailure = 2;

std::vector<int> parse_sweep(const std::string &s)
{
  const auto colon = s.find(':');
  if (colon == std::string::npos)
  {
    throw cfem::DomainError("--sweep expects n1:n2");
  }
  const int a = std::stoi(s.substr(0, colon));
  const int b = std::stoi(s.substr(colon + 1));
  if (a < 1 || b < a)
  {
    throw cfem::DomainError("--sweep expects 1 <= n1 <= n2");
  }
  std::vector<int> out;
  for (int n = a; n <= b; ++n)
  {
    out.push_back(n);
  }
  return out;
}

// "200" is a real wavenumber (lambda = k^2); "40i" an imaginary one (lambda = -k^2).
Complex parse_wavenumber(std::string s)
{
  bool imaginary = false;
  if (!s.empty() && (s.back() == 'i' || s.back() == 'j'))
  {
    imaginary = true;
    s.pop_back();
  }
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size())
  {
    throw cfem::DomainError("cannot parse wavenumber '" + s + "'");
  }
  return imaginary ? Complex(0.0, v) : Complex(v, 0.0);
}

std::string num(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

cfem::pade::PadeGrid make_grid(int n, double length, const std::string &order)
{
  auto grid = cfem::pade::element_lengths(n, length);
  if (order == "interleave")
  {
    grid = cfem::pade::reorder_conjugate_interleave(std::move(grid));
  }
  else if (order != "phase")
  {
    throw cfem::DomainError("--order must be phase or interleave");
  }
  return grid;
}

/// Flags shared by the sweep subcommands; unset flags keep the config value.
struct SweepFlags
{
  std::string config;
  std::string out;
  std::optional<int> nz;
  std::vector<int> n;
  std::string sweep;
  std::vector<double> omega;
  std::optional<double> gre;
  std::optional<double> gim;
  std::vector<int> baseline;
  std::optional<int> ref;
  std::optional<double> nu;
  std::string order;
  bool no_timing = false;
  bool assert_thresholds = false;
};

void add_sweep_flags(CLI::App *cmd, SweepFlags &f, bool full)
{
  cmd->add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "CSV output path (default stdout)");
  cmd->add_flag("--no-timing", f.no_timing, "Write zero seconds for byte-stable output");
  cmd->add_flag("--assert", f.assert_thresholds, "Exit 2 if an acceptance threshold fails");
  if (!full)
  {
    return;
  }
  cmd->add_option("--nz", f.nz, "Vertical elements");
  cmd->add_option("--n", f.n, "CFEM element counts per subdomain");
  cmd->add_option("--sweep", f.sweep, "Element-count range n1:n2");
  cmd->add_option("--omega", f.omega, "Frequencies");
  cmd->add_option("--gre", f.gre, "Real part of the shear modulus");
  cmd->add_option("--gim", f.gim, "Imaginary part of the shear modulus");
  cmd->add_option("--baseline", f.baseline, "Regular-FEM element counts over the whole x extent");
  cmd->add_option("--ref", f.ref, "Reference regular-FEM element count over the whole x extent");
  cmd->add_option("--order", f.order, "phase or interleave");
}

bench::ExperimentConfig build_config(bench::ExperimentId id, const SweepFlags &f)
{
  bench::ExperimentConfig c = f.config.empty() ? bench::ExperimentConfig::defaults(id) : bench::load_config(f.config);
  if (!f.config.empty() && c.experiment != id)
  {
    throw cfem::DomainError("config experiment " + bench::to_string(c.experiment) + " does not match subcommand");
  }
  if (f.nz) c.nz = *f.nz;
  if (!f.n.empty()) c.n = f.n;
  if (!f.sweep.empty()) c.n = parse_sweep(f.sweep);
  if (!f.omega.empty()) c.params = f.omega;
  if (f.gre) c.modulus.real(*f.gre);
  if (f.gim) c.modulus.imag(*f.gim);
  if (!f.baseline.empty()) c.baseline_nx = f.baseline;
  if (f.ref) c.reference_nx = *f.ref;
  if (f.nu) c.nu = *f.nu;
  if (!f.order.empty()) c.orderings = {f.order};
  if (f.no_timing) c.record_timing = false;
  return bench::parse_config(bench::to_json(c));
}

int run_sweep(const bench::ExperimentConfig &c, const SweepFlags &f)
{
  const auto records = bench::run_experiment(c);
  if (f.out.empty())
  {
    std::cout << bench::format_csv(records);
  }
  else
  {
    bench::emit_csv(records, f.out);
  }

  std::vector<bench::ConvergenceRecord> cfem_records;
  std::vector<bench::ConvergenceRecord> fem_records;
  for (const auto &r : records)
  {
    if (r.param != c.params.front())
    {
      continue;
    }
    if (r.ordering == "regular")
    {
      fem_records.push_back(r);
    }
    else if (r.ordering == c.orderings.front())
    {
      cfem_records.push_back(r);
    }
  }
  if (!fem_records.empty())
  {
    std::cerr << bench::format_baseline(bench::compare_baseline(cfem_records, fem_records));
  }

  bool ok = true;
  for (const auto &check : bench::check_thresholds(c, records))
  {
    std::cerr << (check.pass ? "PASS " : "FAIL ") << check.name << " (" << check.detail << ")\n";
    ok = ok && check.pass;
  }
  return (f.assert_thresholds && !ok) ? kThresholdFailure : 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Complex-length finite elements: grids, solves and convergence sweeps"};
  app.require_subcommand(1);

  int grid_n = 8;
  double grid_length = 1.0;
  std::string grid_order = "phase";
  bool check_table = false;
  auto *grid_cmd = app.add_subcommand("grid", "Print complex element lengths");
  grid_cmd->add_option("--n", grid_n, "Element count");
  grid_cmd->add_option("--length", grid_length, "Interval length");
  grid_cmd->add_option("--order", grid_order, "phase or interleave");
  grid_cmd->add_flag("--check-table", check_table, "Compare n = 1..16 with the reference table");

  std::string bvp_k = "10";
  int bvp_n = 10;
  std::string bvp_sweep;
  std::string bvp_order = "phase";
  double bvp_length = 1.0;
  auto *bvp_cmd = app.add_subcommand("bvp1d", "Solve u'' = lambda u, u'(0) = -1, u(L) = 0");
  bvp_cmd->add_option("--k", bvp_k, "Wavenumber, e.g. 200 or 40i");
  bvp_cmd->add_option("--n", bvp_n, "Element count");
  bvp_cmd->add_option("--sweep", bvp_sweep, "Element-count range n1:n2");
  bvp_cmd->add_option("--order", bvp_order, "phase or interleave");
  bvp_cmd->add_option("--length", bvp_length, "Interval length");

  SweepFlags laplace_flags, helmholtz_flags, multi_flags, elastic_flags, run_flags;
  auto *laplace_cmd = app.add_subcommand("laplace2d", "Layered Laplace sweep");
  add_sweep_flags(laplace_cmd, laplace_flags, true);
  auto *helmholtz_cmd = app.add_subcommand("helmholtz2d", "Layered Helmholtz sweep");
  add_sweep_flags(helmholtz_cmd, helmholtz_flags, true);
  auto *multi_cmd = app.add_subcommand("multidomain", "Two-material Helmholtz sweep");
  add_sweep_flags(multi_cmd, multi_flags, true);
  auto *elastic_cmd = app.add_subcommand("elastic", "Elastic errors per interface");
  add_sweep_flags(elastic_cmd, elastic_flags, true);
  elastic_cmd->add_option("--nu", elastic_flags.nu, "Poisson ratio");
  auto *run_cmd = app.add_subcommand("run", "Run an experiment from its config file");
  add_sweep_flags(run_cmd, run_flags, false);
  run_cmd->get_option("--config")->required();

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (grid_cmd->parsed())
    {
      if (check_table)
      {
        bool ok = true;
        for (int n = 1; n <= cfem::pade::kTableOrder; ++n)
        {
          const auto report = cfem::pade::validate_against_table(n);
          std::cout << "n=" << n << " max_deviation=" << num(report.max_deviation) << (report.pass ? " ok" : " MISMATCH")
                    << "\n";
          ok = ok && report.pass;
        }
        return ok ? 0 : kThresholdFailure;
      }
      const auto grid = make_grid(grid_n, grid_length, grid_order);
      std::cout << "j,re,im\n";
      for (std::size_t j = 0; j < grid.lengths.size(); ++j)
      {
        std::cout << j + 1 << "," << num(grid.lengths[j].real()) << "," << num(grid.lengths[j].imag()) << "\n";
      }
      std::cerr << "sum_defect=" << num(cfem::pade::sum_defect(grid))
                << " max_abs_imag_coordinate=" << num(cfem::pade::max_abs_imag_coordinate(grid)) << "\n";
      return 0;
    }
    if (bvp_cmd->parsed())
    {
      const Complex k = parse_wavenumber(bvp_k);
      const Complex lambda = k * k;
      const Complex exact = 1.0 / cfem::scalar::exact_dtn(lambda, bvp_length).k_diag;
      const std::vector<int> ns = bvp_sweep.empty() ? std::vector<int>{bvp_n} : parse_sweep(bvp_sweep);
      std::cout << "n,u0_re,u0_im,exact_re,exact_im,error\n";
      for (const int n : ns)
      {
        const auto sol = cfem::scalar::solve_two_point(make_grid(n, bvp_length, bvp_order), lambda, 1.0, 0.0);
        std::cout << n << "," << num(sol.u0.real()) << "," << num(sol.u0.imag()) << "," << num(exact.real()) << ","
                  << num(exact.imag()) << "," << num(cfem::scalar::relative_error(exact, sol.u0)) << "\n";
      }
      return 0;
    }
    if (laplace_cmd->parsed())
    {
      return run_sweep(build_config(bench::ExperimentId::e3_laplace2d, laplace_flags), laplace_flags);
    }
    if (helmholtz_cmd->parsed())
    {
      return run_sweep(build_config(bench::ExperimentId::e4_helmholtz2d, helmholtz_flags), helmholtz_flags);
    }
    if (multi_cmd->parsed())
    {
      return run_sweep(build_config(bench::ExperimentId::e5_multidomain, multi_flags), multi_flags);
    }
    if (elastic_cmd->parsed())
    {
      const auto c = build_config(bench::ExperimentId::e6_elastic, elastic_flags);
      const auto rows = bench::interface_breakdown(c);
      std::cout << "n,joint";
      for (const double x : rows.front().x)
      {
        std::cout << ",x=" << num(x);
      }
      std::cout << "\n";
      for (const auto &r : rows)
      {
        std::cout << r.n << "," << num(r.joint);
        for (const double e : r.per_interface)
        {
          std::cout << "," << num(e);
        }
        std::cout << "\n";
      }
      return 0;
    }
    if (run_cmd->parsed())
    {
      auto c = bench::load_config(run_flags.config);
      if (run_flags.no_timing)
      {
        c.record_timing = false;
      }
      return run_sweep(c, run_flags);
    }
  }
  catch (const std::exception &e)
  {
    std::cerr << "cfem: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
