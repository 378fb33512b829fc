// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cfem/types.hpp"

/// Convergence-study harness: configuration, sweeps, CSV output and
/// CFEM-versus-regular-FEM summaries.
namespace cfem::bench
{

enum class ExperimentId
{
  e1_elliptic,
  e2_helmholtz1d,
  e3_laplace2d,
  e4_helmholtz2d,
  e5_multidomain,
  e6_elastic,
};

std::string to_string(ExperimentId id);
ExperimentId experiment_from_string(const std::string &name);

/// One sweep. For e1/e2, params are k or omega values; for e3..e6, params
/// are frequencies omega of the 2D problem.
struct ExperimentConfig
{
  ExperimentId experiment = ExperimentId::e1_elliptic;
  std::vector<double> params;
  std::vector<int> n;
  std::vector<std::string> orderings{"phase"};  // "phase" | "interleave"

  double length = 1.0;                 // e1/e2 interval
  double height = 1.0;                 // 2D layer height
  int nz = 200;
  std::vector<double> subdomains;      // x lengths, e3..e6
  Complex modulus{1.0, 0.0};           // G of the first subdomain
  std::vector<Complex> scales;         // modulus multiplier per subdomain
  double rho = 1.0;
  double nu = 0.35;                    // e6

  int reference_nx = 4096;             // regular-FEM elements over the whole x extent
  std::vector<int> baseline_nx;        // regular-FEM sweep, same convention
  std::string metric = "left";         // "left" | "right" | "interfaces"
  bool record_timing = true;

  // Standard setup of each experiment.
  static ExperimentConfig defaults(ExperimentId id);
};

// Missing keys take defaults(experiment); unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json &j);
ExperimentConfig load_config(const std::string &path);
nlohmann::json to_json(const ExperimentConfig &config);

struct ConvergenceRecord
{
  std::string experiment;
  int n = 0;            // CFEM element count per subdomain, or regular-FEM nx
  double param = 0.0;
  double error = 0.0;
  double seconds = 0.0;
  std::string ordering; // "phase", "interleave", or "regular" for the baseline
};

// Sweep over params x n x orderings (plus the regular-FEM baseline when
// baseline_nx is set). Points run on a worker pool capped by CFEM_THREADS;
// records come back sorted by (ordering, param, n).
std::vector<ConvergenceRecord> run_experiment(const ExperimentConfig &config);

int worker_count();

// Header experiment,n,param,error,seconds,ordering; 15 significant digits;
// rows sorted by (param, n).
std::string format_csv(std::vector<ConvergenceRecord> records);
void emit_csv(const std::vector<ConvergenceRecord> &records, const std::string &path);

struct BaselineRow
{
  double target = 0.0;
  std::optional<int> cfem_n;
  std::optional<int> fem_nx;
};

// Smallest n (nx) from which every larger swept value stays at or below
// each target.
std::vector<BaselineRow> compare_baseline(const std::vector<ConvergenceRecord> &cfem,
                                          const std::vector<ConvergenceRecord> &fem,
                                          const std::vector<double> &targets = {1e-2, 1e-3, 1e-4});
std::string format_baseline(const std::vector<BaselineRow> &rows);

// Records of one (param, ordering) curve, sorted by n.
std::vector<ConvergenceRecord> curve(const std::vector<ConvergenceRecord> &records, double param,
                                     const std::string &ordering);

// 1 + the largest n whose error is still >= plateau (stagnation before the
// super-exponential drop); the first n of the curve if none is.
int convergence_onset(const std::vector<ConvergenceRecord> &curve, double plateau = 0.5);

// Least-squares slope of log(error) against log(n).
double loglog_slope(const std::vector<ConvergenceRecord> &curve);

struct ThresholdCheck
{
  std::string name;
  bool pass = false;
  std::string detail;
};

// Pass/fail thresholds of the experiment, evaluated on whichever of the
// required sweep points are present in records.
std::vector<ThresholdCheck> check_thresholds(const ExperimentConfig &config,
                                             const std::vector<ConvergenceRecord> &records);

/// Per-interface errors of one CFEM solve (e3..e6, first param).
struct InterfaceBreakdown
{
  int n = 0;
  double joint = 0.0;
  std::vector<double> x;
  std::vector<double> per_interface;
};

std::vector<InterfaceBreakdown> interface_breakdown(const ExperimentConfig &config);

}  // namespace cfem::bench
