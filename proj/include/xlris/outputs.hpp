#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xlris {

// One Monte Carlo observation. status is "converged", "max_sweeps" or
// "infeasible"; infeasible rows carry zero rates and are excluded from the
// summary statistics (they count into skip_fraction instead).
struct TrialRow {
  double sweep_value = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double rate_bits = 0;
  double rate_user = 0;
  double rate_eve = 0;
  int iters = 0;
  std::string status;
};

struct SweepResult {
  std::string label;  // file stem: <label>.csv, <label>_summary.csv, <label>.svg
  std::string axis;   // human-readable sweep axis name for the plot
  std::vector<TrialRow> rows;
};

struct SummaryRow {
  double sweep_value = 0;
  double mean = 0;
  double median = 0;
  double p10 = 0;
  double p90 = 0;
  double skip_fraction = 0;
};

// Per-sweep-point statistics over feasible rows, in ascending sweep order.
// Percentiles use linear interpolation between order statistics.
std::vector<SummaryRow> summarize(const SweepResult& r);

// Raw rows: header sweep_value,trial,seed,rate_bits,rate_user,rate_eve,iters,status.
// UTF-8, LF line endings, doubles printed round-trip exact.
void write_raw_csv(const SweepResult& r, const std::string& path);

// Summary: header sweep_value,mean,median,p10,p90,skip_fraction.
void write_summary_csv(const SweepResult& r, const std::string& path);

// Median line with a p10..p90 band per result, shared axes.
void write_svg(const std::vector<SweepResult>& results, const std::string& title,
               const std::string& path);

// The whole bundle for each result into out_dir (created if needed):
// <label>.csv, <label>_summary.csv, <label>.svg.
void emit_outputs(const std::vector<SweepResult>& results,
                  const std::string& out_dir);

// Round-trip exact double formatting shared by the writers ("%.17g" with a
// shorter form whenever it parses back bit-identically).
std::string format_double(double v);

} // namespace xlris
