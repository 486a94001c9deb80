#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccs/io_model.hpp"

namespace ccs {

/// Everything the energy windows depend on.
struct LimitsContext {
  ChannelTable channels;
  double step = 0.0;             // d
  double radius = 0.0;           // R
  double potential_range = 0.0;  // r_V, also used as the potential radius
  /// V_ii at the last node for each channel (only read for confining ones).
  std::vector<double> diagonal_at_edge;
};

LimitsContext make_limits_context(const ChannelTable& channels, const PotentialGrid& grid, double potential_range);

/// Ratios for "much greater/smaller" conditions: >= strict passes,
/// >= soft warns, anything lower fails.
struct LimitFactors {
  double strict = 10.0;
  double soft = 5.0;
};

enum class LimitStatus { pass, warn, fail };
std::string to_string(LimitStatus s);

struct ConditionResult {
  std::string condition;  // e.g. "shannon", "below_threshold"
  int channel = -1;       // 0-based; -1 for global conditions
  LimitStatus status = LimitStatus::pass;
  double value = 0.0;  // the compared quantity (ratio or margin)
  std::string detail;
};

struct EnergyReport {
  double energy = 0.0;
  std::vector<ConditionResult> conditions;
  LimitStatus status() const;
};

/// Closed-form window edges; per-channel bands are listed in the report.
struct EnergyWindow {
  double global_min = 0.0;
  double shannon_max = 0.0;    // min over finite channels of pi^2/(2 mu d^2) + T
  double confining_max = 0.0;  // min over confining channels of V_ii(R)/strict
};

EnergyWindow energy_window(const LimitsContext& ctx, const LimitFactors& factors = {});

EnergyReport validate_energy(double energy, const LimitsContext& ctx, const LimitFactors& factors = {});

struct SweepValidation {
  std::vector<double> accepted;  // status pass or warn
  std::vector<EnergyReport> reports;  // every requested energy, in order
  std::size_t rejected() const { return reports.size() - accepted.size(); }
};

/// Throws ValidationError when no energy survives.
SweepValidation valid_sweep(const std::vector<double>& energies, const LimitsContext& ctx,
                            const LimitFactors& factors = {});

/// Human-readable report: one line per energy with non-passing conditions.
void print_report(std::ostream& out, const SweepValidation& sweep, bool verbose = false);
/// Rows `E, condition, status` (one row per evaluated condition).
void write_report_csv(std::ostream& out, const SweepValidation& sweep);

}  // namespace ccs
