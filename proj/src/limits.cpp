#include "ccs/limits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ccs/errors.hpp"

namespace ccs {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

LimitStatus much_greater(double ratio, const LimitFactors& f) {
  if (ratio >= f.strict) return LimitStatus::pass;
  if (ratio >= f.soft) return LimitStatus::warn;
  return LimitStatus::fail;
}

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[200];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

}  // namespace

std::string to_string(LimitStatus s) {
  switch (s) {
    case LimitStatus::pass: return "pass";
    case LimitStatus::warn: return "warn";
    case LimitStatus::fail: return "fail";
  }
  return "?";
}

LimitStatus EnergyReport::status() const {
  LimitStatus s = LimitStatus::pass;
  for (const auto& c : conditions) s = std::max(s, c.status);
  return s;
}

LimitsContext make_limits_context(const ChannelTable& channels, const PotentialGrid& grid, double potential_range) {
  LimitsContext ctx;
  ctx.channels = channels;
  ctx.step = grid.step();
  ctx.radius = grid.radius();
  ctx.potential_range = potential_range;
  const std::size_t last = grid.n_nodes() - 1;
  for (std::size_t i = 0; i < channels.size(); ++i) ctx.diagonal_at_edge.push_back(grid(last, i, i));
  return ctx;
}

EnergyWindow energy_window(const LimitsContext& ctx, const LimitFactors& factors) {
  EnergyWindow w;
  w.global_min = ctx.channels.min_threshold();
  w.shannon_max = std::numeric_limits<double>::infinity();
  w.confining_max = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ctx.channels.size(); ++i) {
    const auto& ch = ctx.channels[i];
    if (ch.confining())
      w.confining_max = std::min(w.confining_max, ctx.diagonal_at_edge[i] / factors.strict);
    else
      w.shannon_max = std::min(w.shannon_max, kPi2 / (2.0 * ch.mu * ctx.step * ctx.step) + ch.threshold);
  }
  return w;
}

EnergyReport validate_energy(double energy, const LimitsContext& ctx, const LimitFactors& factors) {
  EnergyReport report;
  report.energy = energy;
  auto& out = report.conditions;
  const double r_max = ctx.radius;

  {
    const double lowest = ctx.channels.min_threshold();
    out.push_back({"global_min", -1, energy >= lowest ? LimitStatus::pass : LimitStatus::fail, energy - lowest,
                   format("E - min T = %.6g (need >= 0)", energy - lowest)});
  }

  for (std::size_t i = 0; i < ctx.channels.size(); ++i) {
    const auto& ch = ctx.channels[i];
    const int idx = static_cast<int>(i);
    if (ch.confining()) {
      // E << V_ii(R); a non-positive E below a positive wall is trivially fine.
      const double wall = ctx.diagonal_at_edge[i];
      LimitStatus s;
      double ratio;
      if (energy <= 0.0) {
        ratio = std::numeric_limits<double>::infinity();
        s = wall > energy ? LimitStatus::pass : LimitStatus::fail;
      } else {
        ratio = wall / energy;
        s = much_greater(ratio, factors);
      }
      out.push_back({"confining", idx, s, ratio, format("V_ii(R)/E = %.6g (V_ii(R) = %.6g)", ratio, wall)});
      continue;
    }

    const double shannon = kPi2 / (2.0 * ch.mu * ctx.step * ctx.step) + ch.threshold;
    out.push_back({"shannon", idx, energy < shannon ? LimitStatus::pass : LimitStatus::fail, shannon - energy,
                   format("E must stay below pi^2/(2 mu d^2) + T = %.6g", shannon)});

    const double excess = energy - ch.threshold;
    if (excess <= 0.0) {
      // Closed channel: the decaying component must vanish at R.
      const double decay = std::sqrt(2.0 * ch.mu * -excess) * r_max;
      out.push_back({"below_threshold", idx, much_greater(decay, factors), decay,
                     format("sqrt(2 mu (T - E)) R = %.6g (need >> 1)", decay)});
    }
    if (excess >= 0.0) {
      const double span = r_max - ctx.potential_range;
      const double window = span > 0.0 ? kPi2 / (2.0 * ch.mu * span * span) : std::numeric_limits<double>::infinity();
      out.push_back({"above_threshold_window", idx, excess > window ? LimitStatus::pass : LimitStatus::fail,
                     excess - window,
                     format("E - T = %.6g must exceed pi^2/(2 mu (R - r_V)^2) = %.6g", excess, window)});
      if (ch.l > 0) {
        const double bound = (ch.l + std::numbers::pi) * (ch.l + std::numbers::pi) / (2.0 * ch.mu * r_max * r_max);
        const double ratio = excess / bound;
        out.push_back({"above_threshold_centrifugal", idx, much_greater(ratio, factors), ratio,
                       format("(E - T) / ((l + pi)^2/(2 mu R^2)) = %.6g (bound %.6g)", ratio, bound)});
      }
    }
  }
  return report;
}

SweepValidation valid_sweep(const std::vector<double>& energies, const LimitsContext& ctx, const LimitFactors& factors) {
  SweepValidation sweep;
  for (double e : energies) {
    auto report = validate_energy(e, ctx, factors);
    if (report.status() != LimitStatus::fail) sweep.accepted.push_back(e);
    sweep.reports.push_back(std::move(report));
  }
  if (sweep.accepted.empty())
    throw ValidationError("no requested energy lies inside the accessible window (" +
                          std::to_string(energies.size()) + " rejected)");
  return sweep;
}

void print_report(std::ostream& out, const SweepValidation& sweep, bool verbose) {
  char buf[64];
  for (const auto& r : sweep.reports) {
    const auto status = r.status();
    if (!verbose && status == LimitStatus::pass) continue;
    std::snprintf(buf, sizeof buf, "E = %.6g: ", r.energy);
    out << buf << to_string(status);
    for (const auto& c : r.conditions) {
      if (!verbose && c.status == LimitStatus::pass) continue;
      out << "\n    [" << to_string(c.status) << "] " << c.condition;
      if (c.channel >= 0) out << " (channel " << c.channel + 1 << ")";
      out << ": " << c.detail;
    }
    out << '\n';
  }
  out << sweep.accepted.size() << " of " << sweep.reports.size() << " energies accepted\n";
}

void write_report_csv(std::ostream& out, const SweepValidation& sweep) {
  char buf[64];
  for (const auto& r : sweep.reports)
    for (const auto& c : r.conditions) {
      std::snprintf(buf, sizeof buf, "%.11e", r.energy);
      out << buf << ',' << c.condition;
      if (c.channel >= 0) out << '[' << c.channel + 1 << ']';
      out << ',' << to_string(c.status) << '\n';
    }
}

}  // namespace ccs
