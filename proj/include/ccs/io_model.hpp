#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ccs {

/// One spin-orbital channel of the radial problem.
struct Channel {
  int l = 0;
  double mu = 1.0;
  /// +infinity marks a confining channel.
  double threshold = 0.0;
  /// Columns other than l, mu, threshold; carried along, never used in
  /// the computation (except the optional spin columns, see spins()).
  std::map<std::string, std::string> extra;

  bool confining() const;
};

/// Spins of the two particles forming a channel, used for degeneracy factors.
struct ChannelSpin {
  double j_alpha = 0.0;
  double j_beta = 0.0;
};

struct ChannelTable {
  std::vector<Channel> channels;
  /// Extra column names in file order.
  std::vector<std::string> extra_columns;

  std::size_t size() const { return channels.size(); }
  const Channel& operator[](std::size_t i) const { return channels[i]; }

  /// Lowest threshold over all channels (may be +inf if all confine).
  double min_threshold() const;
  /// Lowest finite threshold, or +inf when every channel confines.
  double min_finite_threshold() const;

  /// Per-channel spins from the optional `Jalpha`/`Jbeta` columns.
  /// Returns nullopt when neither column exists; throws InputError when
  /// only one of them does or a value is unparseable.
  std::optional<std::vector<ChannelSpin>> spins() const;
};

/// Interior nodes r_n = n d (n = 1..M) of the uniform radial grid and the
/// potential matrix at each node. r = 0 and r = R = (M+1) d are implicit.
class PotentialGrid {
 public:
  PotentialGrid() = default;
  PotentialGrid(std::vector<double> nodes, std::size_t n_channels,
                std::vector<double> values);

  std::size_t n_channels() const { return n_channels_; }
  std::size_t n_nodes() const { return nodes_.size(); }
  double step() const { return step_; }
  /// Outer Dirichlet radius R = (M+1) d.
  double radius() const { return step_ * static_cast<double>(nodes_.size() + 1); }

  std::span<const double> nodes() const { return nodes_; }
  /// 0-based node index n (radius (n+1) d), channels i, j.
  double operator()(std::size_t n, std::size_t i, std::size_t j) const {
    return values_[(n * n_channels_ + i) * n_channels_ + j];
  }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> nodes_;
  std::size_t n_channels_ = 0;
  double step_ = 0.0;
  std::vector<double> values_;
};

/// Relative per-node tolerance on r_n = n d.
inline constexpr double kGridUniformityTolerance = 1e-9;

ChannelTable load_channels(const std::filesystem::path& path);
PotentialGrid load_potential(const std::filesystem::path& path, std::size_t n_channels);

/// Parse from in-memory text; `source` only labels error messages.
ChannelTable parse_channels(const std::string& text, const std::string& source = "channels.csv");
PotentialGrid parse_potential(const std::string& text, std::size_t n_channels,
                              const std::string& source = "potential.csv");

/// Shortest round-trip formatting, so write -> load reproduces every finite
/// value bit for bit.
void write_channels(const std::filesystem::path& path, const ChannelTable& table);
void write_potential(const std::filesystem::path& path, const PotentialGrid& grid);

/// max over non-confining i, j of |V_ij(r_n) - T_i delta_ij| at node n.
double deviation_from_threshold(const PotentialGrid& grid, const ChannelTable& channels,
                                std::size_t n);

/// Largest node radius where the potential still deviates from the
/// threshold matrix by more than epsilon; 0 when no node does.
double numerical_range(const PotentialGrid& grid, const ChannelTable& channels, double epsilon);

/// 1e-8 times the largest deviation over the grid.
double default_range_epsilon(const PotentialGrid& grid, const ChannelTable& channels);

/// Parses `inf`, `+inf`, `infinity` (any case) or a decimal number.
std::optional<double> parse_real(std::string_view token);

}  // namespace ccs
