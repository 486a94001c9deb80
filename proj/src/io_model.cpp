#include "ccs/io_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ccs/errors.hpp"

namespace ccs {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

// Splits text into non-blank lines, remembering 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    const auto line = trim(text.substr(start, end - start));
    if (!line.empty()) out.emplace_back(number, line);
    start = end + 1;
  }
  return out;
}

void write_real(std::string& out, double v) {
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace

bool Channel::confining() const { return std::isinf(threshold) && threshold > 0; }

double ChannelTable::min_threshold() const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& c : channels) t = std::min(t, c.threshold);
  return t;
}

double ChannelTable::min_finite_threshold() const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& c : channels)
    if (!c.confining()) t = std::min(t, c.threshold);
  return t;
}

std::optional<std::vector<ChannelSpin>> ChannelTable::spins() const {
  const bool has_alpha = std::ranges::find(extra_columns, "Jalpha") != extra_columns.end();
  const bool has_beta = std::ranges::find(extra_columns, "Jbeta") != extra_columns.end();
  if (!has_alpha && !has_beta) return std::nullopt;
  if (has_alpha != has_beta)
    throw InputError("channels.csv: spin columns Jalpha and Jbeta must be given together");

  // Accepts decimals and fractions such as 1/2.
  const auto parse_spin = [](const std::string& s, std::size_t row, const char* col) {
    double value = 0.0;
    const auto slash = s.find('/');
    std::optional<double> num = parse_real(s.substr(0, slash));
    if (num && slash != std::string::npos) {
      const auto den = parse_real(s.substr(slash + 1));
      num = (den && *den != 0.0) ? std::optional<double>(*num / *den) : std::nullopt;
    }
    if (!num || !std::isfinite(*num) || *num < 0 || std::fmod(2.0 * *num, 1.0) != 0.0)
      throw InputError("channels.csv: row " + std::to_string(row) + ", column " + col +
                       ": invalid spin '" + s + "'");
    value = *num;
    return value;
  };

  std::vector<ChannelSpin> out;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto& extra = channels[i].extra;
    out.push_back({parse_spin(extra.at("Jalpha"), i + 1, "Jalpha"),
                   parse_spin(extra.at("Jbeta"), i + 1, "Jbeta")});
  }
  return out;
}

PotentialGrid::PotentialGrid(std::vector<double> nodes, std::size_t n_channels,
                             std::vector<double> values)
    : nodes_(std::move(nodes)), n_channels_(n_channels), values_(std::move(values)) {
  if (n_channels_ == 0) throw InputError("potential grid needs at least one channel");
  if (nodes_.empty()) throw InputError("potential grid has no nodes");
  if (values_.size() != nodes_.size() * n_channels_ * n_channels_)
    throw InputError("potential grid: value count does not match M*N*N");
  step_ = nodes_.front();
  if (!(step_ > 0.0) || !std::isfinite(step_))
    throw InputError("potential grid: first node must be a positive radius (r_1 = d)");
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    if (n > 0 && !(nodes_[n] > nodes_[n - 1]))
      throw InputError("potential grid: nodes not strictly increasing at line " + std::to_string(n + 1));
    const double expected = step_ * static_cast<double>(n + 1);
    if (std::abs(nodes_[n] - expected) > kGridUniformityTolerance * expected)
      throw InputError("potential grid: non-uniform spacing at line " + std::to_string(n + 1) +
                       " (r = " + std::to_string(nodes_[n]) + ", expected n*d)");
  }
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!std::isfinite(values_[k]))
      throw InputError("potential grid: non-finite value at line " +
                       std::to_string(k / (n_channels_ * n_channels_) + 1));
}

std::optional<double> parse_real(std::string_view token) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) return std::nullopt;
  if (std::isnan(value)) return std::nullopt;
  return value;
}

ChannelTable parse_channels(const std::string& text, const std::string& source) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw InputError(source + ": empty file");
  const auto header = split_fields(lines.front().second);

  int col_l = -1, col_mu = -1, col_t = -1;
  ChannelTable table;
  std::vector<int> extra_index;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(header[c]);
    auto claim = [&](int& slot) {
      if (slot >= 0) throw InputError(source + ": duplicate column '" + name + "'");
      slot = static_cast<int>(c);
    };
    if (name == "l") claim(col_l);
    else if (name == "mu") claim(col_mu);
    else if (name == "threshold") claim(col_t);
    else {
      table.extra_columns.push_back(name);
      extra_index.push_back(static_cast<int>(c));
    }
  }
  for (auto [slot, name] : {std::pair{col_l, "l"}, {col_mu, "mu"}, {col_t, "threshold"}})
    if (slot < 0) throw InputError(source + ": missing required column '" + name + "'");
  if (lines.size() < 2) throw InputError(source + ": no channel rows");

  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto [line_no, line] = lines[r];
    const auto fields = split_fields(line);
    const auto where = [&, line_no = line_no](const char* col) {
      return source + ": line " + std::to_string(line_no) + ", column '" + col + "'";
    };
    if (fields.size() != header.size())
      throw InputError(source + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " entries, header has " +
                       std::to_string(header.size()));
    Channel ch;
    {
      const auto tok = fields[col_l];
      int l = 0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), l);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw InputError(where("l") + ": expected an integer, got '" + std::string(tok) + "'");
      if (l < 0) throw InputError(where("l") + ": must be non-negative");
      ch.l = l;
    }
    {
      const auto mu = parse_real(fields[col_mu]);
      if (!mu) throw InputError(where("mu") + ": unparseable number '" + std::string(fields[col_mu]) + "'");
      if (!(*mu > 0.0) || !std::isfinite(*mu)) throw InputError(where("mu") + ": must be positive and finite");
      ch.mu = *mu;
    }
    {
      const auto t = parse_real(fields[col_t]);
      if (!t) throw InputError(where("threshold") + ": unparseable number '" + std::string(fields[col_t]) + "'");
      if (std::isinf(*t) && *t < 0) throw InputError(where("threshold") + ": -inf is not a threshold");
      ch.threshold = *t;
    }
    for (std::size_t e = 0; e < extra_index.size(); ++e)
      ch.extra.emplace(table.extra_columns[e], std::string(fields[extra_index[e]]));
    table.channels.push_back(std::move(ch));
  }
  return table;
}

PotentialGrid parse_potential(const std::string& text, std::size_t n_channels, const std::string& source) {
  if (n_channels == 0) throw InputError(source + ": channel count must be positive");
  const std::size_t per_line = n_channels * n_channels + 1;
  std::vector<double> nodes;
  std::vector<double> values;

  std::string_view rest(text);
  std::size_t line_no = 0;
  while (!rest.empty()) {
    auto end = rest.find('\n');
    const auto raw = rest.substr(0, end);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end + 1);
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;

    std::size_t count = 0;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      const auto tok = line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos);
      const auto v = parse_real(tok);
      if (!v)
        throw InputError(source + ": line " + std::to_string(line_no) + ", entry " +
                         std::to_string(count + 1) + ": unparseable number '" + std::string(trim(tok)) + "'");
      if (count == 0) nodes.push_back(*v);
      else if (count < per_line) values.push_back(*v);
      ++count;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (count != per_line)
      throw InputError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(count) +
                       " entries, expected N^2+1 = " + std::to_string(per_line));
  }
  try {
    return PotentialGrid(std::move(nodes), n_channels, std::move(values));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

ChannelTable load_channels(const std::filesystem::path& path) {
  return parse_channels(read_file(path), path.string());
}

PotentialGrid load_potential(const std::filesystem::path& path, std::size_t n_channels) {
  return parse_potential(read_file(path), n_channels, path.string());
}

void write_channels(const std::filesystem::path& path, const ChannelTable& table) {
  std::string out = "l,mu,threshold";
  for (const auto& name : table.extra_columns) out += "," + name;
  out += '\n';
  for (const auto& ch : table.channels) {
    out += std::to_string(ch.l);
    out += ',';
    write_real(out, ch.mu);
    out += ',';
    write_real(out, ch.threshold);
    for (const auto& name : table.extra_columns) {
      out += ',';
      const auto it = ch.extra.find(name);
      if (it != ch.extra.end()) out += it->second;
    }
    out += '\n';
  }
  write_file(path, out);
}

void write_potential(const std::filesystem::path& path, const PotentialGrid& grid) {
  const std::size_t nn = grid.n_channels() * grid.n_channels();
  std::string out;
  out.reserve(grid.n_nodes() * (nn + 1) * 12);
  const auto nodes = grid.nodes();
  const auto values = grid.values();
  for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
    write_real(out, nodes[n]);
    for (std::size_t k = 0; k < nn; ++k) {
      out += ',';
      write_real(out, values[n * nn + k]);
    }
    out += '\n';
  }
  write_file(path, out);
}

double deviation_from_threshold(const PotentialGrid& grid, const ChannelTable& channels, std::size_t n) {
  const std::size_t nc = grid.n_channels();
  double dev = 0.0;
  for (std::size_t i = 0; i < nc; ++i) {
    if (channels[i].confining()) continue;
    for (std::size_t j = 0; j < nc; ++j) {
      if (channels[j].confining()) continue;
      const double t = i == j ? channels[i].threshold : 0.0;
      dev = std::max(dev, std::abs(grid(n, i, j) - t));
    }
  }
  return dev;
}

double numerical_range(const PotentialGrid& grid, const ChannelTable& channels, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("numerical_range: epsilon must be positive");
  if (channels.size() != grid.n_channels()) throw InputError("numerical_range: channel count mismatch");
  for (std::size_t n = grid.n_nodes(); n-- > 0;)
    if (deviation_from_threshold(grid, channels, n) > epsilon) return grid.nodes()[n];
  return 0.0;
}

double default_range_epsilon(const PotentialGrid& grid, const ChannelTable& channels) {
  double scale = 0.0;
  for (std::size_t n = 0; n < grid.n_nodes(); ++n)
    scale = std::max(scale, deviation_from_threshold(grid, channels, n));
  return scale > 0.0 ? 1e-8 * scale : std::numeric_limits<double>::min();
}

}  // namespace ccs
