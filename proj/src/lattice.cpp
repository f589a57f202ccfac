#include "fairprice/lattice.hpp"

#include <stdexcept>
#include <string>

#include "fairprice/simd/kernels.hpp"

namespace fairprice {

void check_horizon(int horizon, int cap) {
  if (cap > kMaxHorizon) {
    throw std::domain_error("horizon cap " + std::to_string(cap) + " exceeds the maximum of " +
                            std::to_string(kMaxHorizon));
  }
  if (horizon < 0) throw std::domain_error("horizon must be non-negative");
  if (horizon > cap) {
    throw std::domain_error("horizon " + std::to_string(horizon) + " exceeds the configured cap of " +
                            std::to_string(cap));
  }
}

TossPath::TossPath(std::initializer_list<bool> outcomes) : TossPath(std::vector<bool>(outcomes)) {}

TossPath::TossPath(const std::vector<bool>& outcomes) {
  if (outcomes.size() > static_cast<std::size_t>(kMaxHorizon)) {
    throw std::domain_error("toss path longer than " + std::to_string(kMaxHorizon));
  }
  for (bool up : outcomes) {
    bits_ = (bits_ << 1) | (up ? 0u : 1u);
  }
  length_ = static_cast<int>(outcomes.size());
}

TossPath TossPath::from_index(std::uint64_t index, int length) {
  if (length < 0 || length > kMaxHorizon) throw std::domain_error("toss path length out of range");
  if (index >> length != 0) throw std::domain_error("path index out of range for its length");
  TossPath path;
  path.bits_ = index;
  path.length_ = length;
  return path;
}

TossPath TossPath::parse(std::string_view text) {
  if (text == "-") return {};
  std::vector<bool> outcomes;
  outcomes.reserve(text.size());
  for (char c : text) {
    if (c == 'U') {
      outcomes.push_back(kUp);
    } else if (c == 'D') {
      outcomes.push_back(kDown);
    } else {
      throw std::invalid_argument("invalid toss path '" + std::string(text) + "': expected U/D or '-'");
    }
  }
  return TossPath(outcomes);
}

bool TossPath::operator[](int i) const {
  if (i < 0 || i >= length_) throw std::out_of_range("toss index out of range");
  return ((bits_ >> (length_ - 1 - i)) & 1u) == 0;
}

TossPath TossPath::truncate(int n) const {
  if (n < 0 || n > length_) {
    throw std::domain_error("cannot truncate a path of length " + std::to_string(length_) + " to " +
                            std::to_string(n));
  }
  return from_index(bits_ >> (length_ - n), n);
}

TossPath TossPath::append(bool up) const {
  if (length_ >= kMaxHorizon) throw std::domain_error("toss path longer than " + std::to_string(kMaxHorizon));
  return from_index((bits_ << 1) | (up ? 0u : 1u), length_ + 1);
}

std::string TossPath::to_string() const {
  if (length_ == 0) return "-";
  std::string out;
  out.reserve(static_cast<std::size_t>(length_));
  for (int i = 0; i < length_; ++i) out.push_back((*this)[i] ? 'U' : 'D');
  return out;
}

TossPath truncate(const TossPath& path, int n) { return path.truncate(n); }

std::vector<TossPath> enumerate_paths(int horizon) {
  check_horizon(horizon, kMaxHorizon);
  const std::uint64_t count = std::uint64_t{1} << horizon;
  std::vector<TossPath> paths;
  paths.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) paths.push_back(TossPath::from_index(i, horizon));
  return paths;
}

PathMeasure::PathMeasure(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("path measure requires 0 <= p <= 1");
}

LatticeProcess::LatticeProcess(int horizon, double fill, int horizon_cap) {
  check_horizon(horizon, horizon_cap);
  levels_.reserve(static_cast<std::size_t>(horizon) + 1);
  for (int n = 0; n <= horizon; ++n) levels_.emplace_back(BinaryLattice::node_count(n), fill);
}

LatticeProcess LatticeProcess::from_function(int horizon, const std::function<double(int, const TossPath&)>& f,
                                             int horizon_cap) {
  LatticeProcess x(horizon, 0.0, horizon_cap);
  for (int n = 0; n <= horizon; ++n) {
    auto values = x.level(n);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(n, TossPath::from_index(i, n));
  }
  return x;
}

double LatticeProcess::at(int n, const TossPath& prefix) const {
  if (prefix.size() != n) throw std::domain_error("process key: prefix length must equal the time index");
  return level(n)[prefix.index()];
}

void LatticeProcess::set(int n, const TossPath& prefix, double value) {
  if (prefix.size() != n) throw std::domain_error("process key: prefix length must equal the time index");
  level(n)[prefix.index()] = value;
}

std::span<const double> LatticeProcess::level(int n) const {
  if (n < 0 || n > horizon()) throw std::domain_error("time " + std::to_string(n) + " outside the process horizon");
  return levels_[static_cast<std::size_t>(n)];
}

std::span<double> LatticeProcess::level(int n) {
  if (n < 0 || n > horizon()) throw std::domain_error("time " + std::to_string(n) + " outside the process horizon");
  return levels_[static_cast<std::size_t>(n)];
}

double path_probability(const PathMeasure& m, const TossPath& path) {
  double prob = 1.0;
  for (int i = 0; i < path.size(); ++i) prob *= path[i] ? m.up() : m.down();
  return prob;
}

std::vector<double> path_probabilities(const PathMeasure& m, int n) {
  check_horizon(n, kMaxHorizon);
  std::vector<double> current{1.0};
  for (int k = 0; k < n; ++k) {
    std::vector<double> next(2 * current.size());
    simd::expand(current, next, m.up(), m.down());
    current = std::move(next);
  }
  return current;
}

double expectation(const PathMeasure& m, const LatticeProcess& f, int n) {
  if (n < 0 || n > f.horizon()) throw std::domain_error("expectation: time outside the process horizon");
  const auto probs = path_probabilities(m, n);
  return simd::dot(probs, f.level(n));
}

double conditional_expectation_step(const PathMeasure& m, const LatticeProcess& f, int n, const TossPath& prefix) {
  if (prefix.size() != n) throw std::domain_error("conditional expectation: prefix length must equal n");
  if (n < 0 || n + 1 > f.horizon()) throw std::domain_error("conditional expectation: n + 1 exceeds the horizon");
  const auto next = f.level(n + 1);
  const std::uint64_t i = prefix.index();
  return m.up() * next[2 * i] + m.down() * next[2 * i + 1];
}

std::vector<double> conditional_expectation_level(const PathMeasure& m, const LatticeProcess& f, int n) {
  if (n < 0 || n + 1 > f.horizon()) throw std::domain_error("conditional expectation: n + 1 exceeds the horizon");
  std::vector<double> out(BinaryLattice::node_count(n));
  simd::contract(f.level(n + 1), out, m.up(), m.down());
  return out;
}

bool is_measurable_at(const std::function<double(const TossPath&)>& f, const BinaryLattice& lattice, int n) {
  if (n < 0 || n > lattice.horizon) throw std::domain_error("measurability: time outside the lattice horizon");
  const int t = lattice.horizon;
  const std::uint64_t block = std::uint64_t{1} << (t - n);
  const std::uint64_t count = std::uint64_t{1} << t;
  // Paths sharing their first n tosses are contiguous in lexicographic order.
  for (std::uint64_t start = 0; start < count; start += block) {
    const double first = f(TossPath::from_index(start, t));
    for (std::uint64_t i = start + 1; i < start + block; ++i) {
      if (f(TossPath::from_index(i, t)) != first) return false;
    }
  }
  return true;
}

}  // namespace fairprice
