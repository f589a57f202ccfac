#pragma once

// Finite coin-toss scenario lattice.
//
// Scenarios are finite toss sequences truncated at a horizon T. A process is
// adapted when its value at time n is keyed by the first n tosses only; here
// that holds by construction because values are stored per (n, prefix).
// Paths of a given length are ordered lexicographically with up before down,
// which is also their storage index inside a level.

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairprice {

inline constexpr bool kUp = true;
inline constexpr bool kDown = false;

// Largest horizon accepted unless a caller raises the cap explicitly.
inline constexpr int kDefaultHorizonCap = 24;
// Hard ceiling imposed by the path encoding and by memory (2^n doubles per level).
inline constexpr int kMaxHorizon = 30;

// Throws std::domain_error when horizon < 0 or horizon > cap (cap itself
// must not exceed kMaxHorizon).
void check_horizon(int horizon, int cap = kDefaultHorizonCap);

class TossPath {
 public:
  TossPath() = default;
  TossPath(std::initializer_list<bool> outcomes);
  explicit TossPath(const std::vector<bool>& outcomes);

  // Path of the given length whose lexicographic rank is index.
  static TossPath from_index(std::uint64_t index, int length);
  // Parses the U/D alphabet; "-" and "" are the empty path.
  static TossPath parse(std::string_view text);

  int size() const { return length_; }
  bool empty() const { return length_ == 0; }
  // true for up (head), false for down (tail).
  bool operator[](int i) const;

  // Rank among all paths of the same length; the level storage index.
  std::uint64_t index() const { return bits_; }

  TossPath truncate(int n) const;
  TossPath append(bool up) const;

  // U/D string, "-" for the empty path.
  std::string to_string() const;

  friend bool operator==(const TossPath&, const TossPath&) = default;

 private:
  // Toss i (0-based) is bit (length - 1 - i); a set bit means down.
  std::uint64_t bits_ = 0;
  int length_ = 0;
};

// Prefix of the first n outcomes; std::domain_error when n > path.size().
TossPath truncate(const TossPath& path, int n);

// All 2^T paths of length T, lexicographic with up first.
std::vector<TossPath> enumerate_paths(int horizon);

struct BinaryLattice {
  int horizon = 0;

  explicit BinaryLattice(int t, int cap = kDefaultHorizonCap) : horizon(t) { check_horizon(t, cap); }
  static std::size_t node_count(int n) { return std::size_t{1} << n; }
};

// i.i.d. Bernoulli tosses with P(up) = p.
class PathMeasure {
 public:
  explicit PathMeasure(double p);
  double up() const { return p_; }
  double down() const { return 1.0 - p_; }

 private:
  double p_;
};

class LatticeProcess {
 public:
  explicit LatticeProcess(int horizon, double fill = 0.0, int horizon_cap = kDefaultHorizonCap);

  // f(n, prefix) for every n <= horizon and every prefix of length n.
  static LatticeProcess from_function(int horizon, const std::function<double(int, const TossPath&)>& f,
                                      int horizon_cap = kDefaultHorizonCap);

  int horizon() const { return static_cast<int>(levels_.size()) - 1; }

  double at(int n, const TossPath& prefix) const;
  void set(int n, const TossPath& prefix, double value);

  std::span<const double> level(int n) const;
  std::span<double> level(int n);

 private:
  std::vector<std::vector<double>> levels_;
};

// Probability of a finite path: product of p over ups and 1 - p over downs.
double path_probability(const PathMeasure& m, const TossPath& path);

// Probabilities of all length-n paths in storage order.
std::vector<double> path_probabilities(const PathMeasure& m, int n);

// E[f_n] over the length-n prefixes.
double expectation(const PathMeasure& m, const LatticeProcess& f, int n);

// E[f_{n+1} | first n tosses = prefix].
double conditional_expectation_step(const PathMeasure& m, const LatticeProcess& f, int n, const TossPath& prefix);

// The same for every prefix of length n at once, in storage order.
std::vector<double> conditional_expectation_level(const PathMeasure& m, const LatticeProcess& f, int n);

// Whether a function of the full length-T path depends only on its first n
// tosses. Checked exhaustively with exact comparison.
bool is_measurable_at(const std::function<double(const TossPath&)>& f, const BinaryLattice& lattice, int n);

}  // namespace fairprice
