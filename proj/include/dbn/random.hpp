#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dbn {

/// Source of every random decision the pipeline makes. Each decision is a
/// uniform choice of an index in [0, n); a choice among one option is forced
/// and never consumes randomness, so scripted replays only list real choices.
class DecisionSource {
 public:
  virtual ~DecisionSource() = default;

  std::size_t choose(std::size_t n) {
    if (n == 0) throw std::invalid_argument("choose() over an empty set");
    if (n == 1) return 0;
    return draw(n);
  }

 protected:
  virtual std::size_t draw(std::size_t n) = 0;
};

/// Pseudo-random decisions from a 64-bit Mersenne Twister.
class SeededSource final : public DecisionSource {
 public:
  explicit SeededSource(std::uint64_t seed) : engine_(seed) {}

 protected:
  std::size_t draw(std::size_t n) override {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

class ScriptExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Replays a fixed list of decisions; used to force the worked examples.
class ScriptedSource final : public DecisionSource {
 public:
  explicit ScriptedSource(std::vector<std::size_t> script) : script_(std::move(script)) {}

  std::size_t consumed() const { return pos_; }
  bool exhausted() const { return pos_ == script_.size(); }

 protected:
  std::size_t draw(std::size_t n) override {
    if (pos_ >= script_.size()) {
      throw ScriptExhausted("scripted decision " + std::to_string(pos_) + " requested but not provided");
    }
    const std::size_t v = script_[pos_++];
    if (v >= n) {
      throw std::out_of_range("scripted decision " + std::to_string(v) + " not below " +
                              std::to_string(n));
    }
    return v;
  }

 private:
  std::vector<std::size_t> script_;
  std::size_t pos_ = 0;
};

/// Walks every path of a decision tree in lexicographic order. Run the
/// consumer once per path and call next() until it returns false.
class OdometerSource final : public DecisionSource {
 public:
  bool next() {
    while (!path_.empty() && path_.back().first + 1 == path_.back().second) path_.pop_back();
    depth_ = 0;
    if (path_.empty()) return false;
    ++path_.back().first;
    return true;
  }

 protected:
  std::size_t draw(std::size_t n) override {
    if (depth_ < path_.size()) {
      if (path_[depth_].second != n) throw std::logic_error("decision tree is not stable across replays");
      return path_[depth_++].first;
    }
    path_.emplace_back(0, n);
    ++depth_;
    return 0;
  }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> path_;
  std::size_t depth_ = 0;
};

/// Every outcome of `run(source)` over all decision paths, in path order.
/// Throws std::length_error past `limit` outcomes.
template <class Run>
auto enumerate_outcomes(Run&& run, std::size_t limit = std::size_t{1} << 20) {
  OdometerSource source;
  std::vector<decltype(run(source))> out;
  do {
    if (out.size() == limit) throw std::length_error("enumeration exceeds its size limit");
    out.push_back(run(source));
  } while (source.next());
  return out;
}

/// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for stream `index` of a master seed (counter-based split).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace dbn
