#pragma once

// Potentials h(x) with lower bound h0 > -1: constant, periodic, coercive.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fraclog/errors.hpp"
#include "fraclog/lattice.hpp"

namespace fraclog {

enum class PotentialKind { constant, periodic, coercive };

inline const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::constant: return "constant";
    case PotentialKind::periodic: return "periodic";
    case PotentialKind::coercive: return "coercive";
  }
  return "?";
}

class Potential {
 public:
  static Potential constant(double value, double h0 = 0.0) {
    Potential p(PotentialKind::constant, h0);
    p.value_ = value;
    p.validate();
    return p;
  }

  /// `cells` is indexed lexicographically by (x_1 mod p_1, ..., x_d mod p_d).
  static Potential periodic(std::vector<int> period, std::vector<double> cells, double h0 = 0.0) {
    Potential p(PotentialKind::periodic, h0);
    p.period_ = std::move(period);
    p.cells_ = std::move(cells);
    p.validate();
    return p;
  }

  /// h(x) = rate * |x - x0|_1.
  static Potential coercive(std::vector<Coord> x0, double rate, double h0 = 0.0) {
    Potential p(PotentialKind::coercive, h0);
    p.x0_ = std::move(x0);
    p.value_ = rate;
    p.validate();
    return p;
  }

  PotentialKind kind() const noexcept { return kind_; }
  double h0() const noexcept { return h0_; }
  double value() const noexcept { return value_; }
  double rate() const noexcept { return value_; }
  const std::vector<int>& period() const noexcept { return period_; }
  const std::vector<double>& cells() const noexcept { return cells_; }
  const std::vector<Coord>& x0() const noexcept { return x0_; }

  double operator()(std::span<const Coord> x) const {
    switch (kind_) {
      case PotentialKind::constant:
        return value_;
      case PotentialKind::periodic: {
        if (x.size() != period_.size()) throw ConfigError("potential: site dimension does not match period");
        std::size_t idx = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
          const int p = period_[k];
          const int r = ((x[k] % p) + p) % p;
          idx = idx * static_cast<std::size_t>(p) + static_cast<std::size_t>(r);
        }
        return cells_[idx];
      }
      case PotentialKind::coercive:
        return value_ * static_cast<double>(l1_distance(x, x0_));
    }
    return 0.0;
  }

  /// Values at every site of the box, also checking inf h >= h0 there.
  std::vector<double> sample(const LatticeBox& box) const {
    if (kind_ == PotentialKind::periodic && period_.size() != static_cast<std::size_t>(box.dim())) {
      throw ConfigError("potential: period length differs from dimension", "potential.period");
    }
    if (kind_ == PotentialKind::coercive && x0_.size() != static_cast<std::size_t>(box.dim())) {
      throw ConfigError("potential: x0 length differs from dimension", "potential.x0");
    }
    std::vector<double> out(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
      out[i] = (*this)(box.site(i));
      if (out[i] < h0_) throw ConfigError("potential: value below h0 inside the box", "potential.h0");
    }
    return out;
  }

 private:
  Potential(PotentialKind kind, double h0) : kind_(kind), h0_(h0) {}

  void validate() const {
    if (!(h0_ > -1.0 && h0_ <= 0.0)) throw ConfigError("potential: h0 must lie in (-1, 0]", "potential.h0");
    switch (kind_) {
      case PotentialKind::constant:
        if (!std::isfinite(value_) || value_ < h0_) {
          throw ConfigError("potential: constant value must be finite and >= h0", "potential.value");
        }
        break;
      case PotentialKind::periodic: {
        if (period_.empty()) throw ConfigError("potential: empty period", "potential.period");
        std::size_t cells = 1;
        for (int p : period_) {
          if (p < 1) throw ConfigError("potential: period entries must be >= 1", "potential.period");
          cells *= static_cast<std::size_t>(p);
        }
        if (cells_.size() != cells) {
          throw ConfigError("potential: need " + std::to_string(cells) + " cell values", "potential.cells");
        }
        for (double c : cells_) {
          if (!std::isfinite(c) || c < h0_) throw ConfigError("potential: cell value below h0", "potential.cells");
        }
        break;
      }
      case PotentialKind::coercive:
        if (x0_.empty()) throw ConfigError("potential: coercive base point missing", "potential.x0");
        if (!(value_ > 0.0) || !std::isfinite(value_)) {
          throw ConfigError("potential: coercive rate must be positive", "potential.rate");
        }
        break;
    }
  }

  PotentialKind kind_;
  double h0_;
  double value_ = 0.0;
  std::vector<int> period_;
  std::vector<double> cells_;
  std::vector<Coord> x0_;
};

inline double eval_potential(const Potential& h, std::span<const Coord> x) { return h(x); }

}  // namespace fraclog
