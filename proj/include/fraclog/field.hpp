#pragma once

// Real fields on a box, implicitly zero outside it.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fraclog/errors.hpp"
#include "fraclog/lattice.hpp"
#include "fraclog/summation.hpp"

namespace fraclog {

class Field {
 public:
  explicit Field(BoxPtr box) : box_(std::move(box)) {
    if (!box_) throw ConfigError("Field: null box");
    values_.assign(box_->size(), 0.0);
  }

  Field(BoxPtr box, std::vector<double> values) : box_(std::move(box)), values_(std::move(values)) {
    if (!box_) throw ConfigError("Field: null box");
    if (values_.size() != box_->size()) throw ConfigError("Field: value count does not match box size");
    for (double v : values_) {
      if (!std::isfinite(v)) throw NumericalError("Field: non-finite value");
    }
  }

  const LatticeBox& box() const noexcept { return *box_; }
  const BoxPtr& box_ptr() const noexcept { return box_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  Field& operator+=(const Field& o) {
    require_same_box(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_same_box(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  Field& operator*=(double a) noexcept {
    for (double& v : values_) v *= a;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double a, Field u) { return u *= a; }
  friend Field operator*(Field u, double a) { return u *= a; }

  void require_same_box(const Field& o) const {
    if (!(*box_ == *o.box_)) throw ConfigError("fields live on different boxes");
  }

 private:
  BoxPtr box_;
  std::vector<double> values_;
};

/// Field equal to `value` at a single site and zero elsewhere.
inline Field point_mass(const BoxPtr& box, std::span<const Coord> x, double value = 1.0) {
  Field u(box);
  u[box->index(x)] = value;
  return u;
}

inline Field point_mass(const BoxPtr& box, std::initializer_list<Coord> x, double value = 1.0) {
  const std::vector<Coord> site(x);
  return point_mass(box, std::span<const Coord>(site), value);
}

struct SignParts {
  Field plus;
  Field minus;
};

/// u+ = max(u, 0), u- = min(u, 0).
inline SignParts split_signs(const Field& u) {
  Field p(u.box_ptr());
  Field m(u.box_ptr());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) {
      p[i] = u[i];
    } else if (u[i] < 0.0) {
      m[i] = u[i];
    }
  }
  return {std::move(p), std::move(m)};
}

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// l^p norm for p in [1, inf]; p = kInfNorm gives the sup norm.
inline double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: exponent must be >= 1");
  double scale = 0.0;
  for (double v : u.values()) scale = std::max(scale, std::fabs(v));
  if (std::isinf(p) || scale == 0.0) return scale;
  CompensatedSum acc;
  for (double v : u.values()) {
    if (v != 0.0) acc += std::pow(std::fabs(v) / scale, p);
  }
  return scale * std::pow(acc.value(), 1.0 / p);
}

inline double dot(const Field& u, const Field& v) {
  u.require_same_box(v);
  CompensatedSum acc;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc.value();
}

inline double l2_squared(const Field& u) {
  CompensatedSum acc;
  for (double v : u.values()) acc += v * v;
  return acc.value();
}

// ---------------------------------------------------------------------------
// CSV persistence: header "# d=<d> R=<R>", then one "x1,...,xd,value" line per
// nonzero site in box order, 17 significant digits.

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_field_csv(std::ostream& os, const Field& u) {
  const auto& box = u.box();
  os << "# d=" << box.dim() << " R=" << box.radius() << '\n';
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    for (Coord c : box.site(i)) os << c << ',';
    os << format_double(u[i]) << '\n';
  }
}

/// Parses a field CSV. The box is taken from the header unless `box` is given,
/// in which case the header must match it.
inline Field read_field_csv(std::istream& is, BoxPtr box = nullptr) {
  std::string line;
  int d = 0;
  int radius = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (std::sscanf(line.c_str(), "# d=%d R=%d", &d, &radius) != 2) {
      throw ConfigError("field csv: missing '# d=<d> R=<R>' header");
    }
    break;
  }
  if (d < 1 || radius < 0) throw ConfigError("field csv: missing or invalid header");
  if (box) {
    if (box->dim() != d || box->radius() != radius) throw ConfigError("field csv: header does not match box");
  } else {
    box = enumerate_box(d, radius);
  }
  Field u(box);
  std::vector<Coord> x(static_cast<std::size_t>(d));
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ss, tok, ',')) toks.push_back(tok);
    if (toks.size() != static_cast<std::size_t>(d) + 1) {
      throw ConfigError("field csv: line " + std::to_string(lineno) + " has wrong column count");
    }
    try {
      for (int k = 0; k < d; ++k) {
        std::size_t pos = 0;
        x[static_cast<std::size_t>(k)] = std::stoi(toks[static_cast<std::size_t>(k)], &pos);
        if (pos != toks[static_cast<std::size_t>(k)].size()) throw std::invalid_argument("trailing");
      }
      std::size_t pos = 0;
      const double v = std::stod(toks.back(), &pos);
      if (pos != toks.back().size() || !std::isfinite(v)) throw std::invalid_argument("value");
      if (!box->contains(x)) throw DomainError("field csv: line " + std::to_string(lineno) + " site outside box");
      u[box->index(x)] = v;
    } catch (const std::invalid_argument&) {
      throw ConfigError("field csv: line " + std::to_string(lineno) + " is not numeric");
    } catch (const std::out_of_range&) {
      throw ConfigError("field csv: line " + std::to_string(lineno) + " out of range");
    }
  }
  return u;
}

}  // namespace fraclog
