#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pipct/error.hpp"
#include "pipct/expression.hpp"
#include "pipct/interval.hpp"

namespace pipct {

using Function = std::function<double(double)>;

enum class SingularityKind { kJump, kKink };

struct Singularity {
  double x = 0.0;
  SingularityKind kind = SingularityKind::kKink;
  friend bool operator==(const Singularity&, const Singularity&) = default;
};

/// Named test function with the metadata the experiments need.
struct RegistryEntry {
  std::string name;
  std::string description;
  Function f;
  Interval domain{-1.0, 1.0};
  std::vector<Singularity> singularities;
  /// Smoothness order k and variation V_k on `domain`, when known.
  std::optional<int> k;
  std::optional<double> V_k;
};

/// Piecewise-smooth test function with a jump at -0.4 and a square-root
/// kink at 0.4.
inline double jump_kink_function(double x) {
  if (x < -0.4) return x * x * x;
  if (x < 0.4) return x * x + 1.0;
  return 1.16 - std::pow(x - 0.4, 0.5);
}

inline const std::vector<RegistryEntry>& function_registry() {
  static const std::vector<RegistryEntry> entries = [] {
    using K = SingularityKind;
    std::vector<RegistryEntry> r;
    r.push_back({"jump_kink", "x^3 | x^2+1 | 1.16-(x-0.4)^(1/2), breaks at -0.4, 0.4",
                 jump_kink_function, Interval(-1, 1),
                 {{-0.4, K::kJump}, {0.4, K::kKink}}, std::nullopt, std::nullopt});
    // V_k = int_0^pi |f^(k+1)(cos t)| dt with the jump of f^(k) as a delta.
    r.push_back({"x_abs_x", "x|x|", [](double x) { return x * std::abs(x); },
                 Interval(-1, 1), {{0.0, K::kKink}}, 2, 4.0});
    r.push_back({"abs", "|x|", [](double x) { return std::abs(x); }, Interval(-1, 1),
                 {{0.0, K::kKink}}, 1, 2.0});
    r.push_back({"sign", "sign(x)",
                 [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); },
                 Interval(-1, 1), {{0.0, K::kJump}}, 0, 2.0});
    r.push_back({"exp", "exp(x)", [](double x) { return std::exp(x); }, Interval(-1, 1),
                 {}, std::nullopt, std::nullopt});
    r.push_back({"runge", "1/(1+25x^2)", [](double x) { return 1.0 / (1.0 + 25.0 * x * x); },
                 Interval(-1, 1), {}, std::nullopt, std::nullopt});
    r.push_back({"identity", "x", [](double x) { return x; }, Interval(-1, 1), {},
                 std::nullopt, std::nullopt});
    r.push_back({"cubic", "x^3", [](double x) { return x * x * x; }, Interval(-1, 1), {},
                 std::nullopt, std::nullopt});
    r.push_back({"one", "1", [](double) { return 1.0; }, Interval(-1, 1), {},
                 std::nullopt, std::nullopt});
    return r;
  }();
  return entries;
}

inline const RegistryEntry& registry_lookup(const std::string& name) {
  for (const auto& e : function_registry()) {
    if (e.name == name) return e;
  }
  throw InvalidArgument("unknown registry function '" + name + "'");
}

/// (sub-interval, expression) pair of a piecewise definition.
struct ExpressionPiece {
  double a = 0.0;
  double b = 0.0;
  std::string expr;
  friend bool operator==(const ExpressionPiece&, const ExpressionPiece&) = default;
};

/// Where the target function comes from: a registry name, a piecewise
/// expression definition, or a CSV file of (x, y) samples.
struct FunctionSpec {
  struct Named {
    std::string name;
    friend bool operator==(const Named&, const Named&) = default;
  };
  struct Pieces {
    std::vector<ExpressionPiece> pieces;
    friend bool operator==(const Pieces&, const Pieces&) = default;
  };
  struct Samples {
    std::string path;
    friend bool operator==(const Samples&, const Samples&) = default;
  };

  std::variant<Named, Pieces, Samples> source = Named{"jump_kink"};

  static FunctionSpec named(std::string name) { return {Named{std::move(name)}}; }

  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;
};

/// Piecewise function built from expressions; cells are [a_i, b_i) with the
/// last one closed. Outside the tiled domain the value is NaN.
class PiecewiseExpressionFunction {
 public:
  explicit PiecewiseExpressionFunction(const std::vector<ExpressionPiece>& pieces) {
    if (pieces.empty()) throw InvalidArgument("piecewise definition has no pieces");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const auto& p = pieces[i];
      Interval iv(p.a, p.b);  // validates a < b
      if (i > 0 && pieces[i - 1].b != p.a) {
        std::ostringstream os;
        os << "piecewise definition: piece " << i << " starts at " << p.a
           << " but the previous piece ends at " << pieces[i - 1].b
           << " (pieces must tile the domain in order)";
        throw InvalidArgument(os.str());
      }
      breaks_.push_back(p.a);
      exprs_.push_back(Expression::parse(p.expr));
    }
    breaks_.push_back(pieces.back().b);
  }

  double operator()(double x) const {
    if (!(x >= breaks_.front() && x <= breaks_.back())) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - breaks_.begin());
    idx = std::min(idx, breaks_.size() - 1) - 1;
    return exprs_[idx](x);
  }

  Interval domain() const { return Interval(breaks_.front(), breaks_.back()); }
  std::vector<double> interior_breaks() const {
    return {breaks_.begin() + 1, breaks_.end() - 1};
  }

 private:
  std::vector<double> breaks_;
  std::vector<Expression> exprs_;
};

/// Piecewise-linear interpolant of (x, y) samples read from CSV.
class SampledFunction {
 public:
  SampledFunction(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size()) {
      throw InvalidArgument("sampled function needs >= 2 (x, y) rows");
    }
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
        throw InvalidArgument("sampled function has non-finite values");
      }
      if (i > 0 && !(xs_[i - 1] < xs_[i])) {
        throw InvalidArgument("sampled x values must be strictly increasing");
      }
    }
  }

  /// Reads "x,y" rows; a non-numeric first line is treated as a header.
  static SampledFunction from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open sample file '" + path + "'");
    std::vector<double> xs, ys;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream row(line);
      double x = 0.0, y = 0.0;
      if (!(row >> x >> y)) {
        if (first) {
          first = false;
          continue;
        }
        throw InvalidArgument("malformed sample row '" + line + "' in " + path);
      }
      first = false;
      xs.push_back(x);
      ys.push_back(y);
    }
    return SampledFunction(std::move(xs), std::move(ys));
  }

  double operator()(double x) const {
    if (!(x >= xs_.front() && x <= xs_.back())) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    if (i >= xs_.size()) return ys_.back();
    const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
  }

  Interval domain() const { return Interval(xs_.front(), xs_.back()); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// A FunctionSpec turned into something callable.
struct ResolvedFunction {
  Function f;
  std::string label;
  std::optional<Interval> domain;
  std::vector<Singularity> singularities;
};

inline ResolvedFunction resolve(const FunctionSpec& spec) {
  return std::visit(
      [](const auto& src) -> ResolvedFunction {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, FunctionSpec::Named>) {
          const auto& e = registry_lookup(src.name);
          return {e.f, e.name, e.domain, e.singularities};
        } else if constexpr (std::is_same_v<T, FunctionSpec::Pieces>) {
          auto fn = std::make_shared<PiecewiseExpressionFunction>(src.pieces);
          std::vector<Singularity> sing;
          // Interface points are not classified; treat them as jumps so that
          // evaluation collars stay conservative.
          for (double x : fn->interior_breaks()) sing.push_back({x, SingularityKind::kJump});
          return {[fn](double x) { return (*fn)(x); }, "piecewise", fn->domain(), sing};
        } else {
          auto fn = std::make_shared<SampledFunction>(SampledFunction::from_csv(src.path));
          return {[fn](double x) { return (*fn)(x); }, "samples:" + src.path,
                  fn->domain(), {}};
        }
      },
      spec.source);
}

}  // namespace pipct
