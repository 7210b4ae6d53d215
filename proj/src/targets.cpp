#include "kst/targets.hpp"

#include <cmath>
#include <numbers>

#include "kst/expression.hpp"

namespace kst {

const std::vector<TargetFunction>& builtin_targets() {
  static const std::vector<TargetFunction> reg = [] {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<TargetFunction> v;
    v.push_back({[](double, double) { return 1.0; }, "const1", 0.0});
    v.push_back({[](double x, double y) { return x + y; }, "xplusy", std::numbers::sqrt2});
    v.push_back({[](double x, double y) { return x * y; }, "xy", std::numbers::sqrt2});
    v.push_back({[two_pi](double x, double y) { return std::sin(two_pi * x) * std::sin(two_pi * y); },
                 "sin2pi", two_pi});
    // max gradient norm of 1/(1+25 r^2) is 50r/(1+25r^2)^2 at r = 1/sqrt(75)
    v.push_back({[](double x, double y) {
                   const double dx = x - 0.5, dy = y - 0.5;
                   return 1.0 / (1.0 + 25.0 * (dx * dx + dy * dy));
                 },
                 "runge", 3.25});
    return v;
  }();
  return reg;
}

TargetFunction make_target(const std::string& spec) {
  for (const auto& t : builtin_targets())
    if (t.name == spec) return t;
  auto expr = std::make_shared<Expression>(Expression::parse(spec));
  TargetFunction t;
  t.f = [expr](double x, double y) { return expr->eval(x, y); };
  t.name = spec;
  t.lipschitz = std::nullopt;
  return t;
}

}  // namespace kst
