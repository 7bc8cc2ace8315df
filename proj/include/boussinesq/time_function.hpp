#pragma once

// Registry of closed-form scalar functions of time, evaluated as Jets so that
// every derivative is exact.
//
//   {"name":"const","value":v}
//   {"name":"trig","offset":a,"slope":b,"amp":c,"freq":w,"phase":p}   a + b t + c sin(w t + p)
//   {"name":"exp","offset":a,"amp":c,"rate":r}                        a + c exp(r t)
//   {"name":"poly","coeffs":[c0,c1,...]}
//   {"name":"power","coef":c,"exponent":p,"shift":s}                  c (t + s)^p
//   {"name":"pow","base":{...},"exponent":p}                          base(t)^p
//   {"name":"rescaled","base":{...},"sigma":s}                        base(s t) / s
//   {"name":"sum","terms":[...]}, {"name":"product","factors":[...]}

#include <functional>
#include <optional>

#include "boussinesq/jet.hpp"
#include "json.hpp"

namespace boussinesq {

class TimeFunction {
 public:
  using Series = std::function<Jet(const Jet&)>;

  TimeFunction();
  TimeFunction(nlohmann::json desc, Series fn, std::optional<double> constant = std::nullopt);

  static TimeFunction from_json(const nlohmann::json& desc);
  static TimeFunction constant(double value);

  Jet operator()(const Jet& t) const { return fn_(t); }
  double operator()(double t) const { return fn_(Jet(t)).value(); }
  double derivative(double t, int order) const { return fn_(Jet::variable(t)).derivative(order); }

  const nlohmann::json& desc() const { return desc_; }
  const Series& series() const { return fn_; }
  /// Set when the function is a registered constant.
  std::optional<double> constant_value() const { return constant_; }

 private:
  nlohmann::json desc_;
  Series fn_;
  std::optional<double> constant_;
};

}  // namespace boussinesq
