// Small tour of the library: a norm, the optimal-space functionals, a
// decomposition constant and a K-functional, printed as JSON.

#include <iostream>

#include "blattice/json_io.hpp"

int main() {
  using namespace blattice;

  const auto host = LatticeSpec::orlicz_fn(OrliczFunction::power_log(2.0, 1.0));
  const std::vector<double> a = {3.0, 1.0, 0.5};

  io::json out;
  out["host"] = io::to_json(host);
  out["norm_of_step"] = io::num(function_norm(StepFunction({{3.0, 0.25}, {1.0, 0.5}}), host));
  out["xu"] = io::to_json(xu_norm(a, host));
  out["xl"] = io::to_json(xl_norm(a, host));

  const auto ds = ds_constant(LatticeSpec::c0(), LatticeSpec::lp(1.0), 2.0, 16);
  out["ds_c0_l1"] = {{"Ds", io::num(ds.empirical_Ds)}, {"slope", io::num(ds.slope)}};

  const auto chi = StepFunction({Atom{1.0, 1.0}});
  io::json k = io::json::array();
  for (double t : {0.25, 1.0, 4.0}) k.push_back({io::num(t), io::num(k_functional(t, chi, CoupleSpec::l1_linf()))});
  out["k_chi"] = k;

  std::cout << io::dump(out);
}
