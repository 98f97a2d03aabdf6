#include <ostream>

#include "mksys/time/system.hpp"

namespace mksys {

namespace {

struct Table {
  std::string name;
  std::size_t n;
  std::vector<std::string> coords;
  const Morphism* joint;
};

std::vector<Table> tables(const GSystem& sys, const GTrajectory& traj, std::size_t upto) {
  auto join = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  std::vector<Table> out;
  for (std::size_t n = 0; n <= upto && n < traj.phi.size(); ++n)
    out.push_back({"phi", n, sys.S.coordinate_names(n), &traj.phi[n]});
  for (std::size_t n = 0; n < upto && n < traj.s.size(); ++n)
    out.push_back({"s", n, join(sys.S.coordinate_names(n), sys.I.coordinate_names(n + 1)), &traj.s[n]});
  for (std::size_t n = 0; n < upto && n < traj.p.size(); ++n)
    out.push_back({"p", n, join(sys.O.coordinate_names(n), sys.I.coordinate_names(n + 1)), &traj.p[n]});
  return out;
}

std::vector<std::string> outcome(const FiniteObject& x, Index i) {
  std::vector<std::string> v;
  auto t = x.decode(i);
  for (std::size_t k = 0; k < t.size(); ++k) v.push_back(x.factor_labels(k)[t[k]]);
  return v;
}

}  // namespace

void emit_csv(std::ostream& os, const GSystem& sys, const GTrajectory& traj, std::size_t upto) {
  bool first = true;
  for (const auto& t : tables(sys, traj, upto)) {
    if (!first) os << '\n';
    first = false;
    os << "table,n";
    for (const auto& c : t.coords) os << ',' << c;
    os << ",prob,decimal\n";
    for (const auto& [col, w] : t.joint->row(0)) {
      os << t.name << ',' << t.n;
      for (const auto& v : outcome(t.joint->cod(), col)) os << ',' << v;
      os << ',' << to_string(w) << ',' << to_decimal(w) << '\n';
    }
  }
}

Json emit_json(const GSystem& sys, const GTrajectory& traj, std::size_t upto) {
  Json out = Json::object();
  for (const auto& name : {"phi", "s", "p"}) out[name] = Json::array();
  for (const auto& t : tables(sys, traj, upto)) {
    Json rows = Json::array();
    for (const auto& [col, w] : t.joint->row(0))
      rows.push_back({{"outcome", outcome(t.joint->cod(), col)}, {"prob", to_string(w)}, {"decimal", to_decimal(w)}});
    out[t.name].push_back({{"n", t.n}, {"coords", t.coords}, {"rows", rows}});
  }
  return out;
}

}  // namespace mksys
