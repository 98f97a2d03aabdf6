#include <numeric>

#include "mksys/arenasys/arenasys.hpp"
#include "mksys/core/circuit.hpp"

namespace mksys {

namespace {

void require(bool cond, const std::string& hypothesis) {
  if (!cond) throw PreconditionViolation(hypothesis);
}

bool is_bijection(const Morphism& f) {
  if (!f.rows_are_points() || f.dom().size() != f.cod().size()) return false;
  std::vector<bool> hit(f.cod().size(), false);
  for (Index a = 0; a < f.dom().size(); ++a) {
    if (hit[f.image(a)]) return false;
    hit[f.image(a)] = true;
  }
  return true;
}

}  // namespace

SysXYSquare nabla(const SysXYSquare& s1, const SysXYSquare& s2, const Chart& g012) {
  const SysYMor& f0 = s1.left;
  require(s1.left == s2.left, "s1 and s2 must share the left system lens");
  require(s1.top.src == s2.top.src, "s1 and s2 must share the top-left system");
  require(f0.dst.a.is_unit(), "I0 must be unit");
  require(is_deterministic(f0.fsharp) && is_bijection(f0.fsharp), "f0 update must be a deterministic bijection");
  require(g012.residual.a.is_unit() && g012.residual.c.is_unit(), "g012 must have a unit residual");
  for (const auto* si : {&s1, &s2})
    require(si->bottom.residual.a.is_unit() && si->bottom.residual.c.is_unit(),
            "bottom charts of s1 and s2 must have a unit residual");

  const auto& I1 = s1.right.dst.a;
  const auto& O1 = s1.right.dst.c;
  const auto& I2 = s2.right.dst.a;
  const auto& O2 = s2.right.dst.c;
  require(g012.src == f0.dst, "g012 must start at the left interface");
  require(g012.dst == Interface{I1 * I2, O1 * O2}, "g012 must end at the tensor of the right interfaces");
  require(chart_marginal(g012, 0, I1.rank(), 0, O1.rank()) == s1.bottom, "the first projection of g012 must be the bottom chart of s1");
  require(chart_marginal(g012, I1.rank(), I2.rank(), O1.rank(), O2.rank()) == s2.bottom,
          "the second projection of g012 must be the bottom chart of s2");

  const auto& T = s1.top.src.s;
  const auto& O0 = f0.dst.c;
  const auto& S1 = s1.top.dst.s;
  const auto& S2 = s2.top.dst.s;

  // f0 ; g012♭ : T -> O1 O2 I1 I2 (I0 is the unit, so T ⊗ I0 = T)
  Circuit joint({{"T", T}});
  joint.apply(f0.f, {"T"}, {{"O0", O0}});
  joint.apply(g012.gflat, {"O0"}, {{"O1", O1}, {"O2", O2}, {"I1", I1}, {"I2", I2}});

  // s_i ; copy S_i ; f_i : T -> S_i I_i O_i
  auto leg = [&](const SysXYSquare& si, const char* S, const char* I, const char* O) {
    const auto& Si = si.top.dst.s;
    Circuit c({{"T", T}});
    c.apply(si.s, {"T"}, {{S, Si}, {I, si.right.dst.a}});
    c.copy(S, "S'");
    c.apply(si.right.f, {"S'"}, {{O, si.right.dst.c}});
    return c.result({S, I, O});
  };

  // t_i = leg_i ⊗_{I_i O_i} (f0 ; g012♭)
  const auto t1 = conditional_product(leg(s1, "S1", "I1", "O1"), joint.result({"I1", "O1", "I2", "O2"}),
                                      I1.rank() + O1.rank());
  const auto t2 = conditional_product(leg(s2, "S2", "I2", "O2"), joint.result({"I2", "O2", "I1", "O1"}),
                                      I2.rank() + O2.rank());

  // t = t1 ⊗_{I1 I2 O1 O2} t2, with the shared legs in the order I1 O1 I2 O2
  Circuit r1({{"T", T}});
  r1.apply(t1, {"T"}, {{"S1", S1}, {"I1", I1}, {"O1", O1}, {"I2", I2}, {"O2", O2}});
  Circuit r2({{"T", T}});
  r2.apply(t2, {"T"}, {{"S2", S2}, {"I2", I2}, {"O2", O2}, {"I1", I1}, {"O1", O1}});
  const auto t = conditional_product(r1.result({"S1", "I1", "O1", "I2", "O2"}),
                                     r2.result({"I1", "O1", "I2", "O2", "S2"}),
                                     I1.rank() + O1.rank() + I2.rank() + O2.rank());

  // s1∇s2 = t ; del_{O1 O2}, laid out as S1 S2 I1 I2
  Circuit n({{"T", T}});
  n.apply(t, {"T"}, {{"S1", S1}, {"I1", I1}, {"O1", O1}, {"I2", I2}, {"O2", O2}, {"S2", S2}});
  const Morphism s12 = n.result({"S1", "S2", "I1", "I2"});

  // φ012 = s1∇s2 ; π_{S1 S2};  φ012♭ = r0 ; s1∇s2 ; f1♯ ⊗ f2♯
  const Morphism phi012 = marginal_range(s12, 0, S1.rank() + S2.rank());
  Circuit fl({{"T~", s1.top.src.stilde}});
  fl.apply(s1.top.src.r, {"T~"}, {{"T", T}});
  fl.apply(s12, {"T"}, {{"S1", S1}, {"S2", S2}, {"I1", I1}, {"I2", I2}});
  fl.apply(s1.right.fsharp, {"S1", "I1"}, {{"S1~", s1.top.dst.stilde}});
  fl.apply(s2.right.fsharp, {"S2", "I2"}, {{"S2~", s2.top.dst.stilde}});

  SysXMor top{s1.top.src, s1.top.dst * s2.top.dst, fl.result({"S1~", "S2~"}), phi012};
  return {top, g012, f0, sys_ymor_tensor(s1.right, s2.right), s12};
}

}  // namespace mksys
