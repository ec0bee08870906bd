#include "dsim/brackets.hpp"

#include "dsim/config.hpp"
#include "dsim/rmat.hpp"

namespace dsim {

namespace {
constexpr BracketKind kAllKinds[] = {BracketKind::pb_cotangent, BracketKind::pb_plus,    BracketKind::pb_minus,
                                     BracketKind::pb_B,         BracketKind::pb_G,       BracketKind::pb_fM,
                                     BracketKind::qpb,          BracketKind::red_cot_1,  BracketKind::red_cot_2,
                                     BracketKind::red_heis_1,   BracketKind::red_heis_2, BracketKind::red_quasi_1,
                                     BracketKind::red_quasi_2};
}

const char* to_string(BracketKind k) {
  switch (k) {
    case BracketKind::pb_cotangent: return "pb_cotangent";
    case BracketKind::pb_plus: return "pb_plus";
    case BracketKind::pb_minus: return "pb_minus";
    case BracketKind::pb_B: return "pb_B";
    case BracketKind::pb_G: return "pb_G";
    case BracketKind::pb_fM: return "pb_fM";
    case BracketKind::qpb: return "qpb";
    case BracketKind::red_cot_1: return "red_cot_1";
    case BracketKind::red_cot_2: return "red_cot_2";
    case BracketKind::red_heis_1: return "red_heis_1";
    case BracketKind::red_heis_2: return "red_heis_2";
    case BracketKind::red_quasi_1: return "red_quasi_1";
    case BracketKind::red_quasi_2: return "red_quasi_2";
  }
  return "?";
}

BracketKind parse_bracket_kind(const std::string& s) {
  if (s == "red_quasi") return BracketKind::red_quasi_1;
  for (BracketKind k : kAllKinds)
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::Usage, "unknown bracket kind '" + s + "'");
}

Space bracket_space(BracketKind k) {
  switch (k) {
    case BracketKind::pb_cotangent: return Space::cotangent;
    case BracketKind::pb_plus:
    case BracketKind::pb_minus: return Space::heisenberg_K;
    case BracketKind::pb_B:
    case BracketKind::pb_G:
    case BracketKind::pb_fM: return Space::heisenberg_GB;
    case BracketKind::qpb: return Space::quasi;
    case BracketKind::red_cot_1: return Space::red_cot_1;
    case BracketKind::red_cot_2: return Space::red_cot_2;
    case BracketKind::red_heis_1: return Space::red_heis_1;
    case BracketKind::red_heis_2: return Space::red_heis_2;
    case BracketKind::red_quasi_1: return Space::red_quasi_1;
    case BracketKind::red_quasi_2: return Space::red_quasi_2;
  }
  return Space::cotangent;
}

BracketKind unreduced_kind(BracketKind k) {
  switch (k) {
    case BracketKind::red_cot_1:
    case BracketKind::red_cot_2: return BracketKind::pb_cotangent;
    case BracketKind::red_heis_1:
    case BracketKind::red_heis_2: return BracketKind::pb_fM;
    case BracketKind::red_quasi_1:
    case BracketKind::red_quasi_2: return BracketKind::qpb;
    default: return k;
  }
}

bool is_reduced(BracketKind k) { return unreduced_kind(k) != k; }

namespace {

void check_slice_regular(const PhasePoint& p) {
  const MatC& d = p[slice_component(p.space)];
  RegularKind kind = RegularKind::torus;
  if (p.space == Space::red_cot_2) kind = RegularKind::cartan;
  if (p.space == Space::red_heis_2) kind = RegularKind::b0;
  if (!is_regular(d, kind))
    throw Error(ErrorCode::Regularity, std::string("slice point of ") + to_string(p.space) + " is not regular");
}

double G(const MatC& a, const MatC& b) { return form_G(a, b); }
double I(const MatC& a, const MatC& b) { return form_I(a, b); }

MatC rho(const MatC& x) { return (proj_G(x) - proj_B(x)) * cplx(0.5); }

}  // namespace

double bracket(BracketKind k, const Observable& f, const Observable& h, const PhasePoint& p) {
  const Space want = bracket_space(k);
  if (p.space != want)
    throw Error(ErrorCode::WrongSpace, std::string(to_string(k)) + " needs a " + to_string(want) + " point, got " +
                                           to_string(p.space));
  if (!accepts(f.space(), p.space) || !accepts(h.space(), p.space))
    throw Error(ErrorCode::WrongSpace, std::string(to_string(k)) + ": observable defined on another space");
  if (is_slice(p.space)) check_slice_regular(p);
  auto d = [&](const Observable& o, Flavor fl) { return derivative(o, p, fl); };
  const cplx iu(0.0, 1.0);

  switch (k) {
    case BracketKind::pb_cotangent: {
      const MatC d2f = d(f, Flavor::d2), d2h = d(h, Flavor::d2);
      return G(d(f, Flavor::nabla1), d2h) - G(d(h, Flavor::nabla1), d2f) + G(p[1], commutator(d2f, d2h));
    }
    case BracketKind::pb_plus:
    case BracketKind::pb_minus: {
      const double s = k == BracketKind::pb_plus ? 1.0 : -1.0;
      return I(d(f, Flavor::nabla), rho(d(h, Flavor::nabla))) + s * I(d(f, Flavor::nablap), rho(d(h, Flavor::nablap)));
    }
    case BracketKind::pb_B: {
      const MatC& b = p[1];
      return I(d(f, Flavor::D2p), inverse(b) * d(h, Flavor::D2) * b);
    }
    case BracketKind::pb_G: {
      const MatC& g = p[0];
      return -I(d(f, Flavor::D1p), g.adjoint() * d(h, Flavor::D1) * g);
    }
    case BracketKind::pb_fM: {
      const MatC &g = p[0], &b = p[1];
      const MatC d2f = d(f, Flavor::D2), d2h = d(h, Flavor::D2);
      const MatC d1f = d(f, Flavor::D1), d1h = d(h, Flavor::D1);
      return I(d(f, Flavor::D2p), inverse(b) * d2h * b) - I(d(f, Flavor::D1p), g.adjoint() * d1h * g) + I(d1f, d2h) -
             I(d1h, d2f);
    }
    case BracketKind::qpb: {
      const MatC f1 = d(f, Flavor::nabla1), f1p = d(f, Flavor::nabla1p), f2 = d(f, Flavor::nabla2),
                 f2p = d(f, Flavor::nabla2p);
      const MatC h1 = d(h, Flavor::nabla1), h1p = d(h, Flavor::nabla1p), h2 = d(h, Flavor::nabla2),
                 h2p = d(h, Flavor::nabla2p);
      const double twice = G(h1p, f2) - G(h2, f1p) + G(h1, f2p) - G(h2p, f1) + G(h2, f1) - G(h1, f2) + G(h1p, f2p) -
                           G(h2p, f1p) + G(h1, f1p) - G(h1p, f1) + G(h2p, f2) - G(h2, f2p);
      return 0.5 * twice;
    }
    case BracketKind::red_cot_1: {
      const MatC& q = p[0];
      const MatC d2f = d(f, Flavor::d2), d2h = d(h, Flavor::d2);
      return G(d(f, Flavor::nabla1), d2h) - G(d(h, Flavor::nabla1), d2f) +
             G(p[1], commutator(apply_R_Q(q, d2f), d2h) + commutator(d2f, apply_R_Q(q, d2h)));
    }
    case BracketKind::red_cot_2: {
      const MatC& lam = p[1];
      const MatC n1f = d(f, Flavor::nabla1), n1h = d(h, Flavor::nabla1);
      return G(n1f, d(h, Flavor::d2)) - G(n1h, d(f, Flavor::d2)) +
             G(d(f, Flavor::nabla1p), apply_r_lambda(lam, d(h, Flavor::nabla1p))) - G(n1f, apply_r_lambda(lam, n1h));
    }
    case BracketKind::red_heis_1: {
      const MatC &q = p[0], &b = p[1];
      const MatC binv = inverse(b);
      const MatC d2f = d(f, Flavor::D2), d2h = d(h, Flavor::D2);
      return I(d(f, Flavor::D1), d2h) - I(d(h, Flavor::D1), d2f) +
             I(apply_R_Q(q, proj_B(b * d(h, Flavor::D2p) * binv)), d2f) -
             I(apply_R_Q(q, proj_B(b * d(f, Flavor::D2p) * binv)), d2h);
    }
    case BracketKind::red_heis_2: {
      const MatC& gam = p[1];
      const MatC n1f = d(f, Flavor::nabla1), n1h = d(h, Flavor::nabla1);
      return G(n1f, d(h, Flavor::D2)) - G(n1h, d(f, Flavor::D2)) +
             2.0 * G(d(f, Flavor::nabla1p), apply_R_Gamma2(gam, d(h, Flavor::nabla1p) * iu)) -
             2.0 * G(n1f, apply_R_Gamma2(gam, n1h * iu));
    }
    case BracketKind::red_quasi_1: {
      const MatC& q = p[0];
      const MatC n2f = d(f, Flavor::nabla2), n2h = d(h, Flavor::nabla2);
      return G(d(h, Flavor::nabla1), n2f) - G(d(f, Flavor::nabla1), n2h) +
             G(d(f, Flavor::nabla2p), apply_R_Q(q, d(h, Flavor::nabla2p))) - G(n2f, apply_R_Q(q, n2h));
    }
    case BracketKind::red_quasi_2: {
      const MatC& q = p[1];
      const MatC n1f = d(f, Flavor::nabla1), n1h = d(h, Flavor::nabla1);
      return G(d(f, Flavor::nabla2), n1h) - G(d(h, Flavor::nabla2), n1f) + G(n1f, apply_R_Q(q, n1h)) -
             G(d(f, Flavor::nabla1p), apply_R_Q(q, d(h, Flavor::nabla1p)));
    }
  }
  throw Error(ErrorCode::Usage, "bracket: unknown kind");
}

Observable bracket_observable(BracketKind k, const Observable& f, const Observable& h) {
  Observable o(
      f.space(), [k, f, h](const PhasePoint& p) { return bracket(k, f, h, p); }, {}, f.invariant() && h.invariant(),
      "{" + f.descriptor() + ", " + h.descriptor() + "}");
  o.set_fd_step(tolerances().fd_step_second);
  return o;
}

double jacobiator(BracketKind k, const Observable& f, const Observable& g, const Observable& h, const PhasePoint& p) {
  return bracket(k, bracket_observable(k, f, g), h, p) + bracket(k, bracket_observable(k, g, h), f, p) +
         bracket(k, bracket_observable(k, h, f), g, p);
}

SliceDerivatives slice_derivatives(const Observable& f, const PhasePoint& p) {
  if (p.space != Space::red_heis_2) throw Error(ErrorCode::WrongSpace, "slice_derivatives needs a (g,Gamma) point");
  const MatC& gam = p[1];
  const MatC x0 = derivative(f, p, Flavor::D2);
  const MatC y = derivative(f, p, Flavor::D1p) - derivative(f, p, Flavor::D1);
  const MatC sym = y + y.adjoint();
  const MatC rg = apply_R_Gamma2(gam, sym);
  SliceDerivatives out;
  out.D2p = x0 + apply_rho_Gamma(gam, sym) * cplx(0.5);
  out.conj = x0 + sym * cplx(0.5) + rg;
  out.D2 = x0 + (y.adjoint() - y) * cplx(0.5) + rg;
  return out;
}

double sklyanin_residual(const Observable& f1, const Observable& f2, const PhasePoint& p) {
  if (parent_space(p.space) != Space::heisenberg_GB) throw Error(ErrorCode::WrongSpace, "sklyanin_residual needs (g,b)");
  const MatC& g = p[0];
  const double lhs = -form_I(derivative(f1, p, Flavor::D1p), g.adjoint() * derivative(f2, p, Flavor::D1) * g);
  const double rhs = form_G(derivative(f1, p, Flavor::nabla1p), apply_R_i(derivative(f2, p, Flavor::nabla1p))) -
                     form_G(derivative(f1, p, Flavor::nabla1), apply_R_i(derivative(f2, p, Flavor::nabla1)));
  return lhs - rhs;
}

}  // namespace dsim
