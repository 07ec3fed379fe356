#include "soscert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "soscert/errors.hpp"
#include "soscert/gram.hpp"
#include "soscert/sdp.hpp"

namespace soscert {

namespace {

double coefficient_scale(const Polynomial& p) {
  double s = 1;
  for (const auto& [m, c] : p.terms()) s += std::fabs(c.get_d());
  return s;
}

double noise(const VarietyData& var, const Polynomial& p) { return 1e3 * var.tol * coefficient_scale(p); }

double real_value(const Polynomial& p, const RootPoint& pt) { return evaluate_at(p, pt).real(); }

std::optional<Rational> positive_constant(const Polynomial& nf) {
  if (!nf.is_constant() || nf.is_zero()) return std::nullopt;
  const Rational c = nf.constant_term();
  if (sgn(c) <= 0) return std::nullopt;
  return c;
}

double g_scale(const std::vector<Polynomial>& g) {
  double s = 1;
  for (const auto& p : g) s = std::max(s, coefficient_scale(p));
  return s;
}

// Real part of the idempotent of point j as a polynomial on the basis of q.
RealPolynomial idempotent_poly(const QuotientRing& q, const VarietyData& var, std::size_t j) {
  std::vector<double> c(q.dimension());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = var.idempotents(k, j).real();
  return q.from_coordinates(c);
}

std::vector<std::vector<WeightedSquare>> strict_blocks(const ProblemInstance& inst, const Polynomial& f,
                                                       const Context& ctx);

}  // namespace

Context analyse(const ProblemInstance& inst) {
  if (inst.h.empty()) throw InvalidInput("at least one equality constraint is required");
  Context ctx;
  ctx.q = QuotientRing(groebner(inst.h));
  ctx.var = solve_variety(ctx.q, inst.options.tol, inst.options.seed);
  ctx.radical = ctx.var.is_radical;
  if (inst.radical && *inst.radical && !ctx.radical)
    throw InvalidInput("ideal declared radical but it is not");
  if (ctx.radical) {
    ctx.qj = ctx.q;
    ctx.varj = ctx.var;
  } else {
    ctx.qj = QuotientRing(ctx.var.radical);
    ctx.varj = solve_variety(ctx.qj, inst.options.tol, inst.options.seed);
    if (ctx.varj.points.size() != ctx.var.points.size())
      throw ClusterAmbiguity("radical and ideal have different numbers of points");
  }
  return ctx;
}

Perturbation perturb(const ProblemInstance& inst, const Polynomial& f, const Context& ctx) {
  const VarietyData& var = ctx.varj;
  const std::size_t n = inst.nvars();
  Perturbation out;
  out.blocks.resize(inst.g.size());
  const Membership mem = membership(var, inst.g, noise(var, Polynomial(n, Rational(1))) * g_scale(inst.g));
  const double thr = noise(var, f);
  for (std::size_t j : mem.in_s) {
    if (real_value(f, var.points[j]) <= thr)
      throw NotStrictlyPositiveOnS("f is not strictly positive at a real point of S");
  }
  struct Bump {
    std::size_t point;
    std::size_t g;
    Rational rho;
  };
  std::vector<Bump> bumps;
  for (std::size_t j : mem.excluded) {
    const double fv = real_value(f, var.points[j]);
    if (fv > thr) continue;
    const std::size_t gi = static_cast<std::size_t>(mem.violated[j]);
    const double gv = std::fabs(real_value(inst.g[gi], var.points[j]));
    Rational rho = 1;
    while (rho.get_d() * gv < 2 * std::max(-fv, 0.0) || fv + rho.get_d() * gv <= thr) rho *= 2;
    bumps.push_back({j, gi, rho});
  }
  out.f_tilde = ctx.q.normal_form(f);
  if (bumps.empty()) return out;

  // Target values of f~ at the real roots.
  std::vector<double> target(var.points.size(), 0.0);
  for (std::size_t j : var.real_points()) target[j] = real_value(f, var.points[j]);
  for (const auto& b : bumps)
    target[b.point] += b.rho.get_d() * std::fabs(real_value(inst.g[b.g], var.points[b.point]));

  for (unsigned bits = std::max(inst.options.precision_start, 8u); bits <= inst.options.max_bits; bits *= 2) {
    Perturbation cand;
    cand.blocks.resize(inst.g.size());
    Polynomial ft = f;
    for (const auto& b : bumps) {
      const Polynomial u = round_binary(idempotent_poly(ctx.qj, var, b.point), bits);
      cand.blocks[b.g].push_back({b.rho, u});
      ft -= u * u * inst.g[b.g] * b.rho;
    }
    ft = ctx.q.normal_form(ft);
    bool ok = true;
    for (std::size_t j : var.real_points())
      if (real_value(ft, var.points[j]) < 0.5 * target[j]) ok = false;
    if (ok) {
      cand.f_tilde = ft;
      return cand;
    }
  }
  throw PrecisionExceeded("perturbation polynomials need more than " + std::to_string(inst.options.max_bits) +
                          " bits");
}

std::vector<Polynomial> hensel_levels(const std::vector<QuotientRing>& chain, const Polynomial& theta,
                                      const Polynomial& theta0) {
  std::vector<Polynomial> out;
  Polynomial t = theta0;
  for (const auto& level : chain) {
    const Polynomial sigma = inverse_mod(level, t);
    t = level.normal_form((t + level.normal_form(theta * sigma)) * Rational(1, 2));
    out.push_back(t);
  }
  return out;
}

Polynomial hensel_sqrt(const std::vector<QuotientRing>& chain, const Polynomial& theta,
                       const Polynomial& theta0) {
  auto levels = hensel_levels(chain, theta, theta0);
  return levels.empty() ? theta0 : levels.back();
}

std::vector<WeightedSquare> sos_modulo(const Polynomial& p, const Context& ctx, const Options& opt) {
  return ctx.radical ? sos_modulo_radical(p, ctx.q, ctx.var, opt) : sos_modulo_nonradical(p, ctx, opt);
}

std::vector<WeightedSquare> sos_modulo_radical(const Polynomial& p, const QuotientRing& q,
                                               const VarietyData& var, const Options& opt) {
  if (q.dimension() == 0) return {};
  const Polynomial nf = q.normal_form(p);
  if (auto c = positive_constant(nf)) return {{*c, Polynomial(q.nvars(), Rational(1))}};
  return round_and_certify(q, var, nf, opt.precision_start, opt.max_bits).squares;
}

std::vector<WeightedSquare> sos_modulo_nonradical(const Polynomial& p, const Context& ctx,
                                                  const Options& opt) {
  const QuotientRing& qj = ctx.qj;
  const VarietyData& varj = ctx.varj;
  if (ctx.q.dimension() == 0) return {};
  const Polynomial nf = ctx.q.normal_form(p);
  if (auto c = positive_constant(nf)) return {{*c, Polynomial(ctx.q.nvars(), Rational(1))}};

  const RealGram rg = build_gram_distinguished(qj, varj, nf);
  const std::size_t d = qj.dimension();
  const auto basis = basis_polynomials(qj);
  const auto chain = ideal_power_chain(ctx.var.radical, ctx.q);

  for (unsigned bits = std::max(opt.precision_start, 24u); bits <= opt.max_bits; bits *= 2) {
    QMatrix theta(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) theta(i, k) = round_binary(rg.theta(i, k), bits);
    const auto inv = inverse(theta);
    if (!inv) continue;
    std::vector<Polynomial> tpolys(d, Polynomial(qj.nvars()));
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t i = 0; i < d; ++i)
        if (sgn(theta(i, k)) != 0) tpolys[k] += basis[i] * theta(i, k);
    const Eigen::MatrixXd m = to_eigen(*inv) * rg.theta;
    const Eigen::MatrixXd approx = m * m.transpose();

    ExactGram eg;
    try {
      eg = certify_gram(GramVariety::modulo(qj, tpolys, nf), approx, tpolys, opt.precision_start, opt.max_bits);
    } catch (const PrecisionExceeded&) {
      continue;
    }
    // The square to lift must be a unit modulo J.
    std::size_t best = 0;
    double best_val = -1;
    for (std::size_t k = 0; k < eg.squares.size(); ++k) {
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& pt : varj.points) lo = std::min(lo, std::abs(evaluate_at(eg.squares[k].square, pt)));
      if (lo > best_val) {
        best_val = lo;
        best = k;
      }
    }
    if (eg.squares.empty() || best_val <= 1e3 * varj.tol) continue;

    Polynomial rest = nf;
    for (std::size_t k = 0; k < eg.squares.size(); ++k)
      if (k != best) rest -= eg.squares[k].square * eg.squares[k].square * eg.squares[k].weight;
    const Rational w = eg.squares[best].weight;
    const Polynomial target = ctx.q.normal_form(rest * Rational(1 / w));
    Polynomial lifted;
    try {
      lifted = ctx.q.normal_form(hensel_sqrt(chain, target, eg.squares[best].square));
    } catch (const NotInvertible&) {
      continue;
    }
    std::vector<WeightedSquare> out = eg.squares;
    out[best].square = lifted;
    return out;
  }
  throw PrecisionExceeded("no liftable square root modulo the radical up to " + std::to_string(opt.max_bits) +
                          " bits");
}

namespace {

std::vector<std::vector<WeightedSquare>> strict_blocks(const ProblemInstance& inst, const Polynomial& f,
                                                       const Context& ctx) {
  std::vector<std::vector<WeightedSquare>> blocks(inst.g.size() + 1);
  if (inst.options.engine == Engine::Sdp) {
    ProblemInstance sub = inst;
    sub.f = f;
    return sdp_certify(sub, inst.options.order).blocks;
  }
  const Perturbation pert = perturb(inst, f, ctx);
  for (std::size_t i = 0; i < pert.blocks.size(); ++i) blocks[i + 1] = pert.blocks[i];
  blocks[0] = sos_modulo(pert.f_tilde, ctx, inst.options);
  return blocks;
}

Certificate start_certificate(const ProblemInstance& inst, Mode mode) {
  Certificate cert;
  cert.mode = mode;
  cert.variables = inst.variables;
  return cert;
}

}  // namespace

Certificate certify_strict(const ProblemInstance& inst) { return certify_strict(inst, analyse(inst)); }

Certificate certify_strict(const ProblemInstance& inst, const Context& ctx) {
  Certificate cert = start_certificate(inst, Mode::Strict);
  ProblemInstance constructive = inst;
  constructive.options.engine = Engine::Constructive;
  cert.blocks = strict_blocks(constructive, inst.f, ctx);
  attach_cofactors(inst, ctx.q, cert);
  return cert;
}

Certificate certify_strict_nonradical(const ProblemInstance& inst, const Context& ctx) {
  if (ctx.radical) return certify_strict(inst, ctx);
  Certificate cert = start_certificate(inst, Mode::Strict);
  const Perturbation pert = perturb(inst, inst.f, ctx);
  cert.blocks.assign(inst.g.size() + 1, {});
  for (std::size_t i = 0; i < pert.blocks.size(); ++i) cert.blocks[i + 1] = pert.blocks[i];
  cert.blocks[0] = sos_modulo_nonradical(pert.f_tilde, ctx, inst.options);
  attach_cofactors(inst, ctx.q, cert);
  return cert;
}

Certificate certify_nonneg(const ProblemInstance& inst) {
  const Context ctx = analyse(inst);
  const CoprimalityWitness w = coprimality_witness(ctx.q, inst.f);
  const Rational gamma(w.gamma);

  // On S points where f vanishes, b = gamma and a f^2 = 0 puts no sign on a;
  // shift a by rho b until it is positive there.
  const VarietyData& var = ctx.varj;
  const std::size_t n = inst.nvars();
  const Membership mem = membership(var, inst.g, noise(var, Polynomial(n, Rational(1))) * g_scale(inst.g));
  const double thr = noise(var, inst.f);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j : mem.in_s)
    if (std::fabs(real_value(inst.f, var.points[j])) <= thr) worst = std::min(worst, real_value(w.a, var.points[j]));
  Rational rho = 0;
  const double athr = noise(var, w.a);
  if (worst != std::numeric_limits<double>::infinity() && worst <= athr) {
    const double need = 2 * std::max(-worst, athr);
    rho = Rational(1, 1 << 30);
    while (rho.get_d() * gamma.get_d() <= need) rho *= 2;
  }
  const Polynomial a_hat = ctx.q.normal_form(w.a + w.b * rho);

  Certificate cert = start_certificate(inst, Mode::Nonnegative);
  const auto inner = strict_blocks(inst, a_hat, ctx);
  cert.blocks.resize(inner.size());
  cert.witnesses.resize(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (const auto& s : inner[i]) {
      cert.blocks[i].push_back({s.weight / gamma, ctx.q.normal_form(s.square * inst.f)});
      cert.witnesses[i].push_back(s.square);
    }
  }
  attach_cofactors(inst, ctx.q, cert);
  return cert;
}

Certificate certify(const ProblemInstance& inst) {
  if (inst.options.mode == Mode::Nonnegative) return certify_nonneg(inst);
  if (inst.options.engine == Engine::Sdp) return sdp_certify(inst, inst.options.order);
  return certify_strict(inst);
}

void attach_cofactors(const ProblemInstance& inst, const QuotientRing& q, Certificate& cert) {
  const std::size_t n = inst.nvars();
  Polynomial residual = inst.f;
  unsigned bound = std::max(inst.f.degree(), 0);
  for (std::size_t i = 0; i < cert.blocks.size(); ++i) {
    const Polynomial gi = i == 0 ? Polynomial(n, Rational(1)) : inst.g[i - 1];
    for (const auto& s : cert.blocks[i]) {
      const Polynomial term = s.square * s.square * gi * s.weight;
      residual -= term;
      bound = std::max<unsigned>(bound, std::max(term.degree(), 0));
    }
  }
  Cofactors cf = cofactor_reduce(q, residual);
  if (!cf.remainder.is_zero()) throw Error("certificate residual is not in the ideal");
  if (q.ideal().is_graded) {
    for (std::size_t j = 0; j < cf.p.size(); ++j) {
      if (cf.p[j].is_zero()) continue;
      if (cf.p[j].degree() + q.ideal().generators[j].degree() > static_cast<int>(bound))
        throw Error("cofactor degree exceeds the graded bound");
    }
  }
  cert.cofactors = std::move(cf.p);
  fill_scalings(cert);
}

}  // namespace soscert
