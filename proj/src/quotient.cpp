#include "soscert/quotient.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace soscert {

Polynomial reduce(const Polynomial& p, const std::vector<Polynomial>& divisors,
                  std::vector<Polynomial>* quotients) {
  const std::size_t n = p.nvars();
  if (quotients) quotients->assign(divisors.size(), Polynomial(n));
  Polynomial rem(n);
  Polynomial work = p;
  while (!work.is_zero()) {
    const Monomial lm = work.leading_monomial();
    const Rational lc = work.leading_coefficient();
    bool divided = false;
    for (std::size_t j = 0; j < divisors.size(); ++j) {
      const Polynomial& d = divisors[j];
      if (d.is_zero() || !d.leading_monomial().divides(lm)) continue;
      const Rational c = lc / d.leading_coefficient();
      const Monomial m = lm / d.leading_monomial();
      work.add_scaled(d, -c, m);
      if (quotients) (*quotients)[j].add_term(m, c);
      divided = true;
      break;
    }
    if (!divided) {
      rem.add_term(lm, lc);
      work.add_term(lm, -lc);
    }
  }
  return rem;
}

namespace {

Polynomial monic(Polynomial p) {
  if (p.is_zero()) return p;
  const Rational lc = p.leading_coefficient();
  return p * Rational(1 / lc);
}

struct Pair {
  std::size_t i, j;
  unsigned sugar;
  Monomial lcm;
};

std::vector<Polynomial> buchberger(std::vector<Polynomial> input) {
  std::vector<Polynomial> g;
  std::vector<unsigned> sugar;
  std::vector<Pair> pairs;

  auto add = [&](Polynomial p, unsigned s) {
    p = monic(std::move(p));
    const std::size_t k = g.size();
    for (std::size_t i = 0; i < k; ++i) {
      const Monomial l = g[i].leading_monomial().lcm(p.leading_monomial());
      const unsigned si = sugar[i] - g[i].leading_monomial().degree();
      const unsigned sk = s - p.leading_monomial().degree();
      pairs.push_back({i, k, l.degree() + std::max(si, sk), l});
    }
    g.push_back(std::move(p));
    sugar.push_back(s);
  };

  for (auto& p : input) {
    if (p.is_zero()) continue;
    Polynomial r = reduce(p, g);
    if (r.is_zero()) continue;
    add(r, std::max<unsigned>(p.degree(), r.degree()));
  }

  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.sugar != b.sugar) return a.sugar < b.sugar;
      return grevlex_less(a.lcm, b.lcm);
    });
    const Pair pr = *best;
    pairs.erase(best);
    const Monomial& li = g[pr.i].leading_monomial();
    const Monomial& lj = g[pr.j].leading_monomial();
    if (li.coprime(lj)) continue;
    Polynomial s(g[pr.i].nvars());
    s.add_scaled(g[pr.i], Rational(1), pr.lcm / li);
    s.add_scaled(g[pr.j], Rational(-1), pr.lcm / lj);
    Polynomial r = reduce(s, g);
    if (r.is_zero()) continue;
    if (r.is_constant()) return {Polynomial(r.nvars(), Rational(1))};
    add(std::move(r), pr.sugar);
  }

  // minimize
  std::vector<Polynomial> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j) continue;
      const Monomial& li = g[i].leading_monomial();
      const Monomial& lj = g[j].leading_monomial();
      if (lj.divides(li) && (li != lj || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(g[i]);
  }
  // inter-reduce
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    const Monomial lm = minimal[i].leading_monomial();
    Polynomial tail = minimal[i];
    tail.add_term(lm, -tail.leading_coefficient());
    minimal[i] = monic(Polynomial(lm, Rational(1)) + reduce(tail, others));
  }
  std::sort(minimal.begin(), minimal.end(), [](const Polynomial& a, const Polynomial& b) {
    return grevlex_less(a.leading_monomial(), b.leading_monomial());
  });
  return minimal;
}

// Standard monomials of a Groebner basis, or nullopt when there are infinitely many.
std::optional<std::vector<Monomial>> standard_monomials(const std::vector<Polynomial>& g,
                                                        std::size_t nvars) {
  std::vector<Monomial> leads;
  for (const auto& p : g) leads.push_back(p.leading_monomial());
  for (std::size_t i = 0; i < nvars; ++i) {
    bool pure = false;
    for (const auto& l : leads) {
      bool only_i = true;
      for (std::size_t k = 0; k < nvars; ++k)
        if (k != i && l[k] != 0) only_i = false;
      if (only_i) pure = true;
    }
    if (!pure) return std::nullopt;
  }
  auto reducible = [&](const Monomial& m) {
    for (const auto& l : leads)
      if (l.divides(m)) return true;
    return false;
  };
  std::vector<Monomial> out;
  std::set<Monomial, GrevlexGreater> seen;
  std::deque<Monomial> queue;
  const Monomial one(nvars);
  if (reducible(one)) return out;
  queue.push_back(one);
  seen.insert(one);
  while (!queue.empty()) {
    Monomial m = queue.front();
    queue.pop_front();
    out.push_back(m);
    for (std::size_t i = 0; i < nvars; ++i) {
      Monomial next = m * Monomial::variable(nvars, i);
      if (seen.count(next) || reducible(next)) continue;
      seen.insert(next);
      queue.push_back(next);
    }
  }
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return grevlex_less(b, a);
  });
  return out;
}

bool leading_terms_generated_by(const std::vector<Polynomial>& gens,
                                const std::vector<Polynomial>& g) {
  for (const auto& p : g) {
    bool ok = false;
    for (const auto& h : gens)
      if (!h.is_zero() && h.leading_monomial().divides(p.leading_monomial())) ok = true;
    if (!ok) return false;
  }
  return true;
}

std::size_t count_up_to(const std::vector<Monomial>& ms, unsigned e) {
  return std::count_if(ms.begin(), ms.end(), [e](const Monomial& m) { return m.degree() <= e; });
}

}  // namespace

bool check_graded(const IdealBasis& ideal, unsigned lo, unsigned hi) {
  if (ideal.generators_are_groebner) return true;
  const auto std_monos = standard_monomials(ideal.groebner, ideal.nvars);
  if (!std_monos) return false;
  for (unsigned e = lo; e <= hi; ++e) {
    const auto cols = monomials_up_to(ideal.nvars, e);
    if (cols.size() > 4000) break;
    std::map<Monomial, std::size_t, GrevlexGreater> col_index;
    for (std::size_t k = 0; k < cols.size(); ++k) col_index[cols[k]] = k;
    std::vector<Polynomial> rows;
    for (const auto& h : ideal.generators) {
      if (h.is_zero() || static_cast<unsigned>(h.degree()) > e) continue;
      for (const auto& m : monomials_up_to(ideal.nvars, e - h.degree())) {
        Polynomial r(ideal.nvars);
        r.add_scaled(h, Rational(1), m);
        rows.push_back(std::move(r));
      }
    }
    QMatrix mac(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (const auto& [m, c] : rows[i].terms()) mac(i, col_index.at(m)) = c;
    const std::size_t expected = cols.size() - count_up_to(*std_monos, e);
    if (rank(mac) != expected) return false;
  }
  return true;
}

IdealBasis groebner(const std::vector<Polynomial>& generators) {
  IdealBasis ib;
  for (const auto& h : generators) ib.nvars = std::max(ib.nvars, h.nvars());
  if (ib.nvars == 0) throw InvalidInput("generators carry no variables");
  ib.generators = generators;
  ib.groebner = buchberger(generators);
  ib.generators_are_groebner = leading_terms_generated_by(generators, ib.groebner);
  if (ib.generators_are_groebner) {
    ib.is_graded = true;
  } else {
    unsigned lo = ~0u, hi = 0;
    for (const auto& h : generators) {
      if (h.is_zero()) continue;
      lo = std::min<unsigned>(lo, h.degree());
      hi = std::max<unsigned>(hi, h.degree());
    }
    unsigned deg_b = 0;
    if (const auto sm = standard_monomials(ib.groebner, ib.nvars))
      for (const auto& m : *sm) deg_b = std::max(deg_b, m.degree());
    ib.is_graded = lo <= hi && check_graded(ib, lo, hi + deg_b + 1);
  }
  return ib;
}

QuotientRing::QuotientRing(IdealBasis ideal) : ideal_(std::move(ideal)) {
  auto sm = standard_monomials(ideal_.groebner, ideal_.nvars);
  if (!sm) throw NotZeroDimensional();
  basis_ = std::move(*sm);
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    index_[basis_[k]] = k;
    basis_degree_ = std::max(basis_degree_, basis_[k].degree());
  }
  const std::size_t d = basis_.size();
  for (std::size_t i = 0; i < ideal_.nvars; ++i) {
    QMatrix m(d, d);
    for (std::size_t k = 0; k < d; ++k) {
      const auto col = coordinates(Polynomial(basis_[k] * Monomial::variable(ideal_.nvars, i),
                                              Rational(1)));
      for (std::size_t r = 0; r < d; ++r) m(r, k) = col[r];
    }
    mult_.push_back(std::move(m));
  }
}

QMatrix QuotientRing::multiplication_matrix(const Polynomial& f) const {
  const std::size_t d = dimension();
  QMatrix m(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    Polynomial prod(nvars());
    prod.add_scaled(f, Rational(1), basis_[k]);
    const auto col = coordinates(prod);
    for (std::size_t r = 0; r < d; ++r) m(r, k) = col[r];
  }
  return m;
}

Polynomial QuotientRing::normal_form(const Polynomial& p) const {
  if (p.is_zero()) return Polynomial(nvars());
  return reduce(p, ideal_.groebner);
}

std::vector<Rational> QuotientRing::coordinates(const Polynomial& p) const {
  std::vector<Rational> out(dimension());
  const Polynomial nf = normal_form(p);
  for (const auto& [m, c] : nf.terms()) out[index_.at(m)] = c;
  return out;
}

Polynomial QuotientRing::from_coordinates(const std::vector<Rational>& c) const {
  Polynomial p(nvars());
  for (std::size_t k = 0; k < basis_.size(); ++k) p.add_term(basis_[k], c[k]);
  return p;
}

int QuotientRing::index_of(const Monomial& m) const {
  auto it = index_.find(m);
  return it == index_.end() ? -1 : static_cast<int>(it->second);
}

QuotientRing monomial_basis(const IdealBasis& ideal) { return QuotientRing(ideal); }

namespace {

Integer common_denominator(const std::vector<Polynomial>& ps) {
  Integer nu = 1;
  for (const auto& p : ps) {
    const Integer d = lcm_denominator(p);
    mpz_lcm(nu.get_mpz_t(), nu.get_mpz_t(), d.get_mpz_t());
  }
  return nu;
}

// Solves sum p_j h_j = t with deg p_j <= e - deg h_j.
std::optional<std::vector<Polynomial>> macaulay_solve(const std::vector<Polynomial>& h,
                                                      const Polynomial& t, unsigned e,
                                                      std::size_t nvars) {
  const auto cols = monomials_up_to(nvars, e);
  std::map<Monomial, std::size_t, GrevlexGreater> row_index;
  for (std::size_t k = 0; k < cols.size(); ++k) row_index[cols[k]] = k;
  for (const auto& [m, c] : t.terms())
    if (!row_index.count(m)) return std::nullopt;
  struct Unknown {
    std::size_t j;
    Monomial m;
  };
  std::vector<Unknown> unknowns;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j].is_zero() || static_cast<unsigned>(h[j].degree()) > e) continue;
    for (const auto& m : monomials_up_to(nvars, e - h[j].degree())) unknowns.push_back({j, m});
  }
  QMatrix a(cols.size(), unknowns.size());
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    for (const auto& [m, c] : h[unknowns[u].j].terms()) a(row_index.at(m * unknowns[u].m), u) = c;
  std::vector<Rational> rhs(cols.size());
  for (const auto& [m, c] : t.terms()) rhs[row_index.at(m)] = c;
  auto sol = solve(a, rhs);
  if (!sol) return std::nullopt;
  std::vector<Polynomial> p(h.size(), Polynomial(nvars));
  for (std::size_t u = 0; u < unknowns.size(); ++u) p[unknowns[u].j].add_term(unknowns[u].m, (*sol)[u]);
  return p;
}

}  // namespace

Cofactors cofactor_reduce(const QuotientRing& q, const Polynomial& p) {
  const auto& h = q.ideal().generators;
  const std::size_t n = q.nvars();
  Cofactors out;
  out.remainder = q.normal_form(p);
  if (q.ideal().generators_are_groebner) {
    Polynomial rem = reduce(p, h, &out.p);
    if (rem != out.remainder) throw Error("division remainder differs from the normal form");
  } else {
    const Polynomial t = p - out.remainder;
    if (t.is_zero()) {
      out.p.assign(h.size(), Polynomial(n));
    } else {
      unsigned hmax = 0;
      for (const auto& g : h) hmax = std::max<unsigned>(hmax, std::max(g.degree(), 0));
      const unsigned start = t.degree();
      const unsigned stop = start + 2 * hmax + q.basis_degree() + 8;
      for (unsigned e = start; e <= stop; ++e) {
        if (auto sol = macaulay_solve(h, t, e, n)) {
          out.p = std::move(*sol);
          break;
        }
      }
      if (out.p.empty()) throw Error("cofactor search did not terminate");
    }
  }
  std::vector<Polynomial> all = out.p;
  all.push_back(out.remainder);
  out.nu = common_denominator(all);
  return out;
}

CoprimalityWitness coprimality_witness(const QuotientRing& q, const Polynomial& f) {
  const std::size_t d = q.dimension();
  const std::size_t n = q.nvars();
  CoprimalityWitness w;
  if (d == 0) {
    w.a = Polynomial(n, Rational(1));
    w.b = Polynomial(n);
    return w;
  }
  // Unknowns [a | b]:  M_f b = 0,  M_f a + b = N(1).
  const QMatrix mf = q.multiplication_matrix(f);
  QMatrix sys(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      sys(i, d + k) = mf(i, k);
      sys(d + i, k) = mf(i, k);
    }
  for (std::size_t k = 0; k < d; ++k) sys(d + k, d + k) += 1;
  std::vector<Rational> rhs(2 * d);
  const auto one = q.coordinates(Polynomial(n, Rational(1)));
  for (std::size_t k = 0; k < d; ++k) rhs[d + k] = one[k];
  const auto sol = solve(sys, rhs);
  if (!sol) throw ConditionFailed("(I:f) + (f) is a proper ideal; no nonnegativity certificate of this shape");
  std::vector<Rational> a(sol->begin(), sol->begin() + d), b(sol->begin() + d, sol->end());
  Integer nu = 1;
  for (const auto& c : *sol) mpz_lcm(nu.get_mpz_t(), nu.get_mpz_t(), c.get_den_mpz_t());
  for (auto& c : a) c *= nu;
  for (auto& c : b) c *= nu;
  w.a = q.from_coordinates(a);
  w.b = q.from_coordinates(b);
  w.gamma = nu;
  return w;
}

Polynomial inverse_mod(const QuotientRing& q, const Polynomial& theta) {
  const std::size_t n = q.nvars();
  if (q.dimension() == 0) return Polynomial(n);
  const auto sol = solve(q.multiplication_matrix(theta), q.coordinates(Polynomial(n, Rational(1))));
  if (!sol || rank(q.multiplication_matrix(theta)) < q.dimension()) throw NotInvertible();
  return q.from_coordinates(*sol);
}

std::vector<QuotientRing> ideal_power_chain(const IdealBasis& radical_ideal,
                                            const QuotientRing& target) {
  std::vector<QuotientRing> chain;
  auto contained = [&](const std::vector<Polynomial>& gens) {
    for (const auto& g : gens)
      if (!target.contains(g)) return false;
    return true;
  };
  std::vector<Polynomial> current = radical_ideal.groebner;
  if (contained(current)) return chain;
  for (int k = 0; k < 32; ++k) {
    std::vector<Polynomial> prods;
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i; j < current.size(); ++j) prods.push_back(current[i] * current[j]);
    IdealBasis sq = groebner(prods);
    current = sq.groebner;
    chain.emplace_back(std::move(sq));
    if (contained(current)) return chain;
  }
  throw Error("ideal power chain did not reach the target ideal");
}

UniPoly minimal_polynomial(const QuotientRing& q, std::size_t i) {
  const std::size_t d = q.dimension();
  const std::size_t n = q.nvars();
  std::vector<std::vector<Rational>> krylov;
  krylov.push_back(q.coordinates(Polynomial(n, Rational(1))));
  for (std::size_t k = 1; k <= d; ++k) {
    krylov.push_back(q.mult_matrix(i) * krylov.back());
    QMatrix a(d, k);
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t r = 0; r < d; ++r) a(r, c) = krylov[c][r];
    if (auto sol = solve(a, krylov.back())) {
      UniPoly m(k + 1);
      for (std::size_t c = 0; c < k; ++c) m[c] = -(*sol)[c];
      m[k] = 1;
      return m;
    }
  }
  throw Error("minimal polynomial search failed");
}

IdealBasis radical(const QuotientRing& q) {
  const std::size_t n = q.nvars();
  std::vector<Polynomial> gens = q.ideal().groebner;
  if (q.dimension() == 0) return q.ideal();
  bool changed = false;
  for (std::size_t i = 0; i < n; ++i) {
    const UniPoly m = minimal_polynomial(q, i);
    const UniPoly s = squarefree_part(m);
    if (s.size() == m.size()) continue;
    changed = true;
    Polynomial g(n);
    for (std::size_t k = 0; k < s.size(); ++k)
      if (sgn(s[k]) != 0) g.add_term(Monomial::variable(n, i, k), s[k]);
    gens.push_back(g);
  }
  if (!changed) return q.ideal();
  return groebner(gens);
}

}  // namespace soscert
