#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "soscert/gram.hpp"
#include "soscert/polynomial.hpp"

namespace soscert {

enum class Mode { Strict, Nonnegative };
enum class Engine { Constructive, Sdp };

std::string to_string(Mode m);
std::string to_string(Engine e);

struct Options {
  Mode mode = Mode::Strict;
  Engine engine = Engine::Constructive;
  // Relaxation orders l_0..l_r for the sdp engine; empty means deg B for every block.
  std::vector<unsigned> order;
  unsigned precision_start = 16;
  unsigned max_bits = 4096;
  std::uint64_t seed = 1;
  // Root clustering tolerance, 0 for the default.
  double tol = 0;
  int sdp_iterations = 20000;
  double sdp_tol = 1e-9;
};

struct ProblemInstance {
  std::vector<std::string> variables;
  Polynomial f;
  std::vector<Polynomial> g;
  std::vector<Polynomial> h;
  std::optional<bool> radical;
  Options options;

  std::size_t nvars() const { return variables.size(); }
};

// f = sum_k w_0k q_0k^2 + sum_i (sum_k w_ik q_ik^2) g_i + sum_j p_j h_j.
struct Certificate {
  Mode mode = Mode::Strict;
  std::vector<std::string> variables;
  // blocks[0] is the pure sum of squares, blocks[i] multiplies g_i.
  std::vector<std::vector<WeightedSquare>> blocks;
  std::vector<Polynomial> cofactors;
  // Nonnegative mode: witnesses[i][k] = r with q_ik - f r in I.
  std::vector<std::vector<Polynomial>> witnesses;
  // Integer form: f = sum 1/nu0[k] Q_0k^2 + 1/nu1 (...) + 1/nu2 sum P_j h_j.
  std::vector<Integer> nu0;
  Integer nu1 = 1;
  Integer nu2 = 1;
  std::vector<std::string> notes;
};

struct IntegerForm {
  std::vector<Integer> nu0;
  std::vector<Polynomial> q0;
  Integer nu1 = 1;
  std::vector<std::vector<Integer>> omega;
  std::vector<std::vector<Polynomial>> q;
  Integer nu2 = 1;
  std::vector<Polynomial> p;
};

// Rewrites the certificate with integer squares, integer weights and the three
// scalings of the integer statement.
IntegerForm integer_form(const Certificate& cert);
void fill_scalings(Certificate& cert);

}  // namespace soscert
