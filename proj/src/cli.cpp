#include "soscert/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <sstream>

#include "soscert/certifier.hpp"
#include "soscert/errors.hpp"
#include "soscert/io.hpp"
#include "soscert/sdp.hpp"
#include "soscert/verify.hpp"

namespace soscert {

namespace {

const char* kGrammar = R"(Problem file (one entry per line, '#' starts a comment):
  variables: x, y
  f: x + y + 3
  g: y                      zero or more inequalities g >= 0
  h: x^2 - 1                one or more equalities h = 0
  h: y^2 - x - 2
  radical: true|false       optional, checked against the computed radical
  [options]                 optional block of key = value lines
  mode = strict|nonneg
  engine = constructive|sdp
  order = 2                 relaxation order(s) for the sdp engine
  precision-start = 16
  max-bits = 4096
  seed = 1
  tol = 0

Polynomials use rational literals (3, 1/2, 0.25), the declared variables,
+ - *, parentheses and nonnegative integer powers (^).

Certificate file:
  mode: strict|nonneg
  variables: x, y
  block 0                   pure sum of squares
  weight 3/2 square 1 + 1/3*x
  block 1                   multiplies g_1
  cofactor 1 <poly>         multiplies h_1
  witness <i> <k> <poly>    nonneg mode: q_ik - f*r in I
  nu0 <k> <integer>
  nu1 <integer>
  nu2 <integer>

Exit codes: 0 success, 1 input or I/O error, 2 condition failed (no
certificate of this shape), 3 precision or solver exhausted, 4 verification
failed. SOS_CERT_MAX_BITS overrides the default precision ceiling.)";

struct Flags {
  std::string input;
  std::string certificate;
  std::string out;
  std::string mode;
  std::string engine;
  std::string order;
  std::string format = "text";
  std::string sdp_dump;
  unsigned precision_start = 0;
  unsigned max_bits = 0;
  std::uint64_t seed = 0;
  double constant = 1.0;
};

int exit_for(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  if (dynamic_cast<const ConditionFailed*>(&e)) return kExitCondition;
  if (dynamic_cast<const PrecisionExceeded*>(&e) || dynamic_cast<const Infeasible*>(&e) ||
      dynamic_cast<const MaxIterations*>(&e) || dynamic_cast<const ClusterAmbiguity*>(&e) ||
      dynamic_cast<const SingularVandermonde*>(&e) || dynamic_cast<const NonPositiveAtRealRoot*>(&e))
    return kExitNumeric;
  return kExitInput;
}

ProblemInstance load_problem(const Flags& fl) {
  ProblemInstance inst = parse_problem(read_file(fl.input));
  if (!fl.mode.empty()) inst.options.mode = parse_mode(fl.mode);
  if (!fl.engine.empty()) inst.options.engine = parse_engine(fl.engine);
  if (!fl.order.empty()) inst.options.order = parse_order(fl.order);
  if (fl.precision_start) inst.options.precision_start = fl.precision_start;
  if (fl.max_bits) {
    inst.options.max_bits = fl.max_bits;
  } else if (std::getenv("SOS_CERT_MAX_BITS")) {
    inst.options.max_bits = default_max_bits();
  }
  if (fl.seed) inst.options.seed = fl.seed;
  return inst;
}

void report(std::ostream& out, const Flags& fl, const VerificationReport& r) {
  if (fl.format == "kv") write_report_kv(out, r);
  else write_report(out, r);
}

int cmd_certify(const Flags& fl, std::ostream& out, std::ostream& err) {
  ProblemInstance inst;
  try {
    inst = load_problem(fl);
  } catch (const std::exception& e) {
    return exit_for(e, err);
  }
  try {
    if (!fl.sdp_dump.empty()) {
      const QuotientRing q(groebner(inst.h));
      std::ostringstream os;
      write_sdp_problem(os, formulate(inst, q, inst.options.order));
      write_file(fl.sdp_dump, os.str());
    }
    const Certificate cert = certify(inst);
    const std::string text = write_certificate(cert);
    if (fl.out.empty()) out << text;
    else write_file(fl.out, text);
    // Check what was written, not the in-memory object.
    const VerificationReport r = verify_certificate(inst, parse_certificate(text));
    report(out, fl, r);
    if (!r.ok()) {
      err << "error: own certificate failed check '" << r.first_failure() << "'\n";
      return kExitVerification;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return exit_for(e, err);
  }
}

int cmd_verify(const Flags& fl, std::ostream& out, std::ostream& err) {
  ProblemInstance inst;
  Certificate cert;
  try {
    inst = load_problem(fl);
    cert = parse_certificate(read_file(fl.certificate));
  } catch (const std::exception& e) {
    return exit_for(e, err);
  }
  if (cert.variables != inst.variables) {
    err << "error: certificate variables (";
    for (std::size_t i = 0; i < cert.variables.size(); ++i) err << (i ? ", " : "") << cert.variables[i];
    err << ") do not match the problem\n";
    return kExitInput;
  }
  const VerificationReport r = verify_certificate(inst, cert);
  report(out, fl, r);
  if (!r.ok()) {
    err << "verification failed: first failing check is '" << r.first_failure() << "'\n";
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_bounds(const Flags& fl, std::ostream& out, std::ostream& err) {
  try {
    const ProblemInstance inst = load_problem(fl);
    const QuotientRing q(groebner(inst.h));
    BoundReport b = degree_bounds(inst, q);
    unsigned d = 0;
    std::size_t tau = 1;
    auto see = [&](const Polynomial& p) {
      d = std::max(d, static_cast<unsigned>(std::max(p.degree(), 0)));
      const HeightInfo h = height(p);
      tau = std::max({tau, h.numerator_height, h.denominator_height});
    };
    for (const auto& g : inst.g) see(g);
    for (const auto& h : inst.h) see(h);
    const unsigned df = std::max(d, static_cast<unsigned>(std::max(inst.f.degree(), 0)));
    see(inst.f);
    const unsigned delta = std::max(d, b.deg_b);
    const BoundReport h = height_bound_formula(static_cast<unsigned>(inst.nvars()), d, delta,
                                               static_cast<unsigned>(tau), df, fl.constant);
    b.strict_heights = h.strict_heights;
    b.nonneg_heights = h.nonneg_heights;
    b.constant = fl.constant;
    if (fl.format == "kv") write_bounds_kv(out, b);
    else write_bounds(out, b);
    return kExitOk;
  } catch (const std::exception& e) {
    return exit_for(e, err);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact sum-of-squares certificates on finite semialgebraic sets"};
  app.footer(kGrammar);
  app.require_subcommand(1);
  Flags fl;

  auto* certify_cmd = app.add_subcommand("certify", "compute and verify a certificate");
  certify_cmd->add_option("--input", fl.input, "problem file")->required();
  certify_cmd->add_option("--mode", fl.mode, "strict or nonneg");
  certify_cmd->add_option("--engine", fl.engine, "constructive or sdp");
  certify_cmd->add_option("--order", fl.order, "relaxation order(s) l0[,l1,...] for the sdp engine");
  certify_cmd->add_option("--precision-start", fl.precision_start, "initial rounding precision in bits");
  certify_cmd->add_option("--max-bits", fl.max_bits, "precision ceiling in bits");
  certify_cmd->add_option("--seed", fl.seed, "seed for the random eigenvalue combination");
  certify_cmd->add_option("--out", fl.out, "certificate output file (default: standard output)");
  certify_cmd->add_option("--format", fl.format, "report format: text or kv")->check(CLI::IsMember({"text", "kv"}));
  certify_cmd->add_option("--sdp-dump", fl.sdp_dump, "write the sdp problem in text form");

  auto* verify_cmd = app.add_subcommand("verify", "check a certificate exactly");
  verify_cmd->add_option("--input", fl.input, "problem file")->required();
  verify_cmd->add_option("--certificate", fl.certificate, "certificate file")->required();
  verify_cmd->add_option("--format", fl.format, "report format: text or kv")->check(CLI::IsMember({"text", "kv"}));

  auto* bounds_cmd = app.add_subcommand("bounds", "degree, order and height bound calculators");
  bounds_cmd->add_option("--input", fl.input, "problem file")->required();
  bounds_cmd->add_option("--constant", fl.constant, "constant c of the height formulas")
      ->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--format", fl.format, "report format: text or kv")->check(CLI::IsMember({"text", "kv"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  if (certify_cmd->parsed()) return cmd_certify(fl, out, err);
  if (verify_cmd->parsed()) return cmd_verify(fl, out, err);
  return cmd_bounds(fl, out, err);
}

}  // namespace soscert
