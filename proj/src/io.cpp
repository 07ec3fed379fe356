#include "soscert/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "soscert/errors.hpp"
#include "soscert/parse.hpp"

namespace soscert {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::vector<std::string> parse_variables(const std::string& s, int line) {
  std::vector<std::string> vars;
  for (const auto& v : split(s, ',')) {
    if (!is_identifier(v)) throw ParseError("invalid variable name '" + v + "'", line);
    if (std::find(vars.begin(), vars.end(), v) != vars.end())
      throw ParseError("duplicate variable '" + v + "'", line);
    vars.push_back(v);
  }
  if (vars.empty()) throw ParseError("empty variable list", line);
  return vars;
}

unsigned long long parse_unsigned(const std::string& s, int line) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ParseError("expected a nonnegative integer, got '" + s + "'", line);
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError("integer out of range: '" + s + "'", line);
  }
}

// "key: value" or "key value"; returns false when the line has no key.
bool split_key(const std::string& line, char sep, std::string& key, std::string& value) {
  const auto pos = line.find(sep);
  if (pos == std::string::npos) return false;
  key = trim(line.substr(0, pos));
  value = trim(line.substr(pos + 1));
  return true;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

std::string poly(const Polynomial& p, const std::vector<std::string>& vars) { return to_string(p, vars); }

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "strict") return Mode::Strict;
  if (s == "nonneg" || s == "nonnegative") return Mode::Nonnegative;
  throw ParseError("unknown mode '" + s + "' (expected strict or nonneg)");
}

Engine parse_engine(const std::string& s) {
  if (s == "constructive") return Engine::Constructive;
  if (s == "sdp") return Engine::Sdp;
  throw ParseError("unknown engine '" + s + "' (expected constructive or sdp)");
}

std::vector<unsigned> parse_order(const std::string& s) {
  std::vector<unsigned> out;
  for (const auto& t : split(s, ',')) out.push_back(static_cast<unsigned>(parse_unsigned(t, 0)));
  return out;
}

ProblemInstance parse_problem(const std::string& text) {
  ProblemInstance inst;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  bool have_vars = false;
  bool have_f = false;
  bool in_options = false;
  int last_line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    last_line = line;
    if (s == "[options]") {
      in_options = true;
      continue;
    }
    std::string key, value;
    if (in_options) {
      if (!split_key(s, '=', key, value)) throw ParseError("expected 'key = value' in [options]", line);
      try {
        if (key == "mode") inst.options.mode = parse_mode(value);
        else if (key == "engine") inst.options.engine = parse_engine(value);
        else if (key == "order") inst.options.order = parse_order(value);
        else if (key == "precision-start") inst.options.precision_start = static_cast<unsigned>(parse_unsigned(value, line));
        else if (key == "max-bits") inst.options.max_bits = static_cast<unsigned>(parse_unsigned(value, line));
        else if (key == "seed") inst.options.seed = parse_unsigned(value, line);
        else if (key == "tol") inst.options.tol = std::stod(value);
        else throw ParseError("unknown option '" + key + "'", line);
      } catch (const ParseError& e) {
        if (e.line() > 0) throw;
        throw ParseError(e.what(), line);
      } catch (const std::exception&) {
        throw ParseError("invalid value for option '" + key + "'", line);
      }
      continue;
    }
    if (!split_key(s, ':', key, value)) throw ParseError("expected 'key: value'", line);
    if (key == "variables") {
      if (have_vars) throw ParseError("variables declared twice", line);
      inst.variables = parse_variables(value, line);
      have_vars = true;
      continue;
    }
    if (key == "radical") {
      if (value == "true") inst.radical = true;
      else if (value == "false") inst.radical = false;
      else throw ParseError("radical must be true or false", line);
      continue;
    }
    if (key != "f" && key != "g" && key != "h") throw ParseError("unknown key '" + key + "'", line);
    if (!have_vars) throw ParseError("variables must be declared before polynomials", line);
    Polynomial p = parse_polynomial(value, inst.variables, line);
    if (key == "f") {
      if (have_f) throw ParseError("f given twice", line);
      inst.f = std::move(p);
      have_f = true;
    } else if (key == "g") {
      inst.g.push_back(std::move(p));
    } else {
      inst.h.push_back(std::move(p));
    }
  }
  if (!have_vars) throw ParseError("missing 'variables:' line", last_line);
  if (!have_f) throw ParseError("missing 'f:' line", last_line);
  if (inst.h.empty()) throw ParseError("at least one equality constraint required", last_line);
  return inst;
}

std::string write_problem(const ProblemInstance& inst) {
  std::ostringstream os;
  os << "variables: " << join(inst.variables) << '\n';
  os << "f: " << poly(inst.f, inst.variables) << '\n';
  for (const auto& g : inst.g) os << "g: " << poly(g, inst.variables) << '\n';
  for (const auto& h : inst.h) os << "h: " << poly(h, inst.variables) << '\n';
  if (inst.radical) os << "radical: " << (*inst.radical ? "true" : "false") << '\n';
  const Options def;
  const Options& o = inst.options;
  std::ostringstream opts;
  if (o.mode != def.mode) opts << "mode = " << to_string(o.mode) << '\n';
  if (o.engine != def.engine) opts << "engine = " << to_string(o.engine) << '\n';
  if (!o.order.empty()) {
    opts << "order = ";
    for (std::size_t i = 0; i < o.order.size(); ++i) opts << (i ? ", " : "") << o.order[i];
    opts << '\n';
  }
  if (o.precision_start != def.precision_start) opts << "precision-start = " << o.precision_start << '\n';
  if (o.max_bits != def.max_bits) opts << "max-bits = " << o.max_bits << '\n';
  if (o.seed != def.seed) opts << "seed = " << o.seed << '\n';
  if (o.tol != def.tol) opts << "tol = " << o.tol << '\n';
  if (!opts.str().empty()) os << "[options]\n" << opts.str();
  return os.str();
}

Certificate parse_certificate(const std::string& text) {
  Certificate cert;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  bool have_vars = false;
  bool have_mode = false;
  std::map<std::size_t, Polynomial> cofactors;
  std::map<std::size_t, Integer> nu0;
  struct Witness {
    std::size_t i, k;
    Polynomial r;
    int line;
  };
  std::vector<Witness> witnesses;
  auto need_vars = [&]() {
    if (!have_vars) throw ParseError("variables must be declared first", line);
  };
  auto integer = [&](const std::string& s) {
    Integer z;
    if (s.empty() || z.set_str(s, 10) != 0 || sgn(z) <= 0) throw ParseError("expected a positive integer", line);
    return z;
  };
  while (std::getline(is, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream ls(s);
    std::string word;
    ls >> word;
    std::string rest;
    std::getline(ls, rest);
    rest = trim(rest);
    if (word == "mode:") {
      try {
        cert.mode = parse_mode(rest);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
      }
      have_mode = true;
    } else if (word == "variables:") {
      cert.variables = parse_variables(rest, line);
      have_vars = true;
    } else if (word == "block") {
      const auto i = parse_unsigned(rest, line);
      if (i != cert.blocks.size()) throw ParseError("blocks must be numbered 0, 1, ... in order", line);
      cert.blocks.emplace_back();
    } else if (word == "weight") {
      need_vars();
      if (cert.blocks.empty()) throw ParseError("weight line before any block", line);
      const auto pos = rest.find(" square ");
      if (pos == std::string::npos) throw ParseError("expected 'weight <rational> square <poly>'", line);
      const Rational w = parse_rational(trim(rest.substr(0, pos)), line);
      cert.blocks.back().push_back({w, parse_polynomial(trim(rest.substr(pos + 8)), cert.variables, line)});
    } else if (word == "cofactor") {
      need_vars();
      std::istringstream rs(rest);
      std::string idx;
      rs >> idx;
      std::string body;
      std::getline(rs, body);
      const auto j = parse_unsigned(idx, line);
      if (j == 0) throw ParseError("cofactor indices start at 1", line);
      if (cofactors.count(j)) throw ParseError("cofactor " + idx + " given twice", line);
      cofactors[j] = parse_polynomial(trim(body), cert.variables, line);
    } else if (word == "witness") {
      need_vars();
      std::istringstream rs(rest);
      std::string a, b;
      rs >> a >> b;
      std::string body;
      std::getline(rs, body);
      const auto i = parse_unsigned(a, line);
      const auto k = parse_unsigned(b, line);
      if (k == 0) throw ParseError("witness indices k start at 1", line);
      witnesses.push_back({i, k, parse_polynomial(trim(body), cert.variables, line), line});
    } else if (word == "nu0") {
      std::istringstream rs(rest);
      std::string a, b;
      rs >> a >> b;
      nu0[parse_unsigned(a, line)] = integer(b);
    } else if (word == "nu1") {
      cert.nu1 = integer(rest);
    } else if (word == "nu2") {
      cert.nu2 = integer(rest);
    } else {
      throw ParseError("unknown certificate line '" + word + "'", line);
    }
  }
  if (!have_mode) throw ParseError("missing 'mode:' line", line);
  if (!have_vars) throw ParseError("missing 'variables:' line", line);
  if (cert.blocks.empty()) throw ParseError("certificate has no blocks", line);
  std::size_t s = cofactors.empty() ? 0 : cofactors.rbegin()->first;
  cert.cofactors.assign(s, Polynomial(cert.variables.size()));
  for (auto& [j, p] : cofactors) cert.cofactors[j - 1] = std::move(p);
  for (std::size_t k = 1; k <= nu0.size(); ++k) {
    if (!nu0.count(k)) throw ParseError("nu0 entries must be numbered 1..D", line);
    cert.nu0.push_back(nu0[k]);
  }
  if (!witnesses.empty()) {
    cert.witnesses.resize(cert.blocks.size());
    for (std::size_t i = 0; i < cert.blocks.size(); ++i)
      cert.witnesses[i].assign(cert.blocks[i].size(), Polynomial(cert.variables.size()));
    for (auto& w : witnesses) {
      if (w.i >= cert.blocks.size() || w.k > cert.blocks[w.i].size())
        throw ParseError("witness refers to a missing square", w.line);
      cert.witnesses[w.i][w.k - 1] = std::move(w.r);
    }
  }
  return cert;
}

std::string write_certificate(const Certificate& cert) {
  std::ostringstream os;
  const auto& v = cert.variables;
  os << "mode: " << to_string(cert.mode) << '\n';
  os << "variables: " << join(v) << '\n';
  for (std::size_t i = 0; i < cert.blocks.size(); ++i) {
    os << "block " << i << '\n';
    for (const auto& s : cert.blocks[i]) os << "weight " << to_string(s.weight) << " square " << poly(s.square, v) << '\n';
  }
  for (std::size_t j = 0; j < cert.cofactors.size(); ++j) os << "cofactor " << j + 1 << ' ' << poly(cert.cofactors[j], v) << '\n';
  for (std::size_t i = 0; i < cert.witnesses.size(); ++i)
    for (std::size_t k = 0; k < cert.witnesses[i].size(); ++k)
      os << "witness " << i << ' ' << k + 1 << ' ' << poly(cert.witnesses[i][k], v) << '\n';
  for (std::size_t k = 0; k < cert.nu0.size(); ++k) os << "nu0 " << k + 1 << ' ' << cert.nu0[k].get_str() << '\n';
  os << "nu1 " << cert.nu1.get_str() << '\n';
  os << "nu2 " << cert.nu2.get_str() << '\n';
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  s.erase(std::remove(s.begin(), s.end(), '\r'), s.end());
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ParseError("cannot write '" + path + "'");
}

}  // namespace soscert
