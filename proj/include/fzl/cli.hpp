#pragma once

/**
 * Command-line front end.  Every subcommand is a thin wrapper over the
 * library: strings in, plain text out.  Machine-readable output only
 * appears when a --format option asks for it.
 *
 * Exit codes: 0 on success, 2 for unparseable input, 3 when an internal
 * consistency check fires.
 */

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fzl/atlas.hpp"
#include "fzl/loci.hpp"

namespace fzl {

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (auto& p : parts) {
    if (!out.empty()) out += " ";
    out += p;
  }
  return out;
}

/** key = value lines; blank lines and # comments are skipped. */
inline std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = atlas_detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value, got: " + t);
    std::string key = atlas_detail::trim(t.substr(0, eq));
    std::string val = atlas_detail::trim(t.substr(eq + 1));
    if (key.empty() || !out.emplace(key, val).second)
      throw std::invalid_argument("bad or duplicate key in: " + t);
  }
  return out;
}

inline std::string take(std::map<std::string, std::string>& kv,
                        const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("missing key: " + key);
  std::string v = it->second;
  kv.erase(it);
  return v;
}

inline std::string take_opt(std::map<std::string, std::string>& kv,
                            const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) return "";
  std::string v = it->second;
  kv.erase(it);
  return v;
}

inline void expect_empty(const std::map<std::string, std::string>& kv) {
  if (!kv.empty())
    throw std::invalid_argument("unknown key: " + kv.begin()->first);
}

inline std::vector<std::vector<long>> line_twists_of(const BundleOps& ops,
                                                     const std::string& expr) {
  BundleSum s = parse_bundle(expr, ops);
  if (s.size() != 1 || s.begin()->second != 1)
    throw std::invalid_argument("expected a single line bundle: " + expr);
  return ops.line_twists(s.begin()->first);
}

/**
 * Shorthand for weights on a single factor, e.g. "S2Q(-4)" or "UQd":
 * a product of atoms U, Q, R<j>, O, each optionally prefixed by S<k> or
 * W<k> (symmetric or exterior power) and suffixed by d (dual), followed
 * by an optional twist "(t1,...,tm)" with one entry per step.
 */
inline BundleSum parse_shorthand(const BundleOps& ops, const std::string& s) {
  const FlagShape& fl = ops.shapes()[0];
  long nb = fl.num_blocks();
  BundleSum acc = ops.unit_sum();
  size_t i = 0;
  auto digits = [&]() {
    long v = 0;
    size_t start = i;
    while (i < s.size() && std::isdigit((unsigned char)s[i]))
      v = v * 10 + (s[i++] - '0');
    if (i == start) throw ParseError("expected a number", i);
    return v;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace((unsigned char)c)) {
      ++i;
      continue;
    }
    if (c == '(') break;
    long symk = 0, wedk = 0;
    if (c == 'S' || c == 'W') {
      ++i;
      long k = digits();
      (c == 'S' ? symk : wedk) = k;
      if (i >= s.size()) throw ParseError("expected an atom after the power", i);
      c = s[i];
    }
    BundleSum atom;
    if (c == 'U') {
      atom = ops.single(ops.r_bundle(0, 1));
      ++i;
    } else if (c == 'Q') {
      atom = ops.single(ops.r_bundle(0, nb));
      ++i;
    } else if (c == 'R') {
      ++i;
      long j = digits();
      if (j < 1 || j > nb) throw ParseError("block index out of range", i);
      atom = ops.single(ops.r_bundle(0, j));
    } else if (c == 'O') {
      atom = ops.unit_sum();
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    if (i < s.size() && s[i] == 'd') {
      atom = ops.dual(atom);
      ++i;
    }
    if (symk > 0) atom = ops.sym(symk, atom);
    if (wedk > 0) atom = ops.wedge(wedk, atom);
    acc = ops.tensor(acc, atom);
  }
  if (i < s.size() && s[i] == '(') {
    ++i;
    std::vector<long> tw;
    for (;;) {
      long sign = 1;
      if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        if (s[i] == '-') sign = -1;
        ++i;
      }
      tw.push_back(sign * digits());
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i >= s.size() || s[i] != ')') throw ParseError("expected ')'", i);
    ++i;
    if ((long)tw.size() != (long)fl.steps.size())
      throw ParseError("twist needs one entry per step", i);
    acc = ops.tensor(acc, ops.single(ops.line({tw})));
  }
  while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  if (i < s.size()) throw ParseError("trailing input", i);
  return acc;
}

inline void print_invariants(std::ostream& out, const std::string& spec) {
  SpecAst ast = parse_spec(spec);
  BundleOps ops(ast.shapes);
  FanoZeroLocus z(ast.shapes, ast.bundle);
  FanoInvariants v = z.invariants();
  std::string amb = print_ambient(ast.shapes);
  std::string bun = print_bundle(ops, ast.bundle);
  if (v.dim_x != 4) {
    out << "ambient: " << amb << "\n";
    out << "bundle: " << bun << "\n";
    out << "dim=" << v.dim_x << " (not a fourfold; no table identifier)\n";
    out << "h0(-K)=" << v.h0_minus_k << " (-K)^" << v.dim_x << "="
        << v.minus_k_power << " chiT=" << v.chi_t
        << " strongly-Fano=" << (v.strongly_fano ? "yes" : "no") << "\n";
    return;
  }
  out << v.id() << " " << v.h0_minus_k << " " << v.minus_k_power << " "
      << v.h11 << " " << v.h12 << " " << v.h13 << " " << v.h22 << " "
      << -v.chi_t << "\n";
  out << "h0(-K)=" << v.h0_minus_k << " (-K)^4=" << v.minus_k_power
      << " h11=" << v.h11 << " h12=" << v.h12 << " h31=" << v.h13
      << " h22=" << v.h22 << " -chiT=" << -v.chi_t << "\n";
  out << "ambient: " << amb << "\n";
  out << "bundle: " << bun << "\n";
  out << "dim=4 rho=" << v.rho() << " level=" << v.level
      << " K3-type=" << (v.k3_type ? "yes" : "no")
      << " strongly-Fano=" << (v.strongly_fano ? "yes" : "no")
      << " euler=" << v.euler << "\n";
  out << "hodge diamond:\n" << v.diamond_str();
  for (auto& a : recognize_patterns(ops, ast.bundle))
    out << "note: " << a << "\n";
  for (auto& n : v.notes) out << "note: " << n << "\n";
}

inline void print_bwb(std::ostream& out, const std::string& factor,
                      const std::string& weight) {
  std::vector<FlagShape> shapes = parse_ambient(factor);
  if (shapes.size() != 1)
    throw std::invalid_argument("bwb expects exactly one factor");
  BundleOps ops(shapes);
  BundleSum e;
  try {
    e = parse_bundle(weight, ops);
  } catch (const ParseError&) {
    e = parse_shorthand(ops, weight);
  }
  std::map<long, Int> h = ops.cohomology(e);
  bool any = false;
  for (auto& [q, n] : h) {
    if (n == 0) continue;
    out << "H^" << q << " = " << n << "\n";
    any = true;
  }
  if (!any) out << "acyclic\n";
}

inline void print_chi(std::ostream& out, const std::string& ambient,
                      const std::string& bundle) {
  std::vector<FlagShape> shapes = parse_ambient(ambient);
  BundleOps ops(shapes);
  BundleSum e = parse_bundle(bundle, ops);
  SheafCohom sc(shapes, BundleSum{});
  out << "chi = " << sc.chi_y(e) << "\n";
}

inline MorphismData morphism_from_text(const std::string& text) {
  auto kv = parse_kv(text);
  MorphismData m;
  m.shapes = parse_ambient(take(kv, "ambient"));
  BundleOps ops(m.shapes);
  std::string ci = take_opt(kv, "ci");
  if (!ci.empty()) m.ci = parse_bundle(ci, ops);
  m.source = parse_bundle(take(kv, "source"), ops);
  m.target = parse_bundle(take(kv, "target"), ops);
  std::string tw = take_opt(kv, "twist");
  if (tw.empty()) {
    for (auto& fl : m.shapes) m.twist.emplace_back(fl.steps.size(), 1);
  } else {
    m.twist = line_twists_of(ops, tw);
  }
  expect_empty(kv);
  return m;
}

inline void print_hilbert(std::ostream& out, const std::string& text) {
  DegeneracyLocus dl(morphism_from_text(text));
  SectionLocus loc = dl.canonical_section_locus();
  out << "source rank = " << dl.source_rank()
      << ", target rank = " << dl.target_rank() << "\n";
  out << "base dim = " << dl.base_dim() << ", codim = " << loc.codim
      << ", dim Z = " << dl.dim_z() << "\n";
  out << "Z: " << loc.description << "\n";
  out << "[Z] = " << dl.ring().poly_str(loc.cls) << "\n";
  out << "chi(O_Z(k)) = " << dl.en_hilbert().str() << "\n";
}

inline ConicData conic_from_text(const std::string& text) {
  auto kv = parse_kv(text);
  ConicData d;
  d.shapes = parse_ambient(take(kv, "base"));
  BundleOps ops(d.shapes);
  std::string ci = take_opt(kv, "ci");
  if (!ci.empty()) d.ci = parse_bundle(ci, ops);
  d.e.plus = parse_bundle(take(kv, "eplus"), ops);
  std::string em = take_opt(kv, "eminus");
  if (!em.empty()) d.e.minus = parse_bundle(em, ops);
  std::string ks = take_opt(kv, "k");
  if (ks.empty()) {
    for (auto& fl : d.shapes) d.k.emplace_back(fl.steps.size(), 0);
  } else {
    d.k = line_twists_of(ops, ks);
  }
  expect_empty(kv);
  return d;
}

inline void print_discriminant(std::ostream& out, const std::string& text) {
  ConicData d = conic_from_text(text);
  ConicDiscriminant cd = conic_discriminant(d);
  ChowRing ring(d.shapes);
  out << "[Delta] = " << ring.poly_str(cd.delta) << "\n";
  out << "deg Delta = " << cd.delta_degree << "\n";
  out << "[Delta_sing] = " << ring.poly_str(cd.delta_sing) << "\n";
  if (cd.has_count) out << "ODP count = " << cd.sing_count << "\n";
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"invariants of zero loci in products of flag varieties"};
  app.require_subcommand(1);

  auto* inv = app.add_subcommand(
      "invariants", "numerical invariants of '<ambient> ; <bundle>'");
  std::vector<std::string> inv_spec;
  inv->add_option("spec", inv_spec, "spec string")->required()->expected(-1);

  auto* bwb = app.add_subcommand(
      "bwb", "cohomology of a homogeneous bundle on a single factor");
  std::string bwb_factor, bwb_weight;
  bwb->add_option("factor", bwb_factor, "e.g. \"G(2,5)\"")->required();
  bwb->add_option("weight", bwb_weight, "e.g. \"S2Q(-4)\" or \"dual(U[1])\"")
      ->required();

  auto* chi = app.add_subcommand(
      "chi", "Euler characteristic of a bundle on the ambient space");
  std::string chi_ambient;
  std::vector<std::string> chi_bundle;
  chi->add_option("ambient", chi_ambient)->required();
  chi->add_option("bundle", chi_bundle)->required()->expected(-1);

  auto* hil = app.add_subcommand(
      "hilbert", "Hilbert polynomial of a degeneracy locus");
  std::string hil_file;
  hil->add_option("file", hil_file, "key=value description")->required();

  auto* dis = app.add_subcommand(
      "discriminant", "discriminant classes of a conic bundle");
  std::string dis_file;
  dis->add_option("file", dis_file, "key=value description")->required();

  auto* sea = app.add_subcommand(
      "search", "enumerate candidate models and print their table");
  std::string sea_config;
  sea->add_option("--config", sea_config, "key=value bounds")->required();

  auto* tab = app.add_subcommand(
      "table", "evaluate a seed list and emit the classification table");
  std::string tab_seed, tab_format = "csv", tab_out;
  tab->add_option("--seed", tab_seed, "seed list file")->required();
  tab->add_option("--format", tab_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  tab->add_option("--out", tab_out, "write to a file instead of stdout");

  std::vector<const char*> argv;
  argv.push_back("fzl");
  for (auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*inv) {
      cli_detail::print_invariants(out, cli_detail::join(inv_spec));
    } else if (*bwb) {
      cli_detail::print_bwb(out, bwb_factor, bwb_weight);
    } else if (*chi) {
      cli_detail::print_chi(out, chi_ambient, cli_detail::join(chi_bundle));
    } else if (*hil) {
      cli_detail::print_hilbert(out, cli_detail::read_file(hil_file));
    } else if (*dis) {
      cli_detail::print_discriminant(out, cli_detail::read_file(dis_file));
    } else if (*sea) {
      SearchConfig cfg = parse_search_config(cli_detail::read_file(sea_config));
      cfg.log = &err;
      std::vector<SeedEntry> seeds = enumerate_candidates(cfg);
      err << "candidates: " << seeds.size() << "\n";
      AtlasStore store = dedup_and_id(evaluate_seeds(seeds));
      out << emit_csv(store);
    } else if (*tab) {
      std::vector<SeedEntry> seeds =
          load_seeds(cli_detail::read_file(tab_seed));
      AtlasStore store = dedup_and_id(evaluate_seeds(seeds));
      std::string payload =
          tab_format == "json" ? store_to_jsonl(store) : emit_csv(store);
      if (tab_out.empty()) {
        out << payload;
      } else {
        std::ofstream f(tab_out);
        if (!f) throw std::invalid_argument("cannot write " + tab_out);
        f << payload;
        err << "wrote " << store.records.size() << " records to " << tab_out
            << "\n";
      }
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    err << "consistency failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace fzl
