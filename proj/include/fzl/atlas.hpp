#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fzl/dsl.hpp"
#include "fzl/fanovariants.hpp"

namespace fzl {

/** One line of a seed list: `<ambient> ; <bundle> ; <optional label>`. */
struct SeedEntry {
  std::string ambient;
  std::string bundle;
  std::string label;
  bool operator==(const SeedEntry&) const = default;
};

/** One table row: canonical spec strings plus everything computed from them. */
struct FanoRecord {
  std::string ambient;
  std::string bundle;
  std::string label;
  FanoInvariants inv;
  std::string id;
  std::vector<std::string> annotations;
  bool possible_duplicate = false;
  bool operator==(const FanoRecord&) const = default;
};

namespace atlas_detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/** Splits on ';' at parenthesis depth zero; twist groups stay intact. */
inline std::vector<std::string> split_top_level(const std::string& line) {
  std::vector<std::string> fields(1);
  long depth = 0;
  for (char c : line) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ';' && depth == 0) {
      fields.emplace_back();
      continue;
    }
    fields.back() += c;
  }
  for (auto& f : fields) f = trim(f);
  return fields;
}

inline std::string superscript(long v) {
  static const char* digit[10] = {"⁰", "¹", "²", "³",
                                  "⁴", "⁵", "⁶", "⁷",
                                  "⁸", "⁹"};
  std::string out;
  for (char c : std::to_string(v)) out += digit[c - '0'];
  return out;
}

inline bool block_constant(const std::vector<long>& blk) {
  for (long x : blk)
    if (x != blk[0]) return false;
  return true;
}

inline bool all_blocks_zero(const std::vector<std::vector<long>>& fw) {
  for (auto& blk : fw)
    for (long x : blk)
      if (x != 0) return false;
  return true;
}

/** Factor weight of the last-block quotient in normal form. */
inline bool quotient_shape(const FlagShape& fl,
                           const std::vector<std::vector<long>>& fw) {
  if (fl.steps.size() != 1) return false;
  for (long x : fw[0])
    if (x != 1) return false;
  for (size_t i = 0; i + 1 < fw[1].size(); ++i)
    if (fw[1][i] != 1) return false;
  return fw[1].back() == 0;
}

/** Factor weight of the dual subbundle in normal form. */
inline bool dual_sub_shape(const FlagShape& fl,
                           const std::vector<std::vector<long>>& fw) {
  if (fl.steps.size() != 1) return false;
  if (fw[0][0] != 1) return false;
  for (size_t i = 1; i < fw[0].size(); ++i)
    if (fw[0][i] != 0) return false;
  for (long x : fw[1])
    if (x != 0) return false;
  return true;
}

}  // namespace atlas_detail

inline std::vector<SeedEntry> load_seeds(const std::string& text) {
  std::vector<SeedEntry> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::string t = atlas_detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fields = atlas_detail::split_top_level(t);
    if (fields.size() < 2 || fields.size() > 3)
      throw std::invalid_argument("seed line needs 2 or 3 fields: " + t);
    SeedEntry e;
    e.ambient = fields[0];
    e.bundle = fields[1];
    if (fields.size() == 3) e.label = fields[2];
    out.push_back(std::move(e));
  }
  return out;
}

/**
 * Purely syntactic summand templates.  A quotient bundle on a projective
 * factor twisted off-factor signals a blow-up of a linear-section center;
 * a quotient times a dual subbundle on two factors signals the
 * Grassmann-bundle construction.  Nothing geometric is proven.
 */
inline std::vector<std::string> recognize_patterns(const BundleOps& ops,
                                                   const BundleSum& bundle) {
  using namespace atlas_detail;
  const auto& shapes = ops.shapes();
  long nf = ops.num_factors();
  std::vector<std::string> notes;
  for (const auto& [e0, mult] : bundle) {
    Irred e = ops.normal_form(e0);
    for (long f = 0; f < nf; ++f) {
      const FlagShape& fl = shapes[f];
      long m = fl.n - 1;
      if (fl.steps != std::vector<long>{1} || m < 2) continue;
      if (!quotient_shape(fl, e[f]) || e[f][0][0] != 1) continue;
      bool lines_elsewhere = true;
      std::vector<std::vector<long>> tw(nf);
      for (long g = 0; g < nf; ++g) {
        if (g == f) {
          tw[g].assign(1, 0);
          continue;
        }
        std::vector<long> shifts;
        for (auto& blk : e[g]) {
          if (!block_constant(blk)) lines_elsewhere = false;
          shifts.push_back(blk[0]);
        }
        if (lines_elsewhere) tw[g] = shifts_to_twist(shapes[g], shifts);
      }
      if (!lines_elsewhere) continue;
      bool any = false;
      for (auto& v : tw)
        for (long t : v)
          if (t != 0) any = true;
      if (!any) continue;
      std::string note = "Lemma blow-up: Bl_{Z(" + print_twist(shapes, tw) +
                         "^{⊕" + std::to_string(m + 1) + "})} pattern";
      long hosts = 0, host = -1;
      for (long g = 0; g < nf; ++g) {
        bool nz = false;
        for (long t : tw[g]) nz = nz || t != 0;
        if (nz) {
          ++hosts;
          host = g;
        }
      }
      if (hosts == 1 && shapes[host].steps == std::vector<long>{1} &&
          tw[host] == std::vector<long>{1} && shapes[host].n - 1 >= m + 1)
        note += ", Z = P" + superscript(shapes[host].n - 1 - (m + 1));
      notes.push_back(note);
    }
    for (long i = 0; i < nf; ++i) {
      if (shapes[i].steps.size() != 1) continue;
      if (shapes[i].n - shapes[i].steps[0] < 2) continue;
      if (!quotient_shape(shapes[i], e[i]) || e[i][0][0] != 1) continue;
      for (long j = 0; j < nf; ++j) {
        if (j == i || shapes[j].steps.size() != 1) continue;
        if (shapes[j].steps[0] < 2) continue;
        if (!dual_sub_shape(shapes[j], e[j])) continue;
        bool rest_trivial = true;
        for (long g = 0; g < nf; ++g)
          if (g != i && g != j && !all_blocks_zero(e[g])) rest_trivial = false;
        if (rest_trivial)
          notes.push_back("Prop flag: Grassmann-bundle / blow-up pattern");
      }
    }
  }
  return notes;
}

inline long worker_count(long requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FZL_WORKERS")) {
    long v = std::atol(env);
    if (v > 0) return v;
  }
  long hc = (long)std::thread::hardware_concurrency();
  return std::clamp<long>(hc, 1, 8);
}

inline FanoRecord evaluate_seed(const SeedEntry& seed) {
  SpecAst ast = parse_spec(seed.ambient + " ; " + seed.bundle);
  FanoRecord rec;
  rec.ambient = print_ambient(ast.shapes);
  BundleOps ops(ast.shapes);
  rec.bundle = print_bundle(ops, ast.bundle);
  rec.label = seed.label;
  FanoZeroLocus z(ast.shapes, ast.bundle);
  rec.inv = z.invariants();
  rec.id = rec.inv.id();
  rec.annotations = recognize_patterns(ops, ast.bundle);
  for (auto& n : rec.inv.notes) rec.annotations.push_back(n);
  return rec;
}

/**
 * Work-queue evaluation.  Workers are pure; results land in their input
 * slots, so the output order never depends on the thread count.
 */
inline std::vector<FanoRecord> evaluate_seeds(const std::vector<SeedEntry>& seeds,
                                              long workers = 0) {
  std::vector<FanoRecord> out(seeds.size());
  std::vector<std::exception_ptr> errs(seeds.size());
  std::atomic<size_t> cursor{0};
  auto run = [&] {
    for (size_t i; (i = cursor.fetch_add(1)) < seeds.size();) {
      try {
        out[i] = evaluate_seed(seeds[i]);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  long n = std::min<long>(worker_count(workers), (long)seeds.size());
  if (n <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (long t = 0; t < n; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

/** Records in submission order plus a base-identifier lookup. */
struct AtlasStore {
  std::vector<FanoRecord> records;
  std::map<std::string, std::vector<size_t>> by_base_id;
};

inline const std::string kDuplicateFlag = "possible-duplicate-presentation";

/**
 * Drops exact (ambient, bundle) duplicates, then makes identifiers unique:
 * rows sharing the base identifier get suffix letters in order of first
 * appearance, and rows whose full fingerprints also agree are flagged as
 * possible re-presentations of one variety.
 */
inline AtlasStore dedup_and_id(const std::vector<FanoRecord>& input) {
  AtlasStore store;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& rec : input)
    if (seen.insert({rec.ambient, rec.bundle}).second)
      store.records.push_back(rec);

  std::map<std::string, std::vector<size_t>> groups;
  std::vector<std::string> order;
  for (size_t i = 0; i < store.records.size(); ++i) {
    std::string base = store.records[i].inv.id();
    if (!groups.count(base)) order.push_back(base);
    groups[base].push_back(i);
  }
  for (const auto& base : order) {
    const auto& idx = groups[base];
    if (idx.size() > 26)
      throw std::logic_error("identifier letters exhausted for " + base);
    for (size_t a = 0; a < idx.size(); ++a) {
      FanoRecord& rec = store.records[idx[a]];
      rec.id = idx.size() == 1 ? base : base + "-" + char('A' + a);
      rec.possible_duplicate = false;
      for (size_t b = 0; b < idx.size(); ++b)
        if (b != a && store.records[idx[b]].inv.fingerprint() ==
                          rec.inv.fingerprint())
          rec.possible_duplicate = true;
      auto& ann = rec.annotations;
      bool has = std::count(ann.begin(), ann.end(), kDuplicateFlag) > 0;
      if (rec.possible_duplicate && !has) ann.push_back(kDuplicateFlag);
      if (!rec.possible_duplicate && has)
        ann.erase(std::remove(ann.begin(), ann.end(), kDuplicateFlag),
                  ann.end());
    }
  }
  store.by_base_id = std::move(groups);
  return store;
}

namespace atlas_detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string join(const std::vector<std::string>& v,
                        const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

}  // namespace atlas_detail

inline const std::string kCsvHeader =
    "id,rho,h22,h12,h0mK,K4,minus_chiT,ambient,bundle,annotations";

/** One table; `fk3` selects rows with h^{3,1} = 1, else their complement. */
inline std::string to_csv(const AtlasStore& store, bool fk3) {
  using atlas_detail::csv_field;
  std::string out = kCsvHeader + "\n";
  for (const auto& rec : store.records) {
    if ((rec.inv.h13 == 1) != fk3) continue;
    out += csv_field(rec.id) + "," + std::to_string(rec.inv.rho()) + "," +
           std::to_string(rec.inv.h22) + "," + std::to_string(rec.inv.h12) +
           "," + rec.inv.h0_minus_k.str() + "," + rec.inv.minus_k_power.str() +
           "," + Int(-rec.inv.chi_t).str() + "," + csv_field(rec.ambient) +
           "," + csv_field(rec.bundle) + "," +
           csv_field(atlas_detail::join(rec.annotations, "; ")) + "\n";
  }
  return out;
}

/** Main table, then the h^{3,1} != 1 rows as a separate trailing table. */
inline std::string emit_csv(const AtlasStore& store) {
  std::string out = to_csv(store, true);
  bool any = false;
  for (const auto& rec : store.records) any = any || rec.inv.h13 != 1;
  if (any) out += "\n" + to_csv(store, false);
  return out;
}

inline nlohmann::json record_to_json(const FanoRecord& rec) {
  nlohmann::json j;
  j["ambient"] = rec.ambient;
  j["bundle"] = rec.bundle;
  j["label"] = rec.label;
  j["id"] = rec.id;
  j["annotations"] = rec.annotations;
  j["possible_duplicate"] = rec.possible_duplicate;
  const FanoInvariants& v = rec.inv;
  j["dim_x"] = v.dim_x;
  j["minus_k"] = v.minus_k;
  j["strongly_fano"] = v.strongly_fano;
  j["h0_minus_k"] = v.h0_minus_k.convert_to<long long>();
  j["minus_k_power"] = v.minus_k_power.convert_to<long long>();
  j["chi_t"] = v.chi_t.convert_to<long long>();
  j["chi_p1"] = v.chi_p1.convert_to<long long>();
  j["chi_p2"] = v.chi_p2.convert_to<long long>();
  j["has_hodge"] = v.has_hodge;
  std::vector<std::vector<long>> diamond(5, std::vector<long>(5, 0));
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q < 5; ++q) diamond[p][q] = v.hodge[p][q];
  j["hodge"] = diamond;
  j["level"] = v.level;
  j["k3_type"] = v.k3_type;
  j["euler"] = v.euler;
  return j;
}

inline FanoRecord record_from_json(const nlohmann::json& j) {
  FanoRecord rec;
  rec.ambient = j.at("ambient").get<std::string>();
  rec.bundle = j.at("bundle").get<std::string>();
  rec.label = j.at("label").get<std::string>();
  rec.id = j.at("id").get<std::string>();
  rec.annotations = j.at("annotations").get<std::vector<std::string>>();
  rec.possible_duplicate = j.at("possible_duplicate").get<bool>();
  FanoInvariants& v = rec.inv;
  v.dim_x = j.at("dim_x").get<long>();
  v.minus_k = j.at("minus_k").get<std::vector<std::vector<long>>>();
  v.strongly_fano = j.at("strongly_fano").get<bool>();
  v.h0_minus_k = Int(j.at("h0_minus_k").get<long long>());
  v.minus_k_power = Int(j.at("minus_k_power").get<long long>());
  v.chi_t = Int(j.at("chi_t").get<long long>());
  v.chi_p0 = 1;
  v.chi_p1 = Int(j.at("chi_p1").get<long long>());
  v.chi_p2 = Int(j.at("chi_p2").get<long long>());
  v.has_hodge = j.at("has_hodge").get<bool>();
  auto diamond = j.at("hodge").get<std::vector<std::vector<long>>>();
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q < 5; ++q) v.hodge[p][q] = diamond[p][q];
  v.h11 = v.hodge[1][1];
  v.h12 = v.hodge[1][2];
  v.h13 = v.hodge[1][3];
  v.h22 = v.hodge[2][2];
  v.level = j.at("level").get<long>();
  v.k3_type = j.at("k3_type").get<bool>();
  v.euler = j.at("euler").get<long>();
  return rec;
}

inline std::string store_to_jsonl(const AtlasStore& store) {
  std::string out;
  for (const auto& rec : store.records)
    out += record_to_json(rec).dump() + "\n";
  return out;
}

inline AtlasStore store_from_jsonl(const std::string& text) {
  AtlasStore store;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (atlas_detail::trim(line).empty()) continue;
    store.records.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  for (size_t i = 0; i < store.records.size(); ++i)
    store.by_base_id[store.records[i].inv.id()].push_back(i);
  return store;
}

/** Bounds for the candidate search; the space is finite once all are set. */
struct SearchConfig {
  long max_factors = 1;
  long max_n = 6;
  long max_steps = 1;
  long max_ambient_dim = 8;
  long max_bundle_summands = 3;
  long min_twist = 0;
  long max_twist = 3;
  std::vector<std::string> atoms{"line", "dualU", "Q"};
  std::ostream* log = nullptr;
};

inline SearchConfig parse_search_config(const std::string& text) {
  SearchConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::string t = atlas_detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + t);
    std::string key = atlas_detail::trim(t.substr(0, eq));
    std::string val = atlas_detail::trim(t.substr(eq + 1));
    if (key == "maxFactors") cfg.max_factors = std::stol(val);
    else if (key == "maxN") cfg.max_n = std::stol(val);
    else if (key == "maxSteps") cfg.max_steps = std::stol(val);
    else if (key == "maxAmbientDim") cfg.max_ambient_dim = std::stol(val);
    else if (key == "maxBundleSummands") cfg.max_bundle_summands = std::stol(val);
    else if (key == "minTwist") cfg.min_twist = std::stol(val);
    else if (key == "maxTwist") cfg.max_twist = std::stol(val);
    else if (key == "atoms") {
      cfg.atoms.clear();
      std::istringstream as(val);
      std::string a;
      while (std::getline(as, a, ',')) {
        a = atlas_detail::trim(a);
        if (a != "line" && a != "dualU" && a != "Q")
          throw std::invalid_argument("unknown atom kind: " + a);
        cfg.atoms.push_back(a);
      }
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  if (cfg.max_factors < 1 || cfg.max_n < 2 || cfg.max_steps < 1 ||
      cfg.max_ambient_dim < 1 || cfg.max_bundle_summands < 1 ||
      cfg.max_twist < cfg.min_twist || cfg.atoms.empty())
    throw std::invalid_argument("search bounds out of range");
  return cfg;
}

/**
 * Conservative global-generation test: the flattened per-factor weight must
 * be dominant, which exhibits the summand as a quotient of a trivial bundle.
 * Bundles failing it are merely inconclusive, not disproven.
 */
inline bool globally_generated(const BundleOps& ops, const Irred& e0) {
  Irred e = ops.normal_form(e0);
  for (long f = 0; f < ops.num_factors(); ++f) {
    long prev = 0;
    bool first = true;
    for (const auto& blk : e[f])
      for (long x : blk) {
        if (!first && x > prev) return false;
        prev = x;
        first = false;
      }
  }
  return true;
}

namespace atlas_detail {

inline std::vector<FlagShape> factor_pool(const SearchConfig& cfg) {
  std::vector<FlagShape> out;
  for (long n = 2; n <= cfg.max_n; ++n) {
    for (long k = 1; 2 * k <= n && k <= n - 1; ++k)
      out.emplace_back(std::vector<long>{k}, n);
    if (cfg.max_steps >= 2)
      for (long k1 = 1; k1 < n - 1; ++k1)
        for (long k2 = k1 + 1; k2 < n; ++k2)
          out.emplace_back(std::vector<long>{k1, k2}, n);
  }
  return out;
}

inline void twist_odometer(const std::vector<FlagShape>& shapes, long lo,
                           long hi, bool skip_zero,
                           const std::function<void(
                               const std::vector<std::vector<long>>&)>& fn) {
  std::vector<std::vector<long>> tw;
  for (const auto& fl : shapes) tw.emplace_back(fl.steps.size(), lo);
  for (;;) {
    bool zero = true;
    for (auto& v : tw)
      for (long t : v) zero = zero && t == 0;
    if (!zero || !skip_zero) fn(tw);
    long f = 0, j = 0;
    for (;;) {
      if (f == (long)tw.size()) return;
      if (++tw[f][j] <= hi) break;
      tw[f][j] = lo;
      if (++j == (long)tw[f].size()) {
        j = 0;
        ++f;
      }
    }
  }
}

}  // namespace atlas_detail

/**
 * Deterministic bounded enumeration of (ambient, bundle) candidates with
 * every summand globally generated, dim Y - rank F = 4, and the adjoint
 * line bundle strictly anti-ample.  Not a census: the bounds deliberately
 * cut the space down to desk scale.
 */
inline std::vector<SeedEntry> enumerate_candidates(const SearchConfig& cfg) {
  using atlas_detail::twist_odometer;
  std::vector<SeedEntry> out;
  auto pool = atlas_detail::factor_pool(cfg);

  std::vector<std::vector<size_t>> ambients;
  std::vector<size_t> cur;
  auto grow = [&](auto&& self, size_t start, long dim) -> void {
    if (!cur.empty() && dim >= 5 && dim - 4 >= 1) ambients.push_back(cur);
    if ((long)cur.size() == cfg.max_factors) return;
    for (size_t i = start; i < pool.size(); ++i) {
      long d = dim + pool[i].dim();
      if (d > cfg.max_ambient_dim) continue;
      cur.push_back(i);
      self(self, i, d);
      cur.pop_back();
    }
  };
  grow(grow, 0, 0);

  for (const auto& amb : ambients) {
    std::vector<FlagShape> shapes;
    for (size_t i : amb) shapes.push_back(pool[i]);
    BundleOps ops(shapes);
    long need = ops.dim() - 4;

    std::vector<Irred> cands;
    std::vector<long> ranks;
    auto push = [&](const Irred& e) {
      Irred nf = ops.normal_form(e);
      long r = ops.rank(nf).convert_to<long>();
      if (r > need) return;
      if (!globally_generated(ops, nf)) {
        if (cfg.log)
          (*cfg.log) << "criterion inconclusive: " << print_ambient(shapes)
                     << " ; " << print_irred(ops, nf) << "\n";
        return;
      }
      cands.push_back(nf);
      ranks.push_back(r);
    };
    for (const auto& kind : cfg.atoms) {
      if (kind == "line") {
        twist_odometer(shapes, std::max<long>(0, cfg.min_twist), cfg.max_twist,
                       true, [&](const auto& tw) { push(ops.line(tw)); });
      } else if (kind == "dualU") {
        for (long f = 0; f < ops.num_factors(); ++f)
          twist_odometer(shapes, 0, cfg.max_twist, false, [&](const auto& tw) {
            push(ops.twist(ops.r_dual(f, 1), tw));
          });
      } else if (kind == "Q") {
        for (long f = 0; f < ops.num_factors(); ++f)
          twist_odometer(shapes, 0, cfg.max_twist, false, [&](const auto& tw) {
            push(ops.twist(ops.r_bundle(f, shapes[f].num_blocks()), tw));
          });
      }
    }

    std::vector<size_t> pick;
    auto choose = [&](auto&& self, size_t i, long rest, long count) -> void {
      if (rest == 0) {
        BundleSum f;
        for (size_t c : pick) f[cands[c]] += 1;
        BundleSum mk = ops.dual(ops.tensor(ops.canonical_line(), ops.det(f)));
        bool ample = true;
        for (const auto& tf : ops.line_twists(mk.begin()->first))
          for (long t : tf) ample = ample && t > 0;
        if (ample)
          out.push_back({print_ambient(shapes), print_bundle(ops, f), ""});
        return;
      }
      if (i == cands.size() || count == cfg.max_bundle_summands) return;
      self(self, i + 1, rest, count);
      if (ranks[i] <= rest) {
        pick.push_back(i);
        self(self, i, rest - ranks[i], count + 1);
        pick.pop_back();
      }
    };
    choose(choose, 0, need, 0);
  }
  return out;
}

}  // namespace fzl
