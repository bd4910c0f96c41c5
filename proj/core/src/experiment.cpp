#include "stav/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "stav/cache.hpp"
#include "stav/curves.hpp"
#include "stav/errors.hpp"
#include "stav/sato_tate.hpp"
#include "stav/sums.hpp"
#include "stav/util.hpp"

namespace stav {

namespace {

struct RunContext {
  CurveFamily fam;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::unique_ptr<TraceCache> cache;  // null = build tables in-process
  AverageOptions avg;
};

std::vector<std::int64_t> ladder(const Config& cfg, const std::string& section,
                                 const std::string& key) {
  auto v = cfg.require_int_list(section, key);
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1])
      throw ConfigError("[" + section + "] " + key + " must be strictly increasing");
  }
  return v;
}

void check_x_values(const Config& cfg, const std::vector<std::int64_t>& xs) {
  std::int64_t cap = cfg.get_int("run", "max_x", 20000);
  for (std::int64_t x : xs) {
    if (x < 5) throw ConfigError("x values must be at least 5");
    if (x > cap)
      throw ConfigError("x = " + std::to_string(x) + " exceeds the configured max_x = " +
                        std::to_string(cap));
  }
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::string>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open output file: " + tmp.string());
    os << header << "\n";
    for (const auto& r : rows) os << r << "\n";
  }
  std::filesystem::rename(tmp, path);
}

// Distinct values from [0, bound), sorted; the whole range when it is small.
std::vector<std::int64_t> sample_values(std::int64_t bound, std::int64_t count,
                                        std::mt19937_64& rng) {
  std::vector<std::int64_t> out;
  if (bound <= count) {
    out.resize(static_cast<std::size_t>(bound));
    for (std::int64_t i = 0; i < bound; ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
  }
  std::set<std::int64_t> seen;
  std::uniform_int_distribution<std::int64_t> pick(0, bound - 1);
  while (static_cast<std::int64_t>(seen.size()) < count) seen.insert(pick(rng));
  out.assign(seen.begin(), seen.end());
  return out;
}

PairSet theorem_set(const Config& cfg, const std::string& kind, std::int64_t T) {
  std::string set_kind = cfg.get_string("set", "kind", kind == "theorem1" ? "box"
                                        : kind == "theorem3"              ? "farey_product"
                                                                          : "farey");
  std::int64_t A = cfg.get_int("set", "A", 0);
  std::int64_t B = cfg.get_int("set", "B", 0);

  if (kind == "theorem1") {
    if (set_kind == "box") return convex_pair_set(ConvexRegion::box(A, B, T));
    if (set_kind == "polygon") {
      std::string spec = cfg.require_string("set", "vertices");
      std::vector<LatticePoint> verts;
      std::istringstream in(spec);
      std::string part;
      while (std::getline(in, part, ';')) {
        std::istringstream ps(part);
        LatticePoint pt;
        if (!(ps >> pt.u >> pt.v)) throw ConfigError("bad vertex in [set] vertices: '" + part + "'");
        verts.push_back(pt);
      }
      return convex_pair_set(ConvexRegion::polygon(std::move(verts), A, B, T));
    }
    throw ConfigError("theorem1 sets must be box or polygon, got '" + set_kind + "'");
  }
  if (kind == "theorem2") {
    if (set_kind == "z") return z_set(A, B, T);
    if (set_kind == "zstar") return z_star_set(A, B, T);
    if (set_kind == "farey") return farey_set(T);
    throw ConfigError("theorem2 sets must be z, zstar or farey, got '" + set_kind + "'");
  }
  // theorem3: products of Farey prefixes (0 = the whole set).
  PairSet base = farey_set(T);
  auto prefix = [&](std::int64_t count) {
    if (count <= 0 || count >= static_cast<std::int64_t>(base.pairs.size())) return base.pairs;
    return std::vector<LatticePoint>(base.pairs.begin(), base.pairs.begin() + count);
  };
  return farey_product(prefix(cfg.get_int("set", "r_count", 0)),
                       prefix(cfg.get_int("set", "s_count", 0)), T);
}

std::filesystem::path manifest_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p += ".manifest.json";
  return p;
}

void finish(RunManifest& man, const RunContext& rc,
            std::chrono::steady_clock::time_point start) {
  if (rc.cache) {
    man.cache_hits = static_cast<std::int64_t>(rc.cache->hits());
    man.cache_misses = static_cast<std::int64_t>(rc.cache->misses());
  }
  man.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  std::filesystem::path mp = manifest_path(rc.out);
  std::filesystem::path tmp = mp;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << man.to_json() << "\n";
  }
  std::filesystem::rename(tmp, mp);
  man.outputs.push_back(mp.string());
}

void run_theorem(const Config& cfg, const std::string& kind, RunContext& rc, RunManifest& man) {
  auto xs = ladder(cfg, "run", "x");
  auto Ts = ladder(cfg, "run", "T");
  check_x_values(cfg, xs);
  int grid = static_cast<int>(cfg.get_int("run", "grid", 16));
  if (grid < 2) throw ConfigError("[run] grid must be at least 2");
  double eta = cfg.get_double("run", "eta", 0.0);

  std::vector<std::string> rows;
  for (std::int64_t T : Ts) {
    PairSet set = theorem_set(cfg, kind, T);
    for (std::int64_t x : xs) {
      AveragedStudy study(rc.fam, set, x, grid, rc.avg);
      for (int i = 0; i < grid; ++i)
        for (int j = i + 1; j <= grid; ++j) rows.push_back(averaged_csv_row(study.result(i, j)));
      man.notes.push_back("T=" + std::to_string(T) + ";x=" + std::to_string(x) +
                          ";sup_deviation=" + format_double(study.sup_deviation()) +
                          ";singular_members=" + std::to_string(study.singular_members()));
      if (kind == "theorem1") {
        // Small primes have no nontrivial character bound; they enter through
        // the exact per-prime walk, which the log records.
        std::int64_t small = 0;
        for (std::int64_t p : sieve_primes(static_cast<std::uint64_t>(x)).primes)
          if (p > 3 && p <= T) ++small;
        man.notes.push_back("T=" + std::to_string(T) + ";x=" + std::to_string(x) +
                            ";exact_branch_primes=" + std::to_string(small));
        if (eta > 0.0) {
          bool met = static_cast<double>(set.size()) >= std::pow(static_cast<double>(T), eta);
          man.notes.push_back("T=" + std::to_string(T) + ";eta=" + format_double(eta) +
                              ";size_condition=" + (met ? "met" : "not_met"));
        }
      }
    }
  }
  write_csv(rc.out, averaged_csv_header(), rows);
  man.rows = static_cast<std::int64_t>(rows.size());
  man.outputs.push_back(rc.out.string());
}

void run_vertical(const Config& cfg, RunContext& rc, RunManifest& man) {
  auto ps = ladder(cfg, "vertical", "p");
  check_x_values(cfg, ps);
  int grid = static_cast<int>(cfg.get_int("vertical", "grid", 64));
  if (grid < 2) throw ConfigError("[vertical] grid must be at least 2");
  for (std::int64_t p : ps)
    if (!is_prime(p)) throw ConfigError("vertical ladder entry is not prime: " + std::to_string(p));

  auto tables = rc.avg.tables;
  std::function<std::string(std::size_t)> job = [&](std::size_t i) -> std::string {
    std::int64_t p = ps[i];
    TraceTable t = tables ? tables(rc.fam, p) : build_trace_table(rc.fam, p);
    AngleTable angles = AngleTable::from(t);
    std::int64_t good = 0;
    for (double psi : angles.psi)
      if (psi >= 0.0) ++good;
    double disc = vertical_discrepancy(angles, grid);
    return hex16(rc.fam.id) + "," + std::to_string(p) + "," + std::to_string(grid) + "," +
           std::to_string(good) + "," + format_double(disc);
  };
  std::vector<std::string> rows = parallel_index_map<std::string>(ps.size(), rc.jobs, job);
  write_csv(rc.out, "family_id,p,grid,good_count,sup_discrepancy", rows);
  man.rows = static_cast<std::int64_t>(rows.size());
  man.outputs.push_back(rc.out.string());
}

void run_trace_table(const Config& cfg, RunContext& rc, RunManifest& man) {
  auto xs = cfg.require_int_list("run", "x");
  check_x_values(cfg, xs);
  std::int64_t x = *std::max_element(xs.begin(), xs.end());
  if (!rc.cache) throw ConfigError("trace-table requires [run] cache (or --cache)");
  std::vector<std::int64_t> ps;
  for (std::int64_t p : sieve_primes(static_cast<std::uint64_t>(x)).primes)
    if (p > 3) ps.push_back(p);
  std::function<int(std::size_t)> job = [&](std::size_t i) -> int {
    rc.cache->get_or_build(rc.fam, ps[i]);
    return 0;
  };
  parallel_index_map<int>(ps.size(), rc.jobs, job);
  man.notes.push_back("primes_cached=" + std::to_string(ps.size()));
}

void run_michel(const Config& cfg, RunContext& rc, RunManifest& man) {
  std::int64_t p_min = cfg.get_int("michel", "p_min", 5);
  std::int64_t p_max = cfg.get_int("michel", "p_max", 997);
  if (p_min < 5 || p_max < p_min) throw ConfigError("[michel] needs 5 <= p_min <= p_max");
  check_x_values(cfg, {p_max});
  int n_max = static_cast<int>(cfg.get_int("michel", "n_max", 10));
  std::int64_t samples = cfg.get_int("michel", "samples", 32);
  if (n_max < 1 || samples < 1) throw ConfigError("[michel] n_max and samples must be positive");

  std::vector<std::int64_t> ps;
  for (std::int64_t p : sieve_primes(static_cast<std::uint64_t>(p_max)).primes)
    if (p >= p_min && p > 3) ps.push_back(p);

  auto tables = rc.avg.tables;
  std::function<std::vector<std::string>(std::size_t)> job =
      [&](std::size_t i) -> std::vector<std::string> {
    std::int64_t p = ps[i];
    PrimeData pd = tables ? PrimeData(rc.fam, tables(rc.fam, p)) : PrimeData(rc.fam, p);
    std::mt19937_64 rng(rc.seed ^ fnv1a(std::to_string(p)));
    auto ms = sample_values(p, samples, rng);
    auto ks = sample_values(p - 1, samples, rng);
    std::vector<std::string> rows;
    for (int n = 1; n <= n_max; ++n) {
      for (std::int64_t m : ms) rows.push_back(bound_check_csv_row(michel_sum_additive(pd, n, m).record));
      for (std::int64_t k : ks) rows.push_back(bound_check_csv_row(michel_sum_mult(pd, n, k).record));
    }
    return rows;
  };
  auto parts = parallel_index_map<std::vector<std::string>>(ps.size(), rc.jobs, job);
  std::vector<std::string> rows;
  for (auto& part : parts)
    for (auto& r : part) rows.push_back(std::move(r));
  write_csv(rc.out, bound_check_csv_header(), rows);
  man.rows = static_cast<std::int64_t>(rows.size());
  man.outputs.push_back(rc.out.string());
}

void run_expsum(const Config& cfg, RunContext& rc, RunManifest& man) {
  auto ps = cfg.require_int_list("expsum", "p");
  auto Ts = cfg.require_int_list("expsum", "T");
  std::int64_t samples = cfg.get_int("expsum", "samples", 64);
  std::string kinds = cfg.get_string("expsum", "sets", "convex,farey");
  for (std::int64_t p : ps)
    if (!is_prime(p) || p <= 3) throw ConfigError("[expsum] p entries must be primes > 3");

  std::vector<std::string> kind_list;
  {
    std::istringstream in(kinds);
    std::string k;
    while (std::getline(in, k, ',')) {
      k.erase(0, k.find_first_not_of(" \t"));
      k.erase(k.find_last_not_of(" \t") + 1);
      if (!k.empty()) kind_list.push_back(k);
    }
  }
  std::map<std::string, std::map<std::int64_t, PairSet>> sets;
  for (const auto& k : kind_list) {
    for (std::int64_t T : Ts) {
      if (k == "convex")
        sets[k][T] = convex_pair_set(ConvexRegion::box(0, 0, T));
      else if (k == "z")
        sets[k][T] = z_set(0, 0, T);
      else if (k == "zstar")
        sets[k][T] = z_star_set(0, 0, T);
      else if (k == "farey")
        sets[k][T] = farey_set(T);
      else
        throw ConfigError("[expsum] sets entries must be convex, z, zstar or farey");
    }
  }

  std::function<std::vector<std::string>(std::size_t)> job =
      [&](std::size_t i) -> std::vector<std::string> {
    std::int64_t p = ps[i];
    std::mt19937_64 rng(rc.seed ^ fnv1a("expsum" + std::to_string(p)));
    std::vector<std::string> rows;
    for (const auto& k : kind_list) {
      for (std::int64_t T : Ts) {
        if (k == "convex" && T >= p) continue;  // outside the lemma's range
        const PairSet& set = sets.at(k).at(T);
        rows.push_back(bound_check_csv_row(exp_sum_ratios(set, p, 0).record));
        std::set<std::int64_t> seen;
        std::uniform_int_distribution<std::int64_t> pick(1, p - 1);
        while (static_cast<std::int64_t>(seen.size()) < std::min(samples, p - 1))
          seen.insert(pick(rng));
        for (std::int64_t a : seen)
          rows.push_back(bound_check_csv_row(exp_sum_ratios(set, p, a).record));
      }
    }
    return rows;
  };
  auto parts = parallel_index_map<std::vector<std::string>>(ps.size(), rc.jobs, job);
  std::vector<std::string> rows;
  for (auto& part : parts)
    for (auto& r : part) rows.push_back(std::move(r));
  write_csv(rc.out, bound_check_csv_header(), rows);
  man.rows = static_cast<std::int64_t>(rows.size());
  man.outputs.push_back(rc.out.string());
}

void run_congruence(const Config& cfg, RunContext& rc, RunManifest& man) {
  auto Ts = cfg.require_int_list("congruence", "T");
  auto ps = cfg.require_int_list("congruence", "p");
  for (std::int64_t p : ps)
    if (!is_prime(p) || p <= 3) throw ConfigError("[congruence] p entries must be primes > 3");
  std::vector<std::string> rows;
  for (std::int64_t T : Ts)
    for (std::int64_t p : ps) rows.push_back(bound_check_csv_row(congruence_record(T, p)));
  write_csv(rc.out, bound_check_csv_header(), rows);
  man.rows = static_cast<std::int64_t>(rows.size());
  man.outputs.push_back(rc.out.string());
}

}  // namespace

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["version"] = version;
  j["kind"] = kind;
  j["config_hash"] = hex16(config_hash);
  j["cache_hits"] = cache_hits;
  j["cache_misses"] = cache_misses;
  j["wall_ms"] = wall_ms;
  j["rows"] = rows;
  j["outputs"] = outputs;
  j["notes"] = notes;
  return j.dump(2);
}

CurveFamily family_from_config(const Config& cfg) {
  auto f = cfg.require_int_list("family", "f");
  auto g = cfg.require_int_list("family", "g");
  CurveFamily fam = CurveFamily::make(IntPoly::from_ints({f.begin(), f.end()}),
                                      IntPoly::from_ints({g.begin(), g.end()}));
  if (!fam.nondegenerate)
    throw FamilyError("family is degenerate (" + fam.reason + "): f=" + fam.f.to_string() +
                      " g=" + fam.g.to_string());
  return fam;
}

RunManifest run_experiment(const Config& cfg, const std::string& kind) {
  auto start = std::chrono::steady_clock::now();

  RunContext rc;
  rc.fam = family_from_config(cfg);
  rc.jobs = static_cast<int>(cfg.get_int("run", "jobs", 1));
  if (rc.jobs < 1) throw ConfigError("[run] jobs must be positive");
  rc.seed = static_cast<std::uint64_t>(cfg.get_int("run", "seed", 12345));
  rc.out = cfg.get_string("run", "out", kind + ".csv");
  std::string cache_dir = cfg.get_string("run", "cache", "");
  if (!cache_dir.empty()) {
    rc.cache = std::make_unique<TraceCache>(cache_dir);
    TraceCache* cache = rc.cache.get();
    rc.avg.tables = [cache](const CurveFamily& fam, std::int64_t p) {
      return cache->get_or_build(fam, p);
    };
  }
  rc.avg.jobs = rc.jobs;

  RunManifest man;
  man.kind = kind;
  man.config_hash = fnv1a(cfg.canonical() + "|kind=" + kind);

  if (kind == "theorem1" || kind == "theorem2" || kind == "theorem3")
    run_theorem(cfg, kind, rc, man);
  else if (kind == "vertical")
    run_vertical(cfg, rc, man);
  else if (kind == "trace-table")
    run_trace_table(cfg, rc, man);
  else if (kind == "michel")
    run_michel(cfg, rc, man);
  else if (kind == "expsum")
    run_expsum(cfg, rc, man);
  else if (kind == "congruence")
    run_congruence(cfg, rc, man);
  else
    throw ConfigError("unknown experiment kind: " + kind);

  finish(man, rc, start);
  return man;
}

std::string summarize_csv(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw ConfigError("cannot open CSV: " + csv.string());
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("empty CSV: " + csv.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string f;
    while (std::getline(is, f, ',')) out.push_back(f);
    return out;
  };

  std::ostringstream os;
  std::string line;
  if (header == averaged_csv_header()) {
    // sup |deviation| per (set_params, x)
    std::map<std::pair<std::string, std::string>, double> sup;
    std::int64_t rows = 0;
    while (std::getline(in, line)) {
      auto f = split(line);
      if (f.size() < 11) continue;
      ++rows;
      double dev = std::abs(std::stod(f[8]));
      auto key = std::make_pair(f[2], f[3]);
      auto it = sup.find(key);
      if (it == sup.end() || dev > it->second) sup[key] = dev;
    }
    os << "averaged rows: " << rows << "\n";
    for (const auto& [key, dev] : sup)
      os << "  set " << key.first << " x=" << key.second << " sup|deviation|=" << format_double(dev)
         << "\n";
  } else if (header == bound_check_csv_header()) {
    std::map<std::string, double> worst;
    std::map<std::int64_t, double> per_p;
    std::int64_t rows = 0;
    while (std::getline(in, line)) {
      auto f = split(line);
      if (f.size() < 8) continue;
      ++rows;
      double ratio = std::stod(f[7]);
      worst[f[0]] = std::max(worst[f[0]], ratio);
      std::int64_t p = std::stoll(f[1]);
      per_p[p] = std::max(per_p[p], ratio);
    }
    os << "bound-check rows: " << rows << "\n";
    for (const auto& [id, r] : worst) os << "  " << id << " max ratio " << format_double(r) << "\n";
    if (per_p.size() >= 10) {
      std::vector<double> ratios;
      for (const auto& [p, r] : per_p) ratios.push_back(r);
      std::size_t dec = ratios.size() / 10;
      double first = 0, last = 0;
      for (std::size_t i = 0; i < dec; ++i) {
        first += ratios[i];
        last += ratios[ratios.size() - 1 - i];
      }
      os << "  first-decile mean ratio " << format_double(first / dec) << ", last-decile "
         << format_double(last / dec) << "\n";
    }
  } else {
    std::int64_t rows = 0;
    while (std::getline(in, line)) ++rows;
    os << "rows: " << rows << "\n";
  }
  return os.str();
}

}  // namespace stav
