#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stav/cache.hpp"
#include "stav/config.hpp"
#include "stav/curves.hpp"
#include "stav/errors.hpp"
#include "stav/experiment.hpp"
#include "stav/sato_tate.hpp"
#include "stav/sums.hpp"
#include "stav/util.hpp"

using namespace stav;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() /
               ("stav_harness_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

CurveFamily zfam() { return CurveFamily::make(IntPoly::from_ints({0, 1}), IntPoly::from_ints({1})); }

// Rewrites every trace of a cache file so any sampled recount must disagree.
void tamper_every_entry(const fs::path& file, const CurveFamily& fam, std::int64_t p) {
  std::string bytes = read_file(file);
  REQUIRE(bytes.size() == 21 + 4 * static_cast<std::size_t>(p));
  for (std::int64_t w = 0; w < p; ++w) {
    std::int64_t a = trace_at(fam, p, w);
    std::int32_t fake = (a == kBadTrace) ? 0 : (a == 0 ? 1 : static_cast<std::int32_t>(-a));
    std::uint32_t enc = static_cast<std::uint32_t>(fake);
    for (int b = 0; b < 4; ++b)
      bytes[21 + 4 * static_cast<std::size_t>(w) + static_cast<std::size_t>(b)] =
          static_cast<char>((enc >> (8 * b)) & 0xff);
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << bytes;
}

}  // namespace

TEST_CASE("config parsing") {
  Config cfg = Config::parse(
      "# leading comment\n"
      "[run]\n"
      "out = results.csv   # trailing comment\n"
      "seed = 42\n"
      "eta = 0.25\n"
      "\n"
      "[family]\n"
      "f = 0, 1\n"
      "g = 1\n");

  CHECK(cfg.has("run", "out"));
  CHECK(!cfg.has("run", "missing"));
  CHECK(!cfg.has("nope", "out"));
  CHECK(cfg.get_string("run", "out", "") == "results.csv");
  CHECK(cfg.get_string("run", "missing", "dflt") == "dflt");
  CHECK(cfg.require_string("run", "out") == "results.csv");
  CHECK(cfg.get_int("run", "seed", 0) == 42);
  CHECK(cfg.get_int("run", "missing", 7) == 7);
  CHECK(cfg.get_double("run", "eta", 0.0) == 0.25);
  CHECK(cfg.get_double("run", "missing", 1.5) == 1.5);
  CHECK(cfg.get_int_list("family", "f") == std::vector<std::int64_t>{0, 1});
  CHECK(cfg.require_int_list("family", "g") == std::vector<std::int64_t>{1});
  CHECK(cfg.get_int_list("family", "missing").empty());

  CHECK_THROWS_AS(cfg.require_string("run", "missing"), ConfigError);
  CHECK_THROWS_AS(cfg.require_int_list("run", "missing"), ConfigError);
}

TEST_CASE("config rejects malformed input with line numbers") {
  CHECK_THROWS_WITH_AS(Config::parse("[run]\nno equals sign\n"),
                       "expected key = value on line 2", ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("key = orphaned\n"),
                       "key outside any [section] on line 1", ConfigError);
  CHECK_THROWS_AS(Config::parse("[run]\n = value\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[run\nx = 1\n"), ConfigError);

  Config cfg = Config::parse("[a]\nn = 12x\nd = 1.5y\nl = 1,,2\nm = 3,z\n");
  CHECK_THROWS_AS(cfg.get_int("a", "n", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("a", "d", 0.0), ConfigError);
  CHECK_THROWS_AS(cfg.get_int_list("a", "l"), ConfigError);
  CHECK_THROWS_AS(cfg.get_int_list("a", "m"), ConfigError);
}

TEST_CASE("config canonical form is sorted and set() lands in it") {
  Config cfg = Config::parse("[b]\nz = 1\na = 2\n[a]\nk = v\n");
  CHECK(cfg.canonical() == "a.k=v\nb.a=2\nb.z=1\n");
  cfg.set("b", "z", "9");
  cfg.set("c", "new", "x");
  CHECK(cfg.canonical() == "a.k=v\nb.a=2\nb.z=9\nc.new=x\n");
}

TEST_CASE("config load round trip") {
  fs::path dir = fresh_dir("cfg");
  fs::path file = dir / "run.cfg";
  std::string text = "[family]\nf = 0,1\ng = 1\n";
  {
    std::ofstream out(file);
    out << text;
  }
  CHECK(Config::load(file).canonical() == Config::parse(text).canonical());
  CHECK_THROWS_AS(Config::load(dir / "absent.cfg"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("family from config") {
  Config good = Config::parse("[family]\nf = 0,1\ng = 1\n");
  CurveFamily fam = family_from_config(good);
  CHECK(fam.id == zfam().id);
  CHECK(fam.nondegenerate);

  CHECK_THROWS_AS(family_from_config(Config::parse("[family]\ng = 1\n")), ConfigError);
  CHECK_THROWS_AS(family_from_config(Config::parse("[family]\nf = 1\n")), ConfigError);
  // delta identically zero
  CHECK_THROWS_AS(family_from_config(Config::parse("[family]\nf = 0\ng = 0\n")), FamilyError);
  // constant j invariant
  CHECK_THROWS_AS(family_from_config(Config::parse("[family]\nf = 1\ng = 1\n")), FamilyError);
}

TEST_CASE("vertical run writes the expected rows and manifest") {
  fs::path dir = fresh_dir("vert");
  fs::path out = dir / "vert.csv";
  Config cfg = Config::parse(
      "[family]\nf = 0,1\ng = 1\n"
      "[vertical]\np = 5,7\ngrid = 8\n");
  cfg.set("run", "out", out.string());

  RunManifest man = run_experiment(cfg, "vertical");
  CHECK(man.kind == "vertical");
  CHECK(man.rows == 2);
  CHECK(man.version == std::string(kVersion));
  CHECK(man.config_hash == fnv1a(cfg.canonical() + "|kind=vertical"));
  REQUIRE(man.outputs.size() == 2);
  CHECK(man.outputs[0] == out.string());

  CurveFamily fam = zfam();
  auto lines = read_lines(out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "family_id,p,grid,good_count,sup_discrepancy");
  for (std::size_t i = 0; i < 2; ++i) {
    std::int64_t p = (i == 0) ? 5 : 7;
    AngleTable angles = AngleTable::from(build_trace_table(fam, p));
    std::int64_t good = 0;
    for (double psi : angles.psi)
      if (psi >= 0.0) ++good;
    std::string want = hex16(fam.id) + "," + std::to_string(p) + ",8," + std::to_string(good) +
                       "," + format_double(vertical_discrepancy(angles, 8));
    CHECK(lines[i + 1] == want);
  }
  // the singular fiber drops exactly one point at p = 5
  CHECK(lines[1].find(",8,4,") != std::string::npos);

  // manifest parses and echoes the run
  nlohmann::json j = nlohmann::json::parse(read_file(man.outputs[1]));
  CHECK(j["version"] == std::string(kVersion));
  CHECK(j["kind"] == "vertical");
  CHECK(j["rows"] == 2);
  CHECK(j["config_hash"] == hex16(man.config_hash));
  CHECK(j["outputs"].size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("averaged run is deterministic across jobs and replays from cache") {
  fs::path dir = fresh_dir("avg");
  std::string base =
      "[family]\nf = 0,1\ng = 1\n"
      "[run]\nx = 60\nT = 4\ngrid = 4\n"
      "[set]\nkind = farey\n";

  Config one = Config::parse(base);
  one.set("run", "out", (dir / "one.csv").string());
  one.set("run", "jobs", "1");
  one.set("run", "cache", (dir / "cache").string());
  RunManifest m1 = run_experiment(one, "theorem2");

  Config two = Config::parse(base);
  two.set("run", "out", (dir / "two.csv").string());
  two.set("run", "jobs", "2");
  two.set("run", "cache", (dir / "cache").string());
  RunManifest m2 = run_experiment(two, "theorem2");

  CHECK(m1.rows == 10);  // all 0 <= i < j <= 4 grid intervals
  CHECK(read_file(dir / "one.csv") == read_file(dir / "two.csv"));

  // 15 primes in (3, 60]; the first run fills the cache, the second only reads
  CHECK(m1.cache_misses == 15);
  CHECK(m1.cache_hits == 0);
  CHECK(m2.cache_hits == 15);
  CHECK(m2.cache_misses == 0);

  // rows agree with a directly built study, in the same interval order
  CurveFamily fam = zfam();
  AveragedStudy study(fam, farey_set(4), 60, 4);
  auto lines = read_lines(dir / "one.csv");
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == averaged_csv_header());
  std::size_t at = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j <= 4; ++j) CHECK(lines[at++] == averaged_csv_row(study.result(i, j)));

  // a note records the sup deviation of the (T, x) block
  bool found = false;
  for (const auto& note : m1.notes)
    if (note.rfind("T=4;x=60;sup_deviation=", 0) == 0) found = true;
  CHECK(found);
  fs::remove_all(dir);
}

TEST_CASE("run configuration errors") {
  std::string fam = "[family]\nf = 0,1\ng = 1\n";
  auto with = [&](const std::string& extra) { return Config::parse(fam + extra); };

  CHECK_THROWS_AS(run_experiment(with("[run]\nx = 60\nT = 4,4\n"), "theorem2"), ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[run]\nx = 60,50\nT = 4\n"), "theorem2"), ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[run]\nx = 30000\nT = 4\n"), "theorem2"), ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[run]\nx = 100\nT = 4\nmax_x = 50\n"), "theorem2"),
                  ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[run]\nx = 4\nT = 4\n"), "theorem2"), ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[run]\nx = 60\nT = 4\ngrid = 1\n"), "theorem2"),
                  ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[run]\nx = 60\nT = 4\njobs = 0\n"), "theorem2"),
                  ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[run]\nx = 60\nT = 4\n[set]\nkind = weird\n"), "theorem2"),
                  ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[vertical]\np = 5,9\n"), "vertical"), ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[run]\nx = 30\n"), "trace-table"), ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[michel]\np_min = 3\n"), "michel"), ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[expsum]\np = 9\nT = 2\n"), "expsum"), ConfigError);
  CHECK_THROWS_AS(run_experiment(with("[congruence]\nT = 2\np = 4\n"), "congruence"), ConfigError);
  CHECK_THROWS_AS(run_experiment(with(""), "frobnicate"), ConfigError);
  CHECK_THROWS_AS(run_experiment(Config::parse("[family]\nf = 0\ng = 0\n[run]\nx = 60\nT = 4\n"),
                                 "theorem2"),
                  FamilyError);
}

TEST_CASE("sampled sum runs count their rows") {
  fs::path dir = fresh_dir("sums");

  Config mich = Config::parse(
      "[family]\nf = 0,1\ng = 1\n"
      "[michel]\np_min = 5\np_max = 7\nn_max = 2\nsamples = 3\n");
  mich.set("run", "out", (dir / "mich.csv").string());
  RunManifest mm = run_experiment(mich, "michel");
  // two primes, two orders, three additive plus three multiplicative each
  CHECK(mm.rows == 24);
  auto mlines = read_lines(dir / "mich.csv");
  REQUIRE(mlines.size() == 25);
  CHECK(mlines[0] == bound_check_csv_header());

  Config exps = Config::parse(
      "[family]\nf = 0,1\ng = 1\n"
      "[expsum]\np = 5\nT = 2,3\nsamples = 2\nsets = z, farey\n");
  exps.set("run", "out", (dir / "exps.csv").string());
  RunManifest em = run_experiment(exps, "expsum");
  // 2 kinds x 2 T values, each a = 0 plus two sampled a
  CHECK(em.rows == 12);

  Config cong = Config::parse(
      "[family]\nf = 0,1\ng = 1\n"
      "[congruence]\nT = 2,4\np = 5,7\n");
  cong.set("run", "out", (dir / "cong.csv").string());
  CHECK(run_experiment(cong, "congruence").rows == 4);

  std::string digest = summarize_csv(dir / "cong.csv");
  CHECK(digest.find("bound-check rows: 4") != std::string::npos);
  CHECK(digest.find("congruence max ratio") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("trace table run fills a verifiable cache") {
  fs::path dir = fresh_dir("cache");
  fs::path cache = dir / "store";
  Config cfg = Config::parse(
      "[family]\nf = 0,1\ng = 1\n"
      "[run]\nx = 30\n");
  cfg.set("run", "cache", cache.string());
  cfg.set("run", "out", (dir / "tt.csv").string());

  RunManifest man = run_experiment(cfg, "trace-table");
  CHECK(man.cache_misses == 8);  // primes in (3, 30]
  bool noted = false;
  for (const auto& n : man.notes)
    if (n == "primes_cached=8") noted = true;
  CHECK(noted);

  CacheStatsReport stats = cache_stats(cache);
  CHECK(stats.files == 8);
  std::uintmax_t bytes = 0;
  std::int64_t psum = 0;
  for (const auto& e : stats.entries) {
    bytes += e.bytes;
    psum += e.p;
    CHECK(e.family_id == zfam().id);
  }
  CHECK(stats.bytes == bytes);
  CHECK(psum == 5 + 7 + 11 + 13 + 17 + 19 + 23 + 29);
  CHECK(bytes == 8 * 21 + 4 * static_cast<std::uintmax_t>(psum));
  fs::remove_all(dir);
}

TEST_CASE("cache verify catches tampering and purge is family scoped") {
  fs::path dir = fresh_dir("verify");
  CurveFamily fam = zfam();
  CurveFamily other = CurveFamily::make(IntPoly::from_ints({0, 1}), IntPoly::from_ints({2}));

  TraceCache cache(dir);
  cache.get_or_build(fam, 5);
  cache.get_or_build(fam, 7);
  cache.get_or_build(other, 5);
  CHECK(cache.misses() == 3);
  CHECK(cache.hits() == 0);
  cache.get_or_build(fam, 5);
  CHECK(cache.hits() == 1);

  CacheVerifyReport clean = cache_verify(dir, fam, 99);
  CHECK(clean.files_checked == 3);
  CHECK(clean.entries_recounted == 2);  // one sample per matching file
  CHECK(clean.corrupt.empty());

  SUBCASE("value tampering is recounted") {
    fs::path victim = dir / TraceCache::file_name(fam.id, 5);
    tamper_every_entry(victim, fam, 5);
    CacheVerifyReport rep = cache_verify(dir, fam, 99);
    REQUIRE(rep.corrupt.size() == 1);
    CHECK(rep.corrupt[0].file == TraceCache::file_name(fam.id, 5));
    CHECK(rep.corrupt[0].message.find("recount") != std::string::npos);
    // loading it through the cache still succeeds structurally; the traces lie
    TraceTable lied = cache.get_or_build(fam, 5);
    CHECK(lied.a[1] != build_trace_table(fam, 5).a[1]);
  }

  SUBCASE("structural damage is reported and refused") {
    fs::path victim = dir / TraceCache::file_name(fam.id, 7);
    std::string bytes = read_file(victim);
    bytes[0] = 'X';  // magic
    {
      std::ofstream out(victim, std::ios::binary | std::ios::trunc);
      out << bytes;
    }
    CacheVerifyReport rep = cache_verify(dir, fam, 99);
    REQUIRE(rep.corrupt.size() == 1);
    CHECK(rep.corrupt[0].file == TraceCache::file_name(fam.id, 7));
    CHECK_THROWS_AS(cache.get_or_build(fam, 7), CacheError);
  }

  SUBCASE("a file renamed to the wrong prime is refused") {
    fs::copy_file(dir / TraceCache::file_name(fam.id, 5), dir / TraceCache::file_name(fam.id, 11));
    CHECK_THROWS_AS(cache.get_or_build(fam, 11), CacheError);
  }

  SUBCASE("purge removes only the named family") {
    CHECK(cache_purge(dir, other.id) == 1);
    CHECK(cache_purge(dir, other.id) == 0);
    CacheStatsReport stats = cache_stats(dir);
    CHECK(stats.files == 2);
    for (const auto& e : stats.entries) CHECK(e.family_id == fam.id);
    // untouched survivors still verify
    CHECK(cache_verify(dir, fam, 99).corrupt.empty());
  }

  fs::remove_all(dir);
}

TEST_CASE("csv digests") {
  fs::path dir = fresh_dir("digest");
  CHECK_THROWS_AS(summarize_csv(dir / "absent.csv"), ConfigError);
  {
    std::ofstream out(dir / "empty.csv");
  }
  CHECK_THROWS_AS(summarize_csv(dir / "empty.csv"), ConfigError);

  fs::path avg = dir / "avg.csv";
  {
    std::ofstream out(avg);
    out << averaged_csv_header() << "\n";
    out << "00,FAREY,T=4,60,0,1,0.5,0.4,0.1,17,11\n";
    out << "00,FAREY,T=4,60,0,2,0.5,0.8,-0.3,17,11\n";
  }
  std::string digest = summarize_csv(avg);
  CHECK(digest.find("averaged rows: 2") != std::string::npos);
  CHECK(digest.find("set T=4 x=60 sup|deviation|=0.3") != std::string::npos);

  fs::path other = dir / "other.csv";
  {
    std::ofstream out(other);
    out << "a,b\n1,2\n3,4\n";
  }
  CHECK(summarize_csv(other).find("rows: 2") != std::string::npos);
  fs::remove_all(dir);
}
