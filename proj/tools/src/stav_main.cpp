#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "stav/cache.hpp"
#include "stav/config.hpp"
#include "stav/errors.hpp"
#include "stav/experiment.hpp"
#include "stav/util.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_path;
  std::string cache_dir;
  long long jobs = 0;
  long long seed = 0;
  bool have_jobs = false;
  bool have_seed = false;
};

stav::Config loaded_config(const GlobalArgs& ga) {
  if (ga.config_path.empty()) throw stav::ConfigError("--config PATH is required here");
  stav::Config cfg = stav::Config::load(ga.config_path);
  if (!ga.out_path.empty()) cfg.set("run", "out", ga.out_path);
  if (!ga.cache_dir.empty()) cfg.set("run", "cache", ga.cache_dir);
  if (ga.have_jobs) cfg.set("run", "jobs", std::to_string(ga.jobs));
  if (ga.have_seed) cfg.set("run", "seed", std::to_string(ga.seed));
  return cfg;
}

std::string cache_dir_for(const GlobalArgs& ga) {
  if (!ga.cache_dir.empty()) return ga.cache_dir;
  if (!ga.config_path.empty()) {
    std::string dir = stav::Config::load(ga.config_path).get_string("run", "cache", "");
    if (!dir.empty()) return dir;
  }
  throw stav::ConfigError("cache commands need --cache DIR (or [run] cache in the config)");
}

int run_kind(const GlobalArgs& ga, const std::string& kind) {
  stav::RunManifest man = stav::run_experiment(loaded_config(ga), kind);
  std::printf("%s: %lld rows, %lld ms, cache %lld hits / %lld misses\n", man.kind.c_str(),
              static_cast<long long>(man.rows), static_cast<long long>(man.wall_ms),
              static_cast<long long>(man.cache_hits), static_cast<long long>(man.cache_misses));
  for (const auto& o : man.outputs) std::printf("  wrote %s\n", o.c_str());
  for (const auto& n : man.notes) std::printf("  note %s\n", n.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frobenius-angle statistics for parametric elliptic-curve families"};
  app.require_subcommand(1);

  GlobalArgs ga;
  app.add_option("--config", ga.config_path, "run configuration file");
  app.add_option("--out", ga.out_path, "output CSV path, overrides [run] out");
  app.add_option("--cache", ga.cache_dir, "trace cache directory, overrides [run] cache");
  auto* jobs_opt = app.add_option("--jobs", ga.jobs, "worker threads, overrides [run] jobs");
  auto* seed_opt = app.add_option("--seed", ga.seed, "sampling seed, overrides [run] seed");

  static const char* kKinds[] = {"trace-table", "vertical",  "theorem1", "theorem2",
                                 "theorem3",    "michel",    "expsum",   "congruence"};
  static const char* kKindHelp[] = {
      "populate the trace cache for all primes up to max(x)",
      "per-prime angle-distribution discrepancy ladder",
      "averaged counts over a convex parameter set",
      "averaged counts over Z, Z* or Farey sets",
      "averaged counts over Farey products",
      "twisted character-sum magnitudes against n sqrt(p)",
      "exponential sums over parameter ratios against their scales",
      "ratio-congruence quadruple counts against T^4/p + T^2 log^2 p"};
  for (std::size_t i = 0; i < std::size(kKinds); ++i)
    app.add_subcommand(kKinds[i], kKindHelp[i])->fallthrough();

  app.add_subcommand("validate-family", "parse [family] and report whether it is usable")
      ->fallthrough();

  auto* cache_cmd = app.add_subcommand("cache", "trace cache maintenance");
  cache_cmd->fallthrough();
  cache_cmd->require_subcommand(1);
  auto* c_stats = cache_cmd->add_subcommand("stats", "file coverage and sizes");
  auto* c_verify =
      cache_cmd->add_subcommand("verify", "structural checks plus a sampled recount");
  auto* c_purge = cache_cmd->add_subcommand("purge", "remove the configured family's files");
  for (auto* c : {c_stats, c_verify, c_purge}) c->fallthrough();

  std::string report_csv;
  auto* report = app.add_subcommand("report", "summarize an emitted CSV");
  report->add_option("csv", report_csv, "CSV file to summarize")->required();
  report->fallthrough();

  CLI11_PARSE(app, argc, argv);
  ga.have_jobs = jobs_opt->count() > 0;
  ga.have_seed = seed_opt->count() > 0;

  try {
    for (const char* k : kKinds)
      if (app.got_subcommand(k)) return run_kind(ga, k);

    if (app.got_subcommand("validate-family")) {
      if (ga.config_path.empty()) throw stav::ConfigError("--config PATH is required here");
      stav::CurveFamily fam = stav::family_from_config(stav::Config::load(ga.config_path));
      std::printf("family %s usable\n", stav::hex16(fam.id).c_str());
      std::printf("  f = [%s]\n  g = [%s]\n  delta = [%s]\n", fam.f.to_string().c_str(),
                  fam.g.to_string().c_str(), fam.delta.to_string().c_str());
      return 0;
    }

    if (app.got_subcommand("cache")) {
      std::string dir = cache_dir_for(ga);
      if (c_stats->parsed()) {
        stav::CacheStatsReport rep = stav::cache_stats(dir);
        std::printf("%lld file(s), %llu bytes\n", static_cast<long long>(rep.files),
                    static_cast<unsigned long long>(rep.bytes));
        for (const auto& e : rep.entries)
          std::printf("  %s family=%s p=%lld %llu bytes\n", e.name.c_str(),
                      stav::hex16(e.family_id).c_str(), static_cast<long long>(e.p),
                      static_cast<unsigned long long>(e.bytes));
        return 0;
      }
      if (c_verify->parsed()) {
        if (ga.config_path.empty())
          throw stav::ConfigError("cache verify needs --config for the family to recount");
        stav::Config cfg = stav::Config::load(ga.config_path);
        stav::CurveFamily fam = stav::family_from_config(cfg);
        std::uint64_t seed = static_cast<std::uint64_t>(
            ga.have_seed ? ga.seed : cfg.get_int("run", "seed", 12345));
        stav::CacheVerifyReport rep = stav::cache_verify(dir, fam, seed);
        std::printf("checked %lld file(s), recounted %lld entr%s\n",
                    static_cast<long long>(rep.files_checked),
                    static_cast<long long>(rep.entries_recounted),
                    rep.entries_recounted == 1 ? "y" : "ies");
        if (!rep.corrupt.empty()) {
          for (const auto& c : rep.corrupt)
            std::fprintf(stderr, "corrupt: %s: %s\n", c.file.c_str(), c.message.c_str());
          throw stav::CacheError(std::to_string(rep.corrupt.size()) + " corrupt cache file(s)");
        }
        std::printf("cache clean\n");
        return 0;
      }
      if (c_purge->parsed()) {
        if (ga.config_path.empty())
          throw stav::ConfigError("cache purge needs --config for the family to remove");
        stav::CurveFamily fam = stav::family_from_config(stav::Config::load(ga.config_path));
        long long n = stav::cache_purge(dir, fam.id);
        std::printf("removed %lld file(s)\n", n);
        return 0;
      }
    }

    if (app.got_subcommand(report)) {
      std::fputs(stav::summarize_csv(report_csv).c_str(), stdout);
      return 0;
    }
  } catch (const stav::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const stav::FamilyError& e) {
    std::fprintf(stderr, "family error: %s\n", e.what());
    return 3;
  } catch (const stav::CacheError& e) {
    std::fprintf(stderr, "cache error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
