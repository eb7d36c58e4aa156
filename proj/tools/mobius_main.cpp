// Command-line front end: Mobius values on pattern-poset intervals, the
// strongly-zero classification of a single permutation, the exhaustive
// censuses, and the substitution decomposition / inflation helpers.
//
// Exit codes: 0 success, 2 usage or parse error, 3 refused without
// --yes-large, 4 cache file rejected.

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobius/census.hpp"
#include "mobius/inflation.hpp"
#include "mobius/perm.hpp"
#include "mobius/poset.hpp"
#include "mobius/strongly_zero.hpp"

namespace {

using namespace mobius;

constexpr int kExitUsage = 2;
constexpr int kExitRefused = 3;
constexpr int kExitCache = 4;

// Exhaustive sizes above these need the explicit opt-in flag.
constexpr int kFreeCensusMaxN = 9;
constexpr int kFreeSimplesMaxN = 10;
constexpr int kFreeClassifyLen = 10;

struct Refused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TableFormat table_format(const std::string& name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "json") return TableFormat::Json;
  return TableFormat::Text;
}

Perm parse_perm_arg(const std::string& raw) {
  try {
    return parse_perm(raw);
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot parse \"" + raw + "\": " + e.what());
  }
}

InflationSpec parse_inflation_arg(const std::string& raw) {
  try {
    return parse_inflation(raw);
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot parse \"" + raw + "\": " + e.what());
  }
}

void require_opt_in(bool yes_large, const std::string& what) {
  if (!yes_large)
    throw Refused(what + " is an exhaustive computation; pass --yes-large to run it");
}

std::string csv_cell(const std::string& s) {
  if (s.find(',') == std::string::npos) return s;
  return "\"" + s + "\"";
}

std::string json_dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::string run_mu(const std::string& target_raw, const std::string& from_raw,
                   TableFormat f, MobiusCache& cache) {
  Perm target = parse_perm_arg(target_raw);
  Perm from = parse_perm_arg(from_raw);
  long long value = from == Perm::identity(1)
                        ? principal_mobius(target, cache)
                        : mobius::mobius(from, target, cache);
  switch (f) {
    case TableFormat::Text:
      return std::to_string(value) + "\n";
    case TableFormat::Csv:
      return "perm,from,mu\n" + csv_cell(format_perm(target)) + "," +
             csv_cell(format_perm(from)) + "," + std::to_string(value) + "\n";
    case TableFormat::Json: {
      nlohmann::ordered_json j{{"perm", format_perm(target)},
                               {"from", format_perm(from)},
                               {"mu", value}};
      return json_dump(j);
    }
  }
  return {};
}

std::string category_name(Category c) {
  switch (c) {
    case Category::ObviouslyZero: return "obviously_zero";
    case Category::New: return "new";
    case Category::ZeroNotCertified: return "zero_not_certified";
    case Category::NonZero: return "nonzero";
  }
  return {};
}

std::string certificate_text(const SZCertificate& cert) {
  if (cert.kind == SZCertificate::Kind::OpposingAdjacencies)
    return "opposing adjacencies (up at " + std::to_string(cert.up_pos) +
           ", down at " + std::to_string(cert.down_pos) + ")";
  return "interval copy of " + format_perm(cert.pattern) + " at positions " +
         std::to_string(cert.lo) + ".." + std::to_string(cert.hi);
}

std::string run_classify(const std::string& raw, TableFormat f, bool yes_large,
                         MobiusCache& cache, int threads) {
  Perm p = parse_perm_arg(raw);
  if (p.is_empty()) throw std::runtime_error("cannot classify the empty permutation");
  if (p.size() > kFreeClassifyLen)
    require_opt_in(yes_large, "classifying a permutation of length " +
                                  std::to_string(p.size()));
  SZRegistry registry =
      build_registry(std::max(3, static_cast<int>(p.size()) - 1), cache, threads);
  Classification c = classify(p, registry, cache);
  long long mu = c.category == Category::NonZero ? c.mu : 0;

  switch (f) {
    case TableFormat::Text: {
      std::string out = "perm: " + format_perm(p) + "\n";
      out += "mu: " + std::to_string(mu) + "\n";
      out += "class: " + category_name(c.category) + "\n";
      if (c.certificate) out += "certificate: " + certificate_text(*c.certificate) + "\n";
      if (c.core) out += "core: " + format_perm(*c.core) + "\n";
      return out;
    }
    case TableFormat::Csv: {
      std::string detail;
      if (c.certificate) detail = certificate_text(*c.certificate);
      if (c.core) detail = "core " + format_perm(*c.core);
      return "perm,mu,class,detail\n" + csv_cell(format_perm(p)) + "," +
             std::to_string(mu) + "," + category_name(c.category) + "," +
             csv_cell(detail) + "\n";
    }
    case TableFormat::Json: {
      nlohmann::ordered_json j{{"perm", format_perm(p)},
                               {"mu", mu},
                               {"class", category_name(c.category)}};
      if (c.certificate) {
        const SZCertificate& cert = *c.certificate;
        if (cert.kind == SZCertificate::Kind::OpposingAdjacencies)
          j["certificate"] = {{"kind", "opposing_adjacencies"},
                              {"up", cert.up_pos},
                              {"down", cert.down_pos}};
        else
          j["certificate"] = {{"kind", "nice_interval"},
                              {"pattern", format_perm(cert.pattern)},
                              {"lo", cert.lo},
                              {"hi", cert.hi}};
      }
      if (c.core) j["core"] = format_perm(*c.core);
      return json_dump(j);
    }
  }
  return {};
}

std::string run_census(const std::string& table, int max_n, int terms,
                       TableFormat f, bool yes_large, MobiusCache& cache,
                       int threads) {
  if (table == "z" || table == "nonopp" || table == "szclass") {
    if (max_n > kFreeCensusMaxN)
      require_opt_in(yes_large, "census " + table + " to length " + std::to_string(max_n));
    if (table == "z") return render_z_table(z_table(max_n, cache, threads), f);
    if (table == "nonopp")
      return render_nonopp_table(nonopp_table(max_n, cache, threads), f);
    SZRegistry registry = build_registry(max_n, cache, threads);
    return render_szclass_table(sz_class_table(max_n, registry), f);
  }
  if (table == "simples") {
    if (max_n > kFreeSimplesMaxN)
      require_opt_in(yes_large, "census simples to length " + std::to_string(max_n));
    return render_simples_table(simple_census(max_n, threads), max_n, f);
  }
  // bound is exact arithmetic on the series coefficients; never gated
  return render_bound(bound_series(terms), terms, f);
}

std::string run_decompose(const std::string& raw, TableFormat f) {
  Perm p = parse_perm_arg(raw);
  Decomposition d = decompose(p);
  switch (f) {
    case TableFormat::Text:
      return format_decomposition(d) + "\n";
    case TableFormat::Csv: {
      std::string parts;
      for (std::size_t i = 0; i < d.parts.size(); ++i) {
        if (i) parts += ' ';
        parts += format_perm(d.parts[i]);
      }
      return "perm,skeleton,parts\n" + csv_cell(format_perm(p)) + "," +
             csv_cell(format_perm(d.skeleton)) + "," + csv_cell(parts) + "\n";
    }
    case TableFormat::Json: {
      nlohmann::ordered_json j{{"perm", format_perm(p)},
                               {"skeleton", format_perm(d.skeleton)}};
      j["parts"] = nlohmann::ordered_json::array();
      for (const Perm& part : d.parts) j["parts"].push_back(format_perm(part));
      return json_dump(j);
    }
  }
  return {};
}

std::string run_inflate(const std::string& raw, TableFormat f) {
  InflationSpec spec = parse_inflation_arg(raw);
  Perm result = inflate(spec);
  switch (f) {
    case TableFormat::Text:
      return format_perm(result) + "\n";
    case TableFormat::Csv:
      return "expression,result\n" + csv_cell(format_inflation(spec)) + "," +
             csv_cell(format_perm(result)) + "\n";
    case TableFormat::Json: {
      nlohmann::ordered_json j{{"expression", format_inflation(spec)},
                               {"result", format_perm(result)}};
      return json_dump(j);
    }
  }
  return {};
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobius function on intervals of the permutation pattern poset"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string cache_path;
  int threads = 0;
  bool yes_large = false;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--cache", cache_path, "principal-value cache file")
      ->envname("MOBIUS_CACHE");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_flag("--yes-large", yes_large, "allow large exhaustive computations");

  std::string mu_perm, mu_from = "1";
  CLI::App* mu_cmd = app.add_subcommand("mu", "Mobius value mu(from, perm)");
  mu_cmd->add_option("perm", mu_perm, "upper endpoint")->required();
  mu_cmd->add_option("--from", mu_from, "lower endpoint")->capture_default_str();

  std::string classify_perm;
  CLI::App* classify_cmd =
      app.add_subcommand("classify", "strongly-zero taxonomy of one permutation");
  classify_cmd->add_option("perm", classify_perm, "permutation")->required();

  std::string census_table;
  int census_max_n = 6;
  int census_terms = 9;
  CLI::App* census_cmd = app.add_subcommand("census", "exhaustive tables");
  census_cmd->add_option("table", census_table, "z|nonopp|szclass|simples|bound")
      ->required()
      ->check(CLI::IsMember({"z", "nonopp", "szclass", "simples", "bound"}));
  census_cmd->add_option("--max-n", census_max_n, "largest length")
      ->capture_default_str();
  census_cmd->add_option("--terms", census_terms, "series terms (bound only)")
      ->capture_default_str();

  std::string decompose_perm;
  CLI::App* decompose_cmd =
      app.add_subcommand("decompose", "substitution decomposition");
  decompose_cmd->add_option("perm", decompose_perm, "permutation")->required();

  std::string inflate_expr;
  CLI::App* inflate_cmd =
      app.add_subcommand("inflate", "evaluate an inflation expression");
  inflate_cmd->add_option("expression", inflate_expr,
                          "skeleton[part,...] with e for empty parts")
      ->required();

  // global options may follow the subcommand name
  for (CLI::App* s : app.get_subcommands(nullptr)) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  MobiusCache cache;
  const bool use_cache = !cache_path.empty();
  if (use_cache && std::filesystem::exists(cache_path)) {
    try {
      cache.load(cache_path);
    } catch (const CacheCorrupt& e) {
      std::cerr << "error: cache file " << cache_path << " rejected: " << e.what()
                << "\n";
      return kExitCache;
    }
  }

  TableFormat f = table_format(format);
  std::string out;
  try {
    if (mu_cmd->parsed()) {
      out = run_mu(mu_perm, mu_from, f, cache);
    } else if (classify_cmd->parsed()) {
      out = run_classify(classify_perm, f, yes_large, cache, threads);
    } else if (census_cmd->parsed()) {
      out = run_census(census_table, census_max_n, census_terms, f, yes_large,
                       cache, threads);
    } else if (decompose_cmd->parsed()) {
      out = run_decompose(decompose_perm, f);
    } else {
      out = run_inflate(inflate_expr, f);
    }
  } catch (const Refused& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::cout << out;
  if (use_cache) {
    try {
      cache.save(cache_path);
    } catch (const std::exception& e) {
      std::cerr << "warning: cache not saved: " << e.what() << "\n";
    }
  }
  return 0;
}
