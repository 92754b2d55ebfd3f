#include "gdl/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <ostream>

#include "gdl/counting.hpp"
#include "gdl/loss.hpp"
#include "gdl/oracle.hpp"
#include "gdl/rauzy.hpp"
#include "gdl/solver.hpp"

namespace gdl::cli {

using Json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string problem;
  int n = 0;
  int m = 0;
  int height = 0;
  int order = 0;
  int max_n = 0;
  int max_m = 0;
  int threads = 0;
  std::string state_cache;
  bool json = false;
  bool meta = false;
  bool count = false;
};

/// Rounds to ten decimals so that output does not depend on summation order noise.
Json fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", x);
  return Json(std::stod(buf));
}

struct Usage : Error {
  using Error::Error;
};

void need(bool ok, const std::string& what) {
  if (!ok) throw Usage(what);
}

Json cmd_solve(const Options& o) {
  need(o.n >= 1 && o.m >= 1, "solve needs -n and -m");
  auto p = get_problem(o.problem);
  Json j;
  auto v = gamma(p, o.n, o.m, true);
  if (!v) {
    j["status"] = "infeasible";
  } else {
    j["status"] = "ok";
    j["value"] = *v;
  }
  return j;
}

Json recurrence_json(const GammaRecurrence& r) {
  Json j;
  j["start"] = r.start;
  j["period"] = r.period;
  j["increment"] = r.increment;
  j["orbit_start"] = r.orbit_start;
  j["proven_start"] = r.proven_start;
  j["primitive"] = r.primitive;
  return j;
}

Json cmd_recurrence(const Options& o) {
  need(o.n >= 1, "recurrence needs -n");
  auto rec = find_recurrence(get_problem(o.problem), o.n);
  Json j;
  j["status"] = "ok";
  j["recurrence"] = recurrence_json(rec);
  return j;
}

Json cmd_formula(const Options& o) {
  need(o.n >= 1, "formula needs -n");
  auto p = get_problem(o.problem);
  auto rec = find_recurrence(p, o.n);
  int m_max = static_cast<int>(rec.start + rec.period + 1);
  auto values = gamma_sequence(*cached_system(p, o.n, true), m_max);
  auto f = synthesize_formula(rec, values, o.n);
  Json j;
  j["status"] = "ok";
  j["recurrence"] = recurrence_json(rec);
  Json fj;
  fj["height"] = f.height;
  fj["period"] = f.period;
  fj["increment"] = f.increment;
  fj["floor"] = f.floor;
  fj["base"] = f.base;
  Json ex = Json::object();
  for (const auto& [m, v] : f.exceptions) ex[std::to_string(m)] = v ? Json(*v) : Json(nullptr);
  fj["exceptions"] = ex;
  fj["description"] = f.describe();
  j["formula"] = fj;
  if (o.max_m > 0) {
    Json vals = Json::array();
    for (int m = 1; m <= o.max_m; ++m) {
      auto v = eval_formula(f, m);
      vals.push_back(v ? Json(*v) : Json(nullptr));
    }
    j["values"] = vals;
  }
  return j;
}

Json cmd_loss_bound(const Options& o) {
  need(o.n >= 1 && o.m >= 1, "loss-bound needs -n and -m");
  auto p = get_problem(o.problem);
  int h = o.height > 0 ? o.height : 6;
  // Large grids fold back through the band recurrence.
  bool extend = std::max(o.n, o.m) - 2 * h - 1 > 64;
  LossResult r = extend ? extended_lower_bound(p, o.n, o.m, h) : lower_bound(p, o.n, o.m, h);
  auto band = cached_band(p, h);
  Json j;
  j["status"] = "ok";
  j["height"] = h;
  j["band_states"] = band->size();
  j["loss"] = r.loss;
  j["scale"] = p->loss_model()->scale;
  j["bound"] = r.bound;
  j["extended"] = r.extended;
  if (p->loss_model()->unvalidated) j["unvalidated"] = true;
  return j;
}

Json cmd_count(const Options& o) {
  need(o.n >= 1 && o.m >= 1, "count needs -n and -m");
  auto r = count_sets(get_problem(o.problem), o.n, o.m);
  Json j;
  j["status"] = "ok";
  j["count"] = r.count.str();
  return j;
}

Json cmd_growth(const Options& o) {
  need(o.n >= 3, "growth needs -n >= 3");
  auto g = growth_bounds(get_problem(o.problem), o.n, true);
  Json j;
  j["status"] = "ok";
  j["lower"] = fixed(g.lower);
  j["upper"] = fixed(g.upper);
  j["ratio"] = fixed(*g.ratio);
  j["radius"] = fixed(g.radius);
  j["radius_relaxed"] = fixed(g.radius_relaxed);
  j["certified"] = g.certified;
  return j;
}

Json cmd_rauzy(const Options& o) {
  auto p = get_problem(o.problem);
  Json j;
  j["status"] = "ok";
  if (o.order > 0) {
    auto g = build_rauzy(p, o.order);
    j["order"] = o.order;
    j["vertices"] = g.vertices.size();
    j["edges"] = g.edges();
    j["lambda"] = fixed(growth_rate(g));
    return j;
  }
  auto s = rauzy_sweep(p, o.max_n > 0 ? o.max_n : 10);
  Json l = Json::array();
  for (double x : s.lambdas) l.push_back(fixed(x));
  j["lambdas"] = l;
  j["first_order"] = s.first_order;
  j["stable_order"] = s.stable_order;
  j["rate"] = fixed(s.rate);
  return j;
}

Json cmd_verify(const Options& o) {
  need(o.max_n >= 1 && o.max_m >= 1, "verify needs --max-n and --max-m");
  auto p = get_problem(o.problem);
  long long checked = 0, skipped = 0, mismatches = 0;
  Json first = nullptr;
  for (int n = 1; n <= o.max_n; ++n) {
    if (o.max_m < n) break;
    auto values = gamma_sequence(*cached_system(p, n, true), o.max_m);
    for (int m = n; m <= o.max_m; ++m) {
      if (!reference_available(p->name(), n, m)) {
        ++skipped;
        continue;
      }
      ++checked;
      long long ref = reference_formula(p->name(), n, m);
      auto got = values[static_cast<std::size_t>(m)];
      if (!got || *got != ref) {
        ++mismatches;
        if (first.is_null()) {
          first = Json::object();
          first["n"] = n;
          first["m"] = m;
          first["solver"] = got ? Json(*got) : Json(nullptr);
          first["reference"] = ref;
        }
      }
    }
  }
  Json j;
  j["status"] = "ok";
  j["checked"] = checked;
  j["skipped"] = skipped;
  j["mismatches"] = mismatches;
  if (!first.is_null()) j["first_mismatch"] = first;
  return j;
}

Json cmd_oracle(const Options& o) {
  need(o.n >= 1 && o.m >= 1, "oracle needs -n and -m");
  auto p = get_problem(o.problem);
  Json j;
  if (o.count) {
    j["status"] = "ok";
    j["count"] = brute_count(*p, o.n, o.m).str();
    return j;
  }
  auto v = brute_min_cost(*p, o.n, o.m);
  if (!v) {
    j["status"] = "infeasible";
  } else {
    j["status"] = "ok";
    j["value"] = *v;
  }
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Domination numbers, bounds and counts on grid graphs", "grid-domino-lab"};
  app.require_subcommand(1, 1);
  Options o;
  struct Sub {
    const char* name;
    const char* help;
    Json (*fn)(const Options&);
  };
  const Sub subs[] = {
      {"solve", "minimum cost on the n x m grid", cmd_solve},
      {"formula", "closed formula for fixed height n", cmd_formula},
      {"recurrence", "recurrence of the values for fixed height n", cmd_recurrence},
      {"loss-bound", "border loss lower bound", cmd_loss_bound},
      {"count", "exact number of sets", cmd_count},
      {"growth", "growth rate bracket at height n", cmd_growth},
      {"rauzy", "growth rate of the state language", cmd_rauzy},
      {"verify", "solver against the published formulas", cmd_verify},
      {"oracle", "brute force on a small grid", cmd_oracle},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> apps;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--problem", o.problem, "problem name")->required();
    sub->add_option("-n", o.n, "rows (column height)");
    sub->add_option("-m", o.m, "columns");
    sub->add_option("--height", o.height, "band height");
    sub->add_option("--order", o.order, "Rauzy order");
    sub->add_option("--max-n", o.max_n, "largest n");
    sub->add_option("--max-m", o.max_m, "largest m");
    sub->add_option("--threads", o.threads, "worker count");
    sub->add_option("--state-cache", o.state_cache, "state cache directory");
    sub->add_flag("--json", o.json, "JSON output (always on)");
    sub->add_flag("--meta", o.meta, "add timing and worker count");
    if (std::string(s.name) == "oracle") sub->add_flag("--count", o.count, "count instead of minimising");
    apps.emplace_back(sub, &s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  if (o.threads > 0) set_num_threads(o.threads);
  if (!o.state_cache.empty()) set_state_cache_dir(o.state_cache);

  const Sub* chosen = nullptr;
  for (const auto& [sub, s] : apps)
    if (sub->parsed()) chosen = s;

  Json doc;
  doc["command"] = chosen->name;
  Json params;
  params["problem"] = o.problem;
  if (o.n) params["n"] = o.n;
  if (o.m) params["m"] = o.m;
  if (o.height) params["height"] = o.height;
  if (o.order) params["order"] = o.order;
  if (o.max_n) params["max_n"] = o.max_n;
  if (o.max_m) params["max_m"] = o.max_m;
  if (o.count) params["count"] = true;
  doc["parameters"] = params;

  auto t0 = std::chrono::steady_clock::now();
  try {
    Json result = chosen->fn(o);
    for (auto& [k, v] : result.items()) doc[k] = v;
  } catch (const Usage& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const UnknownProblem& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const CapacityExceeded& e) {
    doc["status"] = "capacity_exceeded";
    doc["message"] = e.what();
  } catch (const BudgetExceeded& e) {
    doc["status"] = "capacity_exceeded";
    doc["message"] = e.what();
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  if (o.meta) {
    Json meta;
    meta["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    meta["workers"] = num_threads();
    doc["meta"] = meta;
  }
  out << doc.dump() << "\n";
  return 0;
}

}  // namespace gdl::cli
