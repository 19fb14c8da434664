#include "grj/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "grj/error.hpp"
#include "grj/io.hpp"
#include "grj/metrics.hpp"

namespace grj {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_points(const fs::path& dir, const std::string& stem, const std::vector<Vector>& rows,
                  OutputFormat format) {
  if (format == OutputFormat::Csv) {
    write_rows_csv(dir / (stem + ".csv"), rows);
    return;
  }
  json a = json::array();
  for (const Vector& r : rows) a.push_back(vector_json(r));
  write_text(dir / (stem + ".json"), a.dump() + "\n");
}

bool is_disc_brake(const std::string& name) {
  const ProblemRegistry reg = ProblemRegistry::builtin();
  const RegistryEntry* e = reg.find(name);
  return e != nullptr && e->name == "Disc Brake";
}

json config_json(const SolverConfig& c) {
  std::string phi = c.phi.kind == PhiChoice::Kind::Indicator ? "indicator" : "power";
  return {{"beta", c.beta},         {"phi", phi},
          {"phi_p", c.phi.p},       {"stop_tol", c.stop_tol},
          {"max_outer", c.max_outer}, {"eps", c.eps},
          {"newton_cap", c.newton_cap}, {"margin_tol", c.margin_tol},
          {"seed", c.seed}};
}

}  // namespace

MopProblem resolve_problem(const ProblemRegistry& registry, const std::string& name,
                           const RunSpec& spec) {
  if (spec.disc_brake_verbatim && is_disc_brake(name) && registry.find(name) != nullptr)
    return slackify(make_disc_brake(DiscBrakeForm::Verbatim));
  return registry.make(name);
}

int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const ProblemRegistry registry = ProblemRegistry::builtin();
  if (spec.problems.empty()) {
    err << "no problem given; registered problems: " << registry.names() << "\n";
    return exit_code::kUsage;
  }
  for (const std::string& name : spec.problems) {
    if (registry.find(name) == nullptr) {
      err << "unknown problem '" << name << "'; registered problems: " << registry.names() << "\n";
      return exit_code::kUsage;
    }
  }
  if (spec.n_starts == 0) {
    err << "--starts must be at least 1\n";
    return exit_code::kUsage;
  }
  try {
    spec.config.validate();
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code::kUsage;
  }

  try {
    for (const std::string& name : spec.problems) {
      const MopProblem problem = resolve_problem(registry, name, spec);
      const fs::path dir = spec.out_dir / problem_slug(registry.find(name)->name);
      fs::create_directories(dir);

      const auto t0 = std::chrono::steady_clock::now();
      const PopulationResult pop = solve_population(problem, spec.n_starts, spec.config, spec.jobs);
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      std::vector<ArchiveEntry> archive = pop.archive;
      std::sort(archive.begin(), archive.end(),
                [](const ArchiveEntry& a, const ArchiveEntry& b) { return a.f < b.f; });
      std::vector<Vector> front, solutions;
      for (const ArchiveEntry& e : archive) {
        front.push_back(e.f);
        solutions.push_back(e.x);
      }
      write_points(dir, "front", front, spec.format);
      write_points(dir, "solutions", solutions, spec.format);

      std::string trace;
      std::map<std::string, std::size_t> counts;
      json runs = json::array();
      double cpu_total = 0.0;
      for (const StartOutcome& o : pop.starts) {
        cpu_total += o.seconds;
        json run = {{"start", o.index}, {"seconds", o.seconds}};
        if (!o.result) {
          ++counts["NoFeasibleStart"];
          run["status"] = "NoFeasibleStart";
          run["error"] = o.error;
          runs.push_back(run);
          continue;
        }
        const SolveResult& res = *o.result;
        ++counts[to_string(res.status)];
        run["status"] = to_string(res.status);
        run["iterations"] = res.iterations();
        run["f"] = vector_json(res.f_final);
        if (res.certificate) {
          run["stationarity_residual"] = number(res.certificate->stationarity_residual);
          run["complementarity_residual"] = number(res.certificate->complementarity_residual);
        }
        if (!res.message.empty()) run["message"] = res.message;
        runs.push_back(run);
        for (const TraceRecord& t : res.trace) {
          json rec = {{"start", o.index},
                      {"iter", t.iter},
                      {"f", vector_json(t.f)},
                      {"x", vector_json(t.x)},
                      {"residual", number(t.constraint_residual)},
                      {"value", number(t.value)},
                      {"step", number(t.step)},
                      {"halvings", t.halvings},
                      {"newton_iters", t.newton_iters},
                      {"basis_changed", t.basis_changed}};
          trace += rec.dump();
          trace += '\n';
        }
      }
      write_text(dir / "trace.jsonl", trace);

      json summary = {{"problem", problem.name},
                      {"n", problem.n},
                      {"m", problem.m},
                      {"r", problem.r},
                      {"starts", spec.n_starts},
                      {"status_counts", counts},
                      {"archive_size", archive.size()},
                      {"wall_seconds", wall},
                      {"cpu_seconds", cpu_total / static_cast<double>(spec.n_starts)},
                      {"config", config_json(spec.config)},
                      {"runs", runs}};
      write_text(dir / "summary.json", summary.dump(2) + "\n");

      out << problem.name << ": " << archive.size() << " archive points from " << spec.n_starts
          << " starts (";
      bool first = true;
      for (const auto& [status, count] : counts) {
        out << (first ? "" : ", ") << status << " " << count;
        first = false;
      }
      out << ") -> " << dir.string() << "\n";
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code::kIo;
  } catch (const fs::filesystem_error& e) {
    err << e.what() << "\n";
    return exit_code::kIo;
  }
  return exit_code::kOk;
}

namespace {

struct ExternalFront {
  std::string problem;
  std::string solver;
  fs::path path;
};

ExternalFront parse_external(const std::string& text, const std::string& default_problem) {
  ExternalFront ef{default_problem, "", text};
  std::string rest = text;
  const auto eq = rest.find('=');
  const auto colon = rest.find(':');
  if (colon != std::string::npos && (eq == std::string::npos || colon < eq)) {
    ef.problem = rest.substr(0, colon);
    rest = rest.substr(colon + 1);
  }
  const auto eq2 = rest.find('=');
  if (eq2 != std::string::npos) {
    ef.solver = rest.substr(0, eq2);
    rest = rest.substr(eq2 + 1);
  }
  ef.path = rest;
  if (ef.solver.empty()) ef.solver = ef.path.stem().string();
  return ef;
}

double read_cpu(const fs::path& summary) {
  std::ifstream in(summary);
  if (!in) return std::numeric_limits<double>::quiet_NaN();
  try {
    const json j = json::parse(in);
    if (j.contains("cpu_seconds") && j["cpu_seconds"].is_number()) return j["cpu_seconds"].get<double>();
  } catch (const json::exception&) {
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double safe_spread(const Front& fps, const Front& fp) {
  try {
    return spread(fps, fp);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

int cmd_metrics(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const ProblemRegistry registry = ProblemRegistry::builtin();
  std::vector<std::string> problems;
  for (const std::string& name : spec.problems) {
    const RegistryEntry* e = registry.find(name);
    if (e == nullptr) {
      err << "unknown problem '" << name << "'; registered problems: " << registry.names() << "\n";
      return exit_code::kUsage;
    }
    problems.push_back(e->name);
  }
  std::vector<ExternalFront> externals;
  for (const std::string& text : spec.external_fronts) {
    ExternalFront ef = parse_external(text, problems.empty() ? "" : problems.front());
    const RegistryEntry* e = registry.find(ef.problem);
    if (e == nullptr) {
      err << "external front '" << text << "' names no registered problem\n";
      return exit_code::kUsage;
    }
    ef.problem = e->name;
    if (std::find(problems.begin(), problems.end(), ef.problem) == problems.end())
      problems.push_back(ef.problem);
    externals.push_back(std::move(ef));
  }
  if (problems.empty()) {
    err << "no problem given\n";
    return exit_code::kUsage;
  }

  struct Row {
    std::string problem;
    std::string solver;
    MetricsReport report;
  };
  std::vector<Row> rows;
  try {
    for (const std::string& name : problems) {
      std::vector<Front> fronts;
      std::vector<double> cpu;
      const fs::path own = spec.out_dir / problem_slug(name) / "front.csv";
      if (fs::exists(own)) {
        fronts.push_back({read_rows_csv(own), name, "GRJ"});
        cpu.push_back(read_cpu(spec.out_dir / problem_slug(name) / "summary.json"));
      }
      for (const ExternalFront& ef : externals) {
        if (ef.problem != name) continue;
        if (!fs::exists(ef.path)) {
          err << "missing front file " << ef.path.string() << "\n";
          return exit_code::kMissingFronts;
        }
        fronts.push_back({read_rows_csv(ef.path), name, ef.solver});
        cpu.push_back(std::numeric_limits<double>::quiet_NaN());
      }
      fronts.erase(std::remove_if(fronts.begin(), fronts.end(),
                                  [](const Front& f) { return f.points.empty(); }),
                   fronts.end());
      if (fronts.empty()) {
        err << "no fronts for " << name << " (run it first or pass --external-front)\n";
        return exit_code::kMissingFronts;
      }
      const Front fp = spec.grid > 0 ? brute_force_front(resolve_problem(registry, name, spec), spec.grid)
                                     : reference_front(fronts);
      for (std::size_t k = 0; k < fronts.size(); ++k) {
        MetricsReport rep;
        rep.purity = purity(fronts[k], fp);
        rep.spread = safe_spread(fronts[k], fp);
        rep.gd = generational_distance(fronts[k], fp);
        rep.cpu_seconds = k < cpu.size() ? cpu[k] : std::numeric_limits<double>::quiet_NaN();
        rows.push_back({name, fronts[k].solver, rep});
      }
    }

    fs::create_directories(spec.out_dir);
    std::string table = "problem,solver,CPU,P,Delta*,GD\n";
    for (const Row& r : rows) {
      table += r.problem + "," + r.solver + "," + format_double(r.report.cpu_seconds) + "," +
               format_double(r.report.purity) + "," + format_double(r.report.spread) + "," +
               format_double(r.report.gd) + "\n";
    }
    write_text(spec.out_dir / "metrics.csv", table);

    std::vector<std::string> solvers;
    for (const Row& r : rows)
      if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end())
        solvers.push_back(r.solver);
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<std::pair<std::string, double (*)(const MetricsReport&)>> measures = {
        {"P", [](const MetricsReport& m) { return purity_measure(m.purity); }},
        {"Spread", [](const MetricsReport& m) { return m.spread; }},
        {"GD", [](const MetricsReport& m) { return m.gd; }},
        {"CPU", [](const MetricsReport& m) { return m.cpu_seconds; }},
    };
    for (const auto& [label, pick] : measures) {
      std::vector<std::vector<double>> table_m(solvers.size(), std::vector<double>(problems.size(), inf));
      for (const Row& r : rows) {
        const auto s = std::find(solvers.begin(), solvers.end(), r.solver) - solvers.begin();
        const auto q = std::find(problems.begin(), problems.end(), r.problem) - problems.begin();
        const double v = pick(r.report);
        table_m[s][q] = std::isnan(v) ? inf : v;
      }
      std::string csv = "solver,alpha,rho\n";
      for (const ProfileCurve& c : performance_profile(solvers, table_m))
        for (const auto& [alpha, rho] : c.breakpoints)
          csv += c.solver + "," + format_double(alpha) + "," + format_double(rho) + "\n";
      write_text(spec.out_dir / ("profile_" + label + ".csv"), csv);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code::kIo;
  } catch (const fs::filesystem_error& e) {
    err << e.what() << "\n";
    return exit_code::kIo;
  }

  for (const Row& r : rows) {
    out << r.problem << " " << r.solver << ": P=" << format_double(r.report.purity)
        << " Delta*=" << format_double(r.report.spread) << " GD=" << format_double(r.report.gd)
        << "\n";
  }
  return exit_code::kOk;
}

int cmd_list(const ProblemRegistry& registry, std::ostream& out) {
  out << "name r OV L NL\n";
  for (const RegistryEntry& e : registry.entries())
    out << e.name << " " << e.r << " " << e.ov << " " << e.l << " " << e.nl << "\n";
  return exit_code::kOk;
}

}  // namespace grj
