// Command-line front end: one job per invocation.
//
// Exit status: 0 pass, 1 fail with witness, 2 error. Errors print
// "error: <Code>: <detail>" on stderr, where <Code> is a stable name.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sctk/completion.hpp"
#include "sctk/conditions.hpp"
#include "sctk/diagram.hpp"
#include "sctk/distortion.hpp"
#include "sctk/errors.hpp"
#include "sctk/graph.hpp"
#include "sctk/witness.hpp"
#include "sctk/words.hpp"

namespace {

  using namespace sctk;
  using nlohmann::json;

  constexpr char const* kBudgetEnv = "SCTK_BUDGET";

  struct JobConfig {
    std::string                  format = "text";
    std::string                  output;
    std::optional<std::uint64_t> budget;

    std::string                  condition;
    std::optional<std::uint64_t> n;
    std::string                  lambda;
    std::optional<std::uint64_t> truncation;
    std::optional<std::uint64_t> radius;
    bool                         all_pieces = false;

    std::string presentation;
    std::string graph;
    std::string factors;
    std::string diagram;
    std::string word;
    bool        close_disk = false;
    bool        w_sets     = false;

    std::string                  family;
    std::uint64_t                p = 7;
    std::uint64_t                N = 1;
    std::optional<std::uint64_t> short_witness_n;
  };

  std::string read_file(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      fail(ErrorCode::Precondition, "cannot open '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  // Prefixes parser diagnostics with the file they came from.
  template <typename F>
  auto load(std::string const& path, F&& parse) {
    auto text = read_file(path);
    try {
      return parse(text);
    } catch (Error const& e) {
      fail(e.code(), path + ": " + e.detail());
    }
  }

  std::optional<std::uint64_t> env_budget() {
    char const* v = std::getenv(kBudgetEnv);
    if (v == nullptr || *v == '\0') {
      return std::nullopt;
    }
    std::string s(v);
    if (s.find_first_not_of("0123456789") != std::string::npos) {
      fail(ErrorCode::Parse, std::string(kBudgetEnv) + " must be a positive integer");
    }
    return std::stoull(s);
  }

  // Flag first, then the environment, then the module default.
  std::uint64_t budget_or(JobConfig const& cfg, std::uint64_t fallback) {
    if (cfg.budget) {
      return *cfg.budget;
    }
    if (auto e = env_budget()) {
      return *e;
    }
    return fallback;
  }

  std::vector<FactorSpec> load_factors(JobConfig const& cfg) {
    if (cfg.factors.empty()) {
      fail(ErrorCode::Precondition, "--factors is required");
    }
    auto fs = load(cfg.factors, [](std::string const& t) { return parse_factors(t); });
    if (cfg.radius) {
      for (auto& f : fs) {
        if (f.kind == FactorSpec::Kind::Cyclic) {
          f = infinite_cyclic_factor(f.id, f.generators.at(0).first, *cfg.radius);
        }
      }
    }
    return fs;
  }

  LabelledGraph load_graph(JobConfig const& cfg) {
    if (cfg.graph.empty()) {
      fail(ErrorCode::Precondition, "--graph is required");
    }
    return load(cfg.graph, [](std::string const& t) { return parse_graph(t); });
  }

  RunPresentation load_presentation(JobConfig const& cfg) {
    if (cfg.presentation.empty()) {
      fail(ErrorCode::Precondition, "--presentation is required");
    }
    return load(cfg.presentation, [](std::string const& t) { return parse_presentation(t); });
  }

  // Writes the report to --output or stdout.
  void emit(JobConfig const& cfg, std::string const& body) {
    if (cfg.output.empty()) {
      std::cout << body;
      if (!body.empty() && body.back() != '\n') {
        std::cout << '\n';
      }
      return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
      fail(ErrorCode::Precondition, "cannot write '" + cfg.output + "'");
    }
    out << body;
    if (!body.empty() && body.back() != '\n') {
      out << '\n';
    }
  }

  bool structured(JobConfig const& cfg) {
    return cfg.format == "json";
  }

  std::uint64_t require_n(JobConfig const& cfg) {
    if (!cfg.n) {
      fail(ErrorCode::Precondition, "--n is required for condition " + cfg.condition);
    }
    return *cfg.n;
  }

  Rational require_lambda(JobConfig const& cfg) {
    if (cfg.lambda.empty()) {
      fail(ErrorCode::Precondition, "--lambda is required for condition " + cfg.condition);
    }
    auto l = parse_rational(cfg.lambda);
    if (l <= Rational(0) || l > Rational(1)) {
      fail(ErrorCode::Precondition, "--lambda must lie in (0, 1]");
    }
    return l;
  }

  // Commands -----------------------------------------------------------------

  int cmd_check(JobConfig const& cfg) {
    bool const      essential = !cfg.all_pieces;
    ConditionReport r;
    auto const&     c = cfg.condition;
    if (c == "C" || c == "Cprime") {
      auto p = load_presentation(cfg);
      r      = c == "C" ? check_c_classical(p, require_n(cfg), cfg.truncation)
                        : check_cprime_classical(p, require_lambda(cfg), cfg.truncation);
    } else if (c == "Gr" || c == "Grprime") {
      auto g = load_graph(cfg);
      r      = c == "Gr" ? check_gr(g, require_n(cfg), essential)
                         : check_grprime(g, require_lambda(cfg), essential);
    } else if (c == "Grstar" || c == "Cprimestar") {
      auto comp = build_completion(load_graph(cfg), load_factors(cfg),
                                   budget_or(cfg, default_completion_budget));
      r         = c == "Grstar" ? check_gr_star(comp, require_n(cfg), essential)
                                : check_cprime_star(comp, require_lambda(cfg), essential);
    } else {
      fail(ErrorCode::Precondition, "unknown condition '" + c + "'");
    }
    emit(cfg, structured(cfg) ? report_json(r) : report_text(r));
    return r.pass ? 0 : 1;
  }

  int cmd_witness(JobConfig const& cfg) {
    WitnessOptions opts;
    opts.node_budget = budget_or(cfg, opts.node_budget);
    WitnessPackage pkg;
    if (!cfg.presentation.empty()) {
      auto in = prepare_classical(load_presentation(cfg));
      pkg     = select_witnesses_classical(in, opts);
      if (cfg.w_sets) {
        build_w_sets_classical(pkg, in);
      }
      auto check = verify_package(pkg, in);
      if (!check.ok) {
        fail(ErrorCode::AssertionFailed, "package verification: " + check.failures.front());
      }
    } else {
      auto comp = build_completion(load_graph(cfg), load_factors(cfg));
      pkg       = select_witnesses_graphical(comp, opts);
      if (cfg.w_sets) {
        build_w_sets_graphical(pkg, comp);
      }
      auto check = verify_package(pkg, comp);
      if (!check.ok) {
        fail(ErrorCode::AssertionFailed, "package verification: " + check.failures.front());
      }
    }
    emit(cfg, structured(cfg) ? package_json(pkg) : package_text(pkg));
    return 0;
  }

  int cmd_completion(JobConfig const& cfg) {
    auto comp = build_completion(load_graph(cfg), load_factors(cfg),
                                 budget_or(cfg, default_completion_budget));
    if (!structured(cfg)) {
      emit(cfg, completion_text(comp));
      return 0;
    }
    auto const& g = comp.graph;
    json        j;
    j["vertices"]  = g.num_vertices();
    j["edges"]     = g.num_edges();
    j["truncated"] = comp.truncated;
    if (comp.radius) {
      j["radius"] = *comp.radius;
    }
    j["embedded"] = is_embedded_sheets(comp).embedded;
    j["graph"]    = format_graph(g);
    emit(cfg, j.dump(2));
    return 0;
  }

  int cmd_curvature(JobConfig const& cfg) {
    if (cfg.diagram.empty()) {
      fail(ErrorCode::Precondition, "--diagram is required");
    }
    auto d = load(cfg.diagram, [](std::string const& t) { return parse_diagram(t); });
    if (d.topology == Topology::Disk) {
      if (!cfg.close_disk) {
        fail(ErrorCode::Precondition, "curvature needs a sphere; pass --close for a disk");
      }
      d = as_sphere(d);
    }
    auto audit = curvature_audit(d);
    auto view  = map_view(d);
    if (structured(cfg)) {
      json j;
      j["curvature"] = format_rational(audit);
      j["vertices"]  = view.num_vertices();
      j["edges"]     = d.num_edges();
      j["faces"]     = view.num_faces();
      emit(cfg, j.dump(2));
    } else {
      emit(cfg, format_rational(audit));
    }
    return audit == Rational(6) ? 0 : 1;
  }

  int cmd_distortion(JobConfig const& cfg) {
    auto g = load_graph(cfg);
    if (cfg.word.empty()) {
      fail(ErrorCode::Precondition, "--word is required");
    }
    auto w    = parse_word(cfg.word, g.alphabet());
    auto cert = classify_case(g, w);
    emit(cfg, structured(cfg) ? certificate_json(cert, g) : certificate_text(cert, g));
    return cert.downgraded ? 1 : 0;
  }

  int cmd_generate(JobConfig const& cfg) {
    if (cfg.family != "distorted") {
      fail(ErrorCode::Precondition, "unknown family '" + cfg.family + "'");
    }
    if (cfg.short_witness_n) {
      auto pr = gen_distorted_family(cfg.p, 1);
      auto u  = short_witness(cfg.p, *cfg.short_witness_n);
      if (structured(cfg)) {
        json j;
        j["p"]       = cfg.p;
        j["n"]       = *cfg.short_witness_n;
        j["length"]  = u.length();
        j["witness"] = format_word(u, pr.alphabet);
        emit(cfg, j.dump(2));
      } else {
        emit(cfg, format_word(u, pr.alphabet));
      }
      return 0;
    }
    auto pr = gen_distorted_family(cfg.p, cfg.N);
    if (structured(cfg)) {
      json j;
      j["p"]        = cfg.p;
      j["N"]        = cfg.N;
      j["alphabet"] = pr.alphabet.names();
      json rels     = json::array();
      for (auto const& r : pr.relators) {
        rels.push_back(format_word(r, pr.alphabet));
      }
      j["relators"] = rels;
      emit(cfg, j.dump(2));
    } else {
      emit(cfg, format_presentation(pr));
    }
    return 0;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small cancellation toolkit"};
  app.require_subcommand(1);
  JobConfig cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("-o,--output", cfg.output, "Report file (default: stdout)");
    sub->add_option("--budget", cfg.budget,
                    std::string("Search budget; overrides ") + kBudgetEnv);
  };

  auto* check = app.add_subcommand("check", "Run a small cancellation condition check");
  common(check);
  check->add_option("--condition", cfg.condition, "C, Cprime, Gr, Grprime, Grstar, Cprimestar")
      ->required();
  check->add_option("--n", cfg.n, "Piece count bound");
  check->add_option("--lambda", cfg.lambda, "Rational p/q");
  check->add_option("--truncation", cfg.truncation, "Use only the first N relators");
  check->add_option("--radius", cfg.radius, "Truncation radius of infinite cyclic factors");
  check->add_option("--presentation", cfg.presentation);
  check->add_option("--graph", cfg.graph);
  check->add_option("--factors", cfg.factors);
  check->add_flag("--all-pieces", cfg.all_pieces, "Count inessential pieces too");

  auto* witness = app.add_subcommand("witness", "Select the sixteen witness tuples");
  common(witness);
  witness->add_option("--presentation", cfg.presentation, "Classical input");
  witness->add_option("--graph", cfg.graph, "Graphical input (with --factors)");
  witness->add_option("--factors", cfg.factors);
  witness->add_option("--radius", cfg.radius);
  witness->add_flag("--w-sets", cfg.w_sets, "Also emit the W-sets");

  auto* completion = app.add_subcommand("completion", "Build the completion of a graph");
  common(completion);
  completion->add_option("--graph", cfg.graph)->required();
  completion->add_option("--factors", cfg.factors)->required();
  completion->add_option("--radius", cfg.radius);

  auto* curvature = app.add_subcommand("curvature", "Audit the curvature of a diagram");
  common(curvature);
  curvature->add_option("--diagram", cfg.diagram)->required();
  curvature->add_flag("--close", cfg.close_disk, "Count the outside of a disk as a face");

  auto* distortion = app.add_subcommand("distortion", "Classify a cyclic subgroup");
  common(distortion);
  distortion->add_option("--graph", cfg.graph)->required();
  distortion->add_option("--word", cfg.word, "The element w")->required();

  auto* generate = app.add_subcommand("generate", "Emit a presentation of a family");
  common(generate);
  generate->add_option("--family", cfg.family)->required();
  generate->add_option("--p", cfg.p);
  generate->add_option("--N", cfg.N);
  generate->add_option("--short-witness", cfg.short_witness_n,
                       "Emit the short word for b^(2^n) instead");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*check) {
      return cmd_check(cfg);
    }
    if (*witness) {
      return cmd_witness(cfg);
    }
    if (*completion) {
      return cmd_completion(cfg);
    }
    if (*curvature) {
      return cmd_curvature(cfg);
    }
    if (*distortion) {
      return cmd_distortion(cfg);
    }
    return cmd_generate(cfg);
  } catch (Error const& e) {
    std::cerr << "error: " << error_name(e.code()) << ": " << e.detail() << '\n';
    return 2;
  } catch (std::exception const& e) {
    std::cerr << "error: Internal: " << e.what() << '\n';
    return 2;
  }
}
