#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "overture/adversary.hpp"
#include "overture/checks.hpp"
#include "overture/datalog.hpp"
#include "overture/engine.hpp"
#include "overture/error.hpp"
#include "overture/prelude.hpp"
#include "overture/stdlib.hpp"
#include "overture/syntax.hpp"

namespace fs = std::filesystem;
using namespace ovt;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Reads from disk, falling back to the embedded protocols/ copy by file name.
std::string read_source(const std::string& path) {
  std::ifstream in(path);
  if (in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (const auto f = embedded_file(fs::path(path).filename().string())) return std::string(*f);
  throw UsageError("cannot read " + path);
}

std::optional<ManifestEntry> manifest_entry(const std::string& path) {
  const std::string base = fs::path(path).filename().string();
  for (const auto& e : parse_manifest(*embedded_file("manifest.txt"))) {
    if (e.source == base) return e;
  }
  return std::nullopt;
}

struct Loaded {
  Protocol protocol;
  std::optional<ManifestEntry> entry;
};

Loaded load(const std::string& path, std::vector<std::string> libs, std::uint32_t field) {
  Loaded out;
  out.entry = manifest_entry(path);
  if (libs.empty() && out.entry) libs = out.entry->libraries;
  std::vector<std::string> lib_sources;
  for (const auto& l : libs) lib_sources.push_back(read_source(l));
  const std::string src = read_source(path);
  const bool pre = fs::path(path).extension() == ".pre";
  if (pre) {
    prelude::EvalOptions o;
    o.modulus = field;
    out.protocol = prelude::expand(src, lib_sources, o).protocol;
  } else {
    out.protocol = parse_protocol(src, field);
  }
  return out;
}

ClientSet parse_client_list(const std::string& text) {
  ClientSet out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("bad client list '" + text + "'");
    }
    out.insert(ClientId{static_cast<std::uint32_t>(std::stoul(item))});
  }
  if (out.empty()) throw UsageError("empty client list");
  return out;
}

VarSet parse_var_list(const std::string& text) {
  VarSet out;
  std::istringstream in(text);
  for (std::string item; in >> item;) {
    std::istringstream parts(item);
    for (std::string v; std::getline(parts, v, ',');) {
      if (!v.empty()) out.insert(parse_var(v));
    }
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

void require_f2(std::uint32_t field) {
  if (field != 2) throw UnsupportedOperation("verification is defined over F2 only (got --field " + std::to_string(field) + ")");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overture/Prelude workbench"};
  app.require_subcommand(1);
  std::uint32_t field = 2;
  app.add_option("--field", field, "prime modulus")->check(CLI::PositiveNumber);

  std::string file, out_path, libs_text;
  std::vector<std::string> libs;

  auto* expand = app.add_subcommand("expand", "expand a Prelude program to Overture");
  expand->add_option("file", file)->required();
  expand->add_option("--lib", libs, "library sources");
  expand->add_option("-o,--output", out_path);

  std::string inputs_text;
  auto* run_cmd = app.add_subcommand("run", "run a protocol on one initial memory");
  run_cmd->add_option("file", file)->required();
  run_cmd->add_option("--lib", libs);
  run_cmd->add_option("--inputs", inputs_text, "secrets, flips and preprocessed messages")->required();

  std::string marginal, given, preproc_name;
  int workers = 0;
  auto* pmf = app.add_subcommand("pmf", "print BD(pi), optionally marginal or conditional");
  pmf->add_option("file", file)->required();
  pmf->add_option("--lib", libs);
  pmf->add_option("--marginal", marginal, "variables to keep");
  pmf->add_option("--given", given, "realization to condition on");
  pmf->add_option("--preproc", preproc_name, "default, uniform, bdoz or bdoz-trim");
  pmf->add_option("--workers", workers);

  std::string property, corrupt_text, functionality_path, reading_text = "both", wires_text = "x,y,z", wire = "w",
                                                                   inputs_mode = "data-flow", scope_text = "visible";
  bool all_partitions = false;
  std::size_t budget = 0;
  auto* verify = app.add_subcommand("verify", "check a property");
  verify->add_option("file", file)->required();
  verify->add_option("--lib", libs);
  verify->add_option("--property", property)
      ->required()
      ->check(CLI::IsMember({"correct", "nimo", "gradual-release", "and-tactic", "gmw-invariant",
                             "cheating-detection", "integrity"}));
  verify->add_option("--corrupt", corrupt_text, "corrupt clients, e.g. 2 or 1,3");
  verify->add_flag("--all-partitions", all_partitions);
  verify->add_option("--functionality", functionality_path);
  verify->add_option("--preproc", preproc_name);
  verify->add_option("--budget", budget, "decision points allowed for table strategies");
  verify->add_option("--scope", scope_text)->check(CLI::IsMember({"visible", "all"}));
  verify->add_option("--reading", reading_text)->check(CLI::IsMember({"per-draw", "marginal", "both"}));
  verify->add_option("--inputs-mode", inputs_mode)->check(CLI::IsMember({"data-flow", "statistical"}));
  verify->add_option("--wires", wires_text, "and-tactic wires x,y,z");
  verify->add_option("--wire", wire, "gmw-invariant gate output");
  verify->add_option("--workers", workers);

  auto* dl = app.add_subcommand("export-datalog", "export an assert-free protocol as Datalog");
  dl->add_option("file", file)->required();
  dl->add_option("--lib", libs);
  dl->add_option("-o,--output", out_path);

  std::string facts_text;
  auto* lhm = app.add_subcommand("lhm", "least Herbrand model of a .dl program");
  lhm->add_option("file", file)->required();
  lhm->add_option("--facts", facts_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*expand) {
      write_output(out_path, load(file, libs, field).protocol.to_string());
      return kPass;
    }
    if (*run_cmd) {
      const Protocol pi = load(file, libs, field).protocol;
      const Memory m0 = parse_memory(inputs_text, field);
      for (const auto& [x, v] : run(m0, pi)) std::cout << x.to_string() << "=" << cell_to_string(v) << "\n";
      return kPass;
    }
    if (*dl) {
      require_f2(field);
      write_output(out_path, "% generated from " + fs::path(file).filename().string() + "\n" +
                                 to_datalog(load(file, libs, field).protocol).to_string());
      return kPass;
    }
    if (*lhm) {
      const Memory m = lhm_eval(parse_facts(facts_text), parse_datalog(read_source(file)));
      for (const auto& [x, v] : m) std::cout << x.to_string() << "=" << cell_to_string(v) << "\n";
      return kPass;
    }

    require_f2(field);
    const Loaded loaded = load(file, libs, field);
    const Protocol& pi = loaded.protocol;
    if (preproc_name.empty()) preproc_name = loaded.entry ? loaded.entry->preproc : "default";
    const PreprocPredicate pre = preproc_by_name(preproc_name, pi);
    EngineOptions engine;
    engine.workers = workers;

    if (*pmf) {
      Pmf p = bd(pi, pre, std::nullopt, engine);
      if (!given.empty()) {
        const Memory g = parse_memory(given);
        const VarSet keep = marginal.empty() ? p.domain() : parse_var_list(marginal);
        VarSet rest;
        for (const Var& x : keep) {
          if (!g.contains(x)) rest.insert(x);
        }
        p = p.given(rest, g);
        if (p.total() == 0) throw UsageError("conditioning event has probability 0");
      } else if (!marginal.empty()) {
        p = p.marginal(parse_var_list(marginal));
      }
      std::cout << p.dump();
      return kPass;
    }

    ClientSet federation = loaded.entry ? loaded.entry->federation : pi.clients();
    std::vector<Partition> parts;
    if (all_partitions) {
      parts = proper_partitions(federation);
    } else if (!corrupt_text.empty()) {
      const ClientSet c = parse_client_list(corrupt_text);
      for (ClientId id : c) {
        if (!federation.contains(id)) throw UsageError("client " + id.to_string() + " is not in the federation");
      }
      parts.push_back(Partition::from_corrupt(federation, c));
    }
    auto need_parts = [&] {
      if (parts.empty()) throw UsageError("--property " + property + " needs --corrupt or --all-partitions");
    };

    std::vector<Verdict> verdicts;
    if (property == "correct") {
      std::optional<Functionality> f;
      if (!functionality_path.empty()) {
        f = parse_functionality(read_source(functionality_path));
      } else if (loaded.entry && loaded.entry->functionality) {
        f = parse_functionality(std::string(*embedded_file(*loaded.entry->functionality)));
      } else {
        throw UsageError("--property correct needs --functionality");
      }
      verdicts.push_back(check_passive_correct(pi, *f, pre, engine));
    } else if (property == "nimo" || property == "gradual-release" || property == "gmw-invariant") {
      need_parts();
      for (const auto& part : parts) {
        if (property == "nimo") verdicts.push_back(check_nimo(pi, part, pre, engine));
        else if (property == "gradual-release") verdicts.push_back(check_gradual_release(pi, part, pre, engine));
        else verdicts.push_back(check_gmw_invariant(pi, wire, part));
      }
    } else if (property == "and-tactic") {
      std::vector<std::string> w;
      std::istringstream in(wires_text);
      for (std::string s; std::getline(in, s, ',');) w.push_back(s);
      if (w.size() != 3) throw UsageError("--wires takes three names x,y,z");
      const TacticReport r = and_gate_tactic(pi, w[0], w[1], w[2]);
      verdicts.push_back(r.det);
      verdicts.insert(verdicts.end(), r.uni.begin(), r.uni.end());
      verdicts.push_back(r.sep);
    } else {
      need_parts();
      std::vector<Reading> readings;
      if (reading_text != "marginal") readings.push_back(Reading::PerDraw);
      if (reading_text != "per-draw") readings.push_back(Reading::Marginal);
      for (const auto& part : parts) {
        FamilyOptions fo;
        fo.budget = budget;
        fo.scope = scope_text == "all" ? DecisionScope::All : DecisionScope::Visible;
        const auto strategies = enumerate_adversaries(pi, part, fo);
        for (Reading r : readings) {
          AdversarialOptions ao;
          ao.reading = r;
          ao.inputs = inputs_mode == "statistical" ? InputsMode::Statistical : InputsMode::DataFlow;
          ao.engine = engine;
          verdicts.push_back(property == "integrity" ? check_integrity(pi, part, strategies, pre, ao)
                                                     : check_cheating_detection(pi, part, strategies, pre, ao));
        }
      }
    }
    bool ok = true;
    for (const auto& v : verdicts) {
      std::cout << (v.ok ? "PASS " : "FAIL ") << v.to_string();
      ok = ok && v.ok;
    }
    return ok ? kPass : kFail;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
