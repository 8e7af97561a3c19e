// command-line front end: enumeration, templates, class dumps, sampling,
// and the statistical test battery, all with stable JSON output.
//
// exit codes: 0 ok, 2 parse error, 3 invalid symmetry class, 4 empty index
// set, 5 test failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dagex/dagex.hpp"

using namespace dagex;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitBadClic = 3;
constexpr int kExitEmpty = 4;
constexpr int kExitTestFail = 5;

struct Cli {
  std::string graph_path;
  std::string clic_path;
  std::string output;  // empty = stdout
  std::string format = "json";
  std::string f_kind = "mix";
  int box = 3;
  std::uint64_t seed = 0;
  int replicates = 10000;
  bool nontrivial_only = false;
  bool latents = false;
  std::string perm_path;
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(Errc::ParseError, "malformed JSON in " + path);
  return j;
}

// atomic: write to a sibling temp file, then rename over the target
void emit(const std::string& output, const std::string& body) {
  if (output.empty()) {
    std::cout << body << "\n";
    return;
  }
  std::string tmp = output + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) fail(Errc::ParseError, "cannot write " + tmp);
    out << body << "\n";
  }
  if (std::rename(tmp.c_str(), output.c_str()) != 0)
    fail(Errc::ParseError, "cannot move output into place: " + output);
}

FSpec parse_f(const std::string& s) {
  auto colon = s.find(':');
  std::string kind = s.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (kind == "mix") return FSpec::mix();
  if (kind == "threshold") return FSpec::threshold(args.empty() ? 0.5 : std::stod(args));
  if (kind == "affine") {
    std::vector<double> w;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
    return FSpec::affine(std::move(w));
  }
  fail(Errc::ParseError, "unknown f family: " + s);
}

Dag load_graph(const Cli& cli) { return dag_from_json(load_json(cli.graph_path)); }

Clic load_clic(const Dag& d, const Cli& cli) {
  json j = load_json(cli.clic_path);
  return clic_from_json(d, j);
}

int cmd_isos(const Cli& cli) {
  Dag d = load_graph(cli);
  auto isos = enumerate_local_isos(d);
  if (cli.format == "text") {
    std::string body;
    for (const auto& k : isos) body += iso_str(d, k) + "\n";
    body += "total " + std::to_string(isos.size());
    emit(cli.output, body);
  } else {
    json out;
    out["count"] = isos.size();
    json arr = json::array();
    for (const auto& k : isos) arr.push_back(iso_to_json(d, k));
    out["isos"] = arr;
    emit(cli.output, out.dump());
  }
  return 0;
}

int cmd_clics(const Cli& cli) {
  Dag d = load_graph(cli);
  auto clics = enumerate_clics(d);
  if (cli.nontrivial_only) {
    std::vector<Clic> kept;
    for (auto& c : clics)
      if (!c.nontrivial().empty()) kept.push_back(std::move(c));
    clics = std::move(kept);
  }
  if (cli.format == "text") {
    std::string body;
    for (size_t i = 0; i < clics.size(); ++i) {
      body += "clic " + std::to_string(i) + ":";
      auto nt = clics[i].nontrivial();
      if (nt.empty()) body += " (identities only)";
      for (const auto& k : nt) body += " " + iso_str(d, k);
      body += "\n";
    }
    body += "total " + std::to_string(clics.size());
    emit(cli.output, body);
  } else {
    json out;
    out["count"] = clics.size();
    json arr = json::array();
    for (const auto& c : clics) arr.push_back(clic_to_json(d, c));
    out["clics"] = arr;
    emit(cli.output, out.dump());
  }
  return 0;
}

int cmd_template(const Cli& cli) {
  Dag d = load_graph(cli);
  Clic k = load_clic(d, cli);
  emit(cli.output, render_template(d, k));
  return 0;
}

int cmd_classes(const Cli& cli) {
  Dag d = load_graph(cli);
  Clic k = load_clic(d, cli);
  KeyCache cache;
  std::set<ClassKey> keys;
  for (VSet c : d.closed_sets()) {
    std::vector<Index> all;
    detail::enum_assignments(d, c, cli.box, all);
    for (const auto& a : all)
      if (is_generic(d, k, a)) keys.insert(class_key(d, k, a, &cache));
  }
  if (keys.empty()) fail(Errc::EmptyIndexSet, "no generic index exists in the box");
  json arr = json::array();
  for (const auto& key : keys) arr.push_back(index_to_json(d, key.rep));
  json out;
  out["box"] = cli.box;
  out["count"] = keys.size();
  out["classes"] = arr;
  emit(cli.output, out.dump());
  return 0;
}

int cmd_sample(const Cli& cli) {
  Dag d = load_graph(cli);
  Clic k = load_clic(d, cli);
  SampleSpec spec{&d, &k, cli.box, parse_f(cli.f_kind), cli.seed};
  ArrayBundle b = generate_array(spec);
  emit(cli.output, bundle_to_json_text(d, spec, b, cli.latents));
  return 0;
}

int cmd_test(const Cli& cli) {
  Dag d = load_graph(cli);
  Clic k = load_clic(d, cli);
  SampleSpec spec{&d, &k, cli.box, parse_f(cli.f_kind), cli.seed};
  GPermutation tau = cli.perm_path.empty()
                         ? random_k_commuting(d, k, cli.box, spec.seed + 1)
                         : gperm_from_json(d, load_json(cli.perm_path));
  KeyCache cache;

  std::vector<Index> fulls = generic_box(d, k, cli.box);
  if (fulls.empty()) fail(Errc::EmptyIndexSet, "no generic index exists in the box");
  std::vector<Index> pattern = fulls;
  if (pattern.size() > 4) pattern.resize(4);

  std::string body;
  bool all_pass = true;

  bool equi = equivariance_check(d, k, tau, cli.box, &cache);  // throws if tau not commuting
  json je{{"test", "equivariance"}, {"pass", equi}};
  body += je.dump() + "\n";
  all_pass &= equi;

  TestReport inv = invariance_test(spec, tau, pattern, mean_statistic(), cli.replicates, &cache);
  body += report_to_json(inv).dump() + "\n";
  all_pass &= inv.pass;

  // first pair of distinct-class full indices, if any
  for (size_t i = 0; i < fulls.size(); ++i) {
    bool done = false;
    for (size_t j = i + 1; j < fulls.size() && !done; ++j) {
      if (class_key(d, k, fulls[i], &cache) == class_key(d, k, fulls[j], &cache)) continue;
      TestReport ci = cond_indep_test(spec, fulls[i], fulls[j], cli.replicates, &cache);
      body += report_to_json(ci).dump() + "\n";
      all_pass &= ci.pass;
      done = true;
    }
    if (done) break;
  }

  body.pop_back();  // emit adds the final newline
  emit(cli.output, body);
  return all_pass ? 0 : kExitTestFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical exchangeable array toolkit"};
  app.require_subcommand(1);
  Cli cli;

  auto add_common = [&](CLI::App* sub, bool needs_clic) {
    sub->add_option("graph", cli.graph_path, "graph JSON file")->required();
    if (needs_clic) sub->add_option("clic", cli.clic_path, "symmetry class JSON file")->required();
    sub->add_option("-o,--output", cli.output, "output file (default stdout)");
    sub->add_option("--format", cli.format, "json|text")->check(CLI::IsMember({"json", "text"}));
  };

  auto* isos = app.add_subcommand("isos", "list all local isomorphisms");
  add_common(isos, false);

  auto* clics = app.add_subcommand("clics", "enumerate all symmetry classes");
  add_common(clics, false);
  clics->add_flag("--nontrivial-only", cli.nontrivial_only, "skip the identity-only class");

  auto* tmpl = app.add_subcommand("template", "print the symbolic representation");
  add_common(tmpl, true);

  auto* classes = app.add_subcommand("classes", "dump canonical index classes in a box");
  add_common(classes, true);
  classes->add_option("--box", cli.box, "index values range over {0..box-1}");

  auto* sample = app.add_subcommand("sample", "materialize an exchangeable array");
  add_common(sample, true);
  sample->add_option("--box", cli.box, "index values range over {0..box-1}");
  sample->add_option("--f", cli.f_kind, "mix | affine[:w1,w2,..] | threshold[:level]");
  sample->add_option("--seed", cli.seed, "PRF seed");
  sample->add_flag("--latents", cli.latents, "include the class-key uniforms");

  auto* test = app.add_subcommand("test", "run the invariance test battery");
  add_common(test, true);
  test->add_option("--box", cli.box, "index values range over {0..box-1}");
  test->add_option("--f", cli.f_kind, "mix | affine[:w1,w2,..] | threshold[:level]");
  test->add_option("--seed", cli.seed, "PRF seed");
  test->add_option("--replicates", cli.replicates, "Monte Carlo replicates");
  test->add_option("--perm", cli.perm_path, "permutation JSON (default: generated)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (isos->parsed()) return cmd_isos(cli);
    if (clics->parsed()) return cmd_clics(cli);
    if (tmpl->parsed()) return cmd_template(cli);
    if (classes->parsed()) return cmd_classes(cli);
    if (sample->parsed()) return cmd_sample(cli);
    if (test->parsed()) return cmd_test(cli);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::ParseError:
      case Errc::CycleDetected:
      case Errc::DuplicateVertex:
      case Errc::UnknownVertex:
        return kExitParse;
      case Errc::MalformedIso:
      case Errc::TooManyIsos:
        return kExitBadClic;
      case Errc::EmptyIndexSet:
        return kExitEmpty;
      case Errc::NotKCommuting:
        return kExitTestFail;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
