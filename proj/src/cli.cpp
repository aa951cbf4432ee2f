#include "seifert/cli.hpp"

#include "seifert/certificate.hpp"
#include "seifert/covers.hpp"
#include "seifert/manifold_io.hpp"
#include "seifert/obstruction.hpp"
#include "seifert/rep_builder.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace seifert {

namespace {

using nlohmann::json;

/// Raised for exit code 2 paths after the message has been composed.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw InputError("cannot write '" + path + "'");
}

GraphManifold load(const std::string& path) {
  try {
    return load_manifold(path);
  } catch (const ManifoldFileError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string glue_text(const GluingMatrix& g) {
  return "[[" + g.a.str() + ", " + g.b.str() + "], [" + g.c.str() + ", " + g.d.str() + "]]";
}

const std::string& name(const GraphManifold& m, BlockId v) { return m.block(v).id; }

struct BlockLine {
  BlockId v;
  Rational k, reciprocal;
  bool dominant;
};

std::vector<BlockLine> block_lines(const GraphManifold& m) {
  std::vector<BlockLine> lines;
  for (BlockId v = 0; v < m.size(); ++v) {
    if (m.degree(v) == 0) {
      lines.push_back({v, Rational(0), Rational(0), false});
      continue;
    }
    lines.push_back({v, charge(m, v), reciprocal_index_sum(m, v), is_sdd_block(m, v)});
  }
  return lines;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const GraphManifold m = load(path);
  out << "valid: " << m.size() << " blocks, " << m.edges().size() << " edges, "
      << (m.is_closed() ? "closed" : "with free boundary tori") << ", dual graph "
      << (is_tree(m) ? "a tree" : "not a tree") << "\n";
  return kExitOk;
}

int cmd_invariants(const std::string& path, const std::string& out_path, std::ostream& out) {
  const GraphManifold m = load(path);
  const auto lines = block_lines(m);
  json blocks = json::array();
  for (const auto& l : lines) {
    const auto& b = m.block(l.v);
    out << "block " << b.id << ": genus " << b.genus << ", free " << b.free_boundaries << ", degree "
        << m.degree(l.v) << ", charge " << l.k.str() << ", reciprocal index sum " << l.reciprocal.str()
        << ", dominant " << (l.dominant ? "yes" : "no") << "\n";
    blocks.push_back({{"id", b.id},
                      {"genus", b.genus},
                      {"free", b.free_boundaries},
                      {"charge", l.k.str()},
                      {"reciprocal_index_sum", l.reciprocal.str()},
                      {"dominant", l.dominant}});
  }
  json edges = json::array();
  for (const Edge& e : m.edges()) {
    const Integer index = intersection_index(m, e.from, e.to);
    out << "edge " << name(m, e.from) << " -> " << name(m, e.to) << ": glue " << glue_text(e.glue)
        << ", intersection index " << index.str() << ", slopes " << slope(m, e.from, e.to).str() << " and "
        << slope(m, e.to, e.from).str() << "\n";
    edges.push_back({{"from", name(m, e.from)},
                     {"to", name(m, e.to)},
                     {"intersection_index", index.str()},
                     {"intersection_index_reverse", intersection_index(m, e.to, e.from).str()}});
  }
  const bool sdd = is_sdd(m);
  out << "SDD: " << (sdd ? "yes" : "no") << "\n";
  if (!out_path.empty()) {
    const json doc = {{"manifold_sha256", manifold_hash(m)}, {"blocks", blocks}, {"edges", edges}, {"sdd", sdd}};
    write_file(out_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_sdd(const std::string& path, std::ostream& out) {
  const GraphManifold m = load(path);
  for (const auto& l : block_lines(m)) {
    out << name(m, l.v) << ": |" << l.k.str() << "| " << (l.dominant ? ">" : "<=") << " " << l.reciprocal.str()
        << "\n";
  }
  const bool sdd = is_sdd(m);
  out << "SDD: " << (sdd ? "yes" : "no") << "\n";
  return sdd ? kExitOk : kExitFails;
}

std::set<EdgeId> parse_cut(const GraphManifold& m, const std::string& cut_list) {
  std::set<EdgeId> cut;
  std::stringstream items(cut_list);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("cut entry '" + item + "' is not of the form v:w");
    const auto v = m.find(item.substr(0, colon));
    const auto w = m.find(item.substr(colon + 1));
    if (!v || !w) throw InputError("cut entry '" + item + "' names an unknown block");
    const auto e = m.edge_between(*v, *w);
    if (!e) throw InputError("cut entry '" + item + "' is not an edge");
    cut.insert(*e);
  }
  return cut;
}

int cmd_cover(const std::string& path, const std::string& cut_list, const std::string& out_path, std::ostream& out) {
  const GraphManifold m = load(path);
  if (!is_connected(m)) throw InputError("dual graph is not connected");
  const auto cut = parse_cut(m, cut_list);
  const auto result = double_cover_cut(m, cut);
  if (const auto* d = std::get_if<DisconnectedCover>(&result)) {
    out << "disconnected double cover: the cut is trivial on every cycle\n";
    out << "potential:";
    for (BlockId v = 0; v < m.size(); ++v) out << " " << name(m, v) << "=" << d->potential[v];
    out << "\n";
    if (!out_path.empty()) write_file(out_path, serialize_manifold(d->cover.total));
    return kExitFails;
  }
  const auto& c = std::get<CoverGraph>(result);
  const bool preserved = cover_invariants_preserved(c);
  out << "connected double cover: " << c.total.size() << " blocks, " << c.total.edges().size() << " edges\n";
  out << "local invariants preserved: " << (preserved ? "yes" : "no") << "\n";
  out << "SDD: base " << (is_sdd(m) ? "yes" : "no") << ", cover " << (is_sdd(c.total) ? "yes" : "no") << "\n";
  if (!out_path.empty()) write_file(out_path, serialize_manifold(c.total));
  return preserved ? kExitOk : kExitFails;
}

unsigned thread_cap(unsigned requested) {
  const char* env = std::getenv("SEIFERT_OBSTRUCT_THREADS");
  if (!env || !*env) return requested;
  char* end = nullptr;
  const long cap = std::strtol(env, &end, 10);
  if (*end != '\0' || cap < 1) throw InputError("SEIFERT_OBSTRUCT_THREADS must be a positive integer");
  if (requested == 0) return static_cast<unsigned>(cap);
  return std::min(requested, static_cast<unsigned>(cap));
}

int cmd_certify(const std::string& path, CertifyOptions options, const std::vector<std::string>& components,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
  const GraphManifold m = load(path);
  options.threads = thread_cap(options.threads);
  for (const auto& c : components) {
    std::vector<std::string> ids;
    std::stringstream items(c);
    std::string id;
    while (std::getline(items, id, ',')) {
      if (!id.empty()) ids.push_back(id);
    }
    options.components.push_back(std::move(ids));
  }
  Certificate cert;
  try {
    cert = certify_no_vertex_faithful(m, options);
  } catch (const CertifyError& e) {
    err << "certify: " << e.what() << "\n";
    return e.kind() == CertifyError::Kind::NotSdd ? kExitFails : kExitInput;
  }
  for (const auto& v : cert.vertices) {
    const auto hits = std::count_if(v.components.begin(), v.components.end(),
                                    [](const ComponentRecord& c) { return c.contradiction; });
    out << "vertex " << v.vertex << ": " << v.components.size() << " component records, " << hits
        << " reach the contradiction\n";
  }
  for (const auto& g : cert.gaps) out << "gap: " << g << "\n";
  out << "conclusion: " << (cert.conclusion ? "no vertex faithful representation" : "inconclusive") << "\n";
  if (!out_path.empty()) write_file(out_path, dump_certificate(cert));
  return cert.conclusion ? kExitOk : kExitFails;
}

int cmd_check(const std::string& cert_path, const std::string& manifold_path, std::ostream& out) {
  const std::string doc = read_file(cert_path);
  std::optional<GraphManifold> m;
  if (!manifold_path.empty()) m = load(manifold_path);
  const CheckReport report = check_certificate(doc, m ? &*m : nullptr);
  out << "records replayed: " << report.records_checked << "\n";
  for (const auto& f : report.failures) out << "mismatch: " << f << "\n";
  out << "complete: " << (report.complete ? "yes" : "no") << "\n";
  out << "conclusion: " << (report.conclusion ? "no vertex faithful representation" : "inconclusive") << "\n";
  out << "replay: " << (report.ok() ? "ok" : "FAILED") << "\n";
  return report.ok() ? kExitOk : kExitFails;
}

void print_report(const VerificationReport& report, std::ostream& out) {
  for (const auto& c : report.checks) {
    out << c.name << ": " << (c.passed ? "pass" : "FAIL") << "\n";
    for (const auto& f : c.failures) out << "  " << f << "\n";
  }
}

int cmd_build_rep(const std::string& path, const std::string& root, const SeedParams& params,
                  const std::string& out_path, std::ostream& out, std::ostream& err) {
  const GraphManifold m = load(path);
  const auto v = m.find(root);
  if (!v) throw InputError("unknown root block '" + root + "'");
  Representation rep;
  try {
    rep = extend_along_tree(m, *v, params);
  } catch (const RepBuildError& e) {
    err << "build-rep: " << e.what() << "\n";
    return kExitInput;
  }
  const BlockRep& seed = rep.blocks.front();
  out << "root " << rep.root << ": free rank " << seed.presentation.free_rank() << ", ping-pong margin "
      << seed.ping_pong->margin << "\n";
  out << "extended to " << rep.blocks.size() << " blocks\n";
  const VerificationReport report = verify_rep(m, rep);
  print_report(report, out);
  if (!out_path.empty()) write_file(out_path, dump_representation(rep));
  return report.ok() ? kExitOk : kExitFails;
}

int cmd_verify_rep(const std::string& path, const std::string& rep_path, double eps, std::ostream& out) {
  const GraphManifold m = load(path);
  Representation rep;
  try {
    rep = parse_representation(read_file(rep_path));
  } catch (const std::invalid_argument& e) {
    throw InputError(rep_path + ": " + e.what());
  }
  const VerificationReport report = verify_rep(m, rep, eps);
  print_report(report, out);
  return report.ok() ? kExitOk : kExitFails;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph manifold invariants, no-vertex-faithful certificates and tree representations",
               "seifert-obstruct"};
  app.require_subcommand(1);
  std::string out_path;
  std::string manifold_path;

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a manifold file");
  validate_cmd->add_option("manifold", manifold_path)->required();

  auto* invariants_cmd = app.add_subcommand("invariants", "Charges, intersection indices and dominance");
  invariants_cmd->add_option("manifold", manifold_path)->required();
  invariants_cmd->add_option("--out", out_path, "Write the invariants as JSON");

  auto* sdd_cmd = app.add_subcommand("sdd", "Strict diagonal dominance; exit 1 when it fails");
  sdd_cmd->add_option("manifold", manifold_path)->required();

  std::string cut_list;
  auto* cover_cmd = app.add_subcommand("cover", "Cut-and-copy double cover along a set of edges");
  cover_cmd->add_option("manifold", manifold_path)->required();
  cover_cmd->add_option("--cut", cut_list, "Comma separated edges v:w")->required();
  cover_cmd->add_option("--out", out_path, "Write the total space as a manifold file");

  CertifyOptions certify_options;
  std::vector<std::string> components;
  auto* certify_cmd = app.add_subcommand("certify", "Certificate that no vertex faithful representation exists");
  certify_cmd->add_option("manifold", manifold_path)->required();
  certify_cmd->add_option("--out", out_path, "Write the certificate");
  certify_cmd->add_option("--size-bound", certify_options.size_bound, "Exhaustive enumeration up to this many blocks")
      ->check(CLI::PositiveNumber);
  certify_cmd->add_option("--cut-bound", certify_options.cut_bound, "Exhaustive cuts up to this many internal edges")
      ->check(CLI::NonNegativeNumber);
  certify_cmd->add_option("--threads", certify_options.threads, "Worker threads (0: all cores)");
  certify_cmd->add_option("--component", components, "Comma separated block ids, used above the size bound");

  std::string root;
  SeedParams seed;
  auto* build_cmd = app.add_subcommand("build-rep", "Vertex faithful representation of a tree");
  build_cmd->add_option("manifold", manifold_path)->required();
  build_cmd->add_option("--root", root, "Block receiving the faithful image")->required();
  build_cmd->add_option("--fiber", seed.fiber_central, "Central coordinate of the root fiber image");
  build_cmd->add_option("--spread", seed.spread, "Eigenvalue of the seed hyperbolic generators");
  build_cmd->add_option("--out", out_path, "Write the representation");

  std::string rep_path;
  double eps = 1e-9;
  auto* verify_cmd = app.add_subcommand("verify-rep", "Check a stored representation");
  verify_cmd->add_option("manifold", manifold_path)->required();
  verify_cmd->add_option("representation", rep_path)->required();
  verify_cmd->add_option("--eps", eps, "Relative tolerance");

  std::string cert_path;
  auto* check_cmd = app.add_subcommand("check", "Replay a certificate independently");
  check_cmd->add_option("certificate", cert_path)->required();
  check_cmd->add_option("--manifold", manifold_path, "Require the certificate to match this manifold");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*validate_cmd) return cmd_validate(manifold_path, out);
    if (*invariants_cmd) return cmd_invariants(manifold_path, out_path, out);
    if (*sdd_cmd) return cmd_sdd(manifold_path, out);
    if (*cover_cmd) return cmd_cover(manifold_path, cut_list, out_path, out);
    if (*certify_cmd) return cmd_certify(manifold_path, certify_options, components, out_path, out, err);
    if (*build_cmd) return cmd_build_rep(manifold_path, root, seed, out_path, out, err);
    if (*verify_cmd) return cmd_verify_rep(manifold_path, rep_path, eps, out);
    if (*check_cmd) return cmd_check(cert_path, manifold_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace seifert
