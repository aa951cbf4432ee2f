#include "seifert/manifold_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

namespace seifert {

ManifoldFileError::ManifoldFileError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

ManifoldFileError::ManifoldFileError(std::size_t line, const std::string& message,
                                     ValidationReport report)
    : std::runtime_error(message), line_(line), report_(std::move(report)) {}

bool is_valid_block_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '-';
  });
}

namespace {

struct PendingEdge {
  std::size_t line;
  std::string from, to;
  GluingMatrix glue;
};

std::vector<std::string> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) out.push_back(std::move(tok));
  return out;
}

int parse_small(const std::string& tok, std::size_t line, const char* what) {
  int value = 0;
  const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || end != tok.data() + tok.size()) {
    throw ManifoldFileError(line, std::string("expected an integer ") + what + ", got '" + tok + "'");
  }
  return value;
}

Integer parse_entry(const std::string& tok, std::size_t line) {
  try {
    return Integer::parse(tok);
  } catch (const std::invalid_argument&) {
    throw ManifoldFileError(line, "expected an integer matrix entry, got '" + tok + "'");
  }
}

void expect_key(const std::vector<std::string>& t, std::size_t i, const char* key, std::size_t line) {
  if (t[i] != key) {
    throw ManifoldFileError(line, "unknown key '" + t[i] + "', expected '" + key + "'");
  }
}

void check_id(const std::string& id, std::size_t line) {
  if (!is_valid_block_id(id)) throw ManifoldFileError(line, "invalid block id '" + id + "'");
}

struct ParsedText {
  GraphManifold manifold;
  std::vector<std::size_t> block_lines;
  std::vector<std::size_t> edge_lines;
};

ParsedText parse_text(std::string_view text) {
  ParsedText out;
  std::map<std::string, std::size_t> declared;
  std::vector<PendingEdge> pending;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const auto t = tokenize(line);
    if (t.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (t[0] == "block") {
      if (t.size() != 6) {
        throw ManifoldFileError(line_no, "expected 'block <id> genus <int> free <int>'");
      }
      check_id(t[1], line_no);
      expect_key(t, 2, "genus", line_no);
      expect_key(t, 4, "free", line_no);
      if (auto [it, fresh] = declared.emplace(t[1], line_no); !fresh) {
        throw ManifoldFileError(line_no, "duplicate block id '" + t[1] + "' (first declared on line " +
                                             std::to_string(it->second) + ")");
      }
      out.manifold.add_block({t[1], parse_small(t[3], line_no, "genus"),
                              parse_small(t[5], line_no, "free boundary count")});
      out.block_lines.push_back(line_no);
    } else if (t[0] == "edge") {
      if (t.size() != 8) {
        throw ManifoldFileError(line_no, "expected 'edge <id> <id> glue <a> <b> <c> <d>'");
      }
      check_id(t[1], line_no);
      check_id(t[2], line_no);
      expect_key(t, 3, "glue", line_no);
      pending.push_back({line_no, t[1], t[2],
                         {parse_entry(t[4], line_no), parse_entry(t[5], line_no),
                          parse_entry(t[6], line_no), parse_entry(t[7], line_no)}});
    } else {
      throw ManifoldFileError(line_no, "unknown directive '" + t[0] + "'");
    }
    if (end == text.size()) break;
  }

  for (auto& e : pending) {
    const auto from = out.manifold.find(e.from);
    const auto to = out.manifold.find(e.to);
    if (!from) throw ManifoldFileError(e.line, "edge names unknown block '" + e.from + "'");
    if (!to) throw ManifoldFileError(e.line, "edge names unknown block '" + e.to + "'");
    out.manifold.add_edge(*from, *to, std::move(e.glue));
    out.edge_lines.push_back(e.line);
  }
  return out;
}

}  // namespace

GraphManifold parse_manifold_syntax(std::string_view text) { return parse_text(text).manifold; }

GraphManifold parse_manifold(std::string_view text) {
  ParsedText parsed = parse_text(text);
  ValidationReport report = validate(parsed.manifold);
  if (report.ok()) return std::move(parsed.manifold);

  std::size_t first_line = 0;
  std::ostringstream msg;
  msg << "invalid manifold:";
  for (const auto& v : report.violations) {
    std::size_t line = 0;
    if (v.edge) line = parsed.edge_lines.at(*v.edge);
    if (v.block) line = parsed.block_lines.at(*v.block);
    if (line > 0 && (first_line == 0 || line < first_line)) first_line = line;
    msg << "\n  ";
    if (line > 0) msg << "line " << line << ": ";
    msg << v.message;
  }
  throw ManifoldFileError(first_line, msg.str(), std::move(report));
}

GraphManifold load_manifold(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifoldFileError(0, "cannot read manifold file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifold(buf.str());
}

std::string serialize_manifold(const GraphManifold& m) {
  std::ostringstream out;
  for (const auto& b : m.blocks()) {
    out << "block " << b.id << " genus " << b.genus << " free " << b.free_boundaries << '\n';
  }
  for (const auto& e : m.edges()) {
    out << "edge " << m.block(e.from).id << ' ' << m.block(e.to).id << " glue " << e.glue.a << ' '
        << e.glue.b << ' ' << e.glue.c << ' ' << e.glue.d << '\n';
  }
  return out.str();
}

GraphManifold canonical_form(const GraphManifold& m) {
  std::vector<BlockId> order(m.size());
  for (BlockId v = 0; v < m.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(),
            [&](BlockId x, BlockId y) { return m.block(x).id < m.block(y).id; });

  GraphManifold out;
  std::vector<BlockId> renamed(m.size());
  for (BlockId v : order) renamed[v] = out.add_block(m.block(v));

  struct Oriented {
    BlockId from, to;
    GluingMatrix glue;
  };
  std::vector<Oriented> edges;
  for (const auto& e : m.edges()) {
    const BlockId f = renamed[e.from];
    const BlockId t = renamed[e.to];
    const bool invertible = abs(e.glue.det()) == Integer(1);
    if (f <= t || !invertible) {
      edges.push_back({f, t, e.glue});
    } else {
      edges.push_back({t, f, e.glue.inverse()});
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Oriented& x, const Oriented& y) {
    return std::pair(x.from, x.to) < std::pair(y.from, y.to);
  });
  for (auto& e : edges) out.add_edge(e.from, e.to, std::move(e.glue));
  return out;
}

std::string manifold_hash(const GraphManifold& m) {
  const std::string text = serialize_manifold(canonical_form(m));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

}  // namespace seifert
