#ifndef SEIFERT_CERTIFICATE_HPP
#define SEIFERT_CERTIFICATE_HPP

// Certificate documents and their replay.
//
// A certificate is a JSON object with sorted keys. Integers of unbounded size
// are decimal strings, matrices are arrays of rows. It embeds the canonical
// manifold text and its SHA-256, so it can be checked on its own.
//
// The checker shares no code with the certifier beyond parsing and scalar
// arithmetic: it enumerates candidate components by brute force over vertex
// bitmasks, builds its own double covers and fiber equations, computes
// determinants by rational Gaussian elimination, and compares every field.

#include "seifert/manifold.hpp"
#include "seifert/obstruction.hpp"

#include <string>
#include <vector>

namespace seifert {

inline constexpr const char* kCertificateSchema = "seifert-obstruct/no-vertex-faithful";
inline constexpr int kCertificateSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Pretty-printed JSON with sorted keys; byte-identical for identical certificates.
std::string dump_certificate(const Certificate& cert);

struct CheckReport {
  std::vector<std::string> failures;
  std::size_t records_checked = 0;
  bool complete = false;    ///< no gaps: every candidate component was analysed
  bool conclusion = false;  ///< the recomputed contradiction holds at every vertex

  bool ok() const { return failures.empty(); }
};

/// Replays a certificate document. When `manifold` is given, its canonical
/// hash must match the embedded one.
CheckReport check_certificate(const std::string& document, const GraphManifold* manifold = nullptr);

}  // namespace seifert

#endif  // SEIFERT_CERTIFICATE_HPP
