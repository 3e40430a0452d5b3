#ifndef OA_UUID_HPP
#define OA_UUID_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "oa/rdf.hpp"

namespace oa {

/// Mints `urn:uuid:` IRIs from version-4 UUIDs (lowercase hex).
/// Seeded generators produce the same sequence on every platform.
class UuidGenerator {
public:
  explicit UuidGenerator(std::uint64_t seed) : engine_(seed) {}

  static UuidGenerator from_entropy() {
    std::random_device rd;
    return UuidGenerator((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
  }

  std::string next_uuid() {
    std::uint64_t hi = engine_();
    std::uint64_t lo = engine_();
    hi = (hi & 0xFFFFFFFFFFFF0FFFull) | 0x0000000000004000ull;  // version 4
    lo = (lo & 0x3FFFFFFFFFFFFFFFull) | 0x8000000000000000ull;  // RFC 4122 variant
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(36);
    for (int i = 0; i < 16; ++i) {
      const std::uint64_t word = i < 8 ? hi : lo;
      const int shift = 56 - 8 * (i % 8);
      const auto byte = static_cast<unsigned>((word >> shift) & 0xFF);
      if (i == 4 || i == 6 || i == 8 || i == 10) out.push_back('-');
      out.push_back(kHex[byte >> 4]);
      out.push_back(kHex[byte & 0xF]);
    }
    return out;
  }

  rdf::Iri next() { return rdf::Iri("urn:uuid:" + next_uuid()); }

private:
  std::mt19937_64 engine_;
};

inline bool is_urn_uuid(const rdf::Iri& iri) { return iri.str().rfind("urn:uuid:", 0) == 0; }
inline bool is_urn(const rdf::Iri& iri) { return iri.scheme() == "urn"; }
inline bool is_http(const rdf::Iri& iri) {
  return iri.scheme() == "http" || iri.scheme() == "https";
}

/// Replaces every blank node with a freshly minted urn:uuid IRI.
inline rdf::Graph skolemize(const rdf::Graph& g, UuidGenerator& gen) {
  std::map<std::string, rdf::Iri> minted;
  auto rename = [&](const std::string& label) -> const rdf::Iri& {
    auto it = minted.find(label);
    if (it == minted.end()) it = minted.emplace(label, gen.next()).first;
    return it->second;
  };
  rdf::Graph out;
  out.set_base(g.base());
  for (const auto& t : g) {
    rdf::Subject s = t.subject;
    rdf::Term o = t.object;
    if (auto bn = std::get_if<rdf::BlankNode>(&s)) s = rename(bn->label);
    if (auto bn = std::get_if<rdf::BlankNode>(&o)) o = rename(bn->label);
    out.insert(std::move(s), t.predicate, std::move(o));
  }
  return out;
}

}  // namespace oa

#endif  // OA_UUID_HPP
