#ifndef OA_VOCAB_HPP
#define OA_VOCAB_HPP

#include <string>
#include <string_view>

#include "oa/rdf.hpp"

// Namespaces and terms used by the annotation model.
namespace oa::vocab {

inline constexpr std::string_view kOac = "http://www.openannotation.org/ns/";
inline constexpr std::string_view kDcterms = "http://purl.org/dc/terms/";
inline constexpr std::string_view kDc = "http://purl.org/dc/elements/1.1/";
inline constexpr std::string_view kCnt = "http://www.w3.org/2008/content#";
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kFoaf = "http://xmlns.com/foaf/0.1/";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";

inline rdf::Iri term(std::string_view ns, std::string_view local) {
  std::string value(ns);
  value += local;
  return rdf::Iri(std::move(value));
}

inline rdf::Iri oac(std::string_view local) { return term(kOac, local); }
inline rdf::Iri dcterms(std::string_view local) { return term(kDcterms, local); }
inline rdf::Iri dc(std::string_view local) { return term(kDc, local); }
inline rdf::Iri cnt(std::string_view local) { return term(kCnt, local); }
inline rdf::Iri rdf(std::string_view local) { return term(kRdf, local); }
inline rdf::Iri xsd(std::string_view local) { return term(kXsd, local); }
inline rdf::Iri owl(std::string_view local) { return term(kOwl, local); }

inline const rdf::Iri& rdf_type() {
  static const rdf::Iri v = rdf("type");
  return v;
}

}  // namespace oa::vocab

#endif  // OA_VOCAB_HPP
